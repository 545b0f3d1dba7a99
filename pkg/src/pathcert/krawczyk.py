"""Interval Krawczyk test for parametric systems over a time interval.

For a homotopy H, a point x, a point matrix Y, a box I containing x and a
time interval T, the operator is

    K(I, T) = x - Y * encl(H(x, T)) + (Id - Y * encl(dH/dx(I, T))) * (I - x)

where encl(...) are outward-rounded interval enclosures.  If K(I, T) is
contained in I, every t in T admits a solution of H(., t) = 0 inside
K(I, T).  If additionally sqrt(2) * |Id - Y * encl(dH/dx(I, T))| < 1 in
the row-sum norm, that solution is the only one in I for each t.  The
sqrt(2) factor is the price of testing complex rectangles instead of
discs; it is always applied.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonFiniteEndpoint, PathcertError
from .ilinalg import imatvec, point_matvec_box, residual_matrix
from .intervals import Box, RealInterval

_SQRT2_UP = math.nextafter(math.sqrt(2.0), math.inf)


@dataclass(frozen=True)
class KrawczykVerdict:
    """Outcome of one test: the two flags, the contraction norm that
    witnessed uniqueness, and the operator image box."""
    existence: bool
    uniqueness: bool
    residual_norm: float
    operator_image: Box

    @property
    def passed(self):
        return self.existence and self.uniqueness


def _operator_parts(h, x, y, box, T):
    x = np.ascontiguousarray(x, dtype=np.complex128)
    y = np.ascontiguousarray(y, dtype=np.complex128)
    n = h.n
    if x.shape != (n,):
        raise DimensionMismatch(f"x must have shape ({n},)")
    if y.shape != (n, n):
        raise DimensionMismatch(f"Y must have shape ({n}, {n})")
    if box.n != n:
        raise DimensionMismatch("box dimension differs from system")
    if not isinstance(T, RealInterval):
        T = RealInterval(T)
    if not box.contains_point(x):
        raise PathcertError("expansion point x lies outside the box")

    x_box = Box.degenerate(x)
    hx = h.eval_over_time(x, T)
    a = point_matvec_box(y, hx)
    jac = h.jac_x_interval(box, T)
    resid = residual_matrix(y, jac)
    b = imatvec(resid, box - x_box)
    image = (x_box - a) + b
    return image, resid


def krawczyk_operator(h, x, y, box, T):
    """Interval image K(I, T) of the parametric Krawczyk operator."""
    image, _ = _operator_parts(h, x, y, box, T)
    if not np.isfinite(image.data).all():
        raise NonFiniteEndpoint("Krawczyk image has non-finite endpoints")
    return image


def parametric_krawczyk_test(h, x, y, box, T):
    """Run the test and report existence/uniqueness flags.

    existence: K(I, T) is contained in I (closed inclusion).
    uniqueness: sqrt(2) * |Id - Y*Jac| < 1, rounded against the claim.
    Both checks are sound: rounding can only turn a true pass into a
    reported failure, never the other way.
    """
    image, resid = _operator_parts(h, x, y, box, T)
    if not np.isfinite(image.data).all():
        raise NonFiniteEndpoint("Krawczyk image has non-finite endpoints")
    rn = resid.norm()
    if not math.isfinite(rn):
        raise NonFiniteEndpoint("contraction norm is non-finite")
    existence = box.encloses(image)
    uniqueness = math.nextafter(_SQRT2_UP * rn, math.inf) < 1.0
    return KrawczykVerdict(existence, uniqueness, rn, image)
