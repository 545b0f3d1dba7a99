"""Parametric polynomial systems and parameter-line homotopies.

A system is F(x; p): C^n x C^m -> C^n given as term lists.  Each term is
coeff * p_k^(0 or 1) * prod_j x_j^e_j, i.e. coefficients are affine in the
parameters.  The homotopy moves parameters along a segment
p(t) = (1 - t) p0 + t p1, so H(x, t) = F(x; p(t)) and the t-derivative is
the parameter part evaluated at the displacement p1 - p0.

A homotopy can carry a shear: a time-affine shift s(t) with s(t0) = x0 and
s(t1) = x1.  The sheared map is x |-> H(x + s(t), t); evaluation and
x-Jacobians account for it (the Jacobian is unchanged as a function, only
its argument shifts).
"""

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels as _k
from .errors import (
    DegenerateTimeInterval,
    DimensionMismatch,
    NonFiniteEndpoint,
    ParseError,
)
from .ilinalg import IntervalMatrix
from .intervals import Box, RealInterval

_EMPTY_PV4 = np.empty((0, 4), dtype=np.float64)
_EMPTY_PV = np.empty(0, dtype=np.complex128)


@dataclass(frozen=True)
class Term:
    """One monomial term: coeff * p_param * x^expo (param optional)."""
    coeff: complex
    param: "int | None"
    expo: "tuple[int, ...]"


class _Flat:
    """Flattened term arrays in the layout the kernels consume."""

    __slots__ = ("coef_re", "coef_im", "coef_point", "fac", "par", "expo",
                 "ptr", "max_expo", "tdeg")

    def __init__(self, rows, n):
        nt = sum(len(r) for r in rows)
        self.coef_re = np.empty(nt, dtype=np.float64)
        self.coef_im = np.empty(nt, dtype=np.float64)
        self.coef_point = np.empty(nt, dtype=np.complex128)
        self.fac = np.empty(nt, dtype=np.float64)
        self.par = np.empty(nt, dtype=np.int64)
        self.expo = np.zeros((nt, n), dtype=np.int64)
        self.ptr = np.zeros(len(rows) + 1, dtype=np.int64)
        t = 0
        for i, row in enumerate(rows):
            for coeff, fac, param, expo in row:
                self.coef_re[t] = coeff.real
                self.coef_im[t] = coeff.imag
                self.fac[t] = float(fac)
                self.coef_point[t] = coeff * fac
                self.par[t] = -1 if param is None else param
                self.expo[t, :] = expo
                t += 1
            self.ptr[i + 1] = t
        self.max_expo = int(self.expo.max()) if nt else 0
        # degree in t after substituting a time-affine shear and path
        deg = self.expo.sum(axis=1) + (self.par >= 0)
        self.tdeg = int(deg.max()) if nt else 0


class ParametricSystem:
    """Square polynomial system with affine parameter dependence."""

    def __init__(self, n, m, equations):
        if n < 1:
            raise DimensionMismatch(f"need at least one variable, got n={n}")
        if m < 0:
            raise DimensionMismatch(f"parameter count must be >= 0, got {m}")
        if len(equations) != n:
            raise DimensionMismatch(
                f"square system needs {n} equations, got {len(equations)}")
        eqs = []
        for i, row in enumerate(equations):
            terms = []
            for j, t in enumerate(row):
                c = complex(t.coeff)
                if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                    raise NonFiniteEndpoint(
                        f"equation {i} term {j} has non-finite coefficient")
                if t.param is not None and not (0 <= t.param < m):
                    raise DimensionMismatch(
                        f"equation {i} term {j} has parameter index {t.param} "
                        f"outside [0, {m})")
                expo = tuple(int(e) for e in t.expo)
                if len(expo) != n or any(e < 0 for e in expo):
                    raise DimensionMismatch(
                        f"equation {i} term {j} has bad exponents {t.expo}")
                terms.append(Term(c, t.param, expo))
            eqs.append(tuple(terms))
        self.n = n
        self.m = m
        self.equations = tuple(eqs)

    # -- flattened views ---------------------------------------------------

    @cached_property
    def _flat_f(self):
        rows = [[(t.coeff, 1, t.param, t.expo) for t in eq]
                for eq in self.equations]
        return _Flat(rows, self.n)

    @cached_property
    def _flat_jac(self):
        # row-major (i, j) blocks: d eq_i / d x_j
        rows = []
        for eq in self.equations:
            for j in range(self.n):
                row = []
                for t in eq:
                    e = t.expo[j]
                    if e > 0:
                        de = list(t.expo)
                        de[j] = e - 1
                        row.append((t.coeff, e, t.param, tuple(de)))
                rows.append(row)
        return _Flat(rows, self.n)

    @cached_property
    def _flat_f1(self):
        rows = [[(t.coeff, 1, t.param, t.expo) for t in eq
                 if t.param is not None] for eq in self.equations]
        return _Flat(rows, self.n)

    # -- evaluation --------------------------------------------------------

    def eval_point(self, x, p):
        """F(x; p) at complex point vectors."""
        x = np.ascontiguousarray(x, dtype=np.complex128)
        p = np.ascontiguousarray(p, dtype=np.complex128)
        self._check_dims(x, p)
        f = self._flat_f
        return _k.eval_terms_point(f.coef_point, f.par, f.expo, f.ptr,
                                   f.max_expo, x, p)

    def jac_x_point(self, x, p):
        """d F / d x at a point, as an (n, n) complex matrix."""
        x = np.ascontiguousarray(x, dtype=np.complex128)
        p = np.ascontiguousarray(p, dtype=np.complex128)
        self._check_dims(x, p)
        f = self._flat_jac
        flat = _k.eval_terms_point(f.coef_point, f.par, f.expo, f.ptr,
                                   f.max_expo, x, p)
        return flat.reshape(self.n, self.n)

    def f1_eval(self, x, dp):
        """Parameter part of F at displacement dp: F1(x; dp).

        Because parameters enter affinely, this equals the directional
        derivative of F in p, evaluated exactly by substituting dp.
        """
        x = np.ascontiguousarray(x, dtype=np.complex128)
        dp = np.ascontiguousarray(dp, dtype=np.complex128)
        self._check_dims(x, dp)
        f = self._flat_f1
        return _k.eval_terms_point(f.coef_point, f.par, f.expo, f.ptr,
                                   f.max_expo, x, dp)

    def _check_dims(self, x, p):
        if x.shape != (self.n,):
            raise DimensionMismatch(f"x must have shape ({self.n},)")
        if p.shape != (self.m,):
            raise DimensionMismatch(f"p must have shape ({self.m},)")

    # -- JSON --------------------------------------------------------------

    def to_json(self):
        eqs = []
        for eq in self.equations:
            row = []
            for t in eq:
                row.append({
                    "coeff_re": repr(t.coeff.real),
                    "coeff_im": repr(t.coeff.imag),
                    "param_index": t.param,
                    "exponents": list(t.expo),
                })
            eqs.append(row)
        return {"n": self.n, "m": self.m, "equations": eqs}

    @classmethod
    def from_json(cls, obj):
        try:
            n = int(obj["n"])
            m = int(obj["m"])
            raw = obj["equations"]
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"system header: {e}") from e
        eqs = []
        for i, row in enumerate(raw):
            terms = []
            for j, t in enumerate(row):
                loc = f"equations[{i}][{j}]"
                try:
                    cre = float(t["coeff_re"])
                    cim = float(t["coeff_im"])
                    par = t["param_index"]
                    if par is not None:
                        par = int(par)
                    expo = tuple(int(e) for e in t["exponents"])
                except (KeyError, TypeError, ValueError) as e:
                    raise ParseError(f"{loc}: {e}") from e
                terms.append(Term(complex(cre, cim), par, expo))
            eqs.append(terms)
        return cls(n, m, eqs)


class Homotopy:
    """F(x; p(t)) along the parameter segment p(t) = (1-t) p0 + t p1."""

    def __init__(self, system, p0, p1, shear=None):
        p0 = np.ascontiguousarray(p0, dtype=np.complex128)
        p1 = np.ascontiguousarray(p1, dtype=np.complex128)
        if p0.shape != (system.m,) or p1.shape != (system.m,):
            raise DimensionMismatch(
                f"parameter vectors must have shape ({system.m},)")
        for name, p in (("p0", p0), ("p1", p1)):
            if not (np.isfinite(p.real).all() and np.isfinite(p.imag).all()):
                raise NonFiniteEndpoint(f"{name} has non-finite entries")
        self.system = system
        self.p0 = p0
        self.p1 = p1
        if shear is None:
            self.shear = None
            self._sa = None
            self._sb = None
        else:
            x0, x1, t0, t1 = shear
            x0 = np.ascontiguousarray(x0, dtype=np.complex128)
            x1 = np.ascontiguousarray(x1, dtype=np.complex128)
            if x0.shape != (system.n,) or x1.shape != (system.n,):
                raise DimensionMismatch("shear endpoints must be n-vectors")
            if not (t1 > t0):
                raise DegenerateTimeInterval(
                    f"shear needs t1 > t0, got [{t0}, {t1}]")
            for name, v in (("x0", x0), ("x1", x1)):
                if not (np.isfinite(v.real).all() and np.isfinite(v.imag).all()):
                    raise NonFiniteEndpoint(f"shear {name} not finite")
            b = (x1 - x0) / (t1 - t0)
            a = x0 - t0 * b
            self.shear = (x0, x1, float(t0), float(t1))
            self._sa = a
            self._sb = b

    @property
    def n(self):
        return self.system.n

    @property
    def m(self):
        return self.system.m

    def sheared(self, x0, x1, t0, t1):
        """Homotopy for x |-> H(x + s(t), t) with s affine through
        (t0, x0) and (t1, x1)."""
        return Homotopy(self.system, self.p0, self.p1, shear=(x0, x1, t0, t1))

    def unsheared(self):
        return Homotopy(self.system, self.p0, self.p1) if self.shear else self

    def shear_at(self, t):
        """Point value s(t) of the shear (zero vector when unsheared)."""
        if self.shear is None:
            return np.zeros(self.n, dtype=np.complex128)
        return self._sa + t * self._sb

    def params_at(self, t):
        return (1.0 - t) * self.p0 + t * self.p1

    # -- point evaluation (uncertified) -------------------------------------

    def eval_point(self, x, t):
        x = np.asarray(x, dtype=np.complex128)
        z = x + self.shear_at(t) if self.shear is not None else x
        return self.system.eval_point(z, self.params_at(t))

    def jac_x_point(self, x, t):
        x = np.asarray(x, dtype=np.complex128)
        z = x + self.shear_at(t) if self.shear is not None else x
        return self.system.jac_x_point(z, self.params_at(t))

    def f1_eval(self, x, dp=None):
        """t-derivative of the unsheared homotopy at x (constant in t)."""
        if dp is None:
            dp = self.p1 - self.p0
        return self.system.f1_eval(x, dp)

    # -- interval evaluation (certified enclosures) --------------------------

    def _z_interval(self, box, T):
        if self.shear is None:
            return box.data
        return _k.shear_box_k(box.data,
                              np.ascontiguousarray(self._sa.real),
                              np.ascontiguousarray(self._sa.imag),
                              np.ascontiguousarray(self._sb.real),
                              np.ascontiguousarray(self._sb.imag),
                              T.lo, T.hi)

    def _pv_interval(self, T):
        if self.m == 0:
            return _EMPTY_PV4
        return _k.param_interval_k(np.ascontiguousarray(self.p0.real),
                                   np.ascontiguousarray(self.p0.imag),
                                   np.ascontiguousarray(self.p1.real),
                                   np.ascontiguousarray(self.p1.imag),
                                   T.lo, T.hi)

    def eval_interval(self, box, T):
        """Enclosure of { H(x, t) : x in box, t in T }, componentwise."""
        if box.n != self.n:
            raise DimensionMismatch("box dimension differs from system")
        if not isinstance(T, RealInterval):
            T = RealInterval(T)
        f = self.system._flat_f
        out = _k.eval_terms_interval(f.coef_re, f.coef_im, f.fac, f.par,
                                     f.expo, f.ptr, f.max_expo,
                                     self._z_interval(box, T),
                                     self._pv_interval(T))
        return Box(out, _validate=False)

    def eval_over_time(self, x, T):
        """Enclosure of { H(x, t) : t in T } at a fixed point x.

        Collects the composed terms into powers of the offset from the
        midpoint of T with interval coefficients before substituting the
        offset range (odd powers straddle zero, even powers do not).  For
        a sheared homotopy the linear coefficient nearly cancels (the
        secant slope tracks the path), a cancellation the plain box
        evaluation cannot see because the shear and the parameter path
        consume two independent copies of T there.
        """
        x = np.ascontiguousarray(x, dtype=np.complex128)
        if x.shape != (self.n,):
            raise DimensionMismatch(f"x must have shape ({self.n},)")
        if not isinstance(T, RealInterval):
            T = RealInterval(T)
        f = self.system._flat_f
        if self.shear is None:
            zre = np.zeros(self.n, dtype=np.float64)
            sa_re = sa_im = sb_re = sb_im = zre
            has_shear = False
        else:
            sa_re = np.ascontiguousarray(self._sa.real)
            sa_im = np.ascontiguousarray(self._sa.imag)
            sb_re = np.ascontiguousarray(self._sb.real)
            sb_im = np.ascontiguousarray(self._sb.imag)
            has_shear = True
        out = _k.eval_terms_tpoly(
            f.coef_re, f.coef_im, f.fac, f.par, f.expo, f.ptr, f.tdeg,
            np.ascontiguousarray(x.real), np.ascontiguousarray(x.imag),
            sa_re, sa_im, sb_re, sb_im, has_shear,
            np.ascontiguousarray(self.p0.real),
            np.ascontiguousarray(self.p0.imag),
            np.ascontiguousarray(self.p1.real),
            np.ascontiguousarray(self.p1.imag),
            T.lo, T.hi)
        return Box(out, _validate=False)

    def jac_x_interval(self, box, T):
        """Enclosure of the x-Jacobian over box x T as an IntervalMatrix."""
        if box.n != self.n:
            raise DimensionMismatch("box dimension differs from system")
        if not isinstance(T, RealInterval):
            T = RealInterval(T)
        f = self.system._flat_jac
        out = _k.eval_terms_interval(f.coef_re, f.coef_im, f.fac, f.par,
                                     f.expo, f.ptr, f.max_expo,
                                     self._z_interval(box, T),
                                     self._pv_interval(T))
        n = self.n
        return IntervalMatrix(out.reshape(n, n, 4), _validate=False)

    # -- JSON ---------------------------------------------------------------

    def to_json(self):
        obj = {
            "system": self.system.to_json(),
            "p0": _cvec_to_json(self.p0),
            "p1": _cvec_to_json(self.p1),
        }
        return obj

    @classmethod
    def from_json(cls, obj):
        try:
            sys_obj = obj["system"]
            p0 = _cvec_from_json(obj["p0"], "p0")
            p1 = _cvec_from_json(obj["p1"], "p1")
        except KeyError as e:
            raise ParseError(f"homotopy missing field {e}") from e
        return cls(ParametricSystem.from_json(sys_obj), p0, p1)


def apply_shear(h, x0, x1, t0, t1):
    """Sheared homotopy (x, t) -> H(x + s(t), t), s affine with
    s(t0) = x0 and s(t1) = x1."""
    return h.sheared(x0, x1, t0, t1)


def _cvec_to_json(v):
    return [[repr(float(z.real)), repr(float(z.imag))] for z in v]


def _cvec_from_json(obj, name):
    try:
        return np.array([complex(float(a), float(b)) for a, b in obj],
                        dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise ParseError(f"{name}: {e}") from e


def load_system(path):
    """Read a ParametricSystem from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e
    return ParametricSystem.from_json(obj)


def dump_system(system, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(system.to_json(), fh, indent=1)
        fh.write("\n")
