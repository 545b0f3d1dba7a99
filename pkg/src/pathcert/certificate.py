"""Machine-checkable path certificates.

A certificate is a chain of time segments tiling [0, 1].  Each segment
claims: over T = [t_lo, t_hi] the Krawczyk test with the stored box and
stored matrix Y passes for the stored homotopy (sheared through the stored
endpoints in tilted mode, centered at the stored point in rect mode).

``verify`` trusts nothing but those claims: it replays every test with its
own interval arithmetic, re-checks that the segments tile [0, 1] exactly,
that consecutive certified regions overlap at the shared times, and that
the recorded endpoint really solves the t = 1 system to the certification
tolerance.

All floats are serialized as shortest round-trip decimal strings, so a
certificate file is byte-stable across runs and parses back to identical
binary64 values.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MalformedCertificate, ParseError, PathcertError
from .intervals import Box, RealInterval
from .krawczyk import parametric_krawczyk_test
from .systems import Homotopy

FINAL_RESIDUAL_TOL = 1e-8

MODE_RECT = "rect"
MODE_TILTED = "tilted"


@dataclass
class Segment:
    """One certified time slice of a path."""
    t_lo: float
    t_hi: float
    box: Box
    y: np.ndarray
    residual_norm: float
    center: "np.ndarray | None" = None       # rect mode
    shear_x0: "np.ndarray | None" = None     # tilted mode
    shear_x1: "np.ndarray | None" = None     # tilted mode


@dataclass
class PathCertificate:
    mode: str
    homotopy: Homotopy
    segments: "list[Segment]"
    final_point: np.ndarray
    final_residual: float
    path_id: int = 0


@dataclass
class VerificationReport:
    ok: bool
    n_segments: int
    failures: "list[str]" = field(default_factory=list)
    segment_ok: "list[bool]" = field(default_factory=list)

    def summary(self):
        if self.ok:
            return f"OK ({self.n_segments} segments)"
        return (f"FAIL ({self.n_segments} segments): "
                + "; ".join(self.failures[:4])
                + ("; ..." if len(self.failures) > 4 else ""))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _f(x):
    return repr(float(x))


def _parse_f(s, loc):
    try:
        return float(s)
    except (TypeError, ValueError) as e:
        raise ParseError(f"{loc}: bad float {s!r}") from e


def _cvec_out(v):
    return [[_f(z.real), _f(z.imag)] for z in np.asarray(v, dtype=np.complex128)]


def _cvec_in(obj, loc):
    try:
        return np.array([complex(float(a), float(b)) for a, b in obj],
                        dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise ParseError(f"{loc}: bad complex vector") from e


def _cmat_out(m):
    return [_cvec_out(row) for row in np.asarray(m, dtype=np.complex128)]


def _cmat_in(obj, loc):
    try:
        rows = [_cvec_in(r, loc) for r in obj]
        return np.array(rows, dtype=np.complex128)
    except ParseError:
        raise
    except (TypeError, ValueError) as e:
        raise ParseError(f"{loc}: bad complex matrix") from e


def _box_out(b):
    return [[_f(v) for v in row] for row in b.data]


def _box_in(obj, loc):
    try:
        data = np.array([[float(v) for v in row] for row in obj],
                        dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ParseError(f"{loc}: bad box") from e
    if data.ndim != 2 or data.shape[1] != 4:
        raise ParseError(f"{loc}: box rows must have 4 endpoints")
    try:
        return Box(data)
    except PathcertError as e:
        raise MalformedCertificate(f"{loc}: {e}") from e


def serialize(cert):
    """Certificate as a deterministic JSON string."""
    segs = []
    for s in cert.segments:
        row = {
            "t_lo": _f(s.t_lo),
            "t_hi": _f(s.t_hi),
            "box": _box_out(s.box),
            "y": _cmat_out(s.y),
            "residual_norm": _f(s.residual_norm),
        }
        if s.center is not None:
            row["center"] = _cvec_out(s.center)
        if s.shear_x0 is not None:
            row["shear_x0"] = _cvec_out(s.shear_x0)
            row["shear_x1"] = _cvec_out(s.shear_x1)
        segs.append(row)
    obj = {
        "format": "path-certificate",
        "version": 1,
        "mode": cert.mode,
        "path_id": cert.path_id,
        "homotopy": cert.homotopy.to_json(),
        "segments": segs,
        "final_point": _cvec_out(cert.final_point),
        "final_residual": _f(cert.final_residual),
    }
    return json.dumps(obj, indent=1) + "\n"


def deserialize(text):
    """Parse a certificate; ParseError on syntax, MalformedCertificate on
    structurally invalid content."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(obj, dict) or obj.get("format") != "path-certificate":
        raise MalformedCertificate("not a path certificate")
    mode = obj.get("mode")
    if mode not in (MODE_RECT, MODE_TILTED):
        raise MalformedCertificate(f"unknown mode {mode!r}")
    try:
        h = Homotopy.from_json(obj["homotopy"])
        raw_segs = obj["segments"]
        final_point = _cvec_in(obj["final_point"], "final_point")
        final_residual = _parse_f(obj["final_residual"], "final_residual")
        path_id = int(obj.get("path_id", 0))
    except KeyError as e:
        raise MalformedCertificate(f"missing field {e}") from e
    if not isinstance(raw_segs, list) or not raw_segs:
        raise MalformedCertificate("certificate has no segments")
    segments = []
    for i, row in enumerate(raw_segs):
        loc = f"segments[{i}]"
        try:
            t_lo = _parse_f(row["t_lo"], loc + ".t_lo")
            t_hi = _parse_f(row["t_hi"], loc + ".t_hi")
            box = _box_in(row["box"], loc + ".box")
            y = _cmat_in(row["y"], loc + ".y")
            rn = _parse_f(row["residual_norm"], loc + ".residual_norm")
        except KeyError as e:
            raise MalformedCertificate(f"{loc} missing field {e}") from e
        center = shear_x0 = shear_x1 = None
        if mode == MODE_RECT:
            if "center" not in row:
                raise MalformedCertificate(f"{loc}: rect segment needs center")
            center = _cvec_in(row["center"], loc + ".center")
        else:
            if "shear_x0" not in row or "shear_x1" not in row:
                raise MalformedCertificate(
                    f"{loc}: tilted segment needs shear endpoints")
            shear_x0 = _cvec_in(row["shear_x0"], loc + ".shear_x0")
            shear_x1 = _cvec_in(row["shear_x1"], loc + ".shear_x1")
        segments.append(Segment(t_lo, t_hi, box, y, rn, center=center,
                                shear_x0=shear_x0, shear_x1=shear_x1))
    return PathCertificate(mode, h, segments, final_point, final_residual,
                           path_id=path_id)


def save_certificate(cert, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(cert))


def load_certificate(path):
    with open(path, "r", encoding="utf-8") as fh:
        return deserialize(fh.read())


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _segment_region_at(h, seg, mode, t):
    """Enclosure of the certified region of a segment at one time t."""
    if mode == MODE_RECT:
        return seg.box
    hs = h.sheared(seg.shear_x0, seg.shear_x1, seg.t_lo, seg.t_hi)
    shifted = hs._z_interval(seg.box, RealInterval(t))
    return Box(shifted, _validate=False)


def verify(cert):
    """Independently re-check a certificate; returns a VerificationReport."""
    failures = []
    segment_ok = []
    segs = cert.segments
    n = cert.homotopy.n

    if not segs:
        raise MalformedCertificate("certificate has no segments")

    # structural checks
    for i, s in enumerate(segs):
        if s.box.n != n or s.y.shape != (n, n):
            raise MalformedCertificate(f"segments[{i}]: dimension mismatch")
        if not (math.isfinite(s.t_lo) and math.isfinite(s.t_hi)
                and s.t_lo < s.t_hi):
            raise MalformedCertificate(f"segments[{i}]: bad time bracket")
        if cert.mode == MODE_TILTED and (s.shear_x0 is None
                                         or s.shear_x1 is None):
            raise MalformedCertificate(f"segments[{i}]: missing shear")
        if cert.mode == MODE_RECT and s.center is None:
            raise MalformedCertificate(f"segments[{i}]: missing center")
    if cert.final_point.shape != (n,):
        raise MalformedCertificate("final point has wrong dimension")

    # chain tiles [0, 1]
    if segs[0].t_lo != 0.0:
        failures.append(f"chain starts at t={segs[0].t_lo}, not 0")
    for i in range(len(segs) - 1):
        if segs[i].t_hi != segs[i + 1].t_lo:
            failures.append(
                f"chain gap: segments[{i}].t_hi={segs[i].t_hi!r} "
                f"!= segments[{i + 1}].t_lo={segs[i + 1].t_lo!r}")
    if segs[-1].t_hi < 1.0:
        failures.append(f"chain ends at t={segs[-1].t_hi}, before 1")

    # replay every Krawczyk test from the stored claims only
    for i, s in enumerate(segs):
        ok = True
        try:
            if cert.mode == MODE_TILTED:
                hs = cert.homotopy.sheared(s.shear_x0, s.shear_x1,
                                           s.t_lo, s.t_hi)
                x = np.zeros(n, dtype=np.complex128)
            else:
                hs = cert.homotopy
                x = s.center
            verdict = parametric_krawczyk_test(
                hs, x, s.y, s.box, RealInterval(s.t_lo, s.t_hi))
            if not verdict.existence:
                failures.append(f"segments[{i}]: existence check failed")
                ok = False
            if not verdict.uniqueness:
                failures.append(f"segments[{i}]: uniqueness check failed")
                ok = False
        except PathcertError as e:
            failures.append(f"segments[{i}]: replay error: {e}")
            ok = False
        segment_ok.append(ok)

    # consecutive certified regions must overlap at the shared time
    for i in range(len(segs) - 1):
        if segs[i].t_hi != segs[i + 1].t_lo:
            continue  # already reported as a gap
        tau = segs[i].t_hi
        try:
            ra = _segment_region_at(cert.homotopy, segs[i], cert.mode, tau)
            rb = _segment_region_at(cert.homotopy, segs[i + 1], cert.mode, tau)
            if not ra.intersects(rb):
                failures.append(
                    f"segments[{i}]/[{i + 1}]: hand-off regions disjoint "
                    f"at t={tau!r}")
        except PathcertError as e:
            failures.append(f"segments[{i}]: hand-off error: {e}")

    # endpoint really solves the t=1 system
    res = float(np.abs(cert.homotopy.eval_point(cert.final_point, 1.0)).max())
    if not (res <= FINAL_RESIDUAL_TOL):
        failures.append(
            f"final residual {res:.3e} exceeds {FINAL_RESIDUAL_TOL:.1e}")

    return VerificationReport(ok=not failures, n_segments=len(segs),
                              failures=failures, segment_ok=segment_ok)


def verify_file(path):
    return verify(load_certificate(path))
