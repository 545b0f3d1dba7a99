"""Certified path tracking.

Two modes over the parameter segment t in [0, 1]:

rect:   test a box centered at the current refined point x over
        T = [t0, t1].  On success scale dt and r up by lambda, advance,
        refine the box midpoint at the new t0 and recompute Y.  On failure
        re-refine x, scale dt and r down, retry with the same Y.

tilted: before EVERY test (success or failure alike), predict x1 at t1 by
        an Euler step refined with Newton, shear the homotopy along the
        line through (t0, x) and (t1, x1), and test a box centered at 0
        for the sheared map.  The box then rides along the secant of the
        path, which keeps it small even when the path moves fast.

Both accept a step only when the Krawczyk test proves existence and
uniqueness over the whole time slice, so the accepted segments assemble
into a machine-checkable certificate chain tiling [0, 1].

Step scheduling keeps dt and r locked to a common power of lambda:
dt = dt0 * lambda^k and r = r0 * lambda^k with one shared integer k, so a
success followed by a failure restores bit-identical values and the ratio
dt/r never drifts by more than rounding.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .certificate import MODE_RECT, MODE_TILTED, PathCertificate, Segment
from .errors import (
    DegenerateTimeInterval,
    MaxStepsExceeded,
    NoConvergence,
    PathcertError,
    SingularJacobian,
    SingularMatrix,
    StepUnderflow,
    TrackingError,
)
from .ilinalg import mid_inverse, solve_point
from .intervals import RealInterval, box_centered
from .krawczyk import parametric_krawczyk_test


@dataclass(frozen=True)
class TrackerConfig:
    dt0: float = 0.1
    r0: float = 0.1
    lam: float = 3.0
    newton_tol: float = 1e-12
    max_steps: int = 1_000_000
    newton_max_iter: int = 50
    min_dt: float = 1e-14
    max_consecutive_rejections: int = 60

    def __post_init__(self):
        if not (self.dt0 > 0 and math.isfinite(self.dt0)):
            raise ValueError(f"dt0 must be positive, got {self.dt0}")
        if not (self.r0 > 0 and math.isfinite(self.r0)):
            raise ValueError(f"r0 must be positive, got {self.r0}")
        if not (self.lam > 1 and math.isfinite(self.lam)):
            raise ValueError(f"lambda must exceed 1, got {self.lam}")
        if not (0 < self.newton_tol < 1):
            raise ValueError(f"newton_tol out of range: {self.newton_tol}")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")

    @property
    def ratio(self):
        """Initial (and persistent) step-to-radius ratio dt/r."""
        return self.dt0 / self.r0


@dataclass
class StepRecord:
    index: int
    t0: float
    dt: float
    r: float
    accepted: bool
    residual_norm: float


@dataclass
class TrackState:
    """Mutable bookkeeping of one tracked path."""
    t0: float
    t1: float
    dt: float
    r: float
    x0: np.ndarray
    x1: "np.ndarray | None" = None
    scale_exp: int = 0
    consecutive_rejections: int = 0
    tests: int = 0
    step_log: "list[StepRecord]" = field(default_factory=list)


def make_state(x0, cfg):
    x0 = np.array(x0, dtype=np.complex128)
    return TrackState(t0=0.0, t1=min(cfg.dt0, 1.0), dt=cfg.dt0, r=cfg.r0,
                      x0=x0)


def step_update(state, cfg, accepted, residual_norm=math.nan):
    """Log the step just tested and move the (t0, t1, dt, r) frame.

    Accepted: scale dt and r up by lambda, advance t0 to t1.  Rejected:
    scale both down, keep t0.  Either way t1 = min(t0 + dt, 1).  Raises
    StepUnderflow when dt collapses or rejections pile up.
    """
    state.step_log.append(StepRecord(
        index=len(state.step_log), t0=state.t0, dt=state.t1 - state.t0,
        r=state.r, accepted=bool(accepted), residual_norm=residual_norm))
    if accepted:
        state.consecutive_rejections = 0
        state.scale_exp += 1
        state.t0 = state.t1
    else:
        state.consecutive_rejections += 1
        if state.consecutive_rejections > cfg.max_consecutive_rejections:
            raise StepUnderflow(
                f"{state.consecutive_rejections} consecutive rejections "
                f"at t={state.t0}")
        state.scale_exp -= 1
    scale = cfg.lam ** state.scale_exp
    state.dt = cfg.dt0 * scale
    state.r = cfg.r0 * scale
    if not accepted and state.dt < cfg.min_dt:
        raise StepUnderflow(f"dt={state.dt} below {cfg.min_dt} at t={state.t0}")
    state.t1 = min(state.t0 + state.dt, 1.0)
    return state


def newton_refine(h, x, t, tol, max_iter=50):
    """Newton-iterate x toward a root of H(., t); returns (point, residual).

    Returns immediately when the residual is already at tolerance.  Raises
    SingularJacobian or NoConvergence; never returns a point whose
    residual exceeds tol.
    """
    x = np.array(x, dtype=np.complex128)
    fx = h.eval_point(x, t)
    res = float(np.abs(fx).max())
    if res <= tol:
        return x, res
    for _ in range(max_iter):
        jac = h.jac_x_point(x, t)
        try:
            dx = solve_point(jac, fx)
        except SingularMatrix as e:
            raise SingularJacobian(f"Jacobian singular at t={t}") from e
        x = x - dx
        fx = h.eval_point(x, t)
        res = float(np.abs(fx).max())
        if not math.isfinite(res):
            raise NoConvergence(f"Newton diverged at t={t}")
        if res <= tol:
            return x, res
    raise NoConvergence(
        f"Newton residual {res:.3e} above {tol:.1e} after {max_iter} "
        f"iterations at t={t}")


def euler_predict(h, x, t0, dt):
    """One Euler step of the defining ODE: x - dt * J^{-1} dH/dt.

    The t-derivative of H is the parameter part evaluated at the
    displacement p1 - p0, constant in t.
    """
    x = np.asarray(x, dtype=np.complex128)
    jac = h.jac_x_point(x, t0)
    rhs = h.f1_eval(x)
    try:
        dx = solve_point(jac, rhs)
    except SingularMatrix as e:
        raise SingularJacobian(f"Jacobian singular at t={t0}") from e
    return x - dt * dx


def precondition(h, x0, t0, t1, cfg):
    """Predict x1 at t1, then shear the homotopy through (t0, x0) and
    (t1, x1).  Returns (sheared homotopy, x1)."""
    if not (t1 > t0):
        raise DegenerateTimeInterval(f"need t1 > t0, got [{t0}, {t1}]")
    xp = euler_predict(h, x0, t0, t1 - t0)
    x1, _ = newton_refine(h, xp, t1, cfg.newton_tol, cfg.newton_max_iter)
    return h.sheared(x0, x1, t0, t1), x1


@dataclass
class TrackResult:
    """Outcome of tracking one path.

    iterations counts the accepted, time-advancing steps; it equals the
    number of segments in the certificate.  tests counts every Krawczyk
    test run, accepted and rejected alike, so tests - iterations is the
    number of rejections paid to the step-size search.
    """
    path_id: int
    mode: str
    certificate: PathCertificate
    iterations: int
    tests: int
    accepted: int
    rejected: int
    step_log: "list[StepRecord]"
    final_point: np.ndarray
    final_residual: float


def _mid_inverse_or_raise(h, x, t):
    try:
        y, _ = mid_inverse(h.jac_x_point(x, t))
    except SingularMatrix as e:
        raise SingularJacobian(f"Jacobian not invertible at t={t}") from e
    return y


def _refine_quietly(h, x, t, cfg):
    """Failure-branch re-refinement: best effort, never aborts."""
    try:
        xr, _ = newton_refine(h, x, t, cfg.newton_tol, cfg.newton_max_iter)
        return xr
    except TrackingError:
        return x


def track_rect(h, x0, cfg=None, path_id=0):
    """Track with axis-aligned boxes around the current point."""
    cfg = cfg or TrackerConfig()
    if h.shear is not None:
        raise PathcertError("tracking expects an unsheared homotopy")
    x, _ = newton_refine(h, x0, 0.0, cfg.newton_tol, cfg.newton_max_iter)
    y = _mid_inverse_or_raise(h, x, 0.0)
    state = make_state(x, cfg)
    segments = []
    while state.t0 < 1.0:
        if len(state.step_log) >= cfg.max_steps:
            raise MaxStepsExceeded(f"{cfg.max_steps} steps at t={state.t0}")
        box = box_centered(x, state.r)
        T = RealInterval(state.t0, state.t1)
        ok = False
        rn = math.nan
        try:
            verdict = parametric_krawczyk_test(h, x, y, box, T)
            ok = verdict.passed
            rn = verdict.residual_norm
        except PathcertError:
            ok = False
        state.tests += 1
        if ok:
            segments.append(Segment(state.t0, state.t1, box, y, rn,
                                    center=x.copy()))
            step_update(state, cfg, True, rn)
            x, _ = newton_refine(h, x, state.t0, cfg.newton_tol,
                                 cfg.newton_max_iter)
            if state.t0 < 1.0:
                y = _mid_inverse_or_raise(h, x, state.t0)
        else:
            x = _refine_quietly(h, x, state.t0, cfg)
            step_update(state, cfg, False, rn)
    final_res = float(np.abs(h.eval_point(x, 1.0)).max())
    cert = PathCertificate(MODE_RECT, h, segments, x, final_res,
                           path_id=path_id)
    return TrackResult(path_id, MODE_RECT, cert, len(segments), state.tests,
                       len(segments), len(state.step_log) - len(segments),
                       state.step_log, x, final_res)


def track_tilted(h, x0, cfg=None, path_id=0):
    """Track with boxes riding on per-step secant shears."""
    cfg = cfg or TrackerConfig()
    if h.shear is not None:
        raise PathcertError("tracking expects an unsheared homotopy")
    n = h.n
    zeros = np.zeros(n, dtype=np.complex128)
    x, _ = newton_refine(h, x0, 0.0, cfg.newton_tol, cfg.newton_max_iter)
    y = _mid_inverse_or_raise(h, x, 0.0)
    state = make_state(x, cfg)
    segments = []
    while state.t0 < 1.0:
        if len(state.step_log) >= cfg.max_steps:
            raise MaxStepsExceeded(f"{cfg.max_steps} steps at t={state.t0}")
        ok = False
        rn = math.nan
        sheared = None
        x1 = None
        try:
            sheared, x1 = precondition(h, x, state.t0, state.t1, cfg)
        except (TrackingError, SingularMatrix):
            sheared = None
        if sheared is not None:
            box = box_centered(zeros, state.r)
            T = RealInterval(state.t0, state.t1)
            try:
                verdict = parametric_krawczyk_test(sheared, zeros, y, box, T)
                ok = verdict.passed
                rn = verdict.residual_norm
            except PathcertError:
                ok = False
            state.tests += 1
        if ok:
            segments.append(Segment(state.t0, state.t1, box, y, rn,
                                    shear_x0=x.copy(), shear_x1=x1.copy()))
            step_update(state, cfg, True, rn)
            x, _ = newton_refine(h, x1, state.t0, cfg.newton_tol,
                                 cfg.newton_max_iter)
            if state.t0 < 1.0:
                y = _mid_inverse_or_raise(h, x, state.t0)
        else:
            x = _refine_quietly(h, x, state.t0, cfg)
            step_update(state, cfg, False, rn)
    final_res = float(np.abs(h.eval_point(x, 1.0)).max())
    cert = PathCertificate(MODE_TILTED, h, segments, x, final_res,
                           path_id=path_id)
    return TrackResult(path_id, MODE_TILTED, cert, len(segments), state.tests,
                       len(segments), len(state.step_log) - len(segments),
                       state.step_log, x, final_res)


def track(h, x0, cfg=None, mode=MODE_TILTED, path_id=0):
    if mode == MODE_RECT:
        return track_rect(h, x0, cfg, path_id=path_id)
    if mode == MODE_TILTED:
        return track_tilted(h, x0, cfg, path_id=path_id)
    raise ValueError(f"unknown mode {mode!r}")
