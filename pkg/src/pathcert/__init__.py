"""Certified homotopy continuation for parametric polynomial systems.

Tracks solution paths of square polynomial systems whose coefficients move
along a parameter segment, proving existence and uniqueness of the path
inside explicit interval boxes at every step (interval Krawczyk tests over
rectangular complex arithmetic), and emits machine-checkable certificates
that an independent verifier replays from scratch.
"""

from ._backend import backend_name
from .bench import (
    BenchmarkReport,
    BenchmarkSpec,
    bootstrap_starts,
    build_family,
    gen_katsura,
    gen_lowrank,
    gen_newton_homotopy,
    gen_random_quadratic,
    hilbert_matrix,
    newton_path_point,
    run_benchmark,
    svd_oracle,
    verify_run,
)
from .certificate import (
    MODE_RECT,
    MODE_TILTED,
    PathCertificate,
    Segment,
    VerificationReport,
    deserialize,
    load_certificate,
    save_certificate,
    serialize,
    verify,
    verify_file,
)
from .errors import (
    CertificateError,
    DegenerateStart,
    DegenerateTimeInterval,
    DimensionMismatch,
    DivisionByIntervalContainingZero,
    EmptyInterval,
    IntervalError,
    InvalidM,
    MalformedCertificate,
    MaxStepsExceeded,
    NoConvergence,
    NonFiniteEndpoint,
    NonPositiveRadius,
    ParseError,
    PathcertError,
    RootCountMismatch,
    SingularJacobian,
    SingularMatrix,
    StepUnderflow,
    TrackingError,
    UnsupportedN,
)
from .ilinalg import (
    IntervalMatrix,
    imatvec,
    inorm,
    mid_inverse,
    point_matvec_box,
    residual_matrix,
    solve_point,
)
from .intervals import (
    Box,
    ComplexInterval,
    RealInterval,
    box_centered,
    box_contains,
    box_norm,
    mag,
    midpoint,
    minkowski_shift,
    width,
)
from .krawczyk import KrawczykVerdict, krawczyk_operator, parametric_krawczyk_test
from .systems import (
    Homotopy,
    ParametricSystem,
    Term,
    apply_shear,
    dump_system,
    load_system,
)
from .tracker import (
    TrackerConfig,
    TrackResult,
    TrackState,
    euler_predict,
    make_state,
    newton_refine,
    precondition,
    step_update,
    track,
    track_rect,
    track_tilted,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
