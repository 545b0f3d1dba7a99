"""The numpy fallback backend must reproduce the jitted kernels bit for bit."""

import os
import subprocess
import sys
from pathlib import Path

import pytest

from pathcert import _backend
from pathcert.bench import gen_newton_homotopy
from pathcert.certificate import serialize
from pathcert.tracker import TrackerConfig, track_tilted

TRACK_SNIPPET = """
import sys
import pathcert._backend as b
assert b.backend_name() == "numpy", b.backend_name()
from pathcert.bench import gen_newton_homotopy
from pathcert.certificate import serialize
from pathcert.tracker import TrackerConfig, track_tilted
h, starts = gen_newton_homotopy(10.0)
res = track_tilted(h, starts[0], TrackerConfig(dt0=0.02, r0=0.1))
sys.stdout.write(serialize(res.certificate))
"""


def run_with_backend(code, backend):
    env = dict(os.environ, PATHCERT_BACKEND=backend)
    src = str(Path(__file__).resolve().parent.parent / "src")
    env["PYTHONPATH"] = src + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run([sys.executable, "-c", code], env=env,
                          capture_output=True, text=True, timeout=600)


def test_backend_name_reports_active_choice():
    assert _backend.backend_name() in ("numba", "numpy")
    forced = os.environ.get("PATHCERT_BACKEND", "").strip().lower()
    if forced:
        assert _backend.backend_name() == forced


def test_kernels_expose_pure_python_fallback():
    from pathcert import _kernels
    if _backend.backend_name() == "numba":
        assert hasattr(_kernels.r_add, "py_func")
        assert hasattr(_kernels.eval_terms_tpoly, "py_func")


def test_numpy_backend_tracks_bit_identically():
    proc = run_with_backend(TRACK_SNIPPET, "numpy")
    assert proc.returncode == 0, proc.stderr
    h, starts = gen_newton_homotopy(10.0)
    here = track_tilted(h, starts[0], TrackerConfig(dt0=0.02, r0=0.1))
    assert proc.stdout == serialize(here.certificate)


def test_bad_backend_value_rejected():
    proc = run_with_backend("import pathcert._backend", "cuda")
    assert proc.returncode != 0
    assert "PATHCERT_BACKEND" in proc.stderr
