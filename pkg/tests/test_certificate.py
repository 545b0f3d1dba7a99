"""Certificates: serialization round-trips, verification, tamper detection."""

import dataclasses
import json

import numpy as np
import pytest

import tutil
from pathcert.bench import gen_newton_homotopy
from pathcert.certificate import (
    MODE_RECT,
    MODE_TILTED,
    PathCertificate,
    deserialize,
    load_certificate,
    save_certificate,
    serialize,
    verify,
    verify_file,
)
from pathcert.errors import MalformedCertificate, ParseError
from pathcert.intervals import Box
from pathcert.tracker import TrackerConfig, track_rect, track_tilted


@pytest.fixture(scope="module")
def newton_certs():
    h, starts = gen_newton_homotopy(10.0)
    cfg = TrackerConfig(dt0=0.02, r0=0.1)
    tilted = track_tilted(h, starts[0], cfg).certificate
    rect = track_rect(h, starts[0], cfg).certificate
    # the homotopy is even in x, so the negated start tracks the mirror path
    minus = track_tilted(h, -starts[0], cfg, path_id=1).certificate
    return h, tilted, rect, minus


def shrink_box(box, factor):
    mid = box.data[:, [0, 2]] * 0.5 + box.data[:, [1, 3]] * 0.5
    half = (box.data[:, [1, 3]] - box.data[:, [0, 2]]) * (0.5 * factor)
    data = np.empty_like(box.data)
    data[:, [0, 2]] = mid - half
    data[:, [1, 3]] = mid + half
    return Box(data)


class TestSerialization:
    def test_round_trip_tilted(self, newton_certs):
        _, tilted, _, _ = newton_certs
        text = serialize(tilted)
        assert isinstance(text, str) and text.endswith("\n")
        back = deserialize(text)
        assert back.mode == tilted.mode
        assert back.path_id == tilted.path_id
        assert back.final_residual == tilted.final_residual
        assert np.array_equal(back.final_point, tilted.final_point)
        assert len(back.segments) == len(tilted.segments)
        for a, b in zip(tilted.segments, back.segments):
            assert a.t_lo == b.t_lo and a.t_hi == b.t_hi
            assert np.array_equal(a.box.data, b.box.data)
            assert np.array_equal(a.y, b.y)
            assert a.residual_norm == b.residual_norm
            assert np.array_equal(a.shear_x0, b.shear_x0)
            assert np.array_equal(a.shear_x1, b.shear_x1)
        assert serialize(back) == text

    def test_round_trip_rect(self, newton_certs):
        _, _, rect, _ = newton_certs
        back = deserialize(serialize(rect))
        assert back.mode == MODE_RECT
        for a, b in zip(rect.segments, back.segments):
            assert np.array_equal(a.center, b.center)
            assert np.array_equal(a.box.data, b.box.data)
        assert serialize(back) == serialize(rect)

    def test_round_trip_preserves_verification(self, newton_certs):
        _, tilted, _, _ = newton_certs
        assert verify(deserialize(serialize(tilted))).ok

    def test_truncated_raises_parse_error(self, newton_certs):
        _, tilted, _, _ = newton_certs
        text = serialize(tilted)
        with pytest.raises(ParseError):
            deserialize(text[: len(text) // 2])

    def test_wrong_schema_rejected(self):
        with pytest.raises(MalformedCertificate):
            deserialize('{"a": 1}')

    def test_file_round_trip(self, newton_certs, tmp_path):
        _, tilted, _, _ = newton_certs
        path = tmp_path / "cert.json"
        save_certificate(tilted, path)
        assert serialize(load_certificate(path)) == serialize(tilted)
        assert verify_file(path).ok


class TestVerify:
    def test_passes_both_modes(self, newton_certs):
        _, tilted, rect, _ = newton_certs
        for cert in (tilted, rect):
            rep = verify(cert)
            assert rep.ok, rep.summary()
            assert rep.n_segments == len(cert.segments)
            assert all(rep.segment_ok)
            assert rep.summary().startswith("OK")

    def test_empty_segments_malformed(self, newton_certs):
        _, tilted, _, _ = newton_certs
        empty = dataclasses.replace(tilted, segments=[])
        with pytest.raises(MalformedCertificate):
            verify(empty)

    def test_dimension_mismatch_detected(self, newton_certs):
        # segments from a 1-variable track, homotopy claiming 2 variables
        _, tilted, _, _ = newton_certs
        eqs = [[tutil.Term(1.0, None, (1, 0))], [tutil.Term(1.0, None, (0, 1))]]
        h2 = tutil.static_homotopy(eqs, n=2)
        bad = dataclasses.replace(tilted, homotopy=h2)
        with pytest.raises(MalformedCertificate, match="dimension mismatch"):
            verify(bad)

    def test_wrong_final_point_shape(self, newton_certs):
        _, tilted, _, _ = newton_certs
        bad = dataclasses.replace(tilted,
                                  final_point=np.zeros(3, dtype=complex))
        with pytest.raises(MalformedCertificate, match="final point"):
            verify(bad)

    def test_bad_time_bracket(self, newton_certs):
        _, tilted, _, _ = newton_certs
        seg = dataclasses.replace(tilted.segments[0], t_hi=0.0)
        bad = dataclasses.replace(tilted,
                                  segments=[seg] + tilted.segments[1:])
        with pytest.raises(MalformedCertificate, match="time bracket"):
            verify(bad)

    def test_missing_shear_malformed(self, newton_certs):
        _, tilted, _, _ = newton_certs
        seg = dataclasses.replace(tilted.segments[0], shear_x0=None)
        bad = dataclasses.replace(tilted,
                                  segments=[seg] + tilted.segments[1:])
        with pytest.raises(MalformedCertificate, match="missing shear"):
            verify(bad)


class TestTamper:
    def test_shrunk_box_fails_existence(self, newton_certs):
        _, tilted, _, _ = newton_certs
        i = len(tilted.segments) // 2
        segs = list(tilted.segments)
        segs[i] = dataclasses.replace(segs[i], box=shrink_box(segs[i].box, 1e-6))
        rep = verify(dataclasses.replace(tilted, segments=segs))
        assert not rep.ok
        assert not rep.segment_ok[i]
        assert any("existence" in f and f"segments[{i}]" in f
                   for f in rep.failures)
        # untouched segments still replay clean
        assert all(ok for j, ok in enumerate(rep.segment_ok) if j != i)

    def test_widened_time_interval_fails(self, newton_certs):
        _, tilted, _, _ = newton_certs
        i = len(tilted.segments) // 2
        segs = list(tilted.segments)
        segs[i] = dataclasses.replace(segs[i], t_hi=segs[i].t_hi + 0.5)
        rep = verify(dataclasses.replace(tilted, segments=segs))
        assert not rep.ok
        # the stretched bracket must trip the replay or break the chain
        assert any(f"segments[{i}]" in f for f in rep.failures)

    def test_corrupted_y_fails_uniqueness(self, newton_certs):
        _, tilted, _, _ = newton_certs
        i = len(tilted.segments) // 2
        segs = list(tilted.segments)
        segs[i] = dataclasses.replace(segs[i], y=segs[i].y * 2.0)
        rep = verify(dataclasses.replace(tilted, segments=segs))
        assert not rep.ok
        assert not rep.segment_ok[i]
        assert any("uniqueness" in f and f"segments[{i}]" in f
                   for f in rep.failures)

    def test_chain_gap_reported(self, newton_certs):
        _, tilted, _, _ = newton_certs
        rep = verify(dataclasses.replace(tilted, segments=tilted.segments[1:]))
        assert not rep.ok
        assert any("chain starts" in f for f in rep.failures)
        rep = verify(dataclasses.replace(tilted, segments=tilted.segments[:-1]))
        assert not rep.ok
        assert any("chain ends" in f for f in rep.failures)

    def test_spliced_paths_fail_handoff(self, newton_certs):
        # two valid certificates for the two square-root branches share the
        # same step schedule by symmetry; splicing them tiles [0, 1] and every
        # segment replays, but the certified regions jump between branches
        _, plus, _, minus = newton_certs
        assert len(plus.segments) == len(minus.segments)
        j = len(plus.segments) // 2
        assert plus.segments[j].t_lo == minus.segments[j].t_lo
        spliced = dataclasses.replace(
            minus, segments=plus.segments[:j] + minus.segments[j:])
        rep = verify(spliced)
        assert not rep.ok
        assert any("hand-off" in f and "disjoint" in f for f in rep.failures)
        assert all(rep.segment_ok)

    def test_corrupted_final_point_fails_residual(self, newton_certs):
        _, tilted, _, _ = newton_certs
        bad = dataclasses.replace(
            tilted, final_point=tilted.final_point + 0.01)
        rep = verify(bad)
        assert not rep.ok
        assert any("final residual" in f for f in rep.failures)
