"""Trace CSV format: column handling and roundtrips."""

import pytest

from wifimap.errors import EmptyTraceError
from wifimap.traces import TrajectorySample, load_trace, save_trace


def _sample(i, **kw):
    return TrajectorySample(index=i, t=float(i), x=1.0 + i, y=2.0, **kw)


class TestSaveTrace:
    def test_minimal_columns(self, tmp_path):
        p = tmp_path / "t.csv"
        save_trace([_sample(0), _sample(1)], p)
        assert p.read_text().splitlines()[0] == "t,x,y"

    def test_optional_columns_in_fixed_order(self, tmp_path):
        p = tmp_path / "t.csv"
        save_trace([_sample(0, rssi=-41.25, k=1, k_true=2, collision=True)], p)
        lines = p.read_text().splitlines()
        assert lines[0] == "t,x,y,rssi,k_true,k,collision"
        assert lines[1] == "0.000000,1.000000,2.000000,-41.250000,2,1,1"

    def test_rewrite_is_byte_identical(self, tmp_path):
        samples = [_sample(i, rssi=-50.0 - i * 0.1) for i in range(5)]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        save_trace(samples, a)
        save_trace(load_trace(a), b)
        assert a.read_bytes() == b.read_bytes()

    def test_empty_rejected(self, tmp_path):
        with pytest.raises(EmptyTraceError):
            save_trace([], tmp_path / "x.csv")


class TestLoadTrace:
    def test_roundtrip_fields(self, tmp_path):
        p = tmp_path / "t.csv"
        save_trace(
            [
                _sample(0, rssi=-40.0, k_true=0),
                _sample(1, rssi=-55.5, k_true=1, k=1),
                _sample(2, collision=True),
            ],
            p,
        )
        back = load_trace(p)
        assert [s.index for s in back] == [0, 1, 2]
        assert back[0].rssi == -40.0 and back[0].k is None
        assert back[1].k == 1 and back[1].k_true == 1
        assert back[2].collision and back[2].rssi is None

    def test_k_only_trace(self, tmp_path):
        p = tmp_path / "k.csv"
        p.write_text("t,x,y,k\n0.0,1.0,2.0,3\n")
        s = load_trace(p)[0]
        assert s.k == 3 and s.rssi is None

    def test_missing_required_column(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("t,x\n0.0,1.0\n")
        with pytest.raises(EmptyTraceError):
            load_trace(p)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        with pytest.raises(EmptyTraceError):
            load_trace(p)

    def test_header_only(self, tmp_path):
        p = tmp_path / "h.csv"
        p.write_text("t,x,y\n")
        with pytest.raises(EmptyTraceError):
            load_trace(p)
