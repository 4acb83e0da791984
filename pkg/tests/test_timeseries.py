import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from twprobe.timeseries import TimeSeries, emit_timeseries, load_timeseries, to_csv_text

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def sample():
    return TimeSeries({"t": [0.0, 0.5, 1.0], "P_e": [0.0, 0.1 + 1e-17, 1 / 3]},
                      {"name": "x", "results": {"flag": np.bool_(True), "n": np.int64(3)}})


def test_t_is_first_column():
    ts = TimeSeries({"a": [1, 2], "t": [0, 1]})
    assert ts.names == ["t", "a"]


@pytest.mark.parametrize("cols,exc", [
    ({"a": [1]}, ValueError),
    ({"t": [0, 1], "a": [1]}, ValueError),
    ({"t": [0, 0]}, ValueError),
    ({"t": [0, 1], "z": [1j, 2]}, TypeError),
])
def test_rejects(cols, exc):
    with pytest.raises(exc):
        TimeSeries(cols)


def test_csv_header_and_precision():
    text = to_csv_text(sample())
    lines = text.splitlines()
    assert lines[0] == "t,P_e"
    assert float(lines[-1].split(",")[1]) == 1 / 3


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_round_trip(tmp_path, fmt):
    ts = sample()
    files = emit_timeseries(ts, fmt, tmp_path / f"run.{fmt}")
    back = load_timeseries(files[0])
    assert back.names == ts.names
    for name in ts.names:
        np.testing.assert_array_equal(back[name], ts[name])
    assert back.metadata["results"] == {"flag": True, "n": 3}


def test_csv_sidecar(tmp_path):
    files = emit_timeseries(sample(), "csv", tmp_path / "run.csv")
    assert [f.name for f in files] == ["run.csv", "run.meta.json"]
    assert json.loads(files[1].read_text())["name"] == "x"


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        emit_timeseries(sample(), "xml", tmp_path / "run.xml")


@given(st.lists(finite, min_size=1, max_size=30))
def test_csv_values_exact(values):
    ts = TimeSeries({"t": np.arange(len(values)), "v": values})
    body = to_csv_text(ts).splitlines()[1:]
    assert [float(r.split(",")[1]) for r in body] == [float(v) for v in values]
