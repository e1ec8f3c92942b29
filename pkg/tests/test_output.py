import math

import numpy as np
import pytest

from airybeam import InvalidInputError
from airybeam.output import ResultTable, write_csv, write_heatmap_svg, write_line_svg


def test_table_requires_units():
    with pytest.raises(InvalidInputError):
        ResultTable((("z", ""),), [[1.0]])
    with pytest.raises(InvalidInputError):
        ResultTable((("z", "m"), ("x", "m")), [[1.0]])


def test_table_header_and_column():
    t = ResultTable((("z", "m"), ("se", "bit/s/Hz")), [[1.0, 2.0], [3.0, 4.0]])
    assert t.header == ["z [m]", "se [bit/s/Hz]"]
    assert t.column("se").tolist() == [2.0, 4.0]
    with pytest.raises(KeyError):
        t.column("nope")


def test_csv_roundtrips_floats(tmp_path):
    vals = [[0.1, 1 / 3], [math.inf, math.nan], [-1e-300, 2.5e17]]
    t = ResultTable((("a", "m"), ("b", "W")), vals)
    p = write_csv(t, tmp_path / "t.csv")
    lines = p.read_bytes().decode().split("\r\n")
    assert lines[0] == "a [m],b [W]"
    assert float(lines[1].split(",")[1]) == 1 / 3
    assert lines[2] == "inf,nan"


def test_empty_table(tmp_path):
    t = ResultTable((("a", "m"),), [])
    assert t.rows.shape == (0, 1)
    assert write_csv(t, tmp_path / "e.csv").read_text().strip() == "a [m]"


def test_line_svg(tmp_path):
    x = np.linspace(0, 1, 11)
    p = write_line_svg(tmp_path / "l.svg", x, [("one", x ** 2), ("two", np.full(11, np.nan))],
                       "z [m]", "power [W]", title="t", note="n", logy=False)
    s = p.read_text()
    assert s.count("<polyline") >= 1 and "z [m]" in s and "power [W]" in s


def test_line_svg_log(tmp_path):
    x = np.arange(1, 6)
    s = write_line_svg(tmp_path / "l.svg", x, [("a", 10.0 ** x)], "x [m]", "y [W]", logy=True).read_text()
    assert "<svg" in s


def test_heatmap_svg(tmp_path):
    s = write_heatmap_svg(tmp_path / "h.svg", np.linspace(-1, 1, 300), np.linspace(1, 2, 50),
                          np.random.default_rng(0).random((50, 300))).read_text()
    assert "<rect" in s
