import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracline.errors import DomainError
from fracline.io import (atomic_write, csv_text, format_number, load_initial_condition, read_csv,
                         report_text, write_csv)
from fracline.profiles import BUILTIN_PROFILES, box_smooth, gauss_bump, tent
from fracline.solvers import Report


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_seventeen_digits_round_trip(v):
    assert float(format_number(v)) == v


def test_csv_text_layout():
    text = csv_text(("x", "g"), [(0.0, 1.0), (0.1, 2.5)])
    assert text == "x,g\n0,1\n0.10000000000000001,2.5\n"


def test_atomic_write_replaces_and_leaves_no_temp(tmp_path):
    path = tmp_path / "out.csv"
    atomic_write(path, "old\n")
    write_csv(path, ("a",), [(1.0,)])
    assert path.read_text() == "a\n1\n"
    assert sorted(p.name for p in tmp_path.iterdir()) == ["out.csv"]


def test_write_is_deterministic(tmp_path):
    rows = [(x, np.sin(x)) for x in np.linspace(0, 1, 50)]
    write_csv(tmp_path / "a.csv", ("x", "s"), rows)
    write_csv(tmp_path / "b.csv", ("x", "s"), rows)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_report_text_formats_values():
    text = report_text([("alpha", 0.5), ("ok", True), Report("r", False, {"v": [1.0, 2.0]})])
    assert text.splitlines() == ["alpha=0.5", "ok=true", "r.passed=false", "r.v=1,2"]


def test_builtin_profile_values():
    assert gauss_bump(np.array(0.5)) == pytest.approx(1.0, rel=1e-15)
    assert tent(np.array(0.25)) == 0.5
    assert box_smooth(np.array(0.125)) == pytest.approx(0.5, rel=1e-15)
    y = np.array([-0.5, 0.0, 1.0, 1.5])
    for f in BUILTIN_PROFILES.values():
        np.testing.assert_array_equal(f(y), 0.0)


@pytest.mark.parametrize("name", sorted(BUILTIN_PROFILES))
def test_load_builtin(name):
    d = load_initial_condition(name, x_max=4.0, nx=400)
    assert d.g.h == pytest.approx(0.01)
    assert d.g.values[0] == 0.0
    assert d.support_length < 1.0
    assert d.extension == "odd"
    assert load_initial_condition(name, 4.0, 400, bc="neumann").extension == "even"


def test_load_builtin_rejects_short_domain():
    with pytest.raises(DomainError):
        load_initial_condition("tent", x_max=0.5, nx=100)


def test_load_unknown_source():
    with pytest.raises(DomainError, match="neither"):
        load_initial_condition("no-such-profile")


def write(tmp_path, text, name="g.csv"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_load_csv_with_trailing_zeros(tmp_path):
    path = write(tmp_path, "x,g\n0,0\n0.5,1\n1,0.5\n1.5,0\n2,0\n")
    d = load_initial_condition(path)
    assert d.g.h == 0.5
    assert d.g.support_end == 2
    header, data = read_csv(path)
    assert header == ["x", "g"] and data.shape == (5, 2)


@pytest.mark.parametrize("text,match", [
    ("x,g\n0,0\n0.5,1\n1.2,0\n", "uniform"),
    ("x,g\n0,0\n0.5,nan\n1,0\n", "NaN"),
    ("x,g\n0,0\n0.5,inf\n1,0\n", "infinite"),
    ("y,g\n0,0\n0.5,1\n1,0\n", "header"),
    ("x,g\n0,0\n1,0\n", "at least 3"),
    ("x,g\n0.1,0\n0.5,1\n0.9,0\n", "x = 0"),
    ("x,g\n0,0\n1,1\n0.5,0\n", "increasing"),
    ("x,g\n0,0\n0.5,a\n1,0\n", "non-numeric"),
    ("x,g\n0,0\n0.5\n1,0\n", "fields"),
    ("", "empty"),
])
def test_load_csv_errors(tmp_path, text, match):
    with pytest.raises(DomainError, match=match):
        load_initial_condition(write(tmp_path, text))


def test_dirichlet_needs_zero_at_origin(tmp_path):
    path = write(tmp_path, "x,g\n0,1\n0.5,0.5\n1,0\n")
    with pytest.raises(DomainError, match=r"g\(0\) = 0"):
        load_initial_condition(path)
    assert load_initial_condition(path, bc="neumann").g.values[0] == 1.0
