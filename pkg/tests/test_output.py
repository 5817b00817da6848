import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dualelast.cases import build_case, run_static_case
from dualelast.output import (
    file_stem,
    format_refinement_table,
    format_value,
    refinement_rows,
    write_csv,
    write_metadata,
    write_static_fields,
)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip(x):
    assert float(format_value(x)) == x


def test_format_value_types():
    assert format_value(True) == "1"
    assert format_value(np.int64(3)) == "3"
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value("abc") == "abc"


def test_file_stem():
    assert file_stem("hat_bifurcation(a=0.2)") == "hat_bifurcation_a_0.2"


def test_static_csv_and_tables(tmp_path):
    rep = run_static_case(build_case("stress_free"), 10)
    path = write_static_fields(rep, tmp_path / "f.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "x,u_hat,e_hat,u_target,e_target"
    assert len(lines) == 12
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert np.array_equal(data[:, 1], rep.u_hat)
    header, rows = refinement_rows([rep])
    assert header[:6] == ["case", "n_elements", "c_u", "c_e", "c_v", "rho0"]
    assert rows[0][1] == 10
    table = format_refinement_table([rep])
    assert "||u - u_t||_1" in table and "10 |" in table


def test_write_helpers(tmp_path):
    p = write_csv(tmp_path / "sub" / "a.csv", ("a", "b"), [(1, 0.5)])
    assert p.read_text() == "a,b\n1,0.5\n"
    m = write_metadata(tmp_path / "m.txt", {"run": {"case": "x", "list": [1, 2.5]}})
    assert m.read_text() == "[run]\ncase = x\nlist = 1, 2.5\n"
