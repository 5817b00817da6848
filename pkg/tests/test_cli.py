import numpy as np
import pytest

from dualelast import cli
from dualelast.cli import RunConfig, main, parse_config, parse_config_text
from dualelast.errors import ConfigError


def test_empty_file_gives_defaults(tmp_path):
    f = tmp_path / "run.cfg"
    f.write_text("")
    cfg = parse_config(f)
    assert cfg == RunConfig()
    assert cfg.case == "stress_free"


def test_negative_c_e_names_field(tmp_path):
    f = tmp_path / "run.cfg"
    f.write_text("c_e = -5\n")
    with pytest.raises(ConfigError) as info:
        parse_config(f)
    assert info.value.field == "c_e"


def test_flag_override_beats_file(tmp_path):
    f = tmp_path / "run.cfg"
    f.write_text("# comment\nelements = 100, 200\nc-u = 50\n")
    cfg = parse_config(f, {"elements": "300"})
    assert cfg.elements == (300,)
    assert cfg.c_u == 50.0


@pytest.mark.parametrize(
    "text,field",
    [("bogus = 1", "bogus"), ("nx = two", "nx"), ("case = nope", "case"), ("suite = other", "suite"),
     ("seed = 1\nseed = 2", "seed"), ("compare_primal = maybe", "compare_primal"), ("T = 0", "T")],
)
def test_bad_config(text, field):
    with pytest.raises(ConfigError) as info:
        parse_config(None, parse_config_text(text))
    assert info.value.field == field


def test_missing_line_separator():
    with pytest.raises(ConfigError, match="line 1"):
        parse_config_text("just words")


def test_main_static_run(tmp_path, capsys):
    out = tmp_path / "o"
    assert main(["run", "--case", "stress_free", "--elements", "20,40", "--out-dir", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "case stress_free" in printed and "20 |" in printed
    names = sorted(p.name for p in out.iterdir())
    assert "stress_free_refinement.csv" in names and "stress_free_n40_fields.csv" in names
    rows = (out / "stress_free_refinement.csv").read_text().splitlines()
    assert len(rows) == 3 and rows[1].startswith("stress_free,20,100,100,100,1,")


def test_main_config_error_exit_code(tmp_path, capsys):
    assert main(["run", "--c-e", "-1", "--out-dir", str(tmp_path)]) == 2
    assert "c_e" in capsys.readouterr().err


def test_main_solver_failure_exit_code(tmp_path, capsys):
    assert main(["run", "--case", "hat_bifurcation(a=0.4)", "--elements", "100", "--out-dir", str(tmp_path)]) == 1
    assert "solver failure" in capsys.readouterr().out


def test_dynamic_run_with_primal(tmp_path, capsys):
    out = tmp_path / "d"
    argv = ["run", "--case", "grain_boundary_dynamic", "--nx", "16", "--nt", "16", "--T", "0.2", "--compare-primal", "--out-dir", str(out)]
    assert main(argv) == 0
    text = capsys.readouterr().out
    assert "dual: stable" in text and "primal:" in text
    names = {p.name for p in out.iterdir()}
    assert {"grain_boundary_dynamic_dual.csv", "grain_boundary_dynamic_primal.csv", "grain_boundary_dynamic_stability.csv"} <= names
    header = (out / "grain_boundary_dynamic_dual.csv").read_text().splitlines()[0]
    assert header == "t,x,u_hat,e_hat,u_target,e_target,v_hat"


def test_convexity_suite(tmp_path, capsys):
    out = tmp_path / "c"
    assert main(["run", "--suite", "convexity", "--samples", "4", "--seed", "1", "--out-dir", str(out)]) == 0
    header = (out / "convexity_bounds.csv").read_text().splitlines()[0]
    assert header.startswith("model,index,point_hash,regime,g,lower,upper")
    assert "0 violations" in capsys.readouterr().out
