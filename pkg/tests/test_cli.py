import json
import subprocess
import sys
from importlib import resources

CORPUS = resources.files("annotmc") / "corpus"


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "annotmc.cli", *args],
                          capture_output=True, text=True)
    return proc


def run_json(*args):
    proc = run_cli(*args)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def cpath(name):
    return str(CORPUS / name)


def test_check_even_cycle_on_square():
    out = run_json("check", "--graph", cpath("c4.g"),
                   "--formula", cpath("even-cycle.f"))
    assert out["verdict"] is True
    assert out["command"] == "check"
    assert "duration_ms" in out and "envelope" in out


def test_check_rejects_odd_cycle():
    out = run_json("check", "--graph", cpath("c5.g"),
                   "--formula", cpath("even-cycle.f"))
    assert out["verdict"] is False


def test_param_ttw_of_annotated_clique():
    out = run_json("param", "ttw", "--graph", cpath("k6.g"),
                   "--annot", "0,1,2")
    assert out["value"] == 2
    assert out["witness_valid"] is True


def test_gen_pipes_into_param(tmp_path):
    gen = run_cli("gen", "outer_grid", "3")
    assert gen.returncode == 0
    gfile = tmp_path / "g3o.g"
    gfile.write_text(gen.stdout)
    out = run_json("param", "adeg", "--graph", str(gfile))
    assert out["value"] == 4


def test_minor_command_reports_model():
    out = run_json("minor", "--host", cpath("grid3.g"),
                   "--pattern", cpath("k4.g"), "--topological")
    assert out["found"] is True
    assert "witness" in out


def test_check_with_bindings(tmp_path):
    f = tmp_path / "dp.f"
    f.write_text("dp(a,c; b,d)\n")
    out = run_json("check", "--graph", cpath("c4.g"), "--formula", str(f),
                   "--bind", "a=0", "b=1", "c=2", "d=3")
    assert out["verdict"] is False
    f2 = tmp_path / "member.f"
    f2.write_text("exists x. x in X\n")
    out2 = run_json("check", "--graph", cpath("p3.g"), "--formula", str(f2),
                    "--bind", "X=0,2")
    assert out2["verdict"] is True


def test_decomp_validate():
    out = run_json("decomp", "validate", "--graph", cpath("p9.g"),
                   "--decomp", cpath("p9.d"))
    assert out["verdict"] is True and out["width"] == 1


def test_minidp_shrinks_the_path():
    out = run_json("minidp", "--graph", cpath("p9.g"),
                   "--decomp", cpath("p9.d"),
                   "--battery", cpath("battery-conn.f"),
                   "--level", "1", "--budget", "3")
    assert out["oracle_ok"] is True
    assert out["final_vertices"] < out["initial_vertices"]


def test_collapse_outputs_dp_formula():
    out = run_json("collapse", "--formula", cpath("even-cycle.f"), "--q", "2")
    assert out["fragment"] == "FO+dp"


def test_reduce_round_trips_through_check(tmp_path):
    host = tmp_path / "host.g"
    psi = tmp_path / "psi.f"
    out = run_json("reduce", "--pattern", cpath("k3.g"),
                   "--formula", cpath("triangle.f"),
                   "--out-host", str(host), "--out-formula", str(psi))
    assert out["host_vertices"] == 18
    verdict = run_json("check", "--graph", str(host), "--formula", str(psi))
    assert verdict["verdict"] is True


def test_rep_command():
    out = run_json("rep", "--graph", cpath("tail4.g"),
                   "--level", "1", "--max-size", "3")
    assert out["found"] is True and out["size"] == 3


def test_folio_command():
    out = run_json("folio", "--graph", cpath("tail2.g"), "--level", "1")
    assert out["members"] == 4


def test_glue_command():
    out = run_json("glue", "--left", cpath("tail2.g"),
                   "--right", cpath("tail2.g"))
    assert "graph_file" in out


def test_exit_codes():
    assert run_cli("param", "ttw", "--graph", "/nonexistent.g").returncode == 1
    assert run_cli("frobnicate").returncode == 2
    # computed false verdicts still exit 0
    assert run_cli("check", "--graph", cpath("c5.g"),
                   "--formula", cpath("even-cycle.f")).returncode == 0


def test_lab_command_runs_one_experiment():
    out = run_json("lab", "grid-values")
    assert out["verdict"] is True


def test_threads_env_is_validated(tmp_path, monkeypatch):
    proc = subprocess.run(
        [sys.executable, "-m", "annotmc.cli", "param", "size",
         "--graph", cpath("c4.g")],
        capture_output=True, text=True,
        env={"ANNOTMC_THREADS": "banana", "PATH": "/usr/bin:/bin"})
    assert proc.returncode == 1
    assert "ANNOTMC_THREADS" in proc.stderr
