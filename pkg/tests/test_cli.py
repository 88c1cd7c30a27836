import json

from click.testing import CliRunner

from heightlab.cli import main


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_algebra_info():
    res = run("algebra", "info", "h3")
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["schema"] == "heightlab/algebra-info/1"
    assert rep["nilpotency_class"] == 2
    assert rep["universal_scalar"] == 2


def test_orbit_analyze_example():
    res = run("orbit", "analyze", "h3", "--ell", "5,1,2")
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["d"] == [0, 1, 2]
    assert rep["representative"] == ["5", "0", "0"]
    assert rep["pfaffian"] in ("5", "-5")  # sign fixed by the stored basis orientation
    assert rep["orbit_norm"] == "5"


def test_orbit_analyze_multiplicity_flag():
    res = run("orbit", "analyze", "h3", "--ell", "25,0,1", "--p", "5")
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["multiplicity_bound"] == {"p": 5, "value": "25"}


def test_polarize():
    res = run("polarize", "h3", "--ell", "5,1,2")
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["dimension"] == 2
    assert rep["generators"] == [["1", "0", "0"], ["0", "1", "0"]]


def test_envelope_commands():
    res = run("envelope", "central", "k4_invariants", "--algebra", "k4")
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["all_central"] is True
    res = run("envelope", "sym", "h3_invariants", "--algebra", "h3")
    assert res.exit_code == 0


def test_zeta_local_example():
    res = run("zeta", "local", "p1", "--p", "7", "--s", "2")
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["value"] == "8/7"


def test_zeta_twist():
    res = run("zeta", "twist", "blowup_p2", "--f", "blowup_f_y", "--p", "7", "--s", "3,2")
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["value"] == "344/343"
    assert rep["pole_set"] == []


def test_zeta_predict_report_shape():
    res = run("zeta", "predict", "p1", "--prime-bound", "500")
    assert res.exit_code == 0
    rep = json.loads(res.output)
    for key in ("model", "s", "P", "tau", "pole_order", "arch_density", "factors_sample", "tail_heuristic"):
        assert key in rep
    assert rep["pole_order"] == 1


def test_count_run_csv():
    res = run("count", "run", "p1", "--max-B", "1e4", "--shells", "4", "--prime-bound", "200")
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[0] == "B,N,N_over_prediction"
    assert len(lines) == 5


def test_count_fit_json():
    res = run("count", "fit", "p1", "--max-B", "1e5", "--shells", "6", "--prime-bound", "2000")
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["deviation"] < 0.05


def test_verify_deterministic(tmp_path):
    a = run("verify", "geometry", "--seed", "42")
    b = run("verify", "geometry", "--seed", "42")
    assert a.exit_code == 0 and b.exit_code == 0
    assert a.output == b.output
    # the counting suite warms the jit on first use; report files stay identical
    f1, f2 = tmp_path / "v1.json", tmp_path / "v2.json"
    assert run("verify", "counting", "--seed", "7", "--out", str(f1)).exit_code == 0
    assert run("verify", "counting", "--seed", "7", "--out", str(f2)).exit_code == 0
    assert f1.read_bytes() == f2.read_bytes()


def test_exit_code_parse_error():
    res = run("algebra", "info", "no_such_algebra")
    assert res.exit_code == 1


def test_exit_code_precondition():
    res = run("zeta", "local", "p1", "--p", "9", "--s", "2")
    assert res.exit_code == 2
    assert "precondition" in res.output or "prime" in res.output
    res = run("zeta", "local", "p1", "--p", "2", "--s", "2")
    assert res.exit_code == 2


def test_exit_code_budget():
    res = run("count", "run", "p1", "--max-B", "1e8", "--budget", "1000", "--prime-bound", "200")
    assert res.exit_code == 3


def test_exit_code_unknown_suite():
    res = run("verify", "nonsense")
    assert res.exit_code == 1


def test_model_info():
    res = run("model-info", "blowup_p2")
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["kappa"] == {"D1": 3, "D2": 2}
    assert rep["anticanonical_abc"]["b"] == 2
    assert rep["validation"]["ok"] is True


def test_out_file(tmp_path):
    target = tmp_path / "report.json"
    res = run("zeta", "local", "p1", "--p", "7", "--s", "2", "--out", str(target))
    assert res.exit_code == 0
    rep = json.loads(target.read_text())
    assert rep["value"] == "8/7"


def test_heightlab_data_env(tmp_path, monkeypatch):
    import shutil

    from heightlab import data

    shutil.copy(data.resolve("h3"), tmp_path / "custom.json")
    monkeypatch.setenv("HEIGHTLAB_DATA", str(tmp_path))
    assert data.resolve("custom") == tmp_path / "custom.json"
    res = run("algebra", "info", "custom")
    assert res.exit_code == 0
    assert json.loads(res.output)["nilpotency_class"] == 2
