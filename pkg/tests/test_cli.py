import json

from garlands.cli import main


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _json_lines(out):
    return [json.loads(line) for line in out.strip().splitlines()]


def test_torus_f9_gl(capsys):
    code, out, _ = _run(capsys, ["torus", "--p", "3", "--degrees", "2", "--ambient", "gl", "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["torus"]["order"] == 8
    assert doc["torus"]["maximal_abelian"] is True


def test_torus_diagonal(capsys):
    code, out, _ = _run(capsys, ["torus", "--p", "3", "--degrees", "1,1", "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["torus"]["order"] == 4
    for rows in doc["torus"]["generators"]:
        assert rows[0][1] == [0] and rows[1][0] == [0]  # diagonal generators


def test_torus_sl22(capsys):
    code, out, _ = _run(capsys, ["torus", "--p", "2", "--degrees", "2", "--ambient", "sl", "--json"])
    assert code == 0
    assert json.loads(out)["torus"]["order"] == 3


def test_verify_confirmed_case(capsys):
    code, out, _ = _run(capsys, ["verify", "--p", "3", "--degrees", "2", "--ambient", "gl", "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["garland"]["equal"] is True
    assert doc["overall"] == "confirmed"


def test_verify_expected_counterexample_exit_zero(capsys):
    code, out, _ = _run(capsys, ["verify", "--p", "3", "--degrees", "1,1", "--ambient", "gl", "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["garland"]["equal"] is False
    assert doc["overall"] == "expected_counterexample"


def test_verify_sl_f25(capsys):
    code, out, _ = _run(capsys, ["verify", "--p", "5", "--degrees", "2", "--ambient", "sl", "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["garland"]["equal"] is True
    assert doc["restriction"]["equal"] is True


def test_verify_cap_exit_3(capsys):
    code, _, err = _run(capsys, ["verify", "--p", "7", "--degrees", "2,1", "--json"])
    assert code == 3  # GL(3,7) far over the enumeration cap


def test_validation_error_exit_1(capsys):
    code, _, err = _run(capsys, ["torus", "--p", "6", "--degrees", "2"])
    assert code == 1
    assert "prime" in err


def test_byte_identical_reports(capsys):
    args = ["verify", "--p", "3", "--degrees", "2", "--ambient", "sl", "--json"]
    _, out1, _ = _run(capsys, args)
    _, out2, _ = _run(capsys, args)
    assert out1 == out2


def test_cache_round_trip(tmp_path, capsys):
    args = ["verify", "--p", "2", "--degrees", "2,1", "--ambient", "sl", "--json"]
    _, plain, _ = _run(capsys, args)
    cached = args + ["--cache-dir", str(tmp_path)]
    _, cold, _ = _run(capsys, cached)
    _, warm, _ = _run(capsys, cached)
    assert plain == cold == warm
    assert any(tmp_path.iterdir())


def test_cache_dir_env_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("GARLANDS_CACHE_DIR", str(tmp_path))
    _run(capsys, ["verify", "--p", "2", "--degrees", "2", "--json"])
    assert any(tmp_path.iterdir())


def test_sweep_small(capsys):
    code, out, _ = _run(capsys, ["sweep", "--max-order", "16", "--json"])
    assert code == 0
    lines = _json_lines(out)
    summary = lines[-1]["summary"]
    cases = lines[:-1]
    assert summary["cases"] == len(cases) >= 10
    assert summary["unexpected_mismatches"] == 0
    # the sweep is ordered by case key
    keys = [(d["case"]["q"], d["case"]["n"], d["case"]["degrees"], d["case"]["ambient"]) for d in cases]
    assert keys == sorted(keys)


def test_sweep_byte_identical(capsys):
    args = ["sweep", "--max-order", "9", "--json"]
    _, out1, _ = _run(capsys, args)
    _, out2, _ = _run(capsys, args)
    assert out1 == out2


def test_sweep_pell_table(capsys):
    code, out, _ = _run(capsys, ["sweep", "--pell", "--d-max", "100", "--json"])
    assert code == 0
    lines = _json_lines(out)
    assert len(lines) == 100
    d34 = next(r for r in lines if r.get("d") == 34)
    assert d34["criterion_agrees"] is False


def test_pell_single(capsys):
    code, out, _ = _run(capsys, ["pell", "--d", "2", "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["variant"] == "TwoCosets" and (doc["x0"], doc["y0"]) == (1, 1)

    code, out, _ = _run(capsys, ["pell", "--d", "3", "--json"])
    assert json.loads(out)["variant"] == "TorusOnly"

    code, out, _ = _run(capsys, ["pell", "--d", "34", "--json"])
    doc = json.loads(out)
    assert doc["variant"] == "TorusOnly" and doc["criterion_agrees"] is False


def test_pell_requires_d(capsys):
    code, _, err = _run(capsys, ["pell"])
    assert code == 1


def test_pell_invalid_d(capsys):
    code, _, err = _run(capsys, ["pell", "--d", "12"])
    assert code == 1
    assert "squarefree" in err
