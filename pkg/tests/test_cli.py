import json

import pytest

from hankelschmidt.cli import main
from hankelschmidt.pipeline import (
    AnalysisConfig,
    analysis_exit_code,
    analyze_symbol,
    verify_exit_code,
    verify_suites,
)
from hankelschmidt.symbols import PoleTerm, RationalSymbol, symbol_from_coefficients


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def test_config_validation():
    with pytest.raises(ValueError):
        AnalysisConfig(n=100)  # not a power of two
    with pytest.raises(ValueError):
        AnalysisConfig(n=8)
    with pytest.raises(ValueError):
        AnalysisConfig(n=2048)
    with pytest.raises(ValueError):
        AnalysisConfig(cluster_tol=2.0)
    AnalysisConfig(n=256)  # fine


def test_analyze_shift_symbol_report():
    report = analyze_symbol(symbol_from_coefficients([0, 1]), AnalysisConfig(n=16))
    assert report["pass"] is True
    assert analysis_exit_code(report) == 0
    assert len(report["blocks"]) == 1
    blk = report["blocks"][0]
    assert abs(blk["s"] - 1.0) < 1e-9
    assert blk["multiplicity"] == 2
    zeros = blk["representation"]["theta"]["zeros"]
    assert all(abs(complex(re, im)) < 1e-9 for re, im in zeros)
    assert blk["pass"] is True


def test_analyze_zero_symbol():
    report = analyze_symbol(symbol_from_coefficients([0.0]), AnalysisConfig(n=16))
    assert report["blocks"] == []
    assert report["pass"] is True
    assert analysis_exit_code(report) == 0


def test_analyze_report_fields_finite():
    sym = RationalSymbol(poles=(PoleTerm(b=0.5, m=1, c=1.0),))
    report = analyze_symbol(sym, AnalysisConfig(n=32))
    text = json.dumps(report)
    assert "NaN" not in text and "Infinity" not in text
    assert report["numerical_rank"] == 1
    assert report["kronecker_rank_bound"] == 1
    assert report["tail_bound"] >= 0.0


def test_cli_analyze_exit_codes(tmp_path, capsys):
    good = write_json(tmp_path / "z.json", {"poly": [[0, 0], [1, 0]], "poles": []})
    code = main(["analyze", good, "--n", "16"])
    captured = capsys.readouterr()
    assert code == 0
    report = json.loads(captured.out)
    assert report["blocks"][0]["s"] == pytest.approx(1.0, abs=1e-9)

    bad = write_json(
        tmp_path / "bad.json", {"poly": [], "poles": [{"b": [1.2, 0.0], "m": 1, "c": [1, 0]}]}
    )
    code = main(["analyze", bad, "--n", "16"])
    captured = capsys.readouterr()
    assert code == 1
    assert "poles[0]" in captured.err


def test_cli_analyze_rejects_malformed_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["analyze", str(path)]) == 1
    assert "JSON" in capsys.readouterr().err


def test_cli_conjugate(tmp_path, capsys):
    good = write_json(tmp_path / "z.json", {"poly": [[0, 0], [1, 0]], "poles": []})
    code = main(["conjugate", good, "--alpha", "0.4", "--n", "16"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    # w = -S*((Su) o mu) for u = z has leading coefficient 2a(1 - a^2)/... : check
    # against the direct series of mu(z)^2
    lead = complex(*out["coefficients"][0])
    assert lead == pytest.approx(0.672, abs=1e-12)


def test_cli_frostman(tmp_path, capsys):
    doc = {"phase": [1.0, 0.0], "zeros": [[0.5, 0.0]]}
    path = write_json(tmp_path / "b.json", doc)
    code = main(["frostman", path, "--alpha", "0.2,0.1", "--n", "16"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert len(out["shifted"]["zeros"]) == 1


def test_cli_frostman_rejects_bad_file(tmp_path, capsys):
    path = write_json(tmp_path / "b.json", {"phase": [1, 0], "zeros": [[1.5, 0]]})
    assert main(["frostman", path, "--alpha", "0.1"]) == 1
    assert "zeros[0]" in capsys.readouterr().err


def test_cli_alpha_outside_disk(tmp_path, capsys):
    good = write_json(tmp_path / "z.json", {"poly": [[0, 0], [1, 0]], "poles": []})
    assert main(["conjugate", good, "--alpha", "1.5"]) == 1
    capsys.readouterr()


def test_verify_suites_small_deterministic():
    cfg = AnalysisConfig(n=32, seed=5)
    r1 = verify_suites(cfg, identity_count=3, blaschke_count=2, alpha_count=1,
                       mobius_count=2, theorem_count=2)
    r2 = verify_suites(cfg, identity_count=3, blaschke_count=2, alpha_count=1,
                       mobius_count=2, theorem_count=2)
    assert json.dumps(r1) == json.dumps(r2)
    assert r1["pass"] is True
    assert verify_exit_code(r1) == 0


def test_verify_perturbation_fails():
    cfg = AnalysisConfig(n=32, seed=5)
    report = verify_suites(cfg, perturb=1e-3, identity_count=3, blaschke_count=1,
                           alpha_count=1, mobius_count=1, theorem_count=1)
    assert report["suites"]["identities"]["pass"] is False
    assert verify_exit_code(report) == 3


def test_analysis_exit_code_two_for_unreliable():
    report = {"pass": True, "blocks": [{"reliable": False}]}
    assert analysis_exit_code(report) == 2
    report = {"pass": False, "blocks": [{"reliable": True}]}
    assert analysis_exit_code(report) == 2
