import csv
import io
import json
import math

import numpy as np
import pytest

from mixbound import cli
from mixbound import grid, mixing, norms


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_schedule_json(capsys, tmp_path):
    code, out = run_cli(capsys, "schedule", "--n", "12", "--profile", "poly:m=1")
    assert code == 0
    payload = json.loads(out)
    assert payload["n"] == 12
    assert payload["divisors"] == [1, 2, 3, 4, 6, 12]
    assert payload["q_seq"][0] == 2


def test_schedule_rejects_non_member(capsys):
    with pytest.raises(SystemExit, match="nearest member"):
        cli.main(["schedule", "--n", "13", "--profile", "iid"])


def test_unknown_config_field(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"bogus_field": 3}')
    with pytest.raises(SystemExit, match="bogus_field"):
        cli.main(["--config", str(cfg), "schedule", "--n", "12", "--profile", "iid"])


def test_config_provides_defaults(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"profile": "poly:m=1"}')
    code, out = run_cli(capsys, "--config", str(cfg), "schedule", "--n", "12")
    assert code == 0
    assert json.loads(out)["q_seq"][0] == 2


def test_rates_csv_regimes(capsys):
    code, out = run_cli(capsys, "rates", "--profile", "poly:m=0.5", "--r", "4",
                        "--n-min", "1000", "--n-max", "20000")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and all(r["regime"] == "slow" for r in rows)
    for r in rows:
        frak = float(r["frak_n"])
        assert float(r["lower_env"]) <= math.sqrt(frak) <= float(r["upper_env"])
        n = int(r["n"])
        assert math.isclose(float(r["effective_n"]), n / frak, rel_tol=1e-9)


def test_norms_json(capsys, tmp_path):
    curve_file = tmp_path / "curve.csv"
    rng = np.random.default_rng(0)
    samples = rng.normal(0, 1, 200)
    curve_file.write_text("\n".join(f"{x:.9f}" for x in samples))
    code, out = run_cli(capsys, "norms", "--profile", "expo:l=0.7", "--q", "8",
                        "--r", "4", "--curve", str(curve_file))
    assert code == 0
    payload = json.loads(out)
    prof = mixing.exponential_profile(0.7)
    curve = norms.QuantileCurve.from_sample(samples)
    assert math.isclose(payload["q_norm"], norms.dependence_norm(curve, 8, prof),
                        rel_tol=1e-9)
    assert math.isclose(payload["b_r"], norms.holder_factor(8, 4.0, prof),
                        rel_tol=1e-9)
    assert payload["mu_breakpoints"] == sorted(payload["mu_breakpoints"])


def test_gamma_subcommand(capsys, tmp_path):
    rng = np.random.default_rng(1)
    class_file = tmp_path / "cls.json"
    class_file.write_text(json.dumps({
        "table": rng.normal(0, 1, (4, 10)).tolist(),
        "weights": (np.ones(10) / 10).tolist(),
        "names": ["a", "b", "c", "d"],
    }))
    code, out = run_cli(capsys, "gamma", "--class-file", str(class_file),
                        "--norms", "constant:l2")
    assert code == 0
    payload = json.loads(out)
    assert payload["method"] == "exact"
    assert payload["gamma"] > 0
    assert payload["witness_partitions"][0] == [[0, 1, 2, 3]]


def test_simulate_outputs(capsys, tmp_path):
    out_file = tmp_path / "sims.csv"
    code, out = run_cli(capsys, "simulate", "--process", "iid", "--class",
                        "halfpair", "--n", "384", "--reps", "40", "--seed", "5",
                        "--output", str(out_file))
    assert code == 0
    summary = json.loads(out)
    rows = list(csv.DictReader(out_file.open()))
    assert len(rows) == 40
    vals = [float(r["sup_value"]) for r in rows]
    assert math.isclose(summary["mean_sup"], float(np.mean(vals)), rel_tol=1e-9)


def test_couple_report(capsys):
    code, out = run_cli(capsys, "couple", "--process", "ma:m=3", "--class",
                        "lipschitz5", "--n", "96", "--q", "6", "--reps", "40",
                        "--seed", "5")
    assert code == 0
    payload = json.loads(out)
    assert payload["results"]["gap_max"] == 0


def test_verify_exit_codes(capsys, tmp_path):
    out_file = tmp_path / "verify.json"
    code = cli.main(["verify", "--suite", "grid", "--seed", "7",
                     "--output", str(out_file)])
    assert code == 0
    payload = json.loads(out_file.read_text())
    assert {c["id"] for c in payload["checks"]} == {"A1", "A2"}
    assert all(c["passed"] is True for c in payload["checks"])


def test_verify_unknown_suite():
    with pytest.raises(SystemExit):
        cli.main(["verify", "--suite", "nonsense"])


def test_env_seed_override(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("MIXBOUND_SEED", "99")
    f1 = tmp_path / "a.json"
    cli.main(["simulate", "--process", "iid", "--class", "halfpair",
              "--n", "96", "--reps", "30", "--output", str(f1)])
    out = capsys.readouterr().out
    assert json.loads(out)["seed"] == 99
