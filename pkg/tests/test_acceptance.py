"""End-to-end acceptance run: every criterion at full scale, one printed
pass/fail line each, plus the byte-level determinism check of the verify
command across worker counts."""
import json

from mixbound import acceptance as ac
from mixbound import cli

SEED = 7


def _run(cid):
    result = ac.CRITERIA[cid](seed=SEED, scale=1.0)
    print(result.line())
    assert result.passed, f"{cid} failed: {result.details}"
    return result


def test_a01_divisor_gap():
    result = _run("A1")
    assert result.details["worst_ratio"] <= 2.0


def test_a02_schedule_forms():
    _run("A2")


def test_a03_count_sandwich():
    result = _run("A3")
    assert result.details["violations"] == 0


def test_a04_envelopes():
    _run("A4")


def test_a05_rate_regimes():
    result = _run("A5")
    assert abs(result.details["fast_slope"]) <= 0.05
    assert abs(result.details["slow_slope"] - result.details["slow_predicted"]) <= 0.05
    assert result.details["critical_band"] <= 3.0


def test_a06_iid_norm_identity():
    _run("A6")


def test_a07_complexity_oracle():
    result = _run("A7")
    assert result.details["greedy_violations"] == 0


def test_a08_chain_identity():
    result = _run("A8")
    assert result.details["max_residual"] < 1e-12
    assert result.details["binding_cases"] >= 5


def test_a09_half_normal():
    _run("A9")


def test_a10_coupling_exactness():
    result = _run("A10")
    assert result.details["iid_max_gap"] == 0.0
    assert result.details["ma_q6_max_gap"] == 0.0
    assert result.details["ma_q12_max_gap"] == 0.0


def test_a11_block_independence():
    _run("A11")


def test_a12_bernstein_tails():
    result = _run("A12")
    for run in result.details["runs"]:
        assert run["applicable"]


def test_a13_variance_bound():
    _run("A13")


def test_a14_strong_approx():
    result = _run("A14")
    gaps = [p["gap_mean"] for p in result.details["points"]]
    assert gaps == sorted(gaps, reverse=True)


def test_a15_determinism_across_workers(tmp_path):
    """Identical (config, seed) verify runs are byte-identical for any
    worker count; wall clock is kept out of the canonical report."""
    outs = []
    for workers in (1, 4):
        out = tmp_path / f"verify_w{workers}.json"
        code = cli.main(["verify", "--suite", "all", "--seed", str(SEED),
                         "--workers", str(workers), "--output", str(out)])
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    payload = json.loads(outs[0])
    assert len(payload["checks"]) == len(ac.CRITERIA)
    print("[PASS] A15 verify reports byte-identical across worker counts {1, 4}")
