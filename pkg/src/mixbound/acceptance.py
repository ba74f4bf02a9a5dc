"""Verification suite: every acceptance criterion as a seeded, self-contained
check returning a pass/fail result with its measured quantities.

The suite is what ``mixbound verify`` runs; the pytest acceptance module
drives the same functions.  Criteria are grouped into the suites grid,
norms, rates, chaining and coupling.  Parallel execution distributes whole
criteria across workers with per-criterion derived seeds, so reports are
identical for any worker count.
"""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm as _norm

from . import chaining as ch
from . import coupling as cp
from . import function_classes as fc
from . import grid as gr
from . import mixing as mx
from . import norms as nm
from . import processes as pr
from . import rates as rt

REL_GUARD = 1e-12  # one-ulp guard band for exact inequalities hit with equality


@dataclass
class CriterionResult:
    cid: str
    title: str
    passed: bool
    seconds: float
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.cid} {self.title} ({self.seconds:.1f}s)"


def _derive_seed(seed: int, ordinal: int) -> int:
    return int(np.random.SeedSequence([int(seed), ordinal]).generate_state(1)[0])


def _reps(base: int, scale: float, floor: int = 30) -> int:
    return max(int(round(base * scale)), floor)


# -- A1: divisor gaps --------------------------------------------------------


def criterion_divisor_gap(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    ok = True
    for basis in (2, 3, 4):
        limit = 10**6 if basis == 3 else 10**5
        for n in gr.lattice_members(basis, limit):
            chain = gr.divisor_chain(n, basis)
            worst = max(worst, chain.max_ratio)
            ok &= chain.gap_ok
            count += 1
    return CriterionResult(
        cid="A1", title="consecutive divisor gap at most two on the full lattice",
        passed=ok, seconds=time.perf_counter() - t0,
        details={"members_checked": count, "worst_ratio": worst},
    )


# -- A2: schedule closed forms -------------------------------------------------


def _smallest_divisor_at_least(n: int, x: float) -> int:
    for d in gr.divisor_chain(n).divisors:
        if d >= x:
            return d
    raise AssertionError("n itself always qualifies")  # pragma: no cover


def criterion_schedule_forms(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    members = gr.lattice_members(3, 2500)[:50]
    rng = np.random.default_rng(_derive_seed(seed, 2))
    iid = mx.iid_profile()
    failures = []
    for n in members:
        sched = gr.block_schedule(n, iid)
        if sched.q_seq != (1,):
            failures.append(("iid", n))
        # Memory at least n/4 pins the level-zero block at the n/4 divisor.
        for m in (int(math.ceil(n / 4)), n):
            q0 = gr.first_block_length(n, mx.m_dependent_profile(m))
            if q0 != _smallest_divisor_at_least(n, n / 4.0):
                failures.append(("mdep_closed_form", n, m))
        # Generic oracle: the scan equals the divisor at min(memory, n/4).
        m_rand = int(rng.integers(1, 2 * n))
        q0 = gr.first_block_length(n, mx.m_dependent_profile(m_rand))
        if q0 != _smallest_divisor_at_least(n, min(m_rand, n / 4.0)):
            failures.append(("mdep_oracle", n, m_rand))
        for prof in (mx.polynomial_profile(0.7), mx.exponential_profile(0.85)):
            seq = gr.block_schedule(n, prof).q_seq
            if any(a < b for a, b in zip(seq, seq[1:])):
                failures.append(("monotone", n, prof.spec()))
    return CriterionResult(
        cid="A2", title="block schedules: unit under independence, n/4 divisor "
        "under long memory, non-increasing levels",
        passed=not failures, seconds=time.perf_counter() - t0,
        details={"n_checked": len(members), "failures": failures[:10]},
    )


# -- A3: count sandwich --------------------------------------------------------


def criterion_count_sandwich(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    profiles = [mx.iid_profile(), mx.m_dependent_profile(7),
                mx.polynomial_profile(1.5), mx.exponential_profile(0.8)]
    # Open interval (0, 1/2): at u exactly 1/2 a profile flat at one makes the
    # upper bound fail by a tie in the generalized inverse; integrals never
    # see that single point.
    us = (2.0 * np.arange(1, 1001) - 1.0) / 4000.0
    bad = 0
    for prof in profiles:
        for q in (1, 10, 100, 1000):
            for u in us:
                mu = nm.active_lag_count(float(u), q, prof)
                inv = prof.inverse(2.0 * float(u))
                if not (min(inv, q + 1) <= mu <= min(inv + 1, q + 1)):
                    bad += 1
    return CriterionResult(
        cid="A3", title="integer count squeezed by the generalized inverse",
        passed=bad == 0, seconds=time.perf_counter() - t0,
        details={"grid_points": us.size, "violations": bad},
    )


# -- A4: closed-form envelopes ---------------------------------------------------


def criterion_envelopes(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    qs = sorted(set(int(x) for x in np.geomspace(1, 10**6, 40)))
    cases = [
        (1, 7.0, 4.0, mx.m_dependent_profile(7)),
        (2, 3.0, 4.0, mx.polynomial_profile(3.0)),
        (3, 2.0, 4.0, mx.polynomial_profile(2.0)),
        (4, 0.5, 4.0, mx.polynomial_profile(0.5)),
    ]
    violations = []
    margins = {}
    for case, m, r, prof in cases:
        worst = math.inf
        for q in qs:
            b = nm.holder_factor(q, r, prof)
            lo, hi = rt.closed_form_envelopes(q, m, r, case)
            worst = min(worst, b - lo, hi - b)
            if not (lo * (1 - REL_GUARD) <= b <= hi * (1 + REL_GUARD)):
                violations.append({"case": case, "q": q, "lo": lo, "b": b, "hi": hi})
        margins[f"case{case}"] = worst
    return CriterionResult(
        cid="A4", title="exact comparison factor inside its closed-form envelopes",
        passed=not violations, seconds=time.perf_counter() - t0,
        details={"q_grid": len(qs), "min_margins": margins,
                 "violations": violations[:5]},
    )


# -- A5: rate regimes -------------------------------------------------------------


def criterion_rate_regimes(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    r = 4.0
    members = [n for n in gr.lattice_members(3, 10**7) if n >= 10**3]
    ns = np.asarray(members, dtype=float)
    checks = {}

    fast = [rt.rate_factor(n, r, mx.polynomial_profile(3.0)) for n in members]
    slope_fast = rt.loglog_slope(ns, fast)
    checks["fast_slope"] = slope_fast
    ok = abs(slope_fast) <= 0.05

    slow = [rt.rate_factor(n, r, mx.polynomial_profile(0.5)) for n in members]
    slope_slow = rt.loglog_slope(ns, slow)
    _, predicted = rt.regime_classify(0.5, r)
    checks["slow_slope"] = slope_slow
    checks["slow_predicted"] = predicted
    ok &= abs(slope_slow - predicted) <= 0.05

    tail = [n for n in members if n >= 10**5]
    crit_ratio = [rt.rate_factor(n, r, mx.polynomial_profile(2.0)) / math.log(n) ** 0.5
                  for n in tail]
    band = max(crit_ratio) / min(crit_ratio)
    checks["critical_band"] = band
    ok &= band <= 3.0

    eff = [rt.effective_sample_size(n, r, mx.polynomial_profile(0.5)) for n in members]
    tail_eff = eff[-20:]
    growing = all(b > a for a, b in zip(tail_eff, tail_eff[1:])) or \
        rt.loglog_slope(ns[-40:], eff[-40:]) > 0.2
    checks["effective_n_growing"] = growing
    ok &= growing
    return CriterionResult(
        cid="A5", title="rate-factor growth matches the predicted regime exponents",
        passed=bool(ok), seconds=time.perf_counter() - t0,
        details={"lattice_points": len(members), **checks},
    )


# -- A6: independence norm identity ------------------------------------------------


def criterion_iid_norm(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(_derive_seed(seed, 6))
    iid = mx.iid_profile()
    worst_flat = 0.0
    ok = True
    # Under independence the weight collapses to the unit indicator on
    # (0, 1/2]; the norm then equals the second moment exactly on flat
    # curves, and is squeezed between one and sqrt(2) times it in general.
    for _ in range(20):
        level = float(rng.uniform(0.1, 10.0))
        curve = nm.QuantileCurve.constant(level)
        q = int(rng.integers(0, 100))
        rel = abs(nm.dependence_norm(curve, q, iid) / curve.l2_norm() - 1.0)
        worst_flat = max(worst_flat, rel)
        ok &= rel <= 1e-12
    worst_ratio = (1.0, 1.0)
    for _ in range(20):
        k = int(rng.integers(1, 9))
        curve = nm.QuantileCurve.from_discrete(rng.uniform(0, 5, k), rng.dirichlet(np.ones(k)))
        ratio = nm.dependence_norm(curve, int(rng.integers(0, 100)), iid) / curve.l2_norm()
        worst_ratio = (min(worst_ratio[0], ratio), max(worst_ratio[1], ratio))
        ok &= 1.0 - 1e-12 <= ratio <= math.sqrt(2.0) * (1 + 1e-12)
    return CriterionResult(
        cid="A6", title="independence collapses the norm to the plain second moment",
        passed=bool(ok), seconds=time.perf_counter() - t0,
        details={"flat_curve_worst_rel_err": worst_flat,
                 "general_curve_ratio_range": worst_ratio},
    )


# -- A7: complexity against the brute-force oracle -----------------------------------


def _oracle_all_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _oracle_all_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1:]
        yield [[head]] + part


def _oracle_complexity(cls: ch.FunctionClass, family: ch.NormFamily) -> float:
    """Independent enumeration of every admissible sequence to depth two.

    Level one runs over all partitions into at most four blocks, level two
    over every refinement within the sixteen-cell cap, and any remaining
    non-singleton cells are forced apart at level three (cap 256).  Cell
    norms are memoized; the enumeration logic shares nothing with the
    library's search.
    """
    size = cls.size
    idx = list(range(size))
    memo: dict[tuple[int, tuple[int, ...]], float] = {}

    def cell_norm(level: int, cell) -> float:
        key = (level, tuple(cell))
        if key not in memo:
            rows = cls.table[list(cell)]
            memo[key] = family.norm(level, rows.max(axis=0) - rows.min(axis=0),
                                    cls.weights)
        return memo[key]

    best = math.inf
    for p1 in _oracle_all_partitions(idx):
        if len(p1) > 4:
            continue
        options = [[ref for ref in _oracle_all_partitions(block)] for block in p1]
        for combo in itertools.product(*options):
            p2 = [cell for blocks in combo for cell in blocks]
            if len(p2) > 16:
                continue
            levels = [[idx], p1, p2]
            if any(len(c) > 1 for c in p2):
                levels.append([[i] for i in idx])
            worst = 0.0
            for f in idx:
                total = 0.0
                for level, part in enumerate(levels):
                    cell = next(c for c in part if f in c)
                    if len(cell) > 1:
                        total += 2.0 ** (level / 2.0) * cell_norm(level, sorted(cell))
                worst = max(worst, total)
            best = min(best, math.sqrt(2.0) * worst)
    return best


def _random_classes(rng, size, count, npts=24):
    for _ in range(count):
        table = rng.normal(0.0, 1.0, (size, npts))
        weights = rng.dirichlet(np.ones(npts))
        yield ch.FunctionClass(table=table, weights=weights)


def criterion_complexity_oracle(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(_derive_seed(seed, 7))
    families = [ch.l2_family(), ch.lr_family(4.0),
                ch.schedule_family(gr.block_schedule(36, mx.polynomial_profile(1.0))),
                ch.schedule_family(gr.block_schedule(48, mx.exponential_profile(0.7)))]
    mismatches = []
    for size in range(2, 7):
        for t, cls in enumerate(_random_classes(rng, size, 3)):
            fam = families[(size + t) % len(families)]
            exact, witness = ch.complexity_exact(cls, fam)
            oracle = _oracle_complexity(cls, fam)
            if exact != oracle:
                mismatches.append({"size": size, "exact": exact, "oracle": oracle})
            if ch.sequence_value(cls, fam, witness) != exact:
                mismatches.append({"size": size, "witness_mismatch": True})
    greedy_violations = 0
    for t, cls in enumerate(_random_classes(rng, 8, 100)):
        fam = families[t % len(families)]
        exact, _ = ch.complexity_exact(cls, fam)
        if ch.complexity_greedy(cls, fam) < exact:
            greedy_violations += 1
    passed = not mismatches and greedy_violations == 0
    return CriterionResult(
        cid="A7", title="exact partition search equals brute-force enumeration; "
        "greedy never beats it",
        passed=passed, seconds=time.perf_counter() - t0,
        details={"oracle_mismatches": mismatches[:5],
                 "greedy_violations": greedy_violations},
    )


# -- A8: chain identity ------------------------------------------------------------


def criterion_chain_identity(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(_derive_seed(seed, 8))
    profiles = [mx.polynomial_profile(0.7), mx.exponential_profile(0.9),
                mx.iid_profile(), mx.m_dependent_profile(4)]
    worst = 0.0
    binding = 0
    for t in range(100):
        size = int(rng.integers(2, 7))
        npts = int(rng.integers(8, 32))
        table = rng.normal(0.0, 1.0, (size, npts))
        if t % 2 == 0:
            # Spiky weights with amplified gaps make thresholds bind.
            weights = rng.dirichlet(np.full(npts, 0.05))
            table[:, int(rng.integers(npts))] *= 40.0
        else:
            weights = rng.dirichlet(np.ones(npts))
        cls = ch.FunctionClass(table=table, weights=weights)
        idx = list(range(size))
        blocks = [sorted(b.tolist()) for b in
                  np.array_split(rng.permutation(idx), int(rng.integers(1, min(5, size + 1))))
                  if b.size]
        seq = ch.PartitionSequence(levels=(
            (tuple(idx),), tuple(tuple(b) for b in blocks), tuple((i,) for i in idx)))
        n = int(rng.choice([6, 12, 36, 96, 384]))
        dec = ch.chain_decomposition(cls, int(rng.integers(size)), int(rng.integers(size)),
                                     seq, profiles[t % len(profiles)], n)
        worst = max(worst, dec.residual)
        binding += dec.binding
    passed = worst < 1e-12 and binding >= 5
    return CriterionResult(
        cid="A8", title="telescoping identity with stopping thresholds holds pointwise",
        passed=bool(passed), seconds=time.perf_counter() - t0,
        details={"max_residual": worst, "binding_cases": binding, "tuples": 100},
    )


# -- A9: half-normal calibration ------------------------------------------------------


def criterion_half_normal(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    reps = _reps(2000, scale)
    model = pr.iid_model()
    member = fc.make_class("identity", model).members[0]
    vals, _, _ = pr.simulate_many(model, 384, reps, _derive_seed(seed, 9))
    g = np.abs(vals.sum(axis=1) - 384 * member.mean) / math.sqrt(384)
    est, se = float(g.mean()), float(g.std(ddof=1) / math.sqrt(reps))
    target = math.sqrt(2.0 / math.pi)
    passed = abs(est - target) <= 3.0 * se
    return CriterionResult(
        cid="A9", title="mean absolute scaled average matches the half-normal value",
        passed=bool(passed), seconds=time.perf_counter() - t0,
        details={"estimate": est, "std_error": se, "target": target, "reps": reps},
    )


# -- A10: coupling exactness and contraction ------------------------------------------


def criterion_coupling_exactness(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    s = _derive_seed(seed, 10)
    reps = _reps(200, scale)
    details: dict = {}
    ok = True

    iid = pr.iid_model()
    cls_iid = fc.make_class("lipschitz5", iid)
    sups = cp.gap_samples(iid, cls_iid.members, 384, 12, 20, s)
    details["iid_max_gap"] = float(sups.max())
    ok &= bool(sups.max() == 0.0)

    ma = pr.ma_model(3)
    cls_ma = fc.make_class("lipschitz5", ma)
    for q in (6, 12):
        sups = cp.gap_samples(ma, cls_ma.members, 384, q, 20, s)
        details[f"ma_q{q}_max_gap"] = float(sups.max())
        ok &= bool(sups.max() == 0.0)

    ar = pr.ar1_model(0.9)
    cls_ar = fc.make_class("lipschitz5", ar)
    sweep = cp.coupling_gap_sweep(ar, cls_ar.members, 384, (8, 16, 32), reps, s)
    target = math.log(0.9)
    details["ar1_gap_means"] = list(sweep.means)
    details["ar1_log_slope"] = sweep.log_slope
    details["ar1_slope_band"] = [1.3 * target, 0.7 * target]
    ok &= all(a > b for a, b in zip(sweep.means, sweep.means[1:]))
    ok &= 1.3 * target <= sweep.log_slope <= 0.7 * target
    return CriterionResult(
        cid="A10", title="replica gap vanishes for memoryless cases and contracts "
        "geometrically for the autoregression",
        passed=bool(ok), seconds=time.perf_counter() - t0, details=details,
    )


# -- A11: block independence ------------------------------------------------------------


def criterion_block_independence(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    s = _derive_seed(seed, 11)
    reps = _reps(200, scale)
    model = pr.ar1_model(0.9)
    vals, innov, _ = pr.simulate_many(model, 384, reps, s)
    replica = cp.replicate_many(model, vals, innov, 8, s)
    even = cp.block_independence_test(replica, 8, "even")
    odd = cp.block_independence_test(replica, 8, "odd")
    raw = cp.block_independence_test(vals, 2, "even")
    passed = even.passed and odd.passed and not raw.passed
    return CriterionResult(
        cid="A11", title="replica same-parity blocks uncorrelated; raw short blocks "
        "fail the same test",
        passed=bool(passed), seconds=time.perf_counter() - t0,
        details={
            "replica_even_corr": even.pooled_corr, "replica_odd_corr": odd.pooled_corr,
            "threshold": even.threshold,
            "raw_q2_corr": raw.pooled_corr, "raw_threshold": raw.threshold,
        },
    )


# -- A12: block-sum tails ---------------------------------------------------------------


def criterion_bernstein_tails(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    s = _derive_seed(seed, 12)
    reps = _reps(5000, scale, floor=500)
    runs = []
    ok = True
    setups = [
        (pr.iid_model(), mx.iid_profile()),
        (pr.ar1_model(0.5), mx.exponential_profile(0.5)),
    ]
    for model, profile in setups:
        member = fc.make_class("indicator", model).members[0]
        curve = nm.QuantileCurve.constant(0.5)  # |f| is identically one half
        for k in (2, 3):
            rep = cp.bernstein_check(model, member, curve, profile,
                                     n=1536, q=8, k=k, reps=reps, seed=s)
            ok &= rep.applicable and rep.passed
            runs.append({
                "model": model.spec(), "k": k, "applicable": rep.applicable,
                "points": [
                    {"u": p.u, "freq": p.frequency, "wald_ucl": p.wald_ucl,
                     "clopper_ucl": p.clopper_ucl, "bound": p.bound,
                     "passed": p.passed} for p in rep.points
                ],
            })
    return CriterionResult(
        cid="A12", title="replica tail frequencies consistent with the block "
        "exponential bound", passed=bool(ok),
        seconds=time.perf_counter() - t0, details={"reps": reps, "runs": runs},
    )


# -- A13: variance bound ------------------------------------------------------------------


def _certified_norm_sq_lower(sd: float, q: int, profile: mx.MixingProfile,
                             grid_points: int = 100001) -> float:
    """Lower bound of the squared dependence norm of the identity.

    The Gaussian quantile curve is evaluated at interval right endpoints;
    since it is non-increasing this under-estimates the exact integral, so
    the inequality check below is conservative.
    """
    half = profile.half_levels(q)
    grid = np.unique(np.concatenate([np.linspace(0.0, 1.0, grid_points), half]))
    a, b = grid[:-1], grid[1:]
    halfs = np.sort(half)
    mu_right = (halfs.size - np.searchsorted(halfs, b, side="left")).astype(float)
    q_right = np.clip(sd * _norm.ppf(1.0 - np.minimum(b, 1.0) / 2.0), 0.0, None)
    return 2.0 * float(((b - a) * mu_right * q_right**2).sum())


def criterion_variance_bound(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    rows = []
    ok = True
    for rho in (0.5, 0.9):
        model = pr.ar1_model(rho)
        profile = mx.exponential_profile(rho)  # dominates twice the true
        member = fc.make_class("identity", model).members[0]   # mixing level
        for q in (4, 8, 16, 32):
            sigma2_sq = nm.block_moment(model, member, q, order=2.0).value ** 2
            bound = 2.0 * _certified_norm_sq_lower(model.marginal_sd(), q, profile)
            rows.append({"rho": rho, "q": q, "sigma2_sq": sigma2_sq,
                         "twice_norm_sq_lower": bound})
            ok &= sigma2_sq <= bound
    return CriterionResult(
        cid="A13", title="analytic block variance below twice the squared "
        "dependence norm", passed=bool(ok),
        seconds=time.perf_counter() - t0, details={"rows": rows},
    )


# -- A14: strong approximation trend -------------------------------------------------------


def criterion_strong_approx(seed: int, scale: float = 1.0) -> CriterionResult:
    t0 = time.perf_counter()
    s = _derive_seed(seed, 14)
    reps = _reps(400, scale)
    pool = _reps(20000, scale, floor=2000)
    model = pr.ar1_model(0.5)
    members = fc.make_class("lipschitz4", model).members
    rep = cp.strong_approx_experiment(model, members, (384, 1536, 6144),
                                      reps=reps, seed=s, pool_size=pool)
    points = [{
        "n": p.n, "q": p.q, "gap_mean": p.gap_mean, "gap_se": p.gap_se,
        "bound": p.bound, "implied_ratio": p.implied_ratio,
        "tau_hat": p.tau_hat,
    } for p in rep.points]
    passed = rep.monotone and rep.within_bound
    return CriterionResult(
        cid="A14", title="Gaussian coupling gap non-increasing in n and below the "
        "assembled bound", passed=bool(passed),
        seconds=time.perf_counter() - t0,
        details={"reps": reps, "points": points, "monotone": rep.monotone,
                 "within_bound": rep.within_bound},
    )


# -- registry and runner --------------------------------------------------------------------

CRITERIA = {
    "A1": criterion_divisor_gap,
    "A2": criterion_schedule_forms,
    "A3": criterion_count_sandwich,
    "A4": criterion_envelopes,
    "A5": criterion_rate_regimes,
    "A6": criterion_iid_norm,
    "A7": criterion_complexity_oracle,
    "A8": criterion_chain_identity,
    "A9": criterion_half_normal,
    "A10": criterion_coupling_exactness,
    "A11": criterion_block_independence,
    "A12": criterion_bernstein_tails,
    "A13": criterion_variance_bound,
    "A14": criterion_strong_approx,
}

SUITES = {
    "grid": ("A1", "A2"),
    "norms": ("A3", "A6", "A13"),
    "rates": ("A4", "A5"),
    "chaining": ("A7", "A8"),
    "coupling": ("A9", "A10", "A11", "A12", "A14"),
}
SUITES["all"] = tuple(CRITERIA)


def run_criteria(cids, seed: int, scale: float = 1.0,
                 workers: int = 1) -> list[CriterionResult]:
    """Run criteria with per-criterion derived seeds.

    Each criterion's seed depends only on (seed, criterion id), and results
    are assembled in registry order, so output does not depend on the
    worker count.
    """
    cids = list(cids)
    ordered = [cid for cid in CRITERIA if cid in cids]

    def one(cid: str) -> CriterionResult:
        return CRITERIA[cid](seed=seed, scale=scale)

    if workers <= 1:
        return [one(cid) for cid in ordered]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {cid: pool.submit(one, cid) for cid in ordered}
        return [futures[cid].result() for cid in ordered]


def suite_criteria(name: str) -> tuple[str, ...]:
    if name not in SUITES:
        raise KeyError(
            f"unknown suite {name!r}; available: {', '.join(sorted(SUITES))}")
    return SUITES[name]
