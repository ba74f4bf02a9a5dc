"""Block-independent replica paths, coupling-gap measurement, block-level
tail verification and the Gaussian strong-approximation experiment.

The replica rebuilds each length-q block from a fresh stationary start one
block early, driven by the original path's stored innovations through the
previous and current block.  Same-parity blocks therefore depend on
disjoint randomness and are exactly independent, while every block keeps
the stationary block law.  Block zero has no room for a lead-in on a
one-sided simulation and is taken from the path itself, which keeps its
law and its independence from blocks two onward while making its coupling
error zero.  For independent data the replica is the path itself; for a
moving average with memory within one block the lead-in reconstructs the
window exactly and the two paths coincide bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import beta as _beta
from scipy.stats import norm as _norm

from .grid import divisor_chain
from .mixing import MixingProfile, estimate_tau
from .norms import QuantileCurve, _gaussian_linear_sigma2, dependence_norm
from .processes import (PathBundle, ProcessModel, simulate_many, _seed_seq)


class CouplingError(ValueError):
    pass


# -- replica construction ----------------------------------------------------


def _check_block_length(n: int, q: int) -> int:
    chain = divisor_chain(n)
    if q not in chain.divisors:
        raise CouplingError(f"q={q} does not divide n={n}")
    return n // q


def _replicate_ar1_like(model: ProcessModel, values: np.ndarray,
                        innovations: np.ndarray, q: int,
                        rng: np.random.Generator) -> np.ndarray:
    """Replica paths for recursive kinds; innovations has shape (reps, n)."""
    reps, n = innovations.shape
    nblocks = n // q
    out = np.empty((reps, n))
    out[:, :q] = values[:, :q]  # block zero: no lead-in room, copy the path
    state0 = model.stationary_sample(reps * nblocks, rng).reshape(reps, nblocks)
    for j in range(1, nblocks):
        state = state0[:, j]
        # Lead-in: one full block starting at time q(j-1), then block j itself.
        for u in range(q):
            state = model.step(state, innovations[:, q * (j - 1) + u])
        for u in range(q):
            state = model.step(state, innovations[:, q * j + u])
            out[:, q * j + u] = state
    return out


def _replicate_ma(model: ProcessModel, innovations: np.ndarray, q: int,
                  rng: np.random.Generator) -> np.ndarray:
    """Replica for the moving average; innovations carries the m-term prepad."""
    reps, total = innovations.shape
    m = model.m
    n = total - m
    w = np.asarray(model.weights)
    nblocks = n // q
    out = np.empty((reps, n))
    for j in range(nblocks):
        # Innovation times needed for block j: (qj + 1 - m) .. (qj + q).
        lo_t, hi_t = q * j + 1 - m, q * j + q
        cols = np.arange(lo_t, hi_t + 1) + m - 1   # column of time s is s + m - 1
        window = innovations[:, cols].copy()
        # Times before block j-1 are replaced by fresh noise so block j is
        # independent of blocks <= j-2; block zero keeps its true prehistory.
        cutoff = q * (j - 1)
        fresh_mask = (np.arange(lo_t, hi_t + 1) <= cutoff) if j >= 1 \
            else np.zeros(hi_t - lo_t + 1, dtype=bool)
        if fresh_mask.any():
            window[:, fresh_mask] = model.sigma * rng.standard_normal(
                (reps, int(fresh_mask.sum())))
        # Same summation order as the simulator so exact cases match bit for bit.
        vals = np.zeros((reps, q))
        for jj in range(m + 1):
            vals += w[jj] * window[:, m - jj: m - jj + q]
        out[:, q * j: q * j + q] = vals
    return out


def replicate_many(model: ProcessModel, values: np.ndarray,
                   innovations: np.ndarray, q: int, seed: int,
                   tag: int = 0) -> np.ndarray:
    """Vectorized replica paths from stored paths and innovations (internal)."""
    rng = np.random.default_rng(_seed_seq(seed, 0xC0FF, tag))
    if model.kind == "iid":
        return values.copy()
    if model.kind == "ma":
        # When q >= m the lead-in covers the whole moving-average window and
        # the reconstruction reproduces the path bit for bit.
        return _replicate_ma(model, innovations, q, rng)
    if model.kind in ("ar1", "lazy_renewal"):
        return _replicate_ar1_like(model, values, innovations, q, rng)
    raise CouplingError(f"no replica construction for model kind {model.kind!r}")


@dataclass(frozen=True)
class ReplicaPath:
    """Replica values aligned with the base path's blocks."""

    base: PathBundle
    q: int
    seed: int
    values: np.ndarray


def build_replica(path: PathBundle, q: int, seed: int) -> ReplicaPath:
    """Block-independent replica of one path.

    Requires q to divide n, and the model to expose either a one-step
    innovation recursion or finite memory.
    """
    _check_block_length(path.n, q)
    innov = path.innovations[None, :]
    vals = path.values[None, :]
    values = replicate_many(path.model, vals, innov, q, seed)[0]
    return ReplicaPath(base=path, q=q, seed=seed, values=values)


# -- coupling gap -------------------------------------------------------------


@dataclass(frozen=True)
class GapReport:
    q: int
    per_member: dict[str, float]
    sup_gap: float
    tau_scaled: float | None   # sqrt(n) * tau estimate, when supplied
    ratio: float | None


def coupling_gap(path: PathBundle, replica: ReplicaPath, members,
                 tau_estimate: float | None = None) -> GapReport:
    """Sup over the class of the empirical-process gap path vs replica.

    Centering means cancel, so the gap is the scaled difference of member
    sums.  When a tau estimate at the replica's block length is supplied
    the report carries the ratio gap / (sqrt(n) * tau).
    """
    members = list(members)
    n = path.n
    gaps = {}
    for mem in members:
        g = (mem.func(path.values).sum() - mem.func(replica.values).sum()) / math.sqrt(n)
        gaps[mem.name] = abs(float(g))
    sup_gap = max(gaps.values())
    tau_scaled = ratio = None
    if tau_estimate is not None:
        tau_scaled = math.sqrt(n) * tau_estimate
        ratio = sup_gap / tau_scaled if tau_scaled > 0 else math.inf
    return GapReport(q=replica.q, per_member=gaps, sup_gap=sup_gap,
                     tau_scaled=tau_scaled, ratio=ratio)


def tau_for_class(model: ProcessModel, members, q: int, outer: int, inner: int,
                  seed: int) -> tuple[float, float]:
    """Class-scale dependence estimate: cone-normalized times the envelope
    when every member is bounded, raw nested Monte Carlo otherwise."""
    members = list(members)
    sups = [m.sup_bound for m in members]
    if all(s is not None and np.isfinite(s) for s in sups):
        envelope = max(float(s) for s in sups)
        est = estimate_tau(model, members, q, outer, inner, seed, normalize=True)
        return envelope * est.value, envelope * est.std_error
    est = estimate_tau(model, members, q, outer, inner, seed, normalize=False)
    return est.value, est.std_error


def gap_samples(model: ProcessModel, members, n: int, q: int, reps: int,
                seed: int) -> np.ndarray:
    """(reps,) sup-gaps between paths and their replicas (vectorized)."""
    _check_block_length(n, q)
    vals, innov, _ = simulate_many(model, n, reps, seed, tag=q)
    reps_vals = replicate_many(model, vals, innov, q, seed, tag=q)
    members = list(members)
    g = np.stack([
        np.abs(mem.func(vals).sum(axis=1) - mem.func(reps_vals).sum(axis=1))
        for mem in members
    ]) / math.sqrt(n)
    return g.max(axis=0)


@dataclass(frozen=True)
class GapSweep:
    qs: tuple[int, ...]
    means: tuple[float, ...]
    std_errors: tuple[float, ...]
    log_slope: float


def coupling_gap_sweep(model: ProcessModel, members, n: int, qs, reps: int,
                       seed: int) -> GapSweep:
    """Mean sup-gap against block length with the fitted log-linear slope."""
    means, ses = [], []
    for q in qs:
        sups = gap_samples(model, members, n, q, reps, seed)
        means.append(float(sups.mean()))
        ses.append(float(sups.std(ddof=1) / math.sqrt(reps)))
    x = np.asarray(qs, dtype=float)
    y = np.log(np.asarray(means))
    xc = x - x.mean()
    slope = float((xc * (y - y.mean())).sum() / (xc * xc).sum())
    return GapSweep(qs=tuple(int(q) for q in qs), means=tuple(means),
                    std_errors=tuple(ses), log_slope=slope)


# -- block independence -------------------------------------------------------


@dataclass(frozen=True)
class IndependenceReport:
    q: int
    parity: str
    n_pairs: int               # adjacent-pair observations pooled into the test
    reps: int
    pooled_corr: float
    per_position: tuple[float, ...]
    threshold: float
    passed: bool


def block_independence_test(values: np.ndarray, q: int, parity: str = "even",
                            threshold_mult: float = 3.0) -> IndependenceReport:
    """Adjacent same-parity block-sum correlation against 3/sqrt(pairs).

    ``values`` is a (reps, n) matrix (replica or raw paths).  All adjacent
    same-parity block-sum pairs are pooled, across positions and
    replications, into one correlation: under exact independence the
    pooled estimate has standard error 1/sqrt(pairs), so the factor-three
    threshold gives a single 3-sigma test free of multiplicity.  Per-
    position correlations are reported for diagnostics.
    """
    if values.ndim != 2:
        raise CouplingError("values must be a (reps, n) matrix")
    reps, n = values.shape
    nblocks = n // q
    start = 0 if parity == "even" else 1
    idx = np.arange(start, nblocks, 2)
    if idx.size < 2:
        raise CouplingError("need at least two same-parity blocks")
    if reps * idx.size < 30:
        raise CouplingError("need at least 30 same-parity blocks across reps")
    sums = values[:, : nblocks * q].reshape(reps, nblocks, q).sum(axis=2)[:, idx]
    per_position = tuple(
        float(np.corrcoef(sums[:, i], sums[:, i + 1])[0, 1])
        for i in range(idx.size - 1)
    )
    a = sums[:, :-1].ravel()
    b = sums[:, 1:].ravel()
    pooled = float(np.corrcoef(a, b)[0, 1])
    n_pairs = a.size
    threshold = threshold_mult / math.sqrt(n_pairs)
    return IndependenceReport(q=q, parity=parity, n_pairs=n_pairs, reps=reps,
                              pooled_corr=pooled, per_position=per_position,
                              threshold=threshold, passed=abs(pooled) < threshold)


# -- block-sum tail verification ----------------------------------------------


@dataclass(frozen=True)
class TailPoint:
    u: float
    threshold: float
    exceedances: int
    frequency: float
    wald_ucl: float
    clopper_ucl: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class BernsteinReport:
    applicable: bool
    reason: str
    n: int
    q: int
    k: int
    reps: int
    b: float
    sup_bound: float
    points: tuple[TailPoint, ...]

    @property
    def passed(self) -> bool:
        return self.applicable and all(p.passed for p in self.points)


def bernstein_check(model: ProcessModel, member, curve: QuantileCurve,
                    profile: MixingProfile, n: int, q: int, k: int, reps: int,
                    seed: int, u_values=(1.0, 1.5, 2.0)) -> BernsteinReport:
    """Exceedance frequencies of the replica process against 2 exp(-u 2^k).

    ``curve`` must be the exact quantile curve of |f(X)| under the marginal
    law; the scale b is the dependence norm of that curve and the two
    preconditions (sup bound against 2 sqrt(n) b / (q sqrt(2^k)), and b at
    least the norm) are enforced, reporting the bound as inapplicable rather
    than a failure when violated.  The pass rule compares a one-sided 95
    percent upper confidence limit for the exceedance probability with the
    theoretical tail; the exact Clopper-Pearson limit is reported alongside.
    """
    _check_block_length(n, q)
    if member.sup_bound is None or not np.isfinite(member.sup_bound):
        raise CouplingError("member needs a finite sup bound")
    b = dependence_norm(curve, q, profile)
    cap = 2.0 * math.sqrt(n) * b / (q * math.sqrt(2.0**k))
    if member.sup_bound > cap:
        return BernsteinReport(
            applicable=False,
            reason=f"tail bound inapplicable: sup bound {member.sup_bound:.6g} exceeds {cap:.6g}",
            n=n, q=q, k=k, reps=reps, b=b, sup_bound=float(member.sup_bound),
            points=(),
        )
    vals, innov, _ = simulate_many(model, n, reps, seed, tag=0xBE00 + k)
    replica = replicate_many(model, vals, innov, q, seed, tag=0xBE00 + k)
    gstar = (member.func(replica).sum(axis=1) - n * member.mean) / math.sqrt(n)
    points = []
    for u in u_values:
        threshold = u * math.sqrt(2.0**k) * b * (16.0 / 3.0)
        x = int(np.count_nonzero(np.abs(gstar) >= threshold))
        freq = x / reps
        wald = freq + 1.645 * math.sqrt(max(freq * (1.0 - freq), 0.0) / reps)
        clopper = 1.0 if x == reps else float(_beta.ppf(0.95, x + 1, reps - x))
        bound = 2.0 * math.exp(-u * 2.0**k)
        points.append(TailPoint(u=float(u), threshold=threshold, exceedances=x,
                                frequency=freq, wald_ucl=wald, clopper_ucl=clopper,
                                bound=bound, passed=wald <= bound))
    return BernsteinReport(applicable=True, reason="", n=n, q=q, k=k, reps=reps,
                           b=b, sup_bound=float(member.sup_bound),
                           points=tuple(points))


# -- Gaussian coupling --------------------------------------------------------


@dataclass(frozen=True)
class GaussianCouple:
    """Standard-normal block draws coupled to one member's block sums."""

    member: str
    q: int
    sigma2: float
    z_blocks: np.ndarray
    z_total: np.ndarray   # sigma2-scaled, block-count normalized sums


def block_sums(values: np.ndarray, member, q: int) -> np.ndarray:
    """(reps, blocks) centered block sums of f scaled by sqrt(q)."""
    reps, n = values.shape
    nblocks = n // q
    fv = member.func(values[:, : nblocks * q]).reshape(reps, nblocks, q)
    return (fv.sum(axis=2) - q * member.mean) / math.sqrt(q)


def gaussian_couple(sums: np.ndarray, member_name: str, q: int, sigma2: float,
                    pool: np.ndarray | None = None) -> GaussianCouple:
    """Per-block comonotone Gaussianization of block sums.

    With ``pool`` (a large reference sample of independent stationary
    block sums) each sum is pushed through the smoothed empirical
    distribution and the standard normal quantile; without it the block
    law is taken to be exactly Gaussian (valid for linear functions of
    Gaussian models) and the transform reduces to division by sigma2.
    The coupled process is the scaled, block-count-normalized total.
    """
    if sigma2 <= 0:
        raise CouplingError("sigma2 must be > 0")
    if pool is None:
        z = sums / sigma2
    else:
        srt = np.sort(pool)
        ranks = np.searchsorted(srt, sums, side="right")
        grid = (ranks + 0.5) / (srt.size + 1.0)
        z = _norm.ppf(grid)
    nblocks = sums.shape[-1]
    total = sigma2 * z.sum(axis=-1) / math.sqrt(nblocks)
    return GaussianCouple(member=member_name, q=q, sigma2=sigma2,
                          z_blocks=z, z_total=total)


@dataclass(frozen=True)
class StrongApproxPoint:
    n: int
    q: int
    gap_mean: float
    gap_se: float
    tau_hat: float
    tau_se: float
    finite_dim_term: float
    coupling_term: float
    bound: float
    implied_ratio: float
    sigma2: dict[str, float]


@dataclass(frozen=True)
class StrongApproxReport:
    gamma_order: float
    points: tuple[StrongApproxPoint, ...]
    monotone: bool
    within_bound: bool


def _sqrt_divisor(n: int) -> int:
    from .grid import nearest_divisor

    return nearest_divisor(n, math.sqrt(n))


def strong_approx_experiment(model: ProcessModel, members, n_grid, reps: int,
                             seed: int, gamma_order: float = math.inf,
                             q_choice=None, pool_size: int = 20000,
                             tau_reps: tuple[int, int] = (200, 200),
                             ) -> StrongApproxReport:
    """Gap between the sample-average process and a coupled Gaussian one.

    Per grid point: simulate paths and replicas, Gaussianize the replica
    block sums per member (marginal comonotone transform against a pooled
    reference of independent stationary blocks), assemble the coupled
    Gaussian total with the block-sum standard deviation as its scale, and
    measure E sup over members of the absolute difference.  The finite
    class is its own zero-radius cover, so the comparison bound reduces to
    the finite-dimensional moment term plus the scaled dependence
    coefficient; the implied constant ratio is reported per point.
    """
    if gamma_order < 2:
        raise CouplingError("gamma_order must be in [2, inf]")
    members = list(members)
    points = []
    for n in n_grid:
        q = q_choice(n) if q_choice is not None else _sqrt_divisor(n)
        _check_block_length(n, q)
        vals, innov, _ = simulate_many(model, n, reps, seed, tag=n)
        replica = replicate_many(model, vals, innov, q, seed, tag=n)
        rng_pool = np.random.default_rng(_seed_seq(seed, 0x900, n))
        pool_paths = model.sample_blocks(q, pool_size, rng_pool)
        gaps = np.zeros((len(members), reps))
        sigma2 = {}
        sig_gamma_sum = 0.0
        for i, mem in enumerate(members):
            pool_sums = (mem.func(pool_paths).sum(axis=1) - q * mem.mean) / math.sqrt(q)
            # The block sums have exact mean zero; centering the reference
            # pool removes the transform's first-order location error, which
            # would otherwise accumulate across blocks.
            pool_sums = pool_sums - pool_sums.mean()
            linear_gaussian = (model.kind in ("iid", "ar1", "ma")
                               and mem.name in ("identity", "negated"))
            if linear_gaussian:
                # Block sums are exactly Gaussian: analytic scale, identity
                # transform, no pool noise in the coupling.
                s2 = math.sqrt(_gaussian_linear_sigma2(model, q))
            else:
                s2 = float(pool_sums.std(ddof=1))
            sigma2[mem.name] = s2
            gn = (mem.func(vals).sum(axis=1) - n * mem.mean) / math.sqrt(n)
            if s2 == 0.0:
                # Degenerate member: the matching Gaussian has variance zero.
                gaps[i] = np.abs(gn)
            else:
                sums = block_sums(replica, mem, q)
                couple = gaussian_couple(sums, mem.name, q, s2,
                                         pool=None if linear_gaussian else pool_sums)
                gaps[i] = np.abs(gn - couple.z_total)
            if gamma_order == math.inf:
                if mem.sup_bound is None:
                    raise CouplingError("gamma=inf needs finite sup bounds")
                sig_gamma_sum += math.sqrt(q) * float(mem.sup_bound)
            else:
                sig_gamma_sum += float(
                    (np.abs(pool_sums) ** gamma_order).mean() ** (1.0 / gamma_order))
        sup_gaps = gaps.max(axis=0)
        gap_mean = float(sup_gaps.mean())
        gap_se = float(sup_gaps.std(ddof=1) / math.sqrt(reps))
        tau_hat, tau_se = tau_for_class(model, members, q, tau_reps[0],
                                        tau_reps[1], seed=seed + n)
        exponent = 0.5 if gamma_order == math.inf else \
            (gamma_order - 2.0) / (2.0 * gamma_order)
        finite_dim = (q / n) ** exponent * sig_gamma_sum
        coupling_term = math.sqrt(n) * tau_hat
        bound = finite_dim + coupling_term
        points.append(StrongApproxPoint(
            n=int(n), q=int(q), gap_mean=gap_mean, gap_se=gap_se,
            tau_hat=tau_hat, tau_se=tau_se,
            finite_dim_term=finite_dim, coupling_term=coupling_term,
            bound=bound, implied_ratio=gap_mean / bound if bound > 0 else math.inf,
            sigma2=sigma2,
        ))
    # Ordering certified at 95 percent: one-sided z-test on each adjacent
    # difference of means (exact ties, e.g. identically zero gaps, pass).
    def decreases(lo: StrongApproxPoint, hi: StrongApproxPoint) -> bool:
        if math.isclose(lo.gap_mean, hi.gap_mean, abs_tol=1e-12):
            return True
        se = math.hypot(lo.gap_se, hi.gap_se)
        return lo.gap_mean - hi.gap_mean >= 1.645 * se

    monotone = all(decreases(lo, hi) for lo, hi in zip(points, points[1:]))
    within = all(p.gap_mean <= p.bound for p in points)
    return StrongApproxReport(gamma_order=gamma_order, points=tuple(points),
                              monotone=monotone, within_bound=within)


@dataclass(frozen=True)
class TailSlopeReport:
    gamma: float
    t_grid: tuple[float, ...]
    survival: tuple[float, ...]
    slope: float
    passed: bool


def coupled_tail_decay_check(model: ProcessModel, member, n: int, q: int,
                             reps: int, seed: int, gamma: float = 3.0,
                             pool_size: int = 20000) -> TailSlopeReport:
    """Slope test: deviations between coupled partial sums decay at least
    polynomially of order gamma on the observed range."""
    _check_block_length(n, q)
    vals, innov, _ = simulate_many(model, n, reps, seed, tag=0x59)
    replica = replicate_many(model, vals, innov, q, seed, tag=0x59)
    rng_pool = np.random.default_rng(_seed_seq(seed, 0x59AA))
    pool_paths = model.sample_blocks(q, pool_size, rng_pool)
    pool_sums = (member.func(pool_paths).sum(axis=1) - q * member.mean) / math.sqrt(q)
    pool_sums = pool_sums - pool_sums.mean()
    s2 = float(pool_sums.std(ddof=1))
    sums = block_sums(replica, member, q)
    couple = gaussian_couple(sums, member.name, q, s2, pool=pool_sums)
    dev = np.abs((sums - s2 * couple.z_blocks).sum(axis=1))
    # Survival levels anchored in the tail; the bulk of the distribution
    # carries no information about the polynomial decay order.
    levels = np.array([0.2, 0.1, 0.05, 0.02])
    t_grid = np.quantile(dev, 1.0 - levels)
    surv = np.array([(dev >= t).mean() for t in t_grid])
    ok = (t_grid > 0) & (surv > 0)
    x, y = np.log(t_grid[ok]), np.log(surv[ok])
    xc = x - x.mean()
    slope = float((xc * (y - y.mean())).sum() / (xc * xc).sum())
    return TailSlopeReport(gamma=gamma, t_grid=tuple(map(float, t_grid)),
                           survival=tuple(map(float, surv)), slope=slope,
                           passed=slope <= -gamma)
