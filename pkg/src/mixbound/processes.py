"""Stationary process generators with known dependence behavior, plus the
centered and scaled sample-average functional over finite function classes.

Every model starts exactly in its stationary law (Gaussian linear models by
construction, the renewal chain from its explicit invariant distribution),
so no burn-in is ever discarded.  Simulation is vectorized across
replications; a path is reproducible bit for bit from (model, n, seed).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta as _zeta


class ModelError(ValueError):
    pass


def _seed_seq(seed: int, *tags: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed)] + [int(t) & 0xFFFFFFFF for t in tags])


@dataclass(frozen=True)
class ProcessModel:
    """One of four stationary model kinds.

    iid
        Independent Gaussians with standard deviation ``scale``.
    ar1
        X_{t+1} = rho X_t + eps, Gaussian innovations with sd ``sigma``;
        a Lipschitz contraction with geometric dependence decay.
    ma
        (m+1)-tap moving average of Gaussian innovations: exactly
        m-dependent (independence beyond lag m).
    lazy_renewal
        Countdown chain on the non-negative integers: decrement when
        positive, redraw from a heavy tail with P(V >= k) = k^-(tail_m + 1)
        at zero.  Polynomially mixing regeneration structure; its actual
        coefficients are estimated, never assumed.
    """

    kind: str
    rho: float = 0.0
    sigma: float = 1.0
    scale: float = 1.0
    m: int = 0
    weights: tuple[float, ...] = ()
    tail_m: float = 0.0

    def __post_init__(self) -> None:
        if self.kind == "ar1" and not (-1.0 < self.rho < 1.0):
            raise ModelError("ar1 needs |rho| < 1")
        if self.kind == "ma":
            if self.m < 1:
                raise ModelError("ma needs memory m >= 1")
            if len(self.weights) != self.m + 1:
                raise ModelError("ma needs m + 1 weights")
        if self.kind == "lazy_renewal" and self.tail_m <= 0:
            raise ModelError("lazy_renewal needs tail_m > 0")
        if self.kind not in ("iid", "ar1", "ma", "lazy_renewal"):
            raise ModelError(f"unknown model kind {self.kind!r}")

    # -- structural facts --------------------------------------------------

    @property
    def is_markov(self) -> bool:
        return self.kind in ("iid", "ar1", "lazy_renewal")

    @property
    def memory(self) -> int:
        """Innovation look-back needed to evaluate X_t (finite-memory kinds)."""
        return self.m if self.kind == "ma" else 0

    def marginal_sd(self) -> float:
        if self.kind == "iid":
            return self.scale
        if self.kind == "ar1":
            return self.sigma / math.sqrt(1.0 - self.rho**2)
        if self.kind == "ma":
            w = np.asarray(self.weights)
            return self.sigma * math.sqrt(float((w * w).sum()))
        raise ModelError("marginal sd is not analytic for the renewal chain")

    def autocovariances(self, q: int) -> np.ndarray:
        """gamma_0 .. gamma_{q-1} for the Gaussian linear kinds."""
        k = np.arange(q)
        if self.kind == "iid":
            g = np.zeros(q)
            g[0] = self.scale**2
            return g
        if self.kind == "ar1":
            var = self.sigma**2 / (1.0 - self.rho**2)
            return var * self.rho ** k.astype(float)
        if self.kind == "ma":
            w = np.asarray(self.weights, dtype=float)
            g = np.zeros(q)
            for lag in range(min(q, self.m + 1)):
                g[lag] = self.sigma**2 * float((w[: len(w) - lag] * w[lag:]).sum())
            return g
        raise ModelError("autocovariances are not analytic for the renewal chain")

    def spec(self) -> str:
        if self.kind == "iid":
            return "iid" if self.scale == 1.0 else f"iid:scale={self.scale:g}"
        if self.kind == "ar1":
            base = f"ar1:rho={self.rho:g}"
            return base if self.sigma == 1.0 else base + f",sigma={self.sigma:g}"
        if self.kind == "ma":
            return f"ma:m={self.m}"
        return f"lazy:m={self.tail_m:g}"

    # -- sampling primitives ----------------------------------------------

    def stationary_sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "iid":
            return self.scale * rng.standard_normal(size)
        if self.kind == "ar1":
            return self.marginal_sd() * rng.standard_normal(size)
        if self.kind == "lazy_renewal":
            # Invariant law: mass 1/(1 + zeta(s)) at 0, else Zipf(s), s = tail_m + 1.
            s = self.tail_m + 1.0
            z = float(_zeta(s, 1))
            out = np.where(rng.random(size) < 1.0 / (1.0 + z),
                           0.0, rng.zipf(s, size).astype(float))
            return out
        raise ModelError("the moving average is not sampled pointwise; simulate a path")

    def draw_innovations(self, size: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "lazy_renewal":
            return rng.random(size)
        return self.sigma * rng.standard_normal(size) if self.kind != "iid" \
            else self.scale * rng.standard_normal(size)

    def step(self, state: np.ndarray, innovation: np.ndarray) -> np.ndarray:
        """One transition of the innovation recursion (Markov kinds only)."""
        if self.kind == "iid":
            return innovation
        if self.kind == "ar1":
            return self.rho * state + innovation
        if self.kind == "lazy_renewal":
            u = np.clip(1.0 - innovation, 1e-300, 1.0)  # map [0,1) to (0,1]
            fresh = np.floor(u ** (-1.0 / (self.tail_m + 1.0)))
            return np.where(state >= 1.0, state - 1.0, fresh)
        raise ModelError(f"model kind {self.kind!r} exposes no one-step recursion")

    def sample_blocks(self, q: int, reps: int, rng: np.random.Generator) -> np.ndarray:
        """(reps, q) matrix of independent stationary length-q stretches."""
        vals, _, _ = _simulate_core(self, q, reps, rng)
        return vals


def iid_model(scale: float = 1.0) -> ProcessModel:
    return ProcessModel("iid", scale=scale)


def ar1_model(rho: float, sigma: float = 1.0) -> ProcessModel:
    return ProcessModel("ar1", rho=rho, sigma=sigma)


def ma_model(m: int, weights=None, sigma: float = 1.0) -> ProcessModel:
    if weights is None:
        weights = np.full(m + 1, 1.0 / math.sqrt(m + 1))
    return ProcessModel("ma", m=m, weights=tuple(float(w) for w in weights), sigma=sigma)


def lazy_renewal_model(tail_m: float) -> ProcessModel:
    return ProcessModel("lazy_renewal", tail_m=tail_m)


def parse_model(text: str) -> ProcessModel:
    text = text.strip()
    head, _, rest = text.partition(":")
    kv: dict[str, str] = {}
    for part in rest.split(","):
        if part:
            k, _, v = part.partition("=")
            kv[k.strip()] = v.strip()
    if head == "iid":
        return iid_model(scale=float(kv.get("scale", 1.0)))
    if head == "ar1":
        return ar1_model(rho=float(kv["rho"]), sigma=float(kv.get("sigma", 1.0)))
    if head == "ma":
        return ma_model(m=int(kv["m"]), sigma=float(kv.get("sigma", 1.0)))
    if head == "lazy":
        return lazy_renewal_model(tail_m=float(kv["m"]))
    raise ModelError(f"cannot parse model spec {text!r}")


# -- simulation --------------------------------------------------------------


@dataclass(frozen=True)
class PathBundle:
    """One simulated path with everything needed to rebuild it.

    ``innovations`` keeps the driving noise (with the moving-average prepad
    in front) so couplings can re-run the recursion from arbitrary times;
    ``start`` is the stationary initial state for recursive kinds.
    """

    model: ProcessModel
    n: int
    seed: int
    values: np.ndarray
    innovations: np.ndarray
    start: float


def _simulate_core(model: ProcessModel, n: int, reps: int,
                   rng: np.random.Generator):
    """(values, innovations, starts) for ``reps`` independent paths."""
    if model.kind == "iid":
        innov = model.scale * rng.standard_normal((reps, n))
        return innov.copy(), innov, np.zeros(reps)
    if model.kind == "ar1":
        starts = model.marginal_sd() * rng.standard_normal(reps)
        innov = model.sigma * rng.standard_normal((reps, n))
        vals = np.empty((reps, n))
        state = starts.copy()
        for t in range(n):
            state = model.rho * state + innov[:, t]
            vals[:, t] = state
        return vals, innov, starts
    if model.kind == "ma":
        m = model.m
        w = np.asarray(model.weights)
        innov = model.sigma * rng.standard_normal((reps, n + m))
        vals = np.zeros((reps, n))
        for j in range(m + 1):
            vals += w[j] * innov[:, m - j: m - j + n]
        return vals, innov, np.zeros(reps)
    # lazy renewal
    starts = model.stationary_sample(reps, rng)
    innov = rng.random((reps, n))
    vals = np.empty((reps, n))
    state = starts.astype(float).copy()
    for t in range(n):
        state = model.step(state, innov[:, t])
        vals[:, t] = state
    return vals, innov, starts


def simulate(model: ProcessModel, n: int, seed: int, burn_in: int = 0) -> PathBundle:
    """One stationary path of length n, reproducible from (model, n, seed).

    All four kinds start exactly stationary, so ``burn_in`` is accepted for
    interface compatibility but never needed; a positive value simply
    shifts the window.
    """
    if n < 1:
        raise ModelError("n must be >= 1")
    rng = np.random.default_rng(_seed_seq(seed, 0x51A7))
    vals, innov, starts = _simulate_core(model, n + burn_in, 1, rng)
    if burn_in:
        vals = vals[:, burn_in:]
        innov = innov[:, burn_in:] if model.kind != "ma" else innov[:, burn_in:]
    return PathBundle(model=model, n=n, seed=seed, values=vals[0],
                      innovations=innov[0], start=float(starts[0]))


def simulate_many(model: ProcessModel, n: int, reps: int, seed: int, tag: int = 0):
    """(reps, n) stationary paths plus innovations and starts (vectorized)."""
    rng = np.random.default_rng(_seed_seq(seed, 0x51A7, tag))
    return _simulate_core(model, n, reps, rng)


# -- empirical process --------------------------------------------------------


@dataclass(frozen=True)
class EmpiricalResult:
    names: tuple[str, ...]
    values: np.ndarray        # per-member centered scaled averages
    sup_pairs: float          # sup over member pairs of the absolute gap


def _member_matrix(members, values: np.ndarray) -> np.ndarray:
    """(members, ...) evaluations of each test function on a value array."""
    return np.stack([mem.func(values) for mem in members])


def empirical_process(path: PathBundle, members) -> EmpiricalResult:
    """Centered, sqrt(n)-scaled class averages over one path.

    Every member must carry its exact stationary mean; members without one
    cannot be centered and are rejected with a pointer to the class
    builders, which attach analytic or high-precision Monte Carlo means.
    """
    members = list(members)
    missing = [m.name for m in members if m.mean is None]
    if missing:
        raise ModelError(
            f"members {missing} have no stationary mean; build the class with "
            f"means attached (see function_classes.make_class)"
        )
    n = path.n
    g = np.array([
        (mem.func(path.values).sum() - n * mem.mean) / math.sqrt(n)
        for mem in members
    ])
    return EmpiricalResult(
        names=tuple(m.name for m in members),
        values=g,
        sup_pairs=float(g.max() - g.min()),
    )


def empirical_process_many(values: np.ndarray, members) -> np.ndarray:
    """(reps,) sup over member pairs for a (reps, n) path matrix."""
    members = list(members)
    n = values.shape[1]
    g = np.stack([
        (mem.func(values).sum(axis=1) - n * mem.mean) / math.sqrt(n)
        for mem in members
    ])
    return g.max(axis=0) - g.min(axis=0)


def mc_expected_sup(model: ProcessModel, members, n: int, reps: int,
                    seed: int) -> tuple[float, float]:
    """Monte Carlo mean of the pairwise sup statistic with jackknife error.

    For the mean the leave-one-out jackknife collapses to the classical
    s / sqrt(reps); reps of at least 30 are required so the error estimate
    is meaningful.
    """
    if reps < 30:
        raise ModelError("reps must be >= 30")
    vals, _, _ = simulate_many(model, n, reps, seed, tag=0xE5)
    sups = empirical_process_many(vals, members)
    est = float(sups.mean())
    se = float(sups.std(ddof=1) / math.sqrt(reps))
    return est, se
