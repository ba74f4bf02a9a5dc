"""Quantile curves and the dependence-weighted norm machinery.

The central objects are the non-increasing quantile function of |f| and the
integer step weight counting lags whose dependence level still dominates u.
Both are step functions, so every integral here is a finite sum over merged
breakpoints: there is no quadrature error anywhere in this module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mixing import MixingProfile


@dataclass(frozen=True)
class QuantileCurve:
    """Piecewise-constant right-continuous u -> Q(u) = inf{s : P(|f| > s) <= u}.

    ``Q(u) = values[k]`` on ``[breaks[k-1], breaks[k])`` with ``breaks[-1] = 0``
    implied, and ``Q(u) = 0`` for ``u >= breaks[-1]``.  Values are strictly
    decreasing positive reals, breaks are the matching cumulative tail
    probabilities.
    """

    breaks: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        b = np.asarray(self.breaks, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if b.shape != v.shape:
            raise ValueError("breaks and values must have equal length")
        if b.size:
            if b[0] <= 0 or b[-1] > 1 or np.any(np.diff(b) <= 0):
                raise ValueError("breaks must be strictly increasing within (0, 1]")
            if np.any(v <= 0) or np.any(np.diff(v) >= 0):
                raise ValueError("values must be strictly decreasing and positive")

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_discrete(cls, values, probs) -> "QuantileCurve":
        """Exact curve of |f| under a finite discrete distribution."""
        v = np.abs(np.asarray(values, dtype=float).ravel())
        p = np.asarray(probs, dtype=float).ravel()
        if v.shape != p.shape or v.size == 0:
            raise ValueError("values and probs must be equal-length and non-empty")
        if np.any(p < 0) or not math.isclose(p.sum(), 1.0, rel_tol=1e-9):
            raise ValueError("probs must be non-negative and sum to 1")
        uniq, inv = np.unique(v, return_inverse=True)
        mass = np.zeros_like(uniq)
        np.add.at(mass, inv, p)
        keep = (uniq > 0) & (mass > 0)
        uniq, mass = uniq[keep][::-1], mass[keep][::-1]  # descending values
        cum = np.minimum(np.cumsum(mass), 1.0)  # cumsum can overshoot 1 by 1 ulp
        # Masses below float resolution leave the cumulative unchanged; drop them.
        strict = np.diff(np.concatenate([[0.0], cum])) > 0
        return cls(breaks=tuple(float(c) for c in cum[strict]),
                   values=tuple(float(x) for x in uniq[strict]))

    @classmethod
    def from_sample(cls, sample) -> "QuantileCurve":
        """Empirical curve: each observation carries weight 1/n."""
        x = np.asarray(sample, dtype=float).ravel()
        if x.size == 0:
            raise ValueError("sample must be non-empty")
        return cls.from_discrete(x, np.full(x.size, 1.0 / x.size))

    @classmethod
    def constant(cls, level: float) -> "QuantileCurve":
        """Curve of an |f| that is almost surely equal to ``level``."""
        if level < 0:
            raise ValueError("level must be >= 0")
        if level == 0:
            return cls(breaks=(), values=())
        return cls(breaks=(1.0,), values=(float(level),))

    # -- evaluation and exact moments -------------------------------------

    def q_at(self, u):
        """Right-continuous evaluation; vectorized over u."""
        u_arr = np.asarray(u, dtype=float)
        b = np.asarray(self.breaks, dtype=float)
        v = np.concatenate([np.asarray(self.values, dtype=float), [0.0]])
        idx = np.searchsorted(b, u_arr, side="right")
        out = v[idx]
        return float(out) if np.isscalar(u) or u_arr.ndim == 0 else out

    def _segments(self):
        b = np.asarray(self.breaks, dtype=float)
        v = np.asarray(self.values, dtype=float)
        widths = np.diff(np.concatenate([[0.0], b]))
        return widths, v

    def lr_norm(self, r: float) -> float:
        """Exact L^r norm of |f|: (sum width * value^r)^(1/r)."""
        if r <= 0:
            raise ValueError("r must be > 0")
        widths, v = self._segments()
        return float((widths * v**r).sum() ** (1.0 / r))

    def l2_norm(self) -> float:
        return self.lr_norm(2.0)

    def mean(self) -> float:
        widths, v = self._segments()
        return float((widths * v).sum())

    def sup(self) -> float:
        return float(self.values[0]) if self.values else 0.0

    def truncated_mean_above(self, cut: float) -> float:
        """E[|f| ; |f| > cut], exact for the discrete distribution."""
        widths, v = self._segments()
        keep = v > cut
        return float((widths[keep] * v[keep]).sum())

    def scaled(self, c: float) -> "QuantileCurve":
        if c <= 0:
            raise ValueError("scale must be > 0")
        return QuantileCurve(breaks=self.breaks,
                             values=tuple(c * x for x in self.values))


def active_lag_count(u: float, q: int, profile: MixingProfile) -> int:
    """Number of lags i in 0..q whose halved dependence level still covers u.

    Integer-valued, non-increasing in u and non-decreasing in q; zero as
    soon as u exceeds 1/2 because theta is capped at 1.
    """
    if u <= 0:
        raise ValueError("u must be > 0 (the u = 0 endpoint is handled by limits)")
    if q < 0:
        raise ValueError("q must be >= 0")
    half = profile.half_levels(q)
    return int(np.count_nonzero(half >= u))


def _mu_on_rights(rights: np.ndarray, q: int, profile: MixingProfile) -> np.ndarray:
    """Vector of active-lag counts evaluated at interval right endpoints."""
    half_sorted = np.sort(profile.half_levels(q))
    # count of half-levels >= u  ==  len - first index with level >= u
    idx = np.searchsorted(half_sorted, rights, side="left")
    return (half_sorted.size - idx).astype(float)


def norm_weight_integral(curve: QuantileCurve, q: int, profile: MixingProfile) -> float:
    """Exact value of the step-function integral of count(u) * Q(u)^2 over (0, 1]."""
    half = profile.half_levels(q)
    cuts = np.unique(np.concatenate([[0.0], half, np.asarray(curve.breaks), [1.0]]))
    cuts = cuts[(cuts >= 0.0) & (cuts <= 1.0)]
    left, right = cuts[:-1], cuts[1:]
    mu = _mu_on_rights(right, q, profile)
    qvals = curve.q_at(left)  # right-continuous: value on [left, right)
    return float(((right - left) * mu * qvals**2).sum())


def dependence_norm(curve: QuantileCurve, q: int, profile: MixingProfile) -> float:
    """The dependence-weighted norm sqrt(2 * integral(count * Q^2)).

    Reduces to a pure second-moment quantity when the profile vanishes past
    lag zero, and grows with q at the rate the profile's tail dictates.
    """
    return math.sqrt(2.0 * norm_weight_integral(curve, q, profile))


def holder_factor(q: int, r: float, profile: MixingProfile) -> float:
    """Exact constant C(q, r) with dependence_norm(f, q) <= C * ||f||_{L^r}.

    Computed as sqrt(2) * (integral of count(u)^(r/(r-2)) du)^((r-2)/(2r));
    the integrand is a step function with at most q + 2 pieces, so the
    integral is a finite sum.
    """
    if r <= 2:
        raise ValueError("r must be > 2")
    if q < 0:
        raise ValueError("q must be >= 0")
    a = r / (r - 2.0)
    levels = np.sort(profile.half_levels(q))          # ascending
    cuts = np.concatenate([[0.0], levels])
    counts = np.arange(q + 1, 0, -1, dtype=float)     # count on (cuts[j], cuts[j+1]]
    widths = np.diff(cuts)
    integral = float((widths * counts**a).sum())
    return math.sqrt(2.0) * integral ** ((r - 2.0) / (2.0 * r))


# -- block-average moments -------------------------------------------------


@dataclass(frozen=True)
class BlockMoment:
    """Moment of order ``order`` of a normalized length-q block average."""

    member: str
    q: int
    order: float
    value: float
    method: str           # "analytic" | "monte_carlo" | "sup_rule"
    reps: int = 0
    std_error: float = 0.0


def _gaussian_linear_sigma2(model, q: int) -> float:
    """Exact block variance for the identity under Gaussian linear models."""
    gammas = model.autocovariances(q)  # gamma_0 .. gamma_{q-1}
    k = np.arange(1, q)
    total = gammas[0]
    if q > 1:
        total += 2.0 * float(((1.0 - k / q) * gammas[1:q]).sum())
    return float(total)


def block_moment(model, member, q: int, order: float = 2.0,
                 reps: int = 0, seed: int = 0) -> BlockMoment:
    """Moment of the centered, sqrt(q)-normalized block sum of f.

    order = inf uses the convention sqrt(q) * sup|f| and requires a finite
    sup bound.  The identity member under a Gaussian linear model has an
    analytic second moment; anything else is Monte Carlo over independent
    stationary blocks (reps >= 2 required) with a delta-method standard
    error on the reported root.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if order == math.inf:
        if member.sup_bound is None or not np.isfinite(member.sup_bound):
            raise ValueError("order=inf needs a finite sup bound")
        return BlockMoment(member=member.name, q=q, order=math.inf,
                           value=math.sqrt(q) * float(member.sup_bound),
                           method="sup_rule")
    if order < 2:
        raise ValueError("order must be in [2, inf]")
    if order == 2.0 and member.name == "identity" and model.kind in ("iid", "ar1", "ma"):
        return BlockMoment(member=member.name, q=q, order=2.0,
                           value=math.sqrt(_gaussian_linear_sigma2(model, q)),
                           method="analytic")
    if reps < 2:
        raise ValueError("Monte Carlo block moments need reps >= 2")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x5167]))
    blocks = model.sample_blocks(q, reps, rng)                    # (reps, q)
    sums = (member.func(blocks).sum(axis=1) - q * member.mean) / math.sqrt(q)
    pw = np.abs(sums) ** order
    m_hat = float(pw.mean())
    se_m = float(pw.std(ddof=1) / math.sqrt(reps))
    value = m_hat ** (1.0 / order)
    # delta method: d(m^(1/order))/dm = m^(1/order - 1) / order
    se = se_m * value / (order * m_hat) if m_hat > 0 else 0.0
    return BlockMoment(member=member.name, q=q, order=order, value=value,
                       method="monte_carlo", reps=reps, std_error=se)
