"""Dependence profiles and empirical mixing-coefficient estimators.

A profile maps an integer lag q to a dependence weight theta(q) in [0, 1].
Profiles are non-increasing with theta(0) = 1 by convention.  Analytic
families cover independence, finite memory, polynomial decay and geometric
decay; a tabulated family handles everything else.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class ProfileError(ValueError):
    """Invalid profile parameters or an undefined profile operation."""


_KINDS = ("iid", "m_dependent", "polynomial", "exponential", "tabulated")


@dataclass(frozen=True)
class MixingProfile:
    """Lag -> dependence weight map theta, non-increasing on the integers.

    kind
        One of ``iid``, ``m_dependent``, ``polynomial``, ``exponential``,
        ``tabulated``.
    m
        Memory (``m_dependent``, positive integer) or decay power
        (``polynomial``, positive real).
    l
        Geometric ratio in (0, 1) for ``exponential``.
    table
        Values theta(0), theta(1), ... for ``tabulated``; must start at 1
        and be non-increasing.
    tail
        Tabulated-only rule past the table: ``zero`` or ``hold``.
    """

    kind: str
    m: float | None = None
    l: float | None = None
    table: tuple[float, ...] | None = None
    tail: str = "zero"

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ProfileError(f"unknown profile kind {self.kind!r}")
        if self.kind == "m_dependent":
            if self.m is None or self.m < 1 or int(self.m) != self.m:
                raise ProfileError("m_dependent needs a positive integer m")
        if self.kind == "polynomial":
            if self.m is None or self.m <= 0:
                raise ProfileError("polynomial needs m > 0")
        if self.kind == "exponential":
            if self.l is None or not (0.0 < self.l < 1.0):
                raise ProfileError("exponential needs l in (0, 1)")
        if self.kind == "tabulated":
            if not self.table:
                raise ProfileError("tabulated needs a non-empty table")
            arr = np.asarray(self.table, dtype=float)
            if arr.min() < 0.0 or arr.max() > 1.0:
                raise ProfileError("table values must lie in [0, 1]")
            if arr[0] != 1.0:
                raise ProfileError("table must start at theta(0) = 1")
            if np.any(np.diff(arr) > 0):
                raise ProfileError(
                    "table must be non-increasing; see monotone_envelope()"
                )
            if self.tail not in ("zero", "hold"):
                raise ProfileError("tail must be 'zero' or 'hold'")

    # -- evaluation ------------------------------------------------------

    def theta(self, q):
        """theta(q) for a scalar or array of non-negative integer lags."""
        q_arr = np.asarray(q)
        if np.any(q_arr < 0):
            raise ProfileError("lags must be >= 0")
        if self.kind == "iid":
            out = np.where(q_arr == 0, 1.0, 0.0)
        elif self.kind == "m_dependent":
            out = np.where(q_arr < self.m, 1.0, 0.0)
        elif self.kind == "polynomial":
            out = (1.0 + q_arr) ** (-self.m)
        elif self.kind == "exponential":
            with np.errstate(under="ignore"):
                out = np.asarray(self.l, dtype=float) ** q_arr
        else:
            tab = np.asarray(self.table, dtype=float)
            fill = 0.0 if self.tail == "zero" else tab[-1]
            idx = np.minimum(q_arr, len(tab) - 1)
            out = np.where(q_arr < len(tab), tab[idx], fill)
        if np.isscalar(q) or q_arr.ndim == 0:
            return float(out)
        return np.asarray(out, dtype=float)

    def half_levels(self, q: int) -> np.ndarray:
        """Array of 0.5 * theta(i) for i = 0..q (the mu breakpoints)."""
        return 0.5 * self.theta(np.arange(q + 1))

    def inverse(self, u: float) -> int:
        """Generalized inverse min{s >= 0 : theta(s) <= u}.

        Returns 0 whenever u >= 1.  For tabulated profiles with a ``hold``
        tail that never drops below u the inverse does not exist.
        """
        if u < 0:
            raise ProfileError("u must be >= 0")
        if u >= 1.0:
            return 0
        if self.kind == "iid":
            return 1
        if self.kind == "m_dependent":
            return int(self.m)
        if self.kind == "polynomial":
            guess = u ** (-1.0 / self.m) - 1.0
        elif self.kind == "exponential":
            if u == 0.0:
                raise ProfileError("inverse undefined: exponential theta never reaches 0")
            guess = math.log(u) / math.log(self.l)
        else:
            tab = np.asarray(self.table, dtype=float)
            hits = np.nonzero(tab <= u)[0]
            if hits.size:
                return int(hits[0])
            if self.tail == "zero":
                return len(tab)
            raise ProfileError("inverse undefined: held tail never drops below u")
        # The closed form is exact up to float rounding; bisect the bracket
        # around it so extreme magnitudes cannot degrade to a linear scan.
        hi = max(int(guess), 0) + 1
        while self.theta(hi) > u:
            hi *= 2
        lo = 0
        while lo < hi:
            mid = (lo + hi) // 2
            if self.theta(mid) <= u:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def spec(self) -> str:
        """Round-trippable spec string (grammar shared with the CLI)."""
        if self.kind == "iid":
            return "iid"
        if self.kind == "m_dependent":
            return f"mdep:m={int(self.m)}"
        if self.kind == "polynomial":
            return f"poly:m={self.m:g}"
        if self.kind == "exponential":
            return f"expo:l={self.l:g}"
        return f"table:<{len(self.table)} values>,tail={self.tail}"


def iid_profile() -> MixingProfile:
    return MixingProfile("iid")


def m_dependent_profile(m: int) -> MixingProfile:
    return MixingProfile("m_dependent", m=m)


def polynomial_profile(m: float) -> MixingProfile:
    return MixingProfile("polynomial", m=m)


def exponential_profile(l: float) -> MixingProfile:
    return MixingProfile("exponential", l=l)


def tabulated_profile(values: Sequence[float], tail: str = "zero") -> MixingProfile:
    return MixingProfile("tabulated", table=tuple(float(v) for v in values), tail=tail)


def monotone_envelope(raw: Sequence[float], tail: str = "zero") -> MixingProfile:
    """Smallest non-increasing majorant of a raw coefficient table.

    Maps q to ``max_{q' >= q} raw(q')`` (running maximum from the right,
    with a zero tail contributing nothing).  The first entry must already
    equal 1 so the result is a valid profile.
    """
    arr = np.asarray(raw, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ProfileError("need a non-empty 1-d value list")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ProfileError("values must lie in [0, 1]")
    env = np.maximum.accumulate(arr[::-1])[::-1]
    if env[0] != 1.0:
        raise ProfileError("envelope must start at 1 (theta(0) convention)")
    return tabulated_profile(env, tail=tail)


def parse_profile(text: str) -> MixingProfile:
    """Parse the CLI grammar: iid | mdep:m=<int> | poly:m=<float> |
    expo:l=<float> | table:<csv path>[,tail=zero|hold]."""
    text = text.strip()
    if text == "iid":
        return iid_profile()
    head, _, rest = text.partition(":")
    if head == "mdep":
        kv = _parse_kv(rest)
        return m_dependent_profile(int(kv["m"]))
    if head == "poly":
        kv = _parse_kv(rest)
        return polynomial_profile(float(kv["m"]))
    if head == "expo":
        kv = _parse_kv(rest)
        return exponential_profile(float(kv["l"]))
    if head == "table":
        parts = rest.split(",")
        path = parts[0]
        tail = "zero"
        for p in parts[1:]:
            k, _, v = p.partition("=")
            if k.strip() == "tail":
                tail = v.strip()
        values = np.loadtxt(path, delimiter=",", ndmin=1)
        return tabulated_profile(np.atleast_1d(values), tail=tail)
    raise ProfileError(f"cannot parse profile spec {text!r}")


def _parse_kv(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for part in text.split(","):
        if not part:
            continue
        k, _, v = part.partition("=")
        out[k.strip()] = v.strip()
    return out


# -- empirical estimators ------------------------------------------------


@dataclass(frozen=True)
class MixingEstimate:
    """One Monte Carlo mixing-coefficient estimate at a single lag."""

    q: int
    value: float
    std_error: float
    method: str

    def __post_init__(self) -> None:
        if self.value < 0 or self.std_error < 0:
            raise ValueError("estimate and standard error must be >= 0")


def estimate_alpha(path, q: int, thresholds=None) -> MixingEstimate:
    """Empirical weak dependence coefficient at lag q from one path.

    Maximizes ``|P(X_t >= t0, X_{t-q} >= s0) - P(X_t >= t0) P(X_{t-q} >= s0)|``
    over a finite threshold grid (default: empirical deciles), using every
    lag-q pair in the path.  Replication across independent paths, and hence
    a non-trivial standard error, is the caller's responsibility.
    """
    x = np.asarray(path, dtype=float).ravel()
    if x.size <= q + 1:
        raise ValueError(f"path of length {x.size} too short for lag {q}")
    if thresholds is None:
        thresholds = np.quantile(x, np.linspace(0.1, 0.9, 9))
    t = np.asarray(thresholds, dtype=float).ravel()
    if t.size == 0:
        raise ValueError("threshold grid must be non-empty")
    early = x[:-q] if q > 0 else x
    late = x[q:] if q > 0 else x
    n_pairs = early.size
    a = (late[:, None] >= t[None, :]).astype(float)   # events on X_t
    b = (early[:, None] >= t[None, :]).astype(float)  # events on X_{t-q}
    joint = a.T @ b / n_pairs
    gap = np.abs(joint - np.outer(a.mean(axis=0), b.mean(axis=0)))
    return MixingEstimate(q=q, value=float(gap.max()), std_error=0.0,
                          method="alpha_empirical")


def estimate_tau(model, members, q: int, outer_reps: int, inner_reps: int,
                 seed: int, normalize: bool = True) -> MixingEstimate:
    """Nested Monte Carlo estimate of the conditional-vs-marginal gap.

    Estimates ``E[ sup_f | E[f(X_q) | X_0] - E f | ]`` for a finite family of
    test functions over a Markov model: the outer loop draws starting states
    from the stationary law, the inner loop propagates q steps to estimate
    each conditional mean.  With ``normalize=True`` members are divided by
    the family's sup envelope so the estimate refers to the unit-bounded
    cone; this requires every member to carry a finite sup bound.
    """
    if not model.is_markov:
        raise ValueError(f"model kind {model.kind!r} is not Markov; tau estimation unsupported")
    if inner_reps < 2:
        raise ValueError("inner_reps must be >= 2 for variance control")
    if outer_reps < 1:
        raise ValueError("outer_reps must be >= 1")
    members = list(members)
    scale = 1.0
    if normalize:
        sups = [mem.sup_bound for mem in members]
        if any(s is None or not np.isfinite(s) for s in sups):
            raise ValueError("normalization needs finite sup bounds on every member")
        scale = max(float(s) for s in sups)
        if scale == 0.0:
            return MixingEstimate(q=q, value=0.0, std_error=0.0, method="tau_nested_mc")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x7A11]))
    starts = model.stationary_sample(outer_reps, rng)            # (outer,)
    states = np.repeat(starts, inner_reps)                        # (outer*inner,)
    for _ in range(q):
        innov = model.draw_innovations(states.size, rng)
        states = model.step(states, innov)
    gaps = np.empty(outer_reps)
    per_member = np.empty((len(members), outer_reps))
    for i, mem in enumerate(members):
        vals = mem.func(states).reshape(outer_reps, inner_reps)
        per_member[i] = vals.mean(axis=1) - mem.mean
    np.max(np.abs(per_member), axis=0, out=gaps)
    gaps /= scale
    value = float(gaps.mean())
    se = float(gaps.std(ddof=1) / math.sqrt(outer_reps)) if outer_reps > 1 else 0.0
    return MixingEstimate(q=q, value=value, std_error=se, method="tau_nested_mc")
