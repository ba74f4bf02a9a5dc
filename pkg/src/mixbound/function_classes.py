"""Built-in finite test-function families with exact stationary means.

Members carry callables for path evaluation plus the metadata the moment
and coupling machinery needs (mean, sup bound, Lipschitz constant).  Means
are analytic for the Gaussian-marginal models; a discretized view over the
marginal quantile grid feeds the partition-complexity code.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import norm as _norm

from .chaining import FunctionClass
from .processes import ProcessModel


@dataclass(frozen=True)
class ClassMember:
    name: str
    func: Callable[[np.ndarray], np.ndarray]
    mean: float | None
    sup_bound: float | None = None
    lipschitz: float | None = None


@dataclass(frozen=True)
class ProcessClass:
    """A finite family of test functions tied to one model's marginal."""

    name: str
    members: tuple[ClassMember, ...]

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def sup_envelope(self) -> float | None:
        sups = [m.sup_bound for m in self.members]
        if any(s is None for s in sups):
            return None
        return max(float(s) for s in sups)

    def tabulate(self, model: ProcessModel, points: int = 2001) -> FunctionClass:
        """Evaluate the members on a quantile grid of the marginal law.

        The grid carries uniform weights at mid-quantile abscissae, so the
        discrete view converges to the marginal as ``points`` grows.
        """
        sd = model.marginal_sd()
        u = (np.arange(points) + 0.5) / points
        xs = sd * _norm.ppf(u)
        table = np.stack([m.func(xs) for m in self.members])
        weights = np.full(points, 1.0 / points)
        sups = [m.sup_bound for m in self.members]
        lips = [m.lipschitz for m in self.members]
        return FunctionClass(
            table=table, weights=weights,
            names=tuple(m.name for m in self.members),
            sup_bound=None if any(s is None for s in sups) else max(sups),
            lipschitz=None if any(l is None for l in lips) else max(lips),
        )


def _gaussian_means(model: ProcessModel) -> dict[str, float]:
    sd = model.marginal_sd()
    return {
        "identity": 0.0,
        "negated": 0.0,
        "sine": 0.0,
        "tanh": 0.0,
        "witch": 0.0,
        "cosine": math.exp(-0.5 * sd * sd),
        "absval": sd * math.sqrt(2.0 / math.pi),
        "sign_centered": 0.0,
    }


_MEMBER_DEFS: dict[str, tuple[Callable, float | None, float | None]] = {
    # name -> (callable, sup bound, Lipschitz constant)
    "identity": (lambda x: x, None, 1.0),
    "negated": (lambda x: -x, None, 1.0),
    "sine": (np.sin, 1.0, 1.0),
    "tanh": (np.tanh, 1.0, 1.0),
    "witch": (lambda x: x / (1.0 + x * x), 0.5, 1.0),
    "cosine": (np.cos, 1.0, 1.0),
    "absval": (np.abs, None, 1.0),
    "sign_centered": (lambda x: np.where(x > 0, 0.5, -0.5), 0.5, None),
}

_CATALOG: dict[str, tuple[str, ...]] = {
    "identity": ("identity",),
    "halfpair": ("identity", "negated"),
    "lipschitz4": ("sine", "tanh", "witch", "cosine"),
    "lipschitz5": ("sine", "tanh", "witch", "cosine", "absval"),
    "indicator": ("sign_centered",),
}


def catalog_names() -> tuple[str, ...]:
    return tuple(sorted(_CATALOG))


def make_class(name: str, model: ProcessModel) -> ProcessClass:
    """Instantiate a built-in family with means exact for ``model``.

    Only the Gaussian-marginal kinds have analytic means; for the renewal
    chain build a custom class with Monte Carlo means instead.
    """
    if name not in _CATALOG:
        raise KeyError(f"unknown class {name!r}; available: {', '.join(catalog_names())}")
    if model.kind == "lazy_renewal":
        raise ValueError("built-in means are analytic for Gaussian marginals only")
    means = _gaussian_means(model)
    members = tuple(
        ClassMember(name=m, func=_MEMBER_DEFS[m][0], mean=means[m],
                    sup_bound=_MEMBER_DEFS[m][1], lipschitz=_MEMBER_DEFS[m][2])
        for m in _CATALOG[name]
    )
    return ProcessClass(name=name, members=members)


def mc_means(members, model: ProcessModel, draws: int = 10**7,
             seed: int = 0) -> tuple[ClassMember, ...]:
    """Replace member means by a high-precision stationary Monte Carlo pass."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0xAEA5]))
    if model.kind == "ma":
        sample = model.sample_blocks(max(1, draws // 10**4), 10**4, rng).ravel()
    else:
        sample = model.stationary_sample(draws, rng)
    return tuple(
        ClassMember(name=m.name, func=m.func, mean=float(m.func(sample).mean()),
                    sup_bound=m.sup_bound, lipschitz=m.lipschitz)
        for m in members
    )
