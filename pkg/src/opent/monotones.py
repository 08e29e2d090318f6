"""Pure-state entanglement monotones as symmetric concave functions of the Schmidt vector.

Every monotone here evaluates on Schmidt vectors sorted in decreasing order.
The evaluation functions are vectorized over leading axes: they take an array
of shape ``(..., d)`` and return shape ``(...)``.  Logarithms are natural.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import entr

from .states import PROB_TOL, is_schmidt_vector

SCHUR_SLACK = 1e-9


class MonotoneDomainError(ValueError):
    """Raised when a Schmidt vector lies outside a monotone's domain."""


@dataclass(frozen=True)
class MonotoneSpec:
    """A pure-state monotone ``F(psi) = f(lambda(psi))``.

    Attributes
    ----------
    name : str
    func : callable
        Vectorized ``f`` acting on sorted vectors, shape ``(..., d) -> (...)``.
    is_linear : bool
        True iff ``f`` is affine in the sorted vector.
    max_schmidt_rank : int or None
        Largest Schmidt rank on which ``f`` is defined; ``None`` for no limit.
    """

    name: str
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    is_linear: bool = False
    max_schmidt_rank: int | None = None

    def __call__(self, lam) -> np.ndarray:
        return self.func(np.asarray(lam, dtype=float))


def _entropy(lam: np.ndarray) -> np.ndarray:
    return entr(np.clip(lam, 0.0, None)).sum(axis=-1)


def _concurrence(lam: np.ndarray) -> np.ndarray:
    if lam.shape[-1] < 2:
        return np.zeros(lam.shape[:-1])
    return 2.0 * np.sqrt(np.clip(lam[..., 0] * lam[..., 1], 0.0, None))


def _avg_e(lam: np.ndarray) -> np.ndarray:
    # sum_{n=2}^{d} n (lam_n - lam_{n+1}) ln n with lam_{d+1} = 0
    d = lam.shape[-1]
    if d < 2:
        return np.zeros(lam.shape[:-1])
    nxt = np.concatenate([lam[..., 2:], np.zeros(lam.shape[:-1] + (1,))], axis=-1)
    n = np.arange(2, d + 1)
    return np.sum((lam[..., 1:] - nxt) * (n * np.log(n)), axis=-1)


ENTROPY = MonotoneSpec("entropy", _entropy)
CONCURRENCE = MonotoneSpec("concurrence", _concurrence, max_schmidt_rank=2)
AVG_E = MonotoneSpec("avg_e", _avg_e, is_linear=True)

BUILTIN = {spec.name: spec for spec in (ENTROPY, CONCURRENCE, AVG_E)}
_ALIASES = {"concurrence_pure": "concurrence", "avg_E": "avg_e"}


def get_monotone(name: str) -> MonotoneSpec:
    key = _ALIASES.get(name, name)
    try:
        return BUILTIN[key]
    except KeyError:
        known = ", ".join(sorted(BUILTIN))
        raise KeyError(f"unknown monotone {name!r} (known: {known})") from None


def custom_monotone(name: str, f: Callable, is_linear: bool = False, vectorized: bool = False) -> MonotoneSpec:
    """Wrap a user function of a sorted probability vector as a :class:`MonotoneSpec`.

    Non-vectorized functions are applied row by row.
    """
    if vectorized:
        func = f
    else:
        def func(lam):
            lam = np.asarray(lam, dtype=float)
            flat = lam.reshape(-1, lam.shape[-1])
            out = np.array([float(f(row)) for row in flat])
            return out.reshape(lam.shape[:-1])
    return MonotoneSpec(name, func, is_linear=is_linear)


def eval_pure(spec: MonotoneSpec, lam) -> float:
    """Evaluate ``F`` on a Schmidt vector (sorted internally)."""
    lam = np.sort(np.asarray(lam, dtype=float))[::-1]
    if not is_schmidt_vector(lam):
        raise MonotoneDomainError(f"not a probability vector: {lam}")
    r = spec.max_schmidt_rank
    if r is not None:
        if np.any(lam[r:] > PROB_TOL):
            raise MonotoneDomainError(
                f"{spec.name} is defined only up to Schmidt rank {r}, got {lam}"
            )
        lam = lam[:r]
    return float(spec(lam))


def check_domain(spec: MonotoneSpec, dims) -> None:
    """Raise if states on ``dims`` can leave the monotone's domain."""
    r = spec.max_schmidt_rank
    if r is not None and min(dims) > r:
        raise MonotoneDomainError(f"{spec.name} needs min(dA, dB) <= {r}, got dims {tuple(dims)}")


@dataclass
class SchurReport:
    spec: str
    n_samples: int
    dim: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_schur_concavity(spec: MonotoneSpec, n_samples: int = 1000, seed=None, dim: int | None = None) -> SchurReport:
    """Sampled test that ``x ≻ y`` implies ``f(x) <= f(y) + 1e-9``.

    ``y`` is a random convex mixture of permutations of ``x`` (a doubly
    stochastic image), so ``x`` majorizes ``y`` by construction.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    if dim is None:
        dim = spec.max_schmidt_rank or 4
    report = SchurReport(spec.name, n_samples, dim)
    for _ in range(n_samples):
        # sparse Dirichlet draws put mass near the simplex boundary too
        x = rng.dirichlet(np.full(dim, rng.choice([0.2, 1.0, 5.0])))
        n_perm = int(rng.integers(1, 5))
        w = rng.dirichlet(np.ones(n_perm))
        y = sum(wk * x[rng.permutation(dim)] for wk in w)
        xs, ys = np.sort(x)[::-1], np.sort(y)[::-1]
        fx, fy = float(spec(xs)), float(spec(ys))
        if fx > fy + SCHUR_SLACK:
            report.violations.append({"x": xs.tolist(), "y": ys.tolist(), "fx": fx, "fy": fy})
    return report
