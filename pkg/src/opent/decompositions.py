"""Pure-state ensembles of a density matrix and their average Schmidt vectors.

Every ensemble of a rank-``r`` density matrix with ``m`` members arises from its
spectral decomposition through an ``m x r`` isometry ``V``::

    |psi~_i> = sum_j V_ij sqrt(mu_j) |e_j>,    p_i = <psi~_i|psi~_i>
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import (
    PROB_TOL,
    DensityMatrix,
    PureState,
    SpectralData,
    _frozen,
    haar_unitary,
    schmidt_decompose,
)

ISOMETRY_TOL = 1e-10
WEIGHT_CUTOFF = 1e-14
RECONSTRUCT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted pure states ``{p_i, |psi_i>}``; ``states[i]`` is a normalized amplitude vector
    (a list of :class:`PureState` is accepted too)."""

    dims: tuple[int, int]
    weights: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        s = self.states
        if not isinstance(s, np.ndarray):
            s = [x.amplitudes if isinstance(x, PureState) else x for x in s]
        s = np.asarray(s, dtype=complex)
        if s.ndim != 2 or s.shape[0] != w.size or s.shape[1] != self.dims[0] * self.dims[1]:
            raise ValueError(f"states of shape {s.shape} do not match {w.size} weights on dims {self.dims}")
        if np.any(w <= 0) or abs(w.sum() - 1.0) > PROB_TOL:
            raise ValueError("ensemble weights must be positive and sum to 1")
        norms = np.linalg.norm(s, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-8):
            raise ValueError("ensemble states must be normalized")
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "states", _frozen(s / norms[:, None]))

    def __len__(self) -> int:
        return self.weights.size

    def members(self) -> list[tuple[float, PureState]]:
        return [(float(p), PureState(self.dims, s)) for p, s in zip(self.weights, self.states)]

    def density(self) -> np.ndarray:
        return (self.states.T * self.weights) @ self.states.conj()


def check_isometry(v: np.ndarray, tol: float = ISOMETRY_TOL) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 2 or v.shape[0] < v.shape[1]:
        raise ValueError(f"isometry must be m x r with m >= r, got shape {v.shape}")
    err = np.abs(v.conj().T @ v - np.eye(v.shape[1])).max()
    if err > tol:
        raise ValueError(f"columns are not orthonormal (max deviation {err:.3g})")
    return v


def random_isometry(m: int, r: int, seed=None) -> np.ndarray:
    """First ``r`` columns of a Haar-random ``m x m`` unitary."""
    if m < r:
        raise ValueError(f"need m >= r, got m={m}, r={r}")
    return haar_unitary(m, np.random.default_rng(seed))[:, :r]


def spectral_rows(spec: SpectralData) -> np.ndarray:
    """Rows ``sqrt(mu_j) <e_j|`` transposed so that ``V @ rows`` gives unnormalized members."""
    return (spec.vectors * np.sqrt(spec.values)).T


def hjw_ensemble(spec: SpectralData, v) -> Ensemble:
    v = check_isometry(v)
    if v.shape[1] != spec.rank:
        raise ValueError(f"isometry has {v.shape[1]} columns but the spectrum has rank {spec.rank}")
    tilde = v @ spectral_rows(spec)
    p = np.sum(np.abs(tilde) ** 2, axis=1)
    keep = p >= WEIGHT_CUTOFF
    p, tilde = p[keep], tilde[keep]
    states = tilde / np.sqrt(p)[:, None]
    return Ensemble(spec.dims, p / p.sum(), states)


def spectral_ensemble(spec: SpectralData) -> Ensemble:
    return hjw_ensemble(spec, np.eye(spec.rank))


def average_schmidt_vector(e: Ensemble) -> np.ndarray:
    """``sum_i p_i lambda(psi_i)``; sums of sorted vectors stay sorted."""
    lam = sum(p * schmidt_decompose(psi) for p, psi in e.members())
    return lam / lam.sum()


def ensemble_reconstructs(e: Ensemble, rho: DensityMatrix, tol: float = RECONSTRUCT_TOL) -> bool:
    if tuple(e.dims) != tuple(rho.dims):
        return False
    return bool(np.abs(e.density() - rho.matrix).max() <= tol)


def default_cardinality(rank: int) -> int:
    return rank * rank
