"""Reference values used to check the optimizer.

* Wootters' closed form for the two-qubit concurrence.
* The 3x3 family ``eta |phi0><phi0| + (1 - eta) |33><33|`` with
  ``|phi0> = c1 |11> + c2 |22>``, whose optimal Schmidt vector is known exactly.
* A plain sampling estimator over random isometries, with no local refinement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decompositions import default_cardinality, spectral_rows
from .monotones import MonotoneSpec, check_domain, eval_pure
from .states import DensityMatrix, as_density, eigendecompose

_SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def wootters_concurrence(rho) -> float:
    """``max(0, nu1 - nu2 - nu3 - nu4)`` with ``nu`` the square roots of the
    eigenvalues of ``rho rho~``, ``rho~ = (Y x Y) rho* (Y x Y)``.

    With ``rho = A A^dag`` over its support, the ``nu`` are the singular values
    of ``A^T (Y x Y) A``, which avoids square roots of near-zero eigenvalues.
    """
    rho = as_density(rho)
    if tuple(rho.dims) != (2, 2):
        raise ValueError(f"Wootters concurrence needs dims (2, 2), got {rho.dims}")
    spec = eigendecompose(rho)
    a = spec.vectors * np.sqrt(spec.values)
    nu = np.sort(np.linalg.svd(a.T @ _SIGMA_YY @ a, compute_uv=False))[::-1]
    return float(max(0.0, nu[0] - nu[1:].sum()))


@dataclass(frozen=True)
class Theorem4Params:
    """Parameters of ``eta |phi0><phi0| + (1 - eta) |33><33|``, ``|phi0> = c1|11> + c2|22>``."""

    eta: float
    c1: complex
    c2: complex

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        norm = abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"|c1|^2 + |c2|^2 = {norm}, expected 1")

    @classmethod
    def from_c1sq(cls, eta: float, c1sq: float) -> "Theorem4Params":
        if not 0.0 <= c1sq <= 1.0:
            raise ValueError(f"|c1|^2 must lie in [0, 1], got {c1sq}")
        return cls(eta, np.sqrt(c1sq), np.sqrt(1.0 - c1sq))

    def phi0(self) -> np.ndarray:
        amp = np.zeros(9, dtype=complex)
        amp[0], amp[4] = self.c1, self.c2
        return amp


def theorem4_state(params: Theorem4Params) -> DensityMatrix:
    phi = params.phi0()
    t33 = np.zeros(9, dtype=complex)
    t33[8] = 1.0
    rho = params.eta * np.outer(phi, phi.conj()) + (1.0 - params.eta) * np.outer(t33, t33)
    return DensityMatrix((3, 3), rho)


def theorem4_vector(params: Theorem4Params) -> np.ndarray:
    """Optimal Schmidt vector ``eta lambda(phi0) + (1 - eta) (1, 0, 0)``, sorted."""
    hi, lo = sorted([abs(params.c1) ** 2, abs(params.c2) ** 2], reverse=True)
    return np.sort(np.array([params.eta * hi + 1.0 - params.eta, params.eta * lo, 0.0]))[::-1]


def theorem4_value(params: Theorem4Params, spec: MonotoneSpec) -> float:
    return eval_pure(spec, theorem4_vector(params))


def brute_force_ef(rho, spec: MonotoneSpec, budget: int = 10_000, seed=None,
                   cardinality: int | None = None, chunk: int = 4096) -> float:
    """Minimum of ``f(average Schmidt vector)`` over the spectral ensemble and
    ``budget`` Haar-random isometries.  No local refinement."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rho = as_density(rho)
    check_domain(spec, rho.dims)
    spectral = eigendecompose(rho)
    r = spectral.rank
    m = default_cardinality(r) if cardinality is None else cardinality
    rows = spectral_rows(spectral)
    da, db = rho.dims
    rng = np.random.default_rng(seed)

    def values(vs):
        tilde = (vs @ rows).reshape(vs.shape[0], m, da, db)
        sv2 = np.linalg.svd(tilde, compute_uv=False) ** 2
        return spec(sv2.sum(axis=1))

    ident = np.zeros((1, m, r), dtype=complex)
    ident[0, :r, :r] = np.eye(r)
    best = float(values(ident)[0])
    done = 0
    while done < budget:
        n = min(chunk, budget - done)
        z = rng.standard_normal((n, m, r)) + 1j * rng.standard_normal((n, m, r))
        q, tri = np.linalg.qr(z)
        d = np.diagonal(tri, axis1=-2, axis2=-1)
        vs = q * (d / np.abs(d))[:, None, :]
        best = min(best, float(values(vs).min()))
        done += n
    return best
