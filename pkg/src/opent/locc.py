"""One-sided local operations, pure-state conversion criteria, and monotonicity checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .decompositions import Ensemble, average_schmidt_vector
from .monotones import MonotoneSpec
from .optimizer import SolverConfig, minimize_ef
from .states import DensityMatrix, PureState, as_density, majorizes, schmidt_decompose

COMPLETENESS_TOL = 1e-10
BRANCH_CUTOFF = 1e-12
SOLVER_SLACK = 5e-3
SAME_STATE_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class LocalChannel:
    """Kraus operators ``{M_k}`` acting on party ``side`` (``"A"`` or ``"B"``)."""

    side: str
    kraus: np.ndarray

    def __post_init__(self):
        if self.side not in ("A", "B"):
            raise ValueError(f"side must be 'A' or 'B', got {self.side!r}")
        k = np.asarray(self.kraus, dtype=complex)
        if k.ndim != 3 or k.shape[1] != k.shape[2]:
            raise ValueError(f"kraus must have shape (n, d, d), got {k.shape}")
        err = np.abs(np.einsum("kji,kjl->il", k.conj(), k) - np.eye(k.shape[1])).max()
        if err > COMPLETENESS_TOL:
            raise ValueError(f"Kraus operators are not complete (max deviation {err:.3g})")
        object.__setattr__(self, "kraus", k)

    @property
    def dim(self) -> int:
        return self.kraus.shape[1]

    def full_operators(self, dims) -> np.ndarray:
        da, db = dims
        if self.dim != (da if self.side == "A" else db):
            raise ValueError(f"channel on side {self.side} of dimension {self.dim} does not fit dims {tuple(dims)}")
        if self.side == "A":
            return np.stack([np.kron(m, np.eye(db)) for m in self.kraus])
        return np.stack([np.kron(np.eye(da), m) for m in self.kraus])


def identity_channel(dim: int, side: str = "A") -> LocalChannel:
    return LocalChannel(side, np.eye(dim)[None])


def projective_measurement(dim: int, side: str = "A") -> LocalChannel:
    """Computational-basis measurement ``{|i><i|}``."""
    return LocalChannel(side, np.stack([np.diag(np.eye(dim)[i]) for i in range(dim)]))


def random_local_channel(dim: int, n_kraus: int, side: str = "A", seed=None) -> LocalChannel:
    """Random Gaussian blocks ``G_k`` normalized as ``M_k = G_k S^{-1/2}``, ``S = sum G_k^dag G_k``."""
    if n_kraus < 1:
        raise ValueError("n_kraus must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n_kraus, dim, dim)) + 1j * rng.standard_normal((n_kraus, dim, dim))
    gram = np.einsum("kji,kjl->il", g.conj(), g)
    w, u = np.linalg.eigh(gram)
    inv_sqrt = (u / np.sqrt(w)) @ u.conj().T
    return LocalChannel(side, g @ inv_sqrt)


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def apply_channel(rho, ch: LocalChannel) -> DensityMatrix:
    """Non-selective output ``sum_k M_k rho M_k^dag``."""
    rho = as_density(rho)
    ops = ch.full_operators(rho.dims)
    out = sum(m @ rho.matrix @ m.conj().T for m in ops)
    return DensityMatrix(rho.dims, _hermitize(out))


def apply_channel_branches(rho, ch: LocalChannel) -> list[tuple[float, DensityMatrix]]:
    """Branches ``(p_k, M_k rho M_k^dag / p_k)``; branches with ``p_k < 1e-12`` are dropped."""
    rho = as_density(rho)
    unnorm = [m @ rho.matrix @ m.conj().T for m in ch.full_operators(rho.dims)]
    probs = np.array([np.trace(u).real for u in unnorm])
    probs = probs / probs.sum()
    return [(float(p), DensityMatrix(rho.dims, _hermitize(u) / np.trace(u).real))
            for p, u in zip(probs, unnorm) if p >= BRANCH_CUTOFF]


def nielsen_convertible(phi: PureState, psi: PureState) -> bool:
    """Whether ``phi`` converts to ``psi`` by LOCC: ``lambda(psi)`` majorizes ``lambda(phi)``."""
    if tuple(phi.dims) != tuple(psi.dims):
        raise ValueError("states live on different spaces")
    return majorizes(schmidt_decompose(psi), schmidt_decompose(phi))


def pure_to_ensemble_convertible(phi: PureState, e: Ensemble) -> bool:
    """Whether ``phi`` converts to the ensemble ``e``: its average Schmidt vector majorizes ``lambda(phi)``."""
    if tuple(phi.dims) != tuple(e.dims):
        raise ValueError("state and ensemble live on different spaces")
    return majorizes(average_schmidt_vector(e), schmidt_decompose(phi))


@dataclass
class MonotonicityReport:
    lhs: float
    rhs: float
    slack: float
    branches: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.lhs + self.slack >= self.rhs

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
                "passed": self.passed, "branches": self.branches}


def _same(a: DensityMatrix, b: DensityMatrix) -> bool:
    return bool(np.abs(a.matrix - b.matrix).max() <= SAME_STATE_TOL)


def strong_monotonicity_check(rho, spec: MonotoneSpec, ch: LocalChannel,
                              cfg: SolverConfig | None = None, slack: float = SOLVER_SLACK) -> MonotonicityReport:
    """Compare the value on ``rho`` with the branch average ``sum_k p_k E(rho_k)``.

    Both sides are solver estimates with the same config; ``slack`` absorbs
    their noise.  A branch equal to ``rho`` (within 1e-13) reuses the left-hand solve.
    """
    cfg = cfg or SolverConfig()
    rho = as_density(rho)
    lhs = minimize_ef(rho, spec, cfg).value
    rhs = 0.0
    branches = []
    for p, rk in apply_channel_branches(rho, ch):
        val = lhs if _same(rk, rho) else minimize_ef(rk, spec, cfg).value
        rhs += p * val
        branches.append({"p": p, "value": val})
    return MonotonicityReport(lhs, rhs, slack, branches)


def monotonicity_check(rho, spec: MonotoneSpec, ch: LocalChannel,
                       cfg: SolverConfig | None = None, slack: float = SOLVER_SLACK) -> MonotonicityReport:
    """Compare the value on ``rho`` with the value on the non-selective channel output."""
    cfg = cfg or SolverConfig()
    rho = as_density(rho)
    out = apply_channel(rho, ch)
    lhs = minimize_ef(rho, spec, cfg).value
    rhs = lhs if _same(out, rho) else minimize_ef(out, spec, cfg).value
    return MonotonicityReport(lhs, rhs, slack, [{"p": 1.0, "value": rhs}])
