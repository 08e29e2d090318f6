"""Bipartite state containers and the linear-algebra primitives built on them.

Schmidt vectors are stored as probabilities: for
``|psi> = sum_n sqrt(lam_n) |a_n>|b_n>`` the Schmidt vector is ``(lam_1, lam_2, ...)``
sorted in decreasing order, i.e. the squared singular values of the ``dA x dB``
reshaping of the amplitude vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-8
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
PROB_TOL = 1e-10
MAJORIZATION_SLACK = 1e-10
RANK_CUTOFF = 1e-12


class InvalidStateError(ValueError):
    """Raised when input data violates a state invariant."""


def _check_dims(dims) -> tuple[int, int]:
    try:
        da, db = (int(d) for d in dims)
    except (TypeError, ValueError):
        raise InvalidStateError(f"dims must be a pair of integers, got {dims!r}") from None
    if da < 1 or db < 1:
        raise InvalidStateError(f"dims must be positive, got {(da, db)}")
    return da, db


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector on a ``dA x dB`` space.

    Amplitudes whose squared norm is within ``1e-8`` of one are renormalized;
    anything further off raises :class:`InvalidStateError`.
    """

    dims: tuple[int, int]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amp.size != dims[0] * dims[1]:
            raise InvalidStateError(
                f"dimension mismatch: {amp.size} amplitudes for dims {dims}"
            )
        norm2 = float(np.vdot(amp, amp).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidStateError(f"squared norm {norm2:.10g} differs from 1 by more than {NORM_TOL}")
        amp = amp / np.sqrt(norm2)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", _frozen(amp))

    @property
    def dim(self) -> int:
        return self.dims[0] * self.dims[1]

    def matrix(self) -> np.ndarray:
        """Amplitudes reshaped to ``dA x dB``."""
        return self.amplitudes.reshape(self.dims)

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix on a ``dA x dB`` space."""

    dims: tuple[int, int]
    matrix: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        n = dims[0] * dims[1]
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (n, n):
            raise InvalidStateError(f"dimension mismatch: matrix shape {mat.shape} for dims {dims}")
        herm_err = np.abs(mat - mat.conj().T).max()
        if herm_err > HERMITIAN_TOL:
            raise InvalidStateError(f"matrix is not Hermitian (max deviation {herm_err:.3g})")
        mat = 0.5 * (mat + mat.conj().T)
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > NORM_TOL:
            raise InvalidStateError(f"trace {tr:.10g} differs from 1 by more than {NORM_TOL}")
        mat = mat / tr
        min_eig = float(np.linalg.eigvalsh(mat)[0])
        if min_eig < -PSD_TOL:
            raise InvalidStateError(f"matrix is not positive semidefinite (min eigenvalue {min_eig:.3g})")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", _frozen(mat))

    @property
    def dim(self) -> int:
        return self.dims[0] * self.dims[1]


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Eigenpairs of a density matrix above the rank cutoff, in descending order.

    ``vectors[:, j]`` is the eigenvector for ``values[j]``.
    """

    dims: tuple[int, int]
    values: np.ndarray
    vectors: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.values.size)

    def states(self) -> list[PureState]:
        return [PureState(self.dims, v) for v in self.vectors.T]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def as_density(state: PureState | DensityMatrix) -> DensityMatrix:
    if isinstance(state, PureState):
        return state.projector()
    return state


def _minor_pairs(n: int):
    return np.triu_indices(n, 1)


def schmidt_spectra(rows: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    """Sorted squared singular values of unnormalized bipartite vectors.

    Parameters
    ----------
    rows : ndarray, shape (..., dA*dB)
        Amplitude vectors; they need not be normalized. For a subnormalized
        vector ``sqrt(p) |psi>`` the result is ``p * lambda(psi)``.
    dims : (dA, dB)

    Returns
    -------
    ndarray, shape (..., min(dA, dB))
        Non-negative, non-increasing along the last axis.
    """
    da, db = dims
    rows = np.asarray(rows)
    m = rows.reshape(rows.shape[:-1] + (da, db))
    if da > db:
        m = np.swapaxes(m, -1, -2)
    k = min(da, db)
    if k == 1:
        return np.sum(np.abs(m) ** 2, axis=(-1, -2))[..., None]
    if k == 2:
        # closed form for the 2x2 Gram matrix; the small root is det / large root,
        # with det from the 2x2 minors (Cauchy-Binet) to avoid cancellation
        a, b = m[..., 0, :], m[..., 1, :]
        g00 = np.sum(a.real**2 + a.imag**2, axis=-1)
        g11 = np.sum(b.real**2 + b.imag**2, axis=-1)
        g01 = np.sum(a * b.conj(), axis=-1)
        off = g01.real**2 + g01.imag**2
        i, j = _minor_pairs(m.shape[-1])
        minors = a[..., i] * b[..., j] - a[..., j] * b[..., i]
        det = np.sum(minors.real**2 + minors.imag**2, axis=-1)
        big = 0.5 * (g00 + g11) + np.sqrt(0.25 * (g00 - g11) ** 2 + off)
        small = np.divide(det, big, out=np.zeros_like(big), where=big > 0)
        return np.stack([big, small], axis=-1)
    gram = m @ np.swapaxes(m.conj(), -1, -2)
    ev = np.linalg.eigvalsh(gram)[..., ::-1]
    return np.maximum(ev, 0.0)


def schmidt_decompose(psi: PureState) -> np.ndarray:
    """Schmidt vector of a pure state: squared Schmidt coefficients, descending, summing to 1."""
    if not isinstance(psi, PureState):
        raise TypeError("schmidt_decompose expects a PureState")
    sv = np.linalg.svd(psi.matrix(), compute_uv=False)
    lam = np.sort(sv**2)[::-1]
    return lam / lam.sum()


def is_schmidt_vector(x, tol: float = PROB_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(
        x.ndim == 1
        and x.size > 0
        and np.all(x >= -tol)
        and np.all(np.diff(x) <= tol)
        and abs(x.sum() - 1.0) <= tol
    )


def _pad(x: np.ndarray, n: int) -> np.ndarray:
    return np.concatenate([x, np.zeros(n - x.size)])


def majorizes(x, y, slack: float = MAJORIZATION_SLACK) -> bool:
    """True iff ``x`` majorizes ``y`` (``y ≺ x``).

    Both vectors are sorted in decreasing order and the shorter one is
    zero-padded before comparing partial sums.
    """
    x = np.sort(np.asarray(x, dtype=float))[::-1]
    y = np.sort(np.asarray(y, dtype=float))[::-1]
    n = max(x.size, y.size)
    x, y = _pad(x, n), _pad(y, n)
    return bool(np.all(np.cumsum(x) >= np.cumsum(y) - slack))


def eigendecompose(rho: DensityMatrix, cutoff: float = RANK_CUTOFF) -> SpectralData:
    if not isinstance(rho, DensityMatrix):
        raise TypeError("eigendecompose expects a DensityMatrix")
    w, v = np.linalg.eigh(rho.matrix)
    w, v = w[::-1], v[:, ::-1]
    keep = w > cutoff
    return SpectralData(rho.dims, _frozen(w[keep]), _frozen(v[:, keep]))


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_pure(dims, seed=None) -> PureState:
    dims = _check_dims(dims)
    rng = _rng(seed)
    n = dims[0] * dims[1]
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState(dims, z / np.linalg.norm(z))


def random_density(dims, rank: int | None = None, seed=None) -> DensityMatrix:
    """Random density matrix ``G G^dagger / tr`` with a complex Gaussian ``n x rank`` factor."""
    dims = _check_dims(dims)
    n = dims[0] * dims[1]
    rank = n if rank is None else int(rank)
    if not 1 <= rank <= n:
        raise ValueError(f"rank must be in [1, {n}], got {rank}")
    rng = _rng(seed)
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = g @ g.conj().T
    return DensityMatrix(dims, rho / np.trace(rho).real)


def random_local_unitary(dims, seed=None) -> tuple[np.ndarray, np.ndarray]:
    """Haar-random pair ``(U, V)`` acting on the A and B factors."""
    dims = _check_dims(dims)
    rng = _rng(seed)
    return haar_unitary(dims[0], rng), haar_unitary(dims[1], rng)


def apply_local_unitary(state: PureState | DensityMatrix, u: np.ndarray, v: np.ndarray):
    w = np.kron(u, v)
    if isinstance(state, PureState):
        return PureState(state.dims, w @ state.amplitudes)
    return DensityMatrix(state.dims, w @ state.matrix @ w.conj().T)


def product_state(dims, i: int, j: int) -> PureState:
    """Computational basis state ``|i>|j>`` (zero-based)."""
    dims = _check_dims(dims)
    amp = np.zeros(dims[0] * dims[1], dtype=complex)
    amp[i * dims[1] + j] = 1.0
    return PureState(dims, amp)


def pure_from_schmidt(dims, lam) -> PureState:
    """The state ``sum_n sqrt(lam_n) |n>|n>`` with the given Schmidt vector."""
    dims = _check_dims(dims)
    lam = np.asarray(lam, dtype=float)
    k = min(dims)
    if np.any(lam[k:] > PROB_TOL):
        raise InvalidStateError(f"Schmidt vector of length {lam.size} does not fit dims {dims}")
    lam = np.clip(lam[:k], 0.0, None)
    amp = np.zeros(dims, dtype=complex)
    idx = np.arange(lam.size)
    amp[idx, idx] = np.sqrt(lam / lam.sum())
    return PureState(dims, amp.reshape(-1))
