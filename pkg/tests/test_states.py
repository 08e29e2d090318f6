import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opent.states import (
    DensityMatrix,
    InvalidStateError,
    PureState,
    apply_local_unitary,
    eigendecompose,
    is_schmidt_vector,
    majorizes,
    product_state,
    pure_from_schmidt,
    random_density,
    random_local_unitary,
    random_pure,
    schmidt_decompose,
    schmidt_spectra,
)

SQ2 = 1 / np.sqrt(2)


def prob_vectors(n):
    return st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n).filter(lambda v: sum(v) > 1e-3).map(
        lambda v: np.sort(np.array(v) / sum(v))[::-1]
    )


def test_schmidt_bell():
    psi = PureState((2, 2), [SQ2, 0, 0, SQ2])
    np.testing.assert_allclose(schmidt_decompose(psi), [0.5, 0.5], atol=1e-12)


def test_schmidt_product():
    np.testing.assert_allclose(schmidt_decompose(product_state((2, 2), 0, 1)), [1, 0], atol=1e-12)


def test_schmidt_diagonal():
    psi = PureState((2, 2), [np.sqrt(0.7), 0, 0, np.sqrt(0.3)])
    np.testing.assert_allclose(schmidt_decompose(psi), [0.7, 0.3], atol=1e-12)


def test_schmidt_sums_to_one_exactly():
    lam = schmidt_decompose(random_pure((3, 4), seed=3))
    assert lam.sum() == pytest.approx(1.0, abs=1e-15)
    assert lam.size == 3


def test_pure_state_dimension_mismatch():
    with pytest.raises(InvalidStateError, match="dimension mismatch"):
        PureState((2, 2), [1, 0, 0])


def test_pure_state_renormalizes_small_error_only():
    psi = PureState((1, 2), [1 + 1e-9, 0])
    assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(InvalidStateError, match="squared norm"):
        PureState((1, 2), [np.sqrt(0.9), 0])


def test_density_matrix_rejects_bad_input():
    with pytest.raises(InvalidStateError, match="Hermitian"):
        DensityMatrix((1, 2), [[0.5, 0.1], [0.0, 0.5]])
    with pytest.raises(InvalidStateError, match="trace"):
        DensityMatrix((1, 2), np.eye(2))
    with pytest.raises(InvalidStateError, match="positive semidefinite"):
        DensityMatrix((1, 2), [[1.5, 0], [0, -0.5]])


def test_states_are_immutable():
    psi = random_pure((2, 2), seed=0)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0


@pytest.mark.parametrize(
    "x, y, expected",
    [
        ((1, 0), (0.5, 0.5), True),
        ((0.5, 0.3, 0.2), (0.6, 0.4, 0), False),
        ((0.6, 0.2, 0.2), (0.5, 0.5, 0), False),
        ((0.5, 0.5, 0), (0.6, 0.2, 0.2), False),
        ((0.7, 0.3), (0.7, 0.3, 0.0), True),
    ],
)
def test_majorizes_examples(x, y, expected):
    assert majorizes(x, y) is expected


@settings(max_examples=200, deadline=None)
@given(prob_vectors(4))
def test_majorization_reflexive(x):
    assert majorizes(x, x)


@settings(max_examples=200, deadline=None)
@given(prob_vectors(4), prob_vectors(4), prob_vectors(4))
def test_majorization_transitive(x, y, z):
    if majorizes(x, y) and majorizes(y, z):
        assert majorizes(x, z)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8).flatmap(prob_vectors))
def test_uniform_is_majorized_by_everything(x):
    assert majorizes(x, np.full(x.size, 1 / x.size))


def test_eigendecompose_examples():
    assert eigendecompose(product_state((2, 2), 0, 1).projector()).rank == 1
    spec = eigendecompose(DensityMatrix((2, 2), np.eye(4) / 4))
    assert spec.rank == 4
    np.testing.assert_allclose(spec.values, [0.25] * 4, atol=1e-14)
    phi = np.zeros(9)
    phi[[0, 4]] = SQ2
    t33 = np.zeros(9)
    t33[8] = 1
    rho = DensityMatrix((3, 3), 0.5 * np.outer(phi, phi) + 0.5 * np.outer(t33, t33))
    spec = eigendecompose(rho)
    assert spec.rank == 2
    np.testing.assert_allclose(spec.values, [0.5, 0.5], atol=1e-14)


@pytest.mark.parametrize("dims, rank", [((2, 2), 1), ((2, 2), 3), ((2, 3), 6), ((3, 3), 2), ((3, 4), 12)])
def test_eigendecompose_reconstructs(dims, rank):
    rho = random_density(dims, rank, seed=11)
    spec = eigendecompose(rho)
    assert spec.rank == rank
    assert np.all(np.diff(spec.values) <= 0)
    assert np.abs(spec.reconstruct() - rho.matrix).max() <= 1e-8


def test_random_fixtures_are_deterministic():
    np.testing.assert_array_equal(random_pure((2, 2), 5).amplitudes, random_pure((2, 2), 5).amplitudes)
    np.testing.assert_array_equal(random_density((2, 3), 2, 5).matrix, random_density((2, 3), 2, 5).matrix)
    assert eigendecompose(random_density((2, 2), 1, 5)).rank == 1
    u, v = random_local_unitary((2, 3), seed=5)
    assert np.abs(u.conj().T @ u - np.eye(2)).max() < 1e-10
    assert np.abs(v.conj().T @ v - np.eye(3)).max() < 1e-10
    with pytest.raises(ValueError):
        random_density((2, 2), 5)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(2, 2), (2, 3), (3, 3), (4, 2)]))
def test_schmidt_local_unitary_invariance(seed, dims):
    psi = random_pure(dims, seed)
    u, v = random_local_unitary(dims, seed + 1)
    np.testing.assert_allclose(schmidt_decompose(apply_local_unitary(psi, u, v)), schmidt_decompose(psi), atol=1e-8)


@pytest.mark.parametrize("dims", [(1, 4), (2, 2), (2, 5), (5, 2), (3, 3), (3, 4)])
def test_schmidt_spectra_matches_svd(dims):
    rng = np.random.default_rng(0)
    n = dims[0] * dims[1]
    rows = rng.standard_normal((7, 3, n)) + 1j * rng.standard_normal((7, 3, n))
    got = schmidt_spectra(rows, dims)
    ref = np.linalg.svd(rows.reshape(7, 3, *dims), compute_uv=False) ** 2
    np.testing.assert_allclose(got, ref, rtol=1e-10, atol=1e-12)


def test_schmidt_spectra_small_root_accuracy():
    eps = 1e-9
    psi = np.array([np.sqrt(1 - eps), 0, 0, np.sqrt(eps)])
    assert schmidt_spectra(psi, (2, 2))[1] == pytest.approx(eps, rel=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_ensemble_average_is_schmidt_vector(seed, n):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(n))
    lam = sum(pk * schmidt_decompose(random_pure((3, 3), rng)) for pk in p)
    assert is_schmidt_vector(lam)


def test_pure_from_schmidt_roundtrip():
    lam = np.array([0.6, 0.3, 0.1])
    np.testing.assert_allclose(schmidt_decompose(pure_from_schmidt((3, 4), lam)), lam, atol=1e-12)
    with pytest.raises(InvalidStateError):
        pure_from_schmidt((2, 2), lam)
