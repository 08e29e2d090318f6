import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opent.monotones import (
    AVG_E,
    BUILTIN,
    CONCURRENCE,
    ENTROPY,
    MonotoneDomainError,
    check_schur_concavity,
    custom_monotone,
    eval_pure,
    get_monotone,
)

# expected values computed with math.log directly
ENTROPY_75_25 = 0.5623351446188083
AVG_E_70_30 = 0.4158883083359672


def avg_e_reference(lam):
    """Plain loop over sum_{n=2}^{d} n (lam_n - lam_{n+1}) ln n."""
    lam = sorted(lam, reverse=True) + [0.0]
    return sum(n * (lam[n - 1] - lam[n]) * math.log(n) for n in range(2, len(lam)))


def test_avg_e_uniform_three():
    assert eval_pure(AVG_E, [1 / 3] * 3) == pytest.approx(math.log(3), abs=1e-12)


def test_avg_e_example():
    assert avg_e_reference([0.7, 0.3, 0.0]) == pytest.approx(AVG_E_70_30, abs=1e-15)
    assert eval_pure(AVG_E, [0.7, 0.3, 0.0]) == pytest.approx(AVG_E_70_30, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 7), st.integers(0, 10**6))
def test_avg_e_matches_reference_loop(d, seed):
    lam = np.random.default_rng(seed).dirichlet(np.ones(d))
    assert eval_pure(AVG_E, lam) == pytest.approx(avg_e_reference(list(lam)), abs=1e-12)


def test_entropy_example():
    assert eval_pure(ENTROPY, [0.75, 0.25]) == pytest.approx(ENTROPY_75_25, abs=1e-12)


def test_concurrence_examples():
    assert eval_pure(CONCURRENCE, [0.5, 0.5]) == pytest.approx(1.0)
    assert eval_pure(CONCURRENCE, [0.5, 0.5, 0.0]) == pytest.approx(1.0)
    with pytest.raises(MonotoneDomainError):
        eval_pure(CONCURRENCE, [0.5, 0.3, 0.2])


@pytest.mark.parametrize("d", range(2, 9))
def test_avg_e_uniform_is_log_d(d):
    assert eval_pure(AVG_E, np.full(d, 1 / d)) == pytest.approx(math.log(d), abs=1e-12)


@pytest.mark.parametrize("name", sorted(BUILTIN))
@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_zero_on_product(name, d):
    lam = np.zeros(d)
    lam[0] = 1
    assert eval_pure(BUILTIN[name], lam) == 0.0


@pytest.mark.parametrize("name", sorted(BUILTIN))
def test_zero_padding_invariance(name):
    lam = np.array([0.8, 0.2])
    spec = BUILTIN[name]
    assert eval_pure(spec, np.r_[lam, 0, 0, 0]) == pytest.approx(eval_pure(spec, lam), abs=1e-14)


def test_permutation_symmetry():
    assert eval_pure(ENTROPY, [0.1, 0.6, 0.3]) == eval_pure(ENTROPY, [0.6, 0.3, 0.1])


def test_eval_rejects_non_probability():
    with pytest.raises(MonotoneDomainError):
        eval_pure(ENTROPY, [0.5, 0.6])


@pytest.mark.parametrize("name", sorted(BUILTIN))
def test_schur_concavity_builtin(name):
    report = check_schur_concavity(BUILTIN[name], 1000, seed=7)
    assert report.ok, report.violations[:3]


def test_schur_concavity_flags_schur_convex_spec():
    broken = custom_monotone("largest", lambda lam: lam[0])
    report = check_schur_concavity(broken, 1000, seed=7)
    assert len(report.violations) > 0


def test_custom_vectorized_and_rowwise_agree():
    rowwise = custom_monotone("tail", lambda lam: 1 - lam[0], is_linear=True)
    vec = custom_monotone("tail", lambda lam: 1 - lam[..., 0], is_linear=True, vectorized=True)
    lam = np.random.default_rng(0).dirichlet(np.ones(3), size=(4, 5))
    np.testing.assert_allclose(rowwise(lam), vec(lam))


def test_registry_names():
    assert get_monotone("avg_e") is AVG_E
    assert get_monotone("avg_E") is AVG_E
    assert get_monotone("concurrence_pure") is CONCURRENCE
    assert AVG_E.is_linear and not ENTROPY.is_linear
    with pytest.raises(KeyError):
        get_monotone("negativity")
