import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opent.decompositions import Ensemble
from opent.locc import (
    LocalChannel,
    apply_channel,
    apply_channel_branches,
    identity_channel,
    monotonicity_check,
    nielsen_convertible,
    projective_measurement,
    pure_to_ensemble_convertible,
    random_local_channel,
    strong_monotonicity_check,
)
from opent.monotones import CONCURRENCE, ENTROPY
from opent.optimizer import SolverConfig
from opent.states import DensityMatrix, PureState, product_state, pure_from_schmidt, random_density

BELL = PureState((2, 2), np.array([1, 0, 0, 1]) / math.sqrt(2))
FAST = SolverConfig(restarts=8)


def completeness(ch):
    return np.einsum("kji,kjl->il", ch.kraus.conj(), ch.kraus)


@pytest.mark.parametrize("dim,n", [(2, 1), (2, 2), (3, 3), (4, 2)])
def test_random_channel_complete(dim, n):
    ch = random_local_channel(dim, n, "B", seed=dim * 10 + n)
    np.testing.assert_allclose(completeness(ch), np.eye(dim), atol=1e-10)


def test_single_kraus_is_unitary():
    u = random_local_channel(3, 1, seed=4).kraus[0]
    np.testing.assert_allclose(u @ u.conj().T, np.eye(3), atol=1e-10)


def test_channel_determinism():
    a = random_local_channel(2, 2, seed=8)
    b = random_local_channel(2, 2, seed=8)
    np.testing.assert_array_equal(a.kraus, b.kraus)


def test_channel_rejects_incomplete_and_bad_side():
    with pytest.raises(ValueError):
        LocalChannel("A", np.stack([np.eye(2), np.eye(2)]))
    with pytest.raises(ValueError):
        LocalChannel("C", np.eye(2)[None])
    with pytest.raises(ValueError):
        random_local_channel(2, 0)


def test_identity_branch():
    rho = random_density((2, 3), seed=1)
    (p, out), = apply_channel_branches(rho, identity_channel(2))
    assert p == 1.0
    np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-15)


def test_bell_measurement_branches():
    branches = apply_channel_branches(BELL, projective_measurement(2, "A"))
    assert len(branches) == 2
    for p, rk in branches:
        assert p == pytest.approx(0.5, abs=1e-12)
        w = np.linalg.eigvalsh(rk.matrix)
        assert w[-1] == pytest.approx(1.0, abs=1e-12)
        # pure product: reduced state on A is pure too
        red = np.einsum("ijkj->ik", rk.matrix.reshape(2, 2, 2, 2))
        assert np.linalg.eigvalsh(red)[-1] == pytest.approx(1.0, abs=1e-12)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_channel_branches(random_density((2, 3), seed=0), identity_channel(2, "B"))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(1, 4), side=st.sampled_from("AB"))
def test_branches_average_to_channel_output(seed, n, side):
    rho = random_density((2, 3), seed=seed)
    ch = random_local_channel(2 if side == "A" else 3, n, side, seed=seed + 1)
    branches = apply_channel_branches(rho, ch)
    assert sum(p for p, _ in branches) == pytest.approx(1.0, abs=1e-10)
    assert sum(p * np.trace(r.matrix).real for p, r in branches) == pytest.approx(1.0, abs=1e-10)
    mix = sum(p * r.matrix for p, r in branches)
    np.testing.assert_allclose(mix, apply_channel(rho, ch).matrix, atol=1e-10)


def test_nielsen_examples():
    assert nielsen_convertible(BELL, product_state((2, 2), 0, 0))
    assert nielsen_convertible(BELL, pure_from_schmidt((2, 2), [0.8, 0.2]))
    assert not nielsen_convertible(product_state((2, 2), 0, 0), BELL)
    assert nielsen_convertible(pure_from_schmidt((2, 2), [0.7, 0.3]), pure_from_schmidt((2, 2), [0.9, 0.1]))
    assert not nielsen_convertible(pure_from_schmidt((2, 2), [0.9, 0.1]), pure_from_schmidt((2, 2), [0.7, 0.3]))


def test_pure_to_ensemble_examples():
    members = [pure_from_schmidt((2, 2), [0.9, 0.1]), pure_from_schmidt((2, 2), [0.6, 0.4])]
    e = Ensemble((2, 2), np.array([0.5, 0.5]), members)
    assert pure_to_ensemble_convertible(pure_from_schmidt((2, 2), [0.75, 0.25]), e)
    assert pure_to_ensemble_convertible(BELL, e)
    assert not pure_to_ensemble_convertible(product_state((2, 2), 0, 0), Ensemble((2, 2), np.array([1.0]), [BELL]))


def test_strong_monotonicity_identity_exact():
    rho = random_density((2, 2), 2, seed=3)
    rep = strong_monotonicity_check(rho, CONCURRENCE, identity_channel(2), FAST)
    assert rep.lhs == rep.rhs
    assert rep.passed


def test_strong_monotonicity_bell_measurement():
    rep = strong_monotonicity_check(BELL, ENTROPY, projective_measurement(2), FAST)
    assert rep.rhs == pytest.approx(0.0, abs=1e-9)
    assert rep.lhs == pytest.approx(math.log(2), abs=1e-12)
    assert rep.passed
    assert rep.to_dict()["passed"] is True


@pytest.mark.parametrize("seed", range(3))
def test_deterministic_monotonicity(seed):
    rho = random_density((2, 2), 2, seed=seed)
    ch = random_local_channel(2, 2, "AB"[seed % 2], seed=seed)
    assert monotonicity_check(rho, CONCURRENCE, ch, FAST).passed


def test_report_flags_violation():
    from opent.locc import MonotonicityReport
    assert not MonotonicityReport(0.1, 0.2, 5e-3).passed
