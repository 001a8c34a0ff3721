import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qutrit_channels.realizations import realization_catalog, rotation, verify_realization
from qutrit_channels.states import InvalidStateError, make_sigma, random_state
from qutrit_channels.tomography import (
    BlochConstraintError,
    ProbabilityTriple,
    coin_shannon,
    coin_tsallis,
    evolved_entropy,
    from_probabilities,
    probability_evolution,
    to_probabilities,
)


def spin_up_probability(q, axis):
    """Born probability of +1/2 along a Pauli axis."""
    pauli = {
        "x": np.array([[0, 1], [1, 0]]),
        "y": np.array([[0, -1j], [1j, 0]]),
        "z": np.array([[1, 0], [0, -1]]),
    }[axis]
    return float(np.real(np.trace(q @ (np.eye(2) + pauli) / 2)))


def test_maximally_mixed_triple():
    assert to_probabilities(np.eye(2) / 2) == (0.5, 0.5, 0.5)


def test_ground_state_triple():
    assert to_probabilities(np.diag([1.0, 0.0])) == (0.5, 0.5, 1.0)


@pytest.mark.parametrize("seed", range(20))
def test_triple_is_spin_projection(seed):
    q = random_state(2, seed)
    t = to_probabilities(q)
    assert t.p1 == pytest.approx(spin_up_probability(q, "x"), abs=1e-15)
    assert t.p2 == pytest.approx(spin_up_probability(q, "y"), abs=1e-15)
    assert t.p3 == pytest.approx(spin_up_probability(q, "z"), abs=1e-15)


def test_round_trip_random_qubits():
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(1000):
        q = random_state(2, rng)
        worst = max(worst, np.max(np.abs(from_probabilities(to_probabilities(q)) - q)))
    assert worst <= 1e-14


@settings(max_examples=200, deadline=None)
@given(st.tuples(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1)))
def test_constraint_equivalent_to_positivity(t):
    inside = ProbabilityTriple(*t).bloch_excess() <= 0
    if inside:
        q = from_probabilities(t)
        assert np.linalg.eigvalsh(q)[0] >= -1e-12
    elif ProbabilityTriple(*t).bloch_excess() > 1e-9:
        with pytest.raises(BlochConstraintError):
            from_probabilities(t)


def test_corner_triple_rejected():
    with pytest.raises(BlochConstraintError):
        from_probabilities((1.0, 1.0, 1.0))
    with pytest.raises(BlochConstraintError):
        from_probabilities((1.2, 0.5, 0.5))


def test_to_probabilities_rejects_invalid_qubit():
    with pytest.raises(InvalidStateError):
        to_probabilities(np.diag([1.2, -0.2]))


def test_evolution_identity_and_full_decay():
    t = to_probabilities(random_state(2, 3))
    np.testing.assert_allclose(probability_evolution(t, 1.0), t, atol=1e-15)
    assert probability_evolution(t, 0.0) == (0.5, 0.5, 0.0)


def test_evolution_rejects_growing_scale():
    with pytest.raises(ValueError):
        probability_evolution((0.5, 0.5, 0.5), 1.1)


@pytest.mark.parametrize("theta", [0.2, 0.9, 1.4, 2.8])
def test_evolution_matches_sigma4_slot5_realization(theta):
    entry = next(e for e in realization_catalog("spon") if e.entry_id == "spon:U2-S4:rho5")
    rho = make_sigma("S4", [[0.7, 0.25 - 0.1j], [0.25 + 0.1j, 0.3]])
    exact = verify_realization(entry, rho, rotation(theta))["exact"]
    before = to_probabilities(np.array([[rho[0, 0], rho[0, 1]], [rho[1, 0], 1 - rho[0, 0]]]))
    np.testing.assert_allclose(probability_evolution(before, np.cos(theta)), to_probabilities(exact), atol=1e-14)


def test_shannon_values():
    assert coin_shannon(0.5) == pytest.approx(np.log(2), abs=1e-15)
    assert coin_shannon(0.0) == 0.0
    assert coin_shannon(1.0) == 0.0
    with pytest.raises(ValueError):
        coin_shannon(1.5)


def test_evolved_entropy_values():
    assert evolved_entropy(1.0, np.sqrt(0.5)) == pytest.approx(np.log(2), abs=1e-12)
    assert evolved_entropy(0.0, 0.3) == 0.0
    assert evolved_entropy(0.9, np.sqrt(0.5)) == pytest.approx(coin_shannon(0.45), abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(p=st.floats(0, 1), q=st.floats(0, 1), lam=st.floats(0, 1))
def test_shannon_concave(p, q, lam):
    mix = lam * p + (1 - lam) * q
    assert coin_shannon(mix) >= lam * coin_shannon(p) + (1 - lam) * coin_shannon(q) - 1e-12


def test_tsallis_values():
    assert coin_tsallis(0.5, 2) == pytest.approx(0.5)
    assert coin_tsallis(0.0, 2) == 0.0
    assert coin_tsallis(1.0, 3.5) == 0.0
    with pytest.raises(ValueError):
        coin_tsallis(0.3, 1)


def test_tsallis_shannon_limit():
    rng = np.random.default_rng(1)
    for p in rng.uniform(0, 1, 200):
        assert abs(coin_tsallis(p, 1.000001) - coin_shannon(p)) <= 1e-5
