import numpy as np
import pytest

from qutrit_channels.dynamics import prepare_sigma
from qutrit_channels.matcore import DimensionError
from qutrit_channels.states import (
    InvalidStateError,
    SigmaFamily,
    embed,
    is_ppt_separable,
    make_sigma,
    partial_transpose,
    random_sigma,
    random_state,
    random_unitary,
    validate,
    validate_density,
)


def test_validate_maximally_mixed():
    np.testing.assert_array_equal(validate(np.eye(3) / 3), np.eye(3) / 3)


def test_validate_rejects_bad_trace():
    with pytest.raises(InvalidStateError, match="trace"):
        validate(np.diag([0.5, 0.5, 0.5]))


def test_unit_trace_with_negative_entry_is_rejected():
    # trace is 1 here, so positivity is what fails
    with pytest.raises(InvalidStateError, match="negative eigenvalue"):
        validate(np.diag([1.0, 1.0, -1.0]))


def test_validate_rejects_negative_eigenvalue():
    with pytest.raises(InvalidStateError, match="negative eigenvalue"):
        validate(np.diag([0.7, 0.5, -0.2]))


def test_validate_rejects_non_hermitian_and_wrong_shape():
    m = np.eye(3) / 3
    m = m.astype(complex)
    m[0, 1] = 0.1
    with pytest.raises(InvalidStateError, match="Hermitian"):
        validate(m)
    with pytest.raises(InvalidStateError):
        validate(np.eye(2) / 2)


@pytest.mark.parametrize("seed", range(30))
def test_random_states_are_valid(seed):
    rho = random_state(3, seed)
    validate(rho)
    assert np.linalg.eigvalsh(rho)[0] >= 0


@pytest.mark.parametrize("dim", [2, 3, 4, 6])
def test_random_unitary_is_unitary(dim):
    u = random_unitary(dim, 11)
    assert np.max(np.abs(u.conj().T @ u - np.eye(dim))) <= 1e-12


def test_random_sampling_is_deterministic():
    np.testing.assert_array_equal(random_state(3, 5), random_state(3, 5))
    np.testing.assert_array_equal(random_unitary(3, 5), random_unitary(3, 5))
    assert not np.array_equal(random_state(3, 5), random_state(3, 6))


def test_random_sampling_rejects_unsupported_dim():
    with pytest.raises(DimensionError):
        random_state(5, 0)


def test_haar_trace_moments():
    # For Haar U(n): E[tr U] = 0 and E[|tr U|^2] = 1.
    rng = np.random.default_rng(0)
    tr = np.array([np.trace(random_unitary(3, rng)) for _ in range(20000)])
    assert abs(tr.mean()) < 0.03
    assert abs(np.mean(np.abs(tr) ** 2) - 1) < 0.05


def test_make_sigma_s4_from_block():
    s = make_sigma("S4", [[0.5, 0.2], [0.2, 0.5]])
    expected = np.array([[0.5, 0.2, 0], [0.2, 0.5, 0], [0, 0, 0]])
    np.testing.assert_array_equal(s, expected)


@pytest.mark.parametrize("kind,level", [("S5", 1), ("S6", 0)])
def test_make_sigma_block_placement(kind, level):
    s = make_sigma(kind, [[0.6, 0.1j], [-0.1j, 0.4]])
    assert np.all(s[level, :] == 0) and np.all(s[:, level] == 0)


def test_make_sigma_rejects_forced_entry():
    rho = np.array([[0.4, 0.1, 0.0], [0.1, 0.3, 0.05], [0.0, 0.05, 0.3]])
    with pytest.raises(InvalidStateError):
        make_sigma("S1", rho)


@pytest.mark.parametrize("family", list(SigmaFamily))
def test_random_sigma_members(family):
    for seed in range(20):
        rho = random_sigma(family, seed)
        validate(rho)
        assert family.residual(rho) == 0.0


def test_family_metadata():
    assert SigmaFamily.S1.zero_coherence == (1, 2)
    assert SigmaFamily.S2.zero_coherence == (0, 1)
    assert SigmaFamily.S3.zero_coherence == (0, 2)
    assert [SigmaFamily(f"S{i}").empty_level for i in (4, 5, 6)] == [2, 1, 0]


def test_make_sigma_accepts_v_fixed_point():
    prep = prepare_sigma("v")
    s = make_sigma("S5", prep.state)
    np.testing.assert_allclose(s, prep.state, atol=0)


def test_embed_maximally_mixed():
    e = embed(np.eye(3) / 3, 4)
    np.testing.assert_array_equal(e.rho4, np.diag([1 / 3, 1 / 3, 1 / 3, 0]))


@pytest.mark.parametrize("zero_index", [1, 2, 3, 4])
def test_embed_shape_and_trace(zero_index):
    rho = random_state(3, zero_index)
    e = embed(rho, zero_index)
    z = zero_index - 1
    assert np.all(e.rho4[z, :] == 0) and np.all(e.rho4[:, z] == 0)
    assert abs(np.trace(e.rho4) - 1) < 1e-15


def test_embed_rejects_bad_index():
    with pytest.raises(ValueError):
        embed(np.eye(3) / 3, 0)


def test_partial_transpose_by_explicit_indices():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    pt = partial_transpose(m)
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for d in range(2):
                    assert pt[2 * a + b, 2 * c + d] == m[2 * a + d, 2 * c + b]


def test_product_state_is_separable():
    e = embed(np.diag([1.0, 0, 0]), 4)
    rep = is_ppt_separable(e)
    assert rep and rep.spectra_equal


@pytest.mark.parametrize("seed", range(30))
def test_vanishing_r23_is_separable_with_equal_spectra(seed):
    rep = is_ppt_separable(embed(random_sigma("S1", seed), 4))
    assert rep.separable
    assert rep.min_pt_eigenvalue >= -1e-10
    assert rep.spectra_equal


def test_r23_sweep_reports_entanglement():
    # Coherence between |01> and |10> is the only one that can entangle.
    mins = []
    for c in np.linspace(0.0, 0.3, 7):
        rho = np.array([[0.4, 0, 0], [0, 0.3, c], [0, c, 0.3]], dtype=complex)
        rep = is_ppt_separable(embed(rho, 4))
        direct = np.linalg.eigvalsh(partial_transpose(embed(rho, 4).rho4))[0]
        assert rep.min_pt_eigenvalue == pytest.approx(direct, abs=1e-12)
        mins.append(rep.min_pt_eigenvalue)
    assert mins[0] >= 0
    assert mins[-1] < 0
    assert all(b <= a + 1e-15 for a, b in zip(mins, mins[1:]))


def test_validate_density_qubit():
    validate_density(np.eye(2) / 2, 2)
    with pytest.raises(InvalidStateError):
        validate_density(np.eye(3) / 3, 2)
