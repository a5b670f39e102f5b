import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realism import (
    DensityMatrix,
    ProjectiveMeasurement,
    bloch_to_density,
    born_probabilities,
    computational_measurement,
    density_to_bloch,
    measurement_bloch_frame,
    probability_distribution,
    qubit_state,
    random_rank1_measurement,
    random_state,
    su_generators,
)
from realism.errors import DomainError, InvalidStateError
from realism.states import bloch_to_matrix

from conftest import PAULI_X, PAULI_Y, PAULI_Z


def test_qubit_generators_are_paulis():
    basis = su_generators(2)
    assert basis.scale == 1.0
    np.testing.assert_array_equal(basis.generators, [PAULI_X, PAULI_Y, PAULI_Z])


def test_qutrit_generator_count_and_scale():
    basis = su_generators(3)
    assert len(basis.generators) == 8
    assert basis.scale == pytest.approx(np.sqrt(3), abs=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_generators_hermitian_traceless_orthonormal(d):
    g = su_generators(d).generators
    assert len(g) == d * d - 1
    assert np.max(np.abs(g - g.conj().transpose(0, 2, 1))) <= 1e-12
    assert np.max(np.abs(np.trace(g, axis1=1, axis2=2))) <= 1e-12
    gram = np.einsum("aij,bji->ab", g, g)
    np.testing.assert_allclose(gram, 2 * np.eye(d * d - 1), atol=1e-10)


def test_generators_reject_small_dim():
    with pytest.raises(DomainError):
        su_generators(1)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_trace_identity(rng, d):
    g = su_generators(d).generators
    for _ in range(10):
        r1, r2 = rng.standard_normal((2, d * d - 1))
        a, b = np.einsum("k,kij->ij", r1, g), np.einsum("k,kij->ij", r2, g)
        assert abs(np.trace(a @ b) - 2 * r1 @ r2) <= 1e-10


def test_bloch_of_maximally_mixed_is_zero():
    for d in (2, 3, 4):
        np.testing.assert_allclose(density_to_bloch(np.eye(d) / d), 0, atol=1e-15)


def test_bloch_of_plus_x():
    np.testing.assert_allclose(density_to_bloch((np.eye(2) + PAULI_X) / 2), [1, 0, 0])


def test_bloch_round_trip_qutrit(rng):
    basis = su_generators(3)
    for _ in range(10):
        rho = random_state(3, seed=rng)
        back = bloch_to_density(density_to_bloch(rho, basis), basis)
        assert np.max(np.abs(back.matrix - rho.matrix)) <= 1e-10


def test_bloch_to_density_known_points():
    np.testing.assert_allclose(bloch_to_density(np.zeros(3), su_generators(2)).matrix,
                               np.eye(2) / 2)
    np.testing.assert_allclose(qubit_state([0, 0, 1]).matrix, np.diag([1, 0]))


def test_qutrit_unit_vector_outside_state_body():
    basis = su_generators(3)
    r = np.zeros(8)
    r[-1] = 1.0
    # oracle: eigenvalues of the reconstructed matrix
    assert np.linalg.eigvalsh(bloch_to_matrix(r, basis))[0] < -1e-10
    with pytest.raises(InvalidStateError):
        bloch_to_density(r, basis)
    # the opposite unit vector is a pure state
    assert bloch_to_density(-r, basis).purity() == pytest.approx(1.0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3))
def test_qubit_ball_is_state_body(v):
    v = np.array(v)
    if np.linalg.norm(v) > 1:
        v = v / np.linalg.norm(v)
    rho = qubit_state(v)
    np.testing.assert_allclose(density_to_bloch(rho), v, atol=1e-12)


def test_density_matrix_rejects_bad_trace():
    with pytest.raises(InvalidStateError) as err:
        DensityMatrix(np.diag([0.5, 0.4]))
    assert err.value.invariant == "trace"


def test_density_matrix_rejects_negative():
    with pytest.raises(InvalidStateError) as err:
        DensityMatrix(np.diag([1.1, -0.1]))
    assert err.value.invariant == "positivity"


def test_density_matrix_is_read_only():
    rho = DensityMatrix(np.eye(2) / 2)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1


def test_born_maximally_mixed(rng):
    p = born_probabilities(np.eye(2) / 2, random_rank1_measurement(2, seed=rng))
    np.testing.assert_allclose(p, [0.5, 0.5], atol=1e-12)


def test_born_computational(z_meas):
    np.testing.assert_array_equal(born_probabilities(np.diag([1.0, 0.0]), z_meas), [1, 0])


def test_born_bloch_oracle(z_meas):
    r = np.array([0.6, 0.0, 0.8])
    n = np.array([0.0, 0.0, 1.0])
    expected = [(1 + n @ r) / 2, (1 - n @ r) / 2]
    np.testing.assert_allclose(born_probabilities(qubit_state(r), z_meas), expected, atol=1e-15)
    np.testing.assert_allclose(expected, [0.9, 0.1])


def test_born_dimension_mismatch(z_meas):
    with pytest.raises(DomainError):
        born_probabilities(np.eye(3) / 3, z_meas)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_born_is_distribution(rng, d):
    for _ in range(20):
        p = born_probabilities(random_state(d, seed=rng), random_rank1_measurement(d, seed=rng))
        assert np.all(p >= 0) and abs(p.sum() - 1) <= 1e-10


def test_probability_distribution_clamps_noise():
    p = probability_distribution([1 + 5e-13, -5e-13])
    assert p[1] == 0.0 and p.sum() == 1.0
    with pytest.raises(DomainError):
        probability_distribution([0.7, 0.2])
    with pytest.raises(DomainError):
        probability_distribution([1.1, -0.1])


def test_frame_qubit_z(z_meas):
    np.testing.assert_allclose(measurement_bloch_frame(z_meas), [[0, 0, 1], [0, 0, -1]],
                               atol=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_frame_relations(rng, d):
    for meas in (computational_measurement(d), random_rank1_measurement(d, seed=rng)):
        x = measurement_bloch_frame(meas)
        assert np.max(np.abs(x.sum(axis=0))) <= 1e-10
        np.testing.assert_allclose(x @ x.T, (d * np.eye(d) - 1) / (d - 1), atol=1e-10)


def test_frame_qutrit_mutual_overlap():
    x = measurement_bloch_frame(computational_measurement(3))
    assert x[0] @ x[1] == pytest.approx(-0.5, abs=1e-12)


def test_frame_rejects_degenerate():
    meas = ProjectiveMeasurement([np.diag([1, 1, 0]), np.diag([0, 0, 1])])
    with pytest.raises(DomainError, match="degenerate"):
        measurement_bloch_frame(meas)


@pytest.mark.parametrize("bad, invariant", [
    ([np.diag([2, 0]), np.diag([0, 1])], "idempotent"),
    ([np.diag([1, 0]), np.full((2, 2), 0.5)], "orthogonality"),
    ([np.diag([1, 0, 0]), np.diag([0, 1, 0])], "completeness"),
])
def test_measurement_validation_names_invariant(bad, invariant):
    with pytest.raises(DomainError) as err:
        ProjectiveMeasurement(bad)
    assert err.value.invariant == invariant


def test_random_state_reproducible_and_ranked():
    a, b = random_state(4, seed=7), random_state(4, seed=7)
    np.testing.assert_array_equal(a.matrix, b.matrix)
    assert np.linalg.eigvalsh(a.matrix)[0] > 1e-8
    assert random_state(3, rank=1, seed=3).purity() == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(DomainError):
        random_state(3, rank=4)


def test_random_measurement_invariants():
    for seed in range(10):
        meas = random_rank1_measurement(3, seed=seed)
        ProjectiveMeasurement(meas.projectors)  # revalidates
        assert meas.is_rank1
