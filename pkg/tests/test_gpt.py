import numpy as np
import pytest

from realism import (
    born_probabilities,
    dephase,
    qubit_axis_measurement,
    random_rank1_measurement,
    random_state,
    realism_check_quantum,
)
from realism.errors import DomainError
from realism.gpt import (
    ClassicalTheory,
    PhysicalProperty,
    certifying_family,
    classical_backend,
    mix,
    post_unrevealed_distribution,
    quantum_backend,
    realism_criterion,
)

from conftest import plus_x, realist_state

XY = (PhysicalProperty("X", ("x1", "x2")), PhysicalProperty("Y", ("y1", "y2")))


def test_property_validation():
    with pytest.raises(DomainError):
        PhysicalProperty("A", ("a",))
    with pytest.raises(DomainError):
        PhysicalProperty("A", ("a", "a"))


def test_classical_marginals_and_realism():
    theory, state = classical_backend(XY, [0.4, 0.1, 0.2, 0.3])
    assert theory.probabilities(state, "X")[0] == pytest.approx(0.5)
    assert theory.probabilities(state, "Y")[0] == pytest.approx(0.6)
    assert realism_criterion(state, "Y", ["X"]).realist
    assert realism_criterion(state, "X", ["Y"]).realist


def test_classical_product_conditionals_independent():
    p, q = np.array([0.3, 0.7]), np.array([0.8, 0.2])
    theory, state = classical_backend(XY, np.outer(p, q))
    for j in range(2):
        np.testing.assert_allclose(theory.probabilities(theory.update(state, "Y", j), "X"), p)


def test_classical_three_properties(rng):
    props = XY + (PhysicalProperty("Z", (0, 1, 2)),)
    theory = ClassicalTheory(props)
    table = rng.dirichlet(np.ones(12)).reshape(2, 2, 3)
    state = theory.state(table)
    np.testing.assert_allclose(post_unrevealed_distribution(state, "Z", "X"),
                               table.sum(axis=(0, 1)), atol=1e-14)
    assert realism_criterion(state, "Z", ["X", "Y"]).realist


def test_classical_rejects_bad_tables():
    theory = ClassicalTheory(XY)
    with pytest.raises(DomainError, match="sums"):
        theory.state([0.4, 0.1, 0.2, 0.2])
    with pytest.raises(DomainError):
        theory.state([0.5, 0.5])
    with pytest.raises(DomainError):
        theory.state([1.2, -0.2, 0, 0])


def test_classical_zero_probability_branch_skipped():
    theory, state = classical_backend(XY, [0.5, 0.0, 0.5, 0.0])
    with pytest.raises(DomainError):
        theory.update(state, "Y", 1)
    np.testing.assert_allclose(post_unrevealed_distribution(state, "X", "Y"), [0.5, 0.5])


def test_quantum_backend_matches_born(rng):
    meas = random_rank1_measurement(3, seed=rng)
    theory = quantum_backend({"X": meas})
    rho = random_state(3, seed=rng)
    np.testing.assert_array_equal(theory.probabilities(theory.state(rho), "X"),
                                  born_probabilities(rho, meas))


def test_quantum_post_unrevealed_examples(z_meas, x_meas):
    theory = quantum_backend({"Z": z_meas, "X": x_meas})
    state = theory.state(plus_x())
    np.testing.assert_allclose(post_unrevealed_distribution(state, "X", "Z"), [0.5, 0.5],
                               atol=1e-15)
    zero = theory.state(np.diag([1.0, 0.0]))
    np.testing.assert_allclose(post_unrevealed_distribution(zero, "Z", "Z"), [1, 0])


def test_quantum_plus_x_matches_dephased_born(rng, z_meas):
    probes = {f"p{k}": random_rank1_measurement(2, seed=rng) for k in range(50)}
    theory = quantum_backend({"Z": z_meas, **probes})
    state = theory.state(plus_x())
    for name, meas in probes.items():
        np.testing.assert_allclose(post_unrevealed_distribution(state, name, "Z"),
                                   born_probabilities(np.eye(2) / 2, meas), atol=1e-12)


def test_quantum_criterion_examples(z_meas, x_meas):
    theory = quantum_backend({"Z": z_meas, "X": x_meas})
    verdict = realism_criterion(theory.state(plus_x()), "Z", ["X"])
    assert not verdict.realist
    assert verdict.worst_residual == pytest.approx(0.5)
    assert verdict.worst_property == "X"
    assert realism_criterion(theory.state(np.eye(2) / 2), "Z", ["X"]).realist


@pytest.mark.parametrize("d", [2, 3])
def test_certifying_family_matches_matrix_check(rng, d):
    family = certifying_family(d)
    assert len(family) == d * d - 1
    for _ in range(10):
        meas = random_rank1_measurement(d, seed=rng)
        theory = quantum_backend({"Y": meas, **family})
        for rho in (random_state(d, seed=rng), realist_state(rng, meas)):
            verdict = realism_criterion(theory.state(rho), "Y", list(family), tol=1e-10)
            assert verdict.realist == realism_check_quantum(rho, meas, 1e-10).realist


def test_mix_weights_one_zero(rng):
    theory, a = classical_backend(XY, rng.dirichlet(np.ones(4)))
    b = theory.state(rng.dirichlet(np.ones(4)))
    m = mix([1.0, 0.0], [a, b])
    for prop in ("X", "Y"):
        np.testing.assert_allclose(theory.probabilities(m, prop), theory.probabilities(a, prop))
    np.testing.assert_allclose(mix([0.25, 0.75], [a, b]).payload,
                               0.25 * a.payload + 0.75 * b.payload)


def test_mix_of_realist_quantum_states_is_realist(rng):
    meas = random_rank1_measurement(3, seed=rng)
    family = certifying_family(3)
    theory = quantum_backend({"Y": meas, **family})
    s1, s2 = (theory.state(realist_state(rng, meas)) for _ in range(2))
    lam = rng.uniform()
    m = mix([1 - lam, lam], [s1, s2])
    assert realism_criterion(m, "Y", list(family), tol=1e-10).realist


def test_mix_affinity_of_probabilities(rng):
    meas = random_rank1_measurement(2, seed=rng)
    theory = quantum_backend({"A": meas})
    a, b = (theory.state(random_state(2, seed=rng)) for _ in range(2))
    m = theory.mix([0.3, 0.7], [a, b])
    np.testing.assert_allclose(theory.probabilities(m, "A"),
                               0.3 * theory.probabilities(a, "A")
                               + 0.7 * theory.probabilities(b, "A"), atol=1e-14)


def test_errors(z_meas):
    theory = quantum_backend({"Z": z_meas})
    state = theory.state(np.eye(2) / 2)
    with pytest.raises(DomainError, match="not registered"):
        post_unrevealed_distribution(state, "X", "Z")
    with pytest.raises(DomainError):
        realism_criterion(state, "Z", [])
    other, cstate = classical_backend(XY, [0.25] * 4)
    with pytest.raises(DomainError):
        mix([0.5, 0.5], [state, cstate])
    zero = theory.state(np.diag([1.0, 0.0]))
    with pytest.raises(DomainError):
        theory.update(zero, "Z", 1)
    with pytest.raises(DomainError):
        quantum_backend({"Z": z_meas, "W": random_rank1_measurement(3, seed=0)})


def test_update_does_not_mutate(z_meas):
    theory = quantum_backend({"Z": z_meas})
    state = theory.state(plus_x())
    before = state.payload.matrix.copy()
    theory.update(state, "Z", 0)
    np.testing.assert_array_equal(state.payload.matrix, before)


def test_quantum_dephase_bridge(rng):
    meas_y, meas_x = (random_rank1_measurement(3, seed=rng) for _ in range(2))
    theory = quantum_backend({"Y": meas_y, "X": meas_x})
    rho = random_state(3, seed=rng)
    np.testing.assert_allclose(post_unrevealed_distribution(theory.state(rho), "X", "Y"),
                               born_probabilities(dephase(rho, meas_y), meas_x), atol=1e-12)


def test_qubit_axis_property_names():
    theory = quantum_backend({"Sz": qubit_axis_measurement([0, 0, 1])})
    assert theory.properties["Sz"].outcomes == (0, 1)
