import numpy as np
import pytest

from realism import computational_measurement, dephase, qubit_axis_measurement, random_state

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]])
PAULI_Z = np.diag([1.0, -1.0]).astype(complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def z_meas():
    return computational_measurement(2, (1.0, -1.0))


@pytest.fixture
def x_meas():
    return qubit_axis_measurement([1, 0, 0])


def plus_x():
    return np.full((2, 2), 0.5, dtype=complex)


def random_hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def realist_state(rng, meas):
    """Random state made dephasing-invariant for ``meas``."""
    return dephase(random_state(meas.dim, seed=rng), meas)


ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record an acceptance criterion outcome and fail the test when it does not hold."""

    def record(label, passed, detail=""):
        ACCEPTANCE.append((label, bool(passed), detail))
        print(f"{'PASS' if passed else 'FAIL'} {label}: {detail}")
        assert passed, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {label}: {detail}")
