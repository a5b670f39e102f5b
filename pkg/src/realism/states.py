"""Quantum states, projective measurements and the generalized Bloch picture.

Bloch vectors use the generalized Gell-Mann basis ``Lambda_i`` normalised to
``Tr(Lambda_i Lambda_j) = 2 delta_ij``::

    rho = (1 + C_d * r . Lambda) / d,    C_d = sqrt(d (d - 1) / 2)

Generators are ordered symmetric pairs first, then antisymmetric pairs, then
the diagonal family, so for ``d = 2`` they are the Pauli matrices x, y, z.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, InvalidStateError
from .linalg import HERMITIAN_TOL, PSD_TOL, as_square, eig_hermitian, is_hermitian

TRACE_TOL = 1e-10
PROJECTOR_TOL = 1e-10
PROB_CLAMP = 1e-12
PROB_DRIFT = 1e-10


def _frozen(a):
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix."""

    __slots__ = ("_matrix",)

    def __init__(self, matrix, validate=True):
        m = as_square(matrix)
        if validate:
            _validate_state_matrix(m)
        self._matrix = _frozen(0.5 * (m + m.conj().T))

    @property
    def matrix(self):
        return self._matrix

    @property
    def dim(self):
        return self._matrix.shape[0]

    def purity(self):
        return float(np.real(np.trace(self._matrix @ self._matrix)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._matrix, dtype=dtype)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


def _validate_state_matrix(m):
    if not is_hermitian(m, HERMITIAN_TOL):
        raise InvalidStateError("state matrix is not Hermitian", "hermitian")
    tr = np.trace(m)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"state trace is {tr.real:.12g}, expected 1", "trace")
    lam = eig_hermitian(m)[0][0]
    if lam < -PSD_TOL:
        raise InvalidStateError(
            f"state has negative eigenvalue {lam:.3e}; not a valid state", "positivity"
        )


def as_density(state):
    """Coerce a :class:`DensityMatrix` or array-like into a validated state."""
    if isinstance(state, DensityMatrix):
        return state
    return DensityMatrix(state)


class ProjectiveMeasurement:
    """Complete set of orthogonal projectors with real outcome labels.

    The observable is ``sum_i outcomes[i] * projectors[i]``. Outcome labels
    default to ``0, 1, ..., n - 1``.
    """

    __slots__ = ("projectors", "outcomes")

    def __init__(self, projectors, outcomes=None, validate=True):
        self.projectors = tuple(_frozen(as_square(p)) for p in projectors)
        if outcomes is None:
            outcomes = range(len(self.projectors))
        self.outcomes = tuple(float(x) for x in outcomes)
        if validate:
            self._validate()

    def _validate(self):
        projs = self.projectors
        if not projs:
            raise DomainError("measurement has no projectors", "nonempty")
        if len(self.outcomes) != len(projs):
            raise DomainError("number of outcomes differs from number of projectors", "outcomes")
        d = projs[0].shape[0]
        if any(p.shape != (d, d) for p in projs):
            raise DomainError("projectors have inconsistent shapes", "square")
        for i, p in enumerate(projs):
            if not is_hermitian(p, PROJECTOR_TOL):
                raise DomainError(f"projector {i} is not Hermitian", "hermitian")
            if np.max(np.abs(p @ p - p)) > PROJECTOR_TOL:
                raise DomainError(f"projector {i} is not idempotent", "idempotent")
        for i, p in enumerate(projs):
            for j in range(i + 1, len(projs)):
                if abs(np.trace(p @ projs[j])) > PROJECTOR_TOL:
                    raise DomainError(f"projectors {i} and {j} are not orthogonal", "orthogonality")
        if np.max(np.abs(sum(projs) - np.eye(d))) > PROJECTOR_TOL:
            raise DomainError("projectors do not sum to the identity", "completeness")

    @property
    def dim(self):
        return self.projectors[0].shape[0]

    @property
    def ranks(self):
        return tuple(int(round(np.trace(p).real)) for p in self.projectors)

    @property
    def is_rank1(self):
        return all(r == 1 for r in self.ranks)

    def observable(self):
        return sum(x * p for x, p in zip(self.outcomes, self.projectors))

    def __len__(self):
        return len(self.projectors)

    def __repr__(self):
        return f"ProjectiveMeasurement(dim={self.dim}, outcomes={self.outcomes})"


def measurement_from_unitary(u, outcomes=None):
    """Rank-1 measurement onto the columns of unitary ``u``."""
    u = as_square(u)
    return ProjectiveMeasurement([np.outer(c, c.conj()) for c in u.T], outcomes)


def computational_measurement(d, outcomes=None):
    return measurement_from_unitary(np.eye(d), outcomes)


def qubit_axis_measurement(axis):
    """Spin measurement along the Bloch direction ``axis`` with outcomes (+1, -1)."""
    n = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(n)
    if n.shape != (3,) or norm < 1e-12:
        raise DomainError("qubit axis must be a non-zero 3-vector", "axis")
    n = n / norm
    s = np.einsum("i,ijk->jk", n, su_generators(2).generators)
    eye = np.eye(2)
    return ProjectiveMeasurement([(eye + s) / 2, (eye - s) / 2], (1.0, -1.0))


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    dim: int
    generators: np.ndarray  # shape (d^2 - 1, d, d)
    scale: float


@lru_cache(maxsize=None)
def su_generators(d):
    """Generalized Gell-Mann matrices of SU(d) with ``Tr(Li Lj) = 2 delta_ij``."""
    d = int(d)
    if d < 2:
        raise DomainError(f"SU(d) generators need d >= 2, got {d}", "dimension")
    sym, anti, diag = [], [], []
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=np.complex128)
            s[j, k] = s[k, j] = 1
            sym.append(s)
            a = np.zeros((d, d), dtype=np.complex128)
            a[j, k] = -1j
            a[k, j] = 1j
            anti.append(a)
    for l in range(1, d):
        entries = [1.0] * l + [-float(l)] + [0.0] * (d - l - 1)
        diag.append(np.sqrt(2.0 / (l * (l + 1))) * np.diag(entries).astype(np.complex128))
    gens = np.array(sym + anti + diag)
    gens.setflags(write=False)
    return GeneratorBasis(d, gens, float(np.sqrt(d * (d - 1) / 2)))


def _basis_for(d, basis):
    if basis is None:
        return su_generators(d)
    if basis.dim != d:
        raise DomainError(f"basis dimension {basis.dim} does not match {d}", "dimension")
    return basis


def density_to_bloch(rho, basis=None):
    """Bloch vector ``r_i = d / (2 C_d) * Tr(rho Lambda_i)``.

    Accepts any Hermitian matrix of the right shape (projectors included).
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else as_square(rho)
    d = m.shape[0]
    b = _basis_for(d, basis)
    traces = np.einsum("ij,kji->k", m, b.generators)
    return d / (2 * b.scale) * traces.real


def bloch_to_matrix(r, basis):
    r = np.asarray(r, dtype=float)
    d = basis.dim
    if r.shape != (d * d - 1,):
        raise DomainError(
            f"Bloch vector has {r.size} components, expected {d * d - 1}", "dimension"
        )
    return (np.eye(d) + basis.scale * np.einsum("k,kij->ij", r, basis.generators)) / d


def bloch_to_density(r, basis):
    """State ``(1 + C_d r . Lambda) / d``.

    Raises:
        InvalidStateError: if ``r`` lies outside the state body.
    """
    return DensityMatrix(bloch_to_matrix(r, basis))


def qubit_state(bloch):
    """Qubit state with Pauli Bloch vector ``bloch``."""
    return bloch_to_density(bloch, su_generators(2))


def probability_distribution(values):
    """Validate, clamp and renormalise a finite probability vector."""
    p = np.asarray(values, dtype=float).ravel()
    if p.size == 0:
        raise DomainError("empty probability vector", "nonempty")
    if np.any(p < -PROB_CLAMP) or np.any(p > 1 + PROB_CLAMP):
        raise DomainError("probability entry outside [0, 1]", "range")
    p = np.clip(p, 0.0, 1.0)
    total = p.sum()
    if abs(total - 1.0) > PROB_DRIFT:
        raise DomainError(f"probabilities sum to {total:.12g}, expected 1", "normalization")
    return p / total


def _check_dims(rho, meas):
    if rho.dim != meas.dim:
        raise DomainError(
            f"state dimension {rho.dim} does not match measurement dimension {meas.dim}",
            "dimension",
        )


def born_probabilities(rho, measurement):
    """Outcome probabilities ``Tr(X_i rho)``."""
    rho = as_density(rho)
    _check_dims(rho, measurement)
    p = [np.real(np.vdot(x, rho.matrix)) for x in measurement.projectors]
    return probability_distribution(p)


def measurement_bloch_frame(measurement, basis=None):
    """Bloch vectors ``x_i`` of rank-1 projectors, ``X_i = (1 + C_d x_i . Lambda) / d``.

    Valid frames satisfy ``sum_i x_i = 0`` and
    ``x_i . x_j = (d delta_ij - 1) / (d - 1)``.
    """
    if not measurement.is_rank1:
        raise DomainError(
            "degenerate measurement unsupported in Bloch frame", "rank1"
        )
    basis = _basis_for(measurement.dim, basis)
    return np.array([density_to_bloch(p, basis) for p in measurement.projectors])


def random_unitary(d, rng):
    """Haar unitary from the QR decomposition of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_state(d, rank=None, seed=None):
    """Random state ``G G^dagger / Tr`` with ``G`` a ``d x rank`` Ginibre matrix."""
    rank = d if rank is None else int(rank)
    if d < 1 or not 1 <= rank <= d:
        raise DomainError(f"rank must lie in [1, {d}], got {rank}", "rank")
    rng = _rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_rank1_measurement(d, seed=None, outcomes=None):
    """Computational basis conjugated by a Haar-random unitary."""
    return measurement_from_unitary(random_unitary(d, _rng(seed)), outcomes)
