"""Irrealism quantifiers for quantum states.

* :func:`irreality` -- entropy gap ``S(Phi_A(rho)) - S(rho)``.
* :func:`robustness_of_irrealism` -- least weight ``eta`` of an auxiliary
  state that turns ``rho`` into a fixed point of the dephasing map.
* :func:`divergence_of_realism` -- largest KL divergence between outcome
  statistics before and after an unrevealed measurement, over rank-1 probes.

All logarithms are natural (nats). Divergent values are reported as
:data:`INFINITE` (``math.inf``), never as a large finite float.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .channels import BipartiteState, dephase, dephase_local, sequential_dephase
from .errors import DomainError, NumericError
from .linalg import SUPPORT_CUTOFF, eig_hermitian
from .states import (
    DensityMatrix,
    ProjectiveMeasurement,
    _check_dims,
    as_density,
    born_probabilities,
    density_to_bloch,
    measurement_bloch_frame,
    measurement_from_unitary,
    probability_distribution,
    qubit_axis_measurement,
    qubit_state,
    su_generators,
)

INFINITE = math.inf


def to_bits(value):
    return value / math.log(2)


def von_neumann_entropy(rho):
    """``-Tr(rho ln rho)`` in nats, summed over the support."""
    rho = as_density(rho)
    w = eig_hermitian(rho.matrix)[0]
    w = w[w > SUPPORT_CUTOFF]
    return max(0.0, float(-np.sum(w * np.log(w))))


def quantum_relative_entropy(rho, sigma):
    """``Tr[rho (ln rho - ln sigma)]``, or :data:`INFINITE` if supp(rho) is not in supp(sigma)."""
    rho, sigma = as_density(rho), as_density(sigma)
    if rho.dim != sigma.dim:
        raise DomainError("states have different dimensions", "dimension")
    w_s, v_s = eig_hermitian(sigma.matrix)
    weights = np.real(np.einsum("ij,ik,kj->j", v_s.conj(), rho.matrix, v_s))
    support = w_s > SUPPORT_CUTOFF
    if weights[~support].sum() > SUPPORT_CUTOFF:
        return INFINITE
    cross = float(np.sum(weights[support] * np.log(w_s[support])))
    return max(0.0, -von_neumann_entropy(rho) - cross)


def _kl(p, q):
    mask = p > 0
    if np.any(q[mask] <= 0):
        return INFINITE
    return max(0.0, float(np.sum(p[mask] * np.log(p[mask] / q[mask]))))


def kl_divergence(p, q):
    """``sum_i p_i ln(p_i / q_i)`` with ``0 ln 0 = 0``; :data:`INFINITE` when ``q_i = 0 < p_i``."""
    p, q = probability_distribution(p), probability_distribution(q)
    if p.shape != q.shape:
        raise DomainError(f"distributions have lengths {p.size} and {q.size}", "length")
    return _kl(p, q)


def irreality(rho, measurement):
    """Entropy produced by dephasing: ``S(Phi_A(rho)) - S(rho)``.

    For a :class:`~realism.channels.BipartiteState` the measurement acts on
    subsystem A.
    """
    if isinstance(rho, BipartiteState):
        dephased = dephase_local(rho, measurement)
    else:
        rho = as_density(rho)
        dephased = dephase(rho, measurement)
    return max(0.0, von_neumann_entropy(dephased) - von_neumann_entropy(rho))


class RealismCheck(NamedTuple):
    realist: bool
    residual: float


def realism_check_quantum(rho, measurement, tol=1e-8):
    """Is ``rho`` a fixed point of the dephasing by ``measurement``?

    The residual is the largest entry of ``|Phi_Y(rho) - rho|``.
    """
    rho = as_density(rho)
    residual = float(np.max(np.abs(dephase(rho, measurement).matrix - rho.matrix)))
    return RealismCheck(residual <= tol, residual)


def probe_residual(rho, y_meas, x_meas):
    """``max_i |Tr[X_i (Phi_Y(rho) - rho)]|`` for a single probe measurement X."""
    rho = as_density(rho)
    _check_dims(rho, x_meas)
    diff = dephase(rho, y_meas).matrix - rho.matrix
    return max(abs(np.vdot(x, diff)) for x in x_meas.projectors)


# -- robustness ----------------------------------------------------------------


@dataclass(frozen=True)
class RobustnessResult:
    eta: float
    witness_state: DensityMatrix
    realist_mixture: DensityMatrix
    iterations: int
    gap: float


def _block_frame(projectors):
    """Orthonormal basis adapted to the projectors, and the block-diagonal mask in it."""
    cols, labels = [], []
    for j, p in enumerate(projectors):
        w, v = np.linalg.eigh(p)
        keep = v[:, w > 0.5]
        cols.append(keep)
        labels += [j] * keep.shape[1]
    labels = np.array(labels)
    return np.hstack(cols), labels[:, None] == labels[None, :]


def _max_min_eig(delta, t, mask, max_iter, feas_tol):
    """Projected subgradient ascent of ``lambda_min(B - t delta)``.

    Works in a basis where the measurement is diagonal: ``B`` ranges over
    unit-trace Hermitian matrices supported on ``mask``. Stops as soon as
    ``lambda_min >= -feas_tol``.
    """
    d = delta.shape[0]
    eye = np.eye(d)
    b = eye / d
    best_lam, best_b = -np.inf, b
    for k in range(1, max_iter + 1):
        w, v = np.linalg.eigh(b - t * delta)
        if w[0] > best_lam:
            best_lam, best_b = w[0], b
        if w[0] >= -feas_tol:
            return True, b, w[0], k
        vec = v[:, 0]
        grad = np.outer(vec, vec.conj()) * mask - eye / d
        norm = np.linalg.norm(grad)
        if norm < 1e-14:
            break
        b = b + grad / (k * norm)
        # re-project: normalised steps amplify round-off when the gradient is small
        b = 0.5 * (b + b.conj().T) * mask
        b += (1.0 - np.trace(b).real) / d * eye
    return False, best_b, best_lam, k


def robustness_of_irrealism(rho, measurement, *, gap=1e-6, feas_tol=1e-9,
                            max_iter=500, realist_tol=1e-12):
    """Smallest ``eta`` such that ``(1 - eta) rho + eta sigma`` is dephasing-invariant.

    Bisection on ``eta``. At fixed ``eta`` the mixture is invariant iff the
    off-block part of the auxiliary state equals ``-t * delta`` with
    ``delta = rho - Phi_Y(rho)`` and ``t = (1 - eta) / eta``; feasibility is
    decided by maximising ``lambda_min(B - t delta)`` over the free
    block-diagonal part ``B`` (a concave problem).

    Args:
        rho: State under scrutiny.
        measurement: Projective measurement Y; projectors of any rank.
        gap: Final width of the bisection interval on ``eta``.
        feas_tol: Positivity slack accepted by the feasibility test.
        max_iter: Iteration cap of the inner ascent.
        realist_tol: Off-block magnitude below which ``rho`` counts as realist
            and ``eta = 0`` is returned without bisection.

    Returns:
        RobustnessResult: ``eta`` is the upper (feasible) end of the final
        bisection interval.

    Raises:
        NumericError: if no feasible ``eta < 1`` is ever certified.
    """
    rho = as_density(rho)
    _check_dims(rho, measurement)
    d = rho.dim
    frame, mask = _block_frame(measurement.projectors)
    dephased = dephase(rho, measurement)
    delta = rho.matrix - dephased.matrix
    delta = 0.5 * (delta + delta.conj().T)
    if np.max(np.abs(delta)) <= realist_tol:
        return RobustnessResult(0.0, dephased, rho, 0, 0.0)
    local_delta = frame.conj().T @ delta @ frame

    lo, hi = 0.0, 1.0
    hi_b, hi_lam = np.eye(d) / d, 1.0 / d
    iterations = 0
    best_seen = -np.inf
    while hi - lo > gap:
        mid = 0.5 * (lo + hi)
        ok, b, lam, k = _max_min_eig(local_delta, (1 - mid) / mid, mask, max_iter, feas_tol)
        iterations += k
        best_seen = max(best_seen, lam)
        if ok:
            hi, hi_b, hi_lam = mid, b, lam
        else:
            lo = mid
    if hi == 1.0:
        raise NumericError(
            f"robustness bisection never certified eta < 1 "
            f"(best lambda_min {best_seen:.3e} after {iterations} iterations)"
        )

    t = (1 - hi) / hi
    raw = frame @ (hi_b - t * local_delta) @ frame.conj().T
    raw = 0.5 * (raw + raw.conj().T)
    # absorb the feas_tol slack into a small admixture of the identity
    shift = max(0.0, -hi_lam)
    witness = DensityMatrix((raw + shift * np.eye(d)) / (1 + d * shift))
    mixture = DensityMatrix((1 - hi) * rho.matrix + hi * witness.matrix)
    return RobustnessResult(float(hi), witness, mixture, iterations, float(hi - lo))


def qubit_robustness_closed_form(rho, measurement):
    """Qubit robustness ``c / (1 + c)`` with ``c = |n x r|``.

    ``n`` is the Bloch axis of ``measurement`` and ``r`` the Bloch vector of
    ``rho``. The optimal auxiliary state is the pure equatorial state opposite
    the transverse part of ``r`` (axial component zero).

    Returns:
        tuple: ``(eta, witness)``.
    """
    rho = as_density(rho)
    if rho.dim != 2 or measurement.dim != 2:
        raise DomainError("closed-form robustness is defined for qubits only", "dimension")
    if not measurement.is_rank1:
        raise DomainError("closed-form robustness needs a non-degenerate measurement", "rank1")
    n = measurement_bloch_frame(measurement)[0]
    r = density_to_bloch(rho)
    transverse = r - np.dot(r, n) * n
    c = float(np.linalg.norm(transverse))
    eta = c / (1 + c)
    witness = qubit_state(-transverse / c) if c > 0 else qubit_state(np.zeros(3))
    return eta, witness


# -- divergence ----------------------------------------------------------------


@dataclass(frozen=True)
class DivergenceResult:
    value: float
    argmax_measurement: ProjectiveMeasurement
    restarts_used: int


class _Divergent(Exception):
    def __init__(self, unitary):
        self.unitary = unitary


def probe_divergence(rho, y_meas, x_meas):
    """``D(P_rho^X || P_{Phi_Y(rho)}^X)`` for one probe measurement X."""
    rho = as_density(rho)
    return kl_divergence(
        born_probabilities(rho, x_meas), born_probabilities(dephase(rho, y_meas), x_meas)
    )


def _basis_probs(m, u):
    return np.clip(np.real(np.einsum("ij,ik,kj->j", u.conj(), m, u)), 0.0, None)


def _unitary(a, gens):
    w, v = np.linalg.eigh(np.einsum("k,kij->ij", a, gens))
    return (v * np.exp(1j * w)) @ v.conj().T


def _qubit_plane_candidate(r, n, grid=181):
    """Best qubit probe axis in the plane of ``r`` and the measured axis ``n``.

    KL between the two binary distributions is jointly convex and vanishes at
    the equator, so tilting a probe out of that plane never helps.
    """
    transverse = r - np.dot(r, n) * n
    c = np.linalg.norm(transverse)
    if c <= SUPPORT_CUTOFF:
        return 0.0, n
    e = transverse / c
    u = np.dot(r, n) * n

    def neg_kl(phi):
        m = np.cos(phi) * n + np.sin(phi) * e
        a, b = np.dot(m, r), np.dot(m, u)
        p = np.array([(1 + a) / 2, (1 - a) / 2]).clip(0, 1)
        q = np.array([(1 + b) / 2, (1 - b) / 2]).clip(0, 1)
        return -_kl(p, q)

    phis = np.linspace(0.0, np.pi, grid)
    values = np.array([neg_kl(phi) for phi in phis])
    i = int(np.argmin(values))
    h = phis[1] - phis[0]
    # the probe axis is defined modulo pi, so neighbours wrap around
    phi, best = phis[i], values[i]
    try:
        res = minimize_scalar(neg_kl, bracket=(phi - h, phi, phi + h),
                              method="golden", tol=1e-12)
    except ValueError:  # flat neighbourhood, not a strict bracket
        res = None
    if res is not None and res.fun < best:
        phi, best = res.x, res.fun
    return -best, np.cos(phi) * n + np.sin(phi) * e


def divergence_of_realism(rho, measurement, *, restarts=16, seed=0, opt_tol=1e-6,
                          max_fev=None):
    """Maximise the probe divergence over rank-1 projective measurements X.

    Probes are parametrised as ``U = exp(i a . Lambda)`` acting on the
    computational basis; Nelder-Mead runs from ``restarts`` random starting
    points and the best local optimum is kept (ties go to the lowest restart
    index). For qubits an in-plane axis search is added as an extra
    candidate. The returned value is a lower bound on the true maximum.
    """
    if restarts < 1:
        raise DomainError(f"restarts must be >= 1, got {restarts}", "restarts")
    rho = as_density(rho)
    _check_dims(rho, measurement)
    d = rho.dim
    m_rho = rho.matrix
    m_deph = dephase(rho, measurement).matrix
    gens = su_generators(d).generators
    rng = np.random.default_rng(seed)
    max_fev = max_fev or 600 * len(gens)

    def objective(a):
        u = _unitary(a, gens)
        val = _kl(_basis_probs(m_rho, u), _basis_probs(m_deph, u))
        if val == INFINITE:
            raise _Divergent(u)
        return -val

    best_val, best_u = -1.0, np.eye(d)
    try:
        for _ in range(restarts):
            res = minimize(objective, rng.uniform(-np.pi, np.pi, len(gens)),
                           method="Nelder-Mead",
                           options={"xatol": 1e-9, "fatol": opt_tol * 1e-4,
                                    "maxfev": max_fev})
            if -res.fun > best_val:
                best_val, best_u = -res.fun, _unitary(res.x, gens)
    except _Divergent as exc:
        return DivergenceResult(INFINITE, measurement_from_unitary(exc.unitary), restarts)

    best_meas = measurement_from_unitary(best_u)
    if d == 2 and measurement.is_rank1:
        n = measurement_bloch_frame(measurement)[0]
        val, axis = _qubit_plane_candidate(density_to_bloch(rho), n)
        if val > best_val:
            best_val, best_meas = val, qubit_axis_measurement(axis)
    return DivergenceResult(float(max(best_val, 0.0)), best_meas, restarts)


def dephased_kl_identity_residual(rho, x_meas, y_meas):
    """``|S(Phi_X(rho) || Phi_X(Phi_Y(rho))) - D(P_rho^X || P_{Phi_Y(rho)}^X)|``.

    Both sides agree because the two dephased states commute; the residual
    is 0 when both sides diverge and :data:`INFINITE` when only one does.
    """
    rho = as_density(rho)
    lhs = quantum_relative_entropy(dephase(rho, x_meas), sequential_dephase(rho, x_meas, y_meas))
    rhs = probe_divergence(rho, y_meas, x_meas)
    if lhs == INFINITE and rhs == INFINITE:
        return 0.0
    if lhs == INFINITE or rhs == INFINITE:
        return INFINITE
    return abs(lhs - rhs)
