"""Dephasing maps: the state left behind by an unrevealed projective measurement.

Bipartite states are Kronecker ordered with subsystem A as the major index,
i.e. ``rho_AB = kron(rho_A, rho_B)`` for product states.
"""
import numpy as np

from .errors import DomainError
from .states import (
    PROB_CLAMP,
    DensityMatrix,
    _check_dims,
    as_density,
)

FRAME_TOL = 1e-10


class BipartiteState(DensityMatrix):
    """Density matrix on ``H_A (x) H_B`` with A-major Kronecker ordering."""

    __slots__ = ("_dims",)

    def __init__(self, matrix, dims, validate=True):
        d_a, d_b = (int(x) for x in dims)
        super().__init__(matrix, validate=validate)
        if d_a < 1 or d_b < 1 or d_a * d_b != self.dim:
            raise DomainError(
                f"dims {dims} incompatible with matrix dimension {self.dim}", "dims"
            )
        self._dims = (d_a, d_b)

    @property
    def dims(self):
        return self._dims

    def reduced_b(self):
        d_a, d_b = self._dims
        m = self.matrix.reshape(d_a, d_b, d_a, d_b)
        return DensityMatrix(np.einsum("ajak->jk", m))


def _kraus_sum(m, projectors):
    return sum(p @ m @ p for p in projectors)


def dephase(rho, measurement):
    """``Phi_Y(rho) = sum_j Y_j rho Y_j``; projectors may have any rank."""
    rho = as_density(rho)
    _check_dims(rho, measurement)
    return DensityMatrix(_kraus_sum(rho.matrix, measurement.projectors), validate=False)


def sequential_dephase(rho, x_meas, y_meas):
    """``Phi_X(Phi_Y(rho))``: Y is applied first."""
    return dephase(dephase(rho, y_meas), x_meas)


def _lift(measurement, d_b):
    eye = np.eye(d_b)
    return [np.kron(p, eye) for p in measurement.projectors]


def dephase_local(rho, measurement):
    """Dephase subsystem A of a bipartite state with ``A_a (x) 1_B`` Kraus pairs."""
    if not isinstance(rho, BipartiteState):
        raise DomainError("dephase_local needs a BipartiteState", "dims")
    d_a, d_b = rho.dims
    if measurement.dim != d_a:
        raise DomainError(
            f"measurement dimension {measurement.dim} does not match d_A = {d_a}",
            "dimension",
        )
    out = _kraus_sum(rho.matrix, _lift(measurement, d_b))
    return BipartiteState(out, rho.dims, validate=False)


def local_decomposition(rho, measurement):
    """Terms ``(p_a, A_a, rho_B|a)`` of ``Phi_A(rho) = sum_a p_a A_a (x) rho_B|a``.

    Only rank-1 projectors ``A_a`` give a product form; outcomes with
    ``p_a <= 1e-12`` are omitted.
    """
    if not measurement.is_rank1:
        raise DomainError("local decomposition requires rank-1 projectors", "rank1")
    d_a, d_b = rho.dims
    terms = []
    for a, lifted in zip(measurement.projectors, _lift(measurement, d_b)):
        p_a = float(np.real(np.vdot(lifted, rho.matrix)))
        if p_a <= PROB_CLAMP:
            continue
        # <a| rho |a> restricted to B, with |a> the unit vector spanning A_a
        w, v = np.linalg.eigh(a)
        ket = v[:, -1]
        m = rho.matrix.reshape(d_a, d_b, d_a, d_b)
        cond = np.einsum("a,ajbk,b->jk", ket.conj(), m, ket) / p_a
        terms.append((p_a, np.asarray(a), DensityMatrix(cond)))
    return terms


def _validate_frame(frame):
    frame = np.asarray(frame, dtype=float)
    if frame.ndim != 2:
        raise DomainError("frame must be a 2-D array of Bloch vectors", "frame")
    d = frame.shape[0]
    if d < 2 or frame.shape[1] != d * d - 1:
        raise DomainError(f"frame shape {frame.shape} is not (d, d^2 - 1)", "frame")
    if np.max(np.abs(frame.sum(axis=0))) > FRAME_TOL:
        raise DomainError("frame vectors do not sum to zero", "frame-sum")
    gram = frame @ frame.T
    expected = (d * np.eye(d) - 1) / (d - 1)
    if np.max(np.abs(gram - expected)) > FRAME_TOL:
        raise DomainError("frame vectors have wrong mutual overlaps", "frame-gram")
    return frame


def dephase_bloch(r, frame):
    """Bloch-space dephasing ``u = (d - 1)/d * sum_j (y_j . r) y_j``.

    Args:
        r: Bloch vector of the state.
        frame: ``(d, d^2 - 1)`` array of measurement Bloch vectors, as
            returned by :func:`realism.states.measurement_bloch_frame`.
    """
    frame = _validate_frame(frame)
    r = np.asarray(r, dtype=float)
    d = frame.shape[0]
    if r.shape != (d * d - 1,):
        raise DomainError("Bloch vector and frame dimensions differ", "dimension")
    return (d - 1) / d * (frame @ r) @ frame


def is_fixed_point(rho, measurement, tol=1e-10):
    rho = as_density(rho)
    return float(np.max(np.abs(dephase(rho, measurement).matrix - rho.matrix))) <= tol

