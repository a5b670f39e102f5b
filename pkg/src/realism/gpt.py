"""Theory-independent realism for finite-outcome probabilistic theories.

A theory backend answers three questions about its states: the outcome
distribution of a registered property, the state after observing an outcome,
and convex mixtures. Nothing else is needed to state the realism criterion:
``Y`` is real given ``state`` when an unrevealed ``Y`` measurement leaves the
statistics of every probe property ``X`` unchanged, with the post-measurement
statistics ``sum_j p(x_i | y_j) p(y_j)``.

Two backends ship: :class:`ClassicalTheory` (joint probability tables with
Bayesian conditioning) and :class:`QuantumTheory` (Born rule with the Lüders
update).
"""
import abc
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .states import (
    PROB_CLAMP,
    DensityMatrix,
    as_density,
    born_probabilities,
    measurement_from_unitary,
    probability_distribution,
    su_generators,
)

TABLE_TOL = 1e-10


@dataclass(frozen=True)
class PhysicalProperty:
    name: str
    outcomes: tuple

    def __post_init__(self):
        outcomes = tuple(self.outcomes)
        object.__setattr__(self, "outcomes", outcomes)
        if len(outcomes) < 2:
            raise DomainError(f"property {self.name!r} needs at least two outcomes", "outcomes")
        if len(set(outcomes)) != len(outcomes):
            raise DomainError(f"property {self.name!r} has repeated outcome labels", "outcomes")

    def __len__(self):
        return len(self.outcomes)


@dataclass(frozen=True, eq=False)
class GptState:
    theory: "TheoryBackend"
    payload: object


class TheoryBackend(abc.ABC):
    """Operations a theory must supply; backends and their states are immutable."""

    @property
    @abc.abstractmethod
    def properties(self):
        """Mapping from property name to :class:`PhysicalProperty`."""

    def property(self, prop):
        name = prop.name if isinstance(prop, PhysicalProperty) else prop
        try:
            return self.properties[name]
        except KeyError:
            raise DomainError(f"property {name!r} is not registered", "registered") from None

    @abc.abstractmethod
    def probabilities(self, state, prop):
        """Outcome distribution of ``prop`` on ``state``."""

    @abc.abstractmethod
    def update(self, state, prop, outcome_index):
        """State conditioned on observing outcome ``outcome_index`` of ``prop``."""

    @abc.abstractmethod
    def mix(self, weights, states):
        """Convex combination of states of this theory."""


def _check_backend(state, theory=None):
    if not isinstance(state, GptState):
        raise DomainError("expected a GptState", "state")
    if theory is not None and state.theory is not theory:
        raise DomainError("states belong to different theories", "backend")


class ClassicalTheory(TheoryBackend):
    """States are joint tables over the outcome grid of all registered properties.

    Axis ``k`` of a table indexes the outcomes of ``properties[k]``.
    """

    def __init__(self, properties):
        props = tuple(properties)
        if not props:
            raise DomainError("classical theory needs at least one property", "properties")
        names = [p.name for p in props]
        if len(set(names)) != len(names):
            raise DomainError("property names must be distinct", "properties")
        self._order = props
        self._props = {p.name: p for p in props}
        self.shape = tuple(len(p) for p in props)

    @property
    def properties(self):
        return dict(self._props)

    def state(self, table):
        t = np.asarray(table, dtype=float)
        if t.size != int(np.prod(self.shape)):
            raise DomainError(
                f"table has {t.size} entries, expected {int(np.prod(self.shape))}", "shape"
            )
        t = t.reshape(self.shape)
        if np.any(t < -PROB_CLAMP):
            raise DomainError("table has negative entries", "nonnegative")
        if abs(t.sum() - 1.0) > TABLE_TOL:
            raise DomainError(f"table sums to {t.sum():.12g}, expected 1", "normalization")
        t = np.clip(t, 0.0, None)
        t = t / t.sum()
        t.setflags(write=False)
        return GptState(self, t)

    def _axis(self, prop):
        prop = self.property(prop)
        return self._order.index(prop)

    def probabilities(self, state, prop):
        _check_backend(state, self)
        axis = self._axis(prop)
        others = tuple(k for k in range(len(self.shape)) if k != axis)
        return probability_distribution(state.payload.sum(axis=others))

    def update(self, state, prop, outcome_index):
        _check_backend(state, self)
        axis = self._axis(prop)
        sliced = np.zeros_like(state.payload)
        index = [slice(None)] * len(self.shape)
        index[axis] = outcome_index
        sliced[tuple(index)] = state.payload[tuple(index)]
        total = sliced.sum()
        if total <= PROB_CLAMP:
            raise DomainError("cannot condition on a zero-probability outcome", "probability")
        return self.state(sliced / total)

    def mix(self, weights, states):
        weights = probability_distribution(weights)
        for s in states:
            _check_backend(s, self)
        if len(weights) != len(states):
            raise DomainError("weights and states differ in length", "length")
        return self.state(sum(w * s.payload for w, s in zip(weights, states)))


def classical_backend(properties, joint_table):
    """Classical theory over ``properties`` together with the state ``joint_table``.

    Returns:
        tuple: ``(theory, state)``.
    """
    theory = ClassicalTheory(properties)
    return theory, theory.state(joint_table)


class QuantumTheory(TheoryBackend):
    """Born-rule theory whose properties are projective measurements."""

    def __init__(self, measurements=None):
        self._meas = dict(measurements or {})
        dims = {m.dim for m in self._meas.values()}
        if len(dims) > 1:
            raise DomainError("registered measurements have different dimensions", "dimension")
        self._props = {
            name: PhysicalProperty(name, tuple(range(len(m))))
            for name, m in self._meas.items()
        }

    @property
    def properties(self):
        return dict(self._props)

    def measurement(self, prop):
        return self._meas[self.property(prop).name]

    def with_measurements(self, measurements):
        return QuantumTheory({**self._meas, **dict(measurements)})

    def state(self, rho):
        return GptState(self, as_density(rho))

    def probabilities(self, state, prop):
        _check_backend(state, self)
        return born_probabilities(state.payload, self.measurement(prop))

    def update(self, state, prop, outcome_index):
        _check_backend(state, self)
        proj = self.measurement(prop).projectors[outcome_index]
        post = proj @ state.payload.matrix @ proj
        p = np.trace(post).real
        if p <= PROB_CLAMP:
            raise DomainError("cannot condition on a zero-probability outcome", "probability")
        return GptState(self, DensityMatrix(post / p))

    def mix(self, weights, states):
        weights = probability_distribution(weights)
        for s in states:
            _check_backend(s, self)
        if len(weights) != len(states):
            raise DomainError("weights and states differ in length", "length")
        return GptState(self, DensityMatrix(sum(w * s.payload.matrix for w, s in zip(weights, states))))


def quantum_backend(measurements=None):
    return QuantumTheory(measurements)


def certifying_family(d):
    """Eigenbasis measurements of each SU(d) generator, keyed ``gen0``, ``gen1``, ...

    Agreement on these ``d^2 - 1`` probes forces agreement on every probe,
    since each generator is a combination of its own eigenprojectors.
    """
    family = {}
    for k, g in enumerate(su_generators(d).generators):
        _, vecs = np.linalg.eigh(g)
        family[f"gen{k}"] = measurement_from_unitary(vecs)
    return family


def post_unrevealed_distribution(state, x_prop, y_prop):
    """Distribution of ``x_prop`` after an unrevealed measurement of ``y_prop``.

    ``p(x_i) = sum_j p(x_i | y_j) p(y_j)``; outcomes ``y_j`` with probability
    at most 1e-12 are skipped.
    """
    _check_backend(state)
    theory = state.theory
    x_prop, y_prop = theory.property(x_prop), theory.property(y_prop)
    p_y = theory.probabilities(state, y_prop)
    total = np.zeros(len(x_prop))
    for j, pj in enumerate(p_y):
        if pj <= PROB_CLAMP:
            continue
        total += pj * theory.probabilities(theory.update(state, y_prop, j), x_prop)
    return probability_distribution(total)


class CriterionVerdict(NamedTuple):
    realist: bool
    worst_residual: float
    worst_property: str


def realism_criterion(state, y_prop, x_family, tol=1e-10):
    """Check that an unrevealed ``y_prop`` measurement is invisible to every probe.

    ``realist`` is true iff ``max_{X, i} |p(x_i) - p_after(x_i)| <= tol`` over
    the supplied probe family.
    """
    x_family = list(x_family)
    if not x_family:
        raise DomainError("probe family is empty", "nonempty")
    _check_backend(state)
    theory = state.theory
    worst, worst_name = -1.0, None
    for x in x_family:
        before = theory.probabilities(state, x)
        after = post_unrevealed_distribution(state, x, y_prop)
        res = float(np.max(np.abs(before - after)))
        if res > worst:
            worst, worst_name = res, theory.property(x).name
    return CriterionVerdict(worst <= tol, worst, worst_name)


def mix(weights, states):
    """Convex combination of states that share a backend."""
    states = list(states)
    if not states:
        raise DomainError("nothing to mix", "nonempty")
    theory = states[0].theory
    for s in states:
        _check_backend(s, theory)
    return theory.mix(weights, states)
