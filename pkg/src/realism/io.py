"""JSON codecs for states, measurements and classical joint tables.

State::

    {"dim": d, "re": [[...]], "im": [[...]]}            # "dims": [dA, dB] optional

Measurement::

    {"dim": d, "outcomes": [...], "projectors": [{"re": ..., "im": ...}, ...]}

Classical table::

    {"properties": [{"name": ..., "outcomes": [...]}, ...], "table": [...]}

with the table flattened row-major over the properties in the listed order.
Loaders validate every invariant and raise :class:`DomainError` naming it.
"""
import json

import numpy as np

from .channels import BipartiteState
from .errors import DomainError
from .gpt import ClassicalTheory, PhysicalProperty
from .states import DensityMatrix, ProjectiveMeasurement


def _complex(obj, d, what):
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"{what}: malformed matrix ({exc})", "schema") from None
    if re.shape != (d, d) or im.shape != (d, d):
        raise DomainError(f"{what}: expected {d}x{d} 're'/'im' arrays", "dimension")
    return re + 1j * im


def _dim(obj, what):
    if not isinstance(obj, dict) or "dim" not in obj:
        raise DomainError(f"{what}: missing 'dim' field", "schema")
    d = obj["dim"]
    if not isinstance(d, int) or d < 1:
        raise DomainError(f"{what}: 'dim' must be a positive integer", "dimension")
    return d


def _split(m):
    m = np.asarray(m)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def state_from_dict(obj):
    d = _dim(obj, "state")
    m = _complex(obj, d, "state")
    if "dims" in obj:
        return BipartiteState(m, obj["dims"])
    return DensityMatrix(m)


def state_to_dict(rho):
    out = {"dim": rho.dim, **_split(rho.matrix)}
    if isinstance(rho, BipartiteState):
        out["dims"] = list(rho.dims)
    return out


def measurement_from_dict(obj):
    d = _dim(obj, "measurement")
    projs = obj.get("projectors")
    if not isinstance(projs, list) or not projs:
        raise DomainError("measurement: 'projectors' must be a non-empty list", "schema")
    mats = [_complex(p, d, f"projector {i}") for i, p in enumerate(projs)]
    return ProjectiveMeasurement(mats, obj.get("outcomes"))


def measurement_to_dict(meas):
    return {
        "dim": meas.dim,
        "outcomes": list(meas.outcomes),
        "projectors": [_split(p) for p in meas.projectors],
    }


def classical_from_dict(obj):
    """Returns ``(theory, state)``."""
    try:
        props = [PhysicalProperty(p["name"], tuple(p["outcomes"])) for p in obj["properties"]]
        table = obj["table"]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"classical table: malformed document ({exc})", "schema") from None
    theory = ClassicalTheory(props)
    return theory, theory.state(table)


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: invalid JSON ({exc})", "json") from None


def load_state(path):
    return state_from_dict(_load(path))


def load_measurement(path):
    return measurement_from_dict(_load(path))


def load_classical(path):
    return classical_from_dict(_load(path))


def dump(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
