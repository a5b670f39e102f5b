"""Command-line front end: ``realism quantify | sweep-qubit | gpt-check``.

Exit codes: 0 success (or realist, for ``gpt-check``), 1 not realist,
2 invalid input, 3 output could not be written.
"""
import argparse
import csv
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .channels import BipartiteState
from .errors import DomainError
from .gpt import certifying_family, quantum_backend, realism_criterion
from .io import load_classical, load_measurement, load_state
from .quantifiers import (
    divergence_of_realism,
    irreality,
    realism_check_quantum,
    robustness_of_irrealism,
    to_bits,
)
from .states import density_to_bloch, qubit_axis_measurement, qubit_state

EXIT_OK, EXIT_NOT_REALIST, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3
COLUMNS = ("theta", "irreality", "robustness", "robustness_normalized", "divergence")
PANELS = (
    ("irreality_vs_robustness", "robustness", "irreality"),
    ("irreality_vs_divergence", "divergence", "irreality"),
    ("robustness_vs_divergence", "divergence", "robustness"),
)


@dataclass(frozen=True)
class SweepConfig:
    r: float = 1.0
    steps: int = 181
    axis: tuple = (0.0, 0.0, 1.0)
    normalize: bool = True
    seed: int = 0
    restarts: int = 16
    out: str = "sweep.csv"

    def __post_init__(self):
        if self.steps < 2:
            raise DomainError("steps must be >= 2", "steps")
        if not 0.0 <= self.r <= 1.0:
            raise DomainError("r must lie in [0, 1]", "purity")
        if abs(np.linalg.norm(self.axis) - 1.0) > 1e-10:
            raise DomainError("axis must be a unit vector", "axis")


def _transverse(n):
    helper = np.array([0.0, 1.0, 0.0]) if abs(n[1]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e = np.cross(helper, n)
    return e / np.linalg.norm(e)


def sweep_qubit(config):
    """Rows ``(theta, irreality, robustness, robustness_normalized, divergence)``.

    Qubit states ``r (sin theta e + cos theta n)`` for ``theta`` in ``[0, pi]``;
    the measured property is the spin along ``n``. ``robustness_normalized``
    rescales robustness so its peak matches the irreality peak when
    ``config.normalize`` is set, otherwise it repeats ``robustness``.
    """
    n = np.asarray(config.axis, dtype=float)
    e = _transverse(n)
    meas = qubit_axis_measurement(n)
    rows = []
    for theta in np.linspace(0.0, np.pi, config.steps):
        rho = qubit_state(config.r * (np.sin(theta) * e + np.cos(theta) * n))
        div = divergence_of_realism(rho, meas, restarts=config.restarts, seed=config.seed)
        rows.append([theta, irreality(rho, meas), robustness_of_irrealism(rho, meas).eta,
                     div.value])
    rows = np.array(rows)
    scale = 1.0
    if config.normalize and rows[:, 2].max() > 0:
        scale = rows[:, 1].max() / rows[:, 2].max()
    return np.column_stack([rows[:, :3], rows[:, 2] * scale, rows[:, 3]])


def _header(config):
    axis = ",".join(repr(float(a)) for a in config.axis)
    return (f"# realism {__version__} sweep-qubit r={config.r!r} steps={config.steps} "
            f"axis={axis} normalize={config.normalize} seed={config.seed} "
            f"restarts={config.restarts}")


def parametric_path(out):
    stem = out[:-4] if out.endswith(".csv") else out
    return stem + "_parametric.csv"


def write_sweep(config, table):
    header = _header(config)
    with open(config.out, "w", newline="") as fh:
        fh.write(header + "\n")
        w = csv.writer(fh)
        w.writerow(COLUMNS)
        for row in table:
            w.writerow([repr(float(v)) for v in row])
    col = {name: i for i, name in enumerate(COLUMNS)}
    with open(parametric_path(config.out), "w", newline="") as fh:
        fh.write(header + "\n")
        w = csv.writer(fh)
        w.writerow(("panel", "theta", "x", "y"))
        for panel, x, y in PANELS:
            for row in table:
                w.writerow([panel, repr(float(row[0])), repr(float(row[col[x]])),
                            repr(float(row[col[y]]))])


def _fmt(value, bits):
    if value == math.inf:
        return "inf"
    unit = "bits" if bits else "nats"
    return f"{to_bits(value) if bits else value:.10g} {unit}"


def cmd_quantify(args):
    rho = load_state(args.state)
    meas = load_measurement(args.measurement)
    which = {"irreality", "robustness", "divergence"} if args.which == "all" else {args.which}
    lines = []
    if "irreality" in which:
        lines.append(f"irreality: {_fmt(irreality(rho, meas), args.bits)}")
    if isinstance(rho, BipartiteState) and which - {"irreality"}:
        raise DomainError("robustness and divergence take single-system states", "dims")
    if "robustness" in which:
        res = robustness_of_irrealism(rho, meas)
        lines.append(f"robustness: {res.eta:.10g}")
    if "divergence" in which:
        res = divergence_of_realism(rho, meas, restarts=args.restarts, seed=args.seed)
        lines.append(f"divergence: {_fmt(res.value, args.bits)}")
        frame = [np.round(density_to_bloch(p), 10).tolist()
                 for p in res.argmax_measurement.projectors]
        lines.append(f"divergence_argmax_bloch: {frame}")
    if not isinstance(rho, BipartiteState):
        check = realism_check_quantum(rho, meas, args.tol)
        verdict = "realist" if check.realist else "not realist"
        lines.append(f"verdict: {verdict} (residual {check.residual:.3e})")
    print("\n".join(lines))
    return EXIT_OK


def cmd_sweep(args):
    axis = tuple(float(a) for a in args.axis.split(","))
    if len(axis) != 3:
        raise DomainError("--axis needs three comma-separated components", "axis")
    norm = np.linalg.norm(axis)
    config = SweepConfig(r=args.r, steps=args.steps,
                         axis=tuple(a / norm for a in axis) if norm > 0 else axis,
                         normalize=args.normalize, seed=args.seed,
                         restarts=args.restarts, out=args.out)
    table = sweep_qubit(config)
    try:
        write_sweep(config, table)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {config.out} and {parametric_path(config.out)} ({len(table)} rows)")
    return EXIT_OK


def cmd_gpt_check(args):
    if args.quantum:
        rho = load_state(args.quantum)
        if args.measurement is None:
            raise DomainError("--quantum needs --measurement for the tested property", "schema")
        family = certifying_family(rho.dim)
        theory = quantum_backend({**family, "Y": load_measurement(args.measurement)})
        state, y_name, probes = theory.state(rho), "Y", list(family)
    else:
        if args.table is None or args.y is None:
            raise DomainError("give --table with --y, or --quantum with --measurement", "schema")
        theory, state = load_classical(args.table)
        y_name = args.y
        probes = args.x or [n for n in theory.properties if n != y_name] or [y_name]
    verdict = realism_criterion(state, y_name, probes, args.tol)
    print(f"verdict: {'realist' if verdict.realist else 'not realist'}")
    print(f"worst_residual: {verdict.worst_residual:.10g}")
    print(f"worst_property: {verdict.worst_property}")
    return EXIT_OK if verdict.realist else EXIT_NOT_REALIST


def build_parser():
    parser = argparse.ArgumentParser(prog="realism", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quantify", help="irrealism quantifiers of a state for a measurement")
    q.add_argument("--state", required=True)
    q.add_argument("--measurement", required=True)
    q.add_argument("--which", choices=("irreality", "robustness", "divergence", "all"),
                   default="all")
    q.add_argument("--bits", action="store_true", help="display entropies in bits")
    q.add_argument("--tol", type=float, default=1e-8, help="realism check tolerance")
    q.add_argument("--restarts", type=int, default=16)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_quantify)

    s = sub.add_parser("sweep-qubit", help="quantifiers along a qubit polar-angle sweep (CSV)")
    s.add_argument("--r", type=float, default=1.0, help="Bloch radius")
    s.add_argument("--steps", type=int, default=181)
    s.add_argument("--axis", default="0,0,1", help="measured spin axis x,y,z")
    s.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=True,
                   help="scale robustness_normalized to the irreality peak")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=16)
    s.add_argument("--out", default="sweep.csv")
    s.set_defaults(func=cmd_sweep)

    g = sub.add_parser("gpt-check", help="theory-independent realism criterion")
    g.add_argument("--table", help="classical joint table JSON")
    g.add_argument("--y", help="property tested for realism (classical mode)")
    g.add_argument("--x", action="append", help="probe property (repeatable)")
    g.add_argument("--quantum", metavar="STATE", help="quantum state JSON")
    g.add_argument("--measurement", help="measurement JSON of the tested property")
    g.add_argument("--tol", type=float, default=1e-10)
    g.set_defaults(func=cmd_gpt_check)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        tag = f" [{exc.invariant}]" if exc.invariant else ""
        print(f"error{tag}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
