"""qcl: consensus-rate toolkit over permutation-driven qudit networks.

Subcommands: rates, pareto, optimize, simulate, spectrum.  Topologies
come from a small text format (described at the end of this help) or
from one of the built-in presets g1-3, g2-3, g3-3, g1-4.  All randomness is
seeded (--seed, default 0) and all numeric output uses 12 significant
digits, so identical invocations print identical bytes.

Exit codes: 0 success, 2 input error, 3 numerical failure, 4 cap
exceeded.  QCL_THREADS caps worker parallelism for grid scans.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass

import numpy as np

from .induced import induced_laplacian, partitions_of
from .netgraph import generator_laplacian
from .optimize import BudgetConstraint, maximize_rate, pareto_scan
from .permgroup import (
    CapExceededError,
    GeneratorSet,
    from_cycles,
    generate_group,
    to_cycles,
)
from .quantum import (
    InsufficientDecayError,
    StepSizeError,
    check_density,
    evolve,
    fit_decay_rate,
    frobenius_distances,
    generic_state,
    symmetric_state,
    sync_distance,
    uniform_site_hamiltonian,
)
from .spectra import (
    INCLUSION_TOL,
    NumericalFailureError,
    convergence_rates,
    eigenvalues,
    intertwining_check,
)

TOPOLOGY_GRAMMAR = """\
Topology file format (one key per line, '#' starts a comment line):

    name: my-network
    N: 3                      # number of sites
    d: 2                      # site dimension (optional, default 2)
    budget: 1.0               # weight budget D (optional, default 1.0)
    generator: (1 2 3) weight w123
    generator: (1 2) weight w12
    generator: (1 3) weight 0.05   # fixed numeric weight

Cycles use 1-based labels; a generator may be a product of disjoint
cycles, e.g. (1 2)(3 4).  Symbolic weights are supplied in file order
through --weights; fixed weights are taken from the file.
"""

PRESETS: dict[str, str] = {
    "g1-3": (
        "name: g1-3\nN: 3\n"
        "generator: (1 2 3) weight w123\n"
        "generator: (1 2) weight w12\n"
    ),
    "g2-3": (
        "name: g2-3\nN: 3\n"
        "generator: (1 2 3) weight w123\n"
        "generator: (3 2 1) weight w321\n"
        "generator: (1 2) weight w12\n"
    ),
    "g3-3": (
        "name: g3-3\nN: 3\n"
        "generator: (1 2) weight w12\n"
        "generator: (2 3) weight w23\n"
    ),
    "g1-4": (
        "name: g1-4\nN: 4\n"
        "generator: (1 2 3 4) weight w1234\n"
        "generator: (1 2) weight w12\n"
        "generator: (3 4) weight w34\n"
    ),
}


class TopologyError(ValueError):
    """Malformed topology file; message carries the line number."""


@dataclass(frozen=True)
class TopologySpec:
    name: str
    n: int
    d: int
    budget: float
    gens: GeneratorSet
    fixed: dict[str, float]


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_topology(text: str, source: str = "<topology>") -> TopologySpec:
    name = None
    n = None
    d = 2
    budget = 1.0
    raw_gens: list[tuple[int, str, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise TopologyError(f"{source}:{lineno}: expected 'key: value'")
        key, _, value = line.partition(":")
        key = key.strip().lower()
        value = value.split("#", 1)[0].strip()
        try:
            if key == "name":
                name = value
            elif key == "n":
                n = int(value)
            elif key == "d":
                d = int(value)
            elif key == "budget":
                budget = float(value)
            elif key == "generator":
                if "weight" not in value:
                    raise ValueError("missing 'weight <label-or-number>'")
                cyc_part, _, w_part = value.rpartition("weight")
                raw_gens.append((lineno, cyc_part.strip(), w_part.strip()))
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise TopologyError(f"{source}:{lineno}: {exc}") from exc
    if n is None:
        raise TopologyError(f"{source}: missing required key 'N'")
    if not raw_gens:
        raise TopologyError(f"{source}: at least one generator required")
    if d < 2:
        raise TopologyError(f"{source}: d must be >= 2")
    if budget <= 0:
        raise TopologyError(f"{source}: budget must be positive")

    perms = []
    labels = []
    fixed: dict[str, float] = {}
    for lineno, cyc_text, w_text in raw_gens:
        groups = _CYCLE_RE.findall(cyc_text)
        leftover = _CYCLE_RE.sub("", cyc_text).strip()
        if not groups or leftover:
            raise TopologyError(
                f"{source}:{lineno}: generator must be cycles like (1 2 3)(4 5)"
            )
        try:
            cycles = [[int(tok) for tok in g.split()] for g in groups]
            perms.append(from_cycles(n, cycles))
        except ValueError as exc:
            raise TopologyError(f"{source}:{lineno}: {exc}") from exc
        if not w_text:
            raise TopologyError(f"{source}:{lineno}: empty weight")
        try:
            fixed_val = float(w_text)
        except ValueError:
            labels.append(w_text)
        else:
            # invent a positional label; skip any name already taken
            k = len(labels) + 1
            while f"w{k}" in labels:
                k += 1
            label = f"w{k}"
            labels.append(label)
            fixed[label] = fixed_val
    try:
        gens = GeneratorSet(n=n, perms=tuple(perms), labels=tuple(labels))
    except ValueError as exc:
        raise TopologyError(f"{source}: {exc}") from exc
    return TopologySpec(
        name=name or "unnamed", n=n, d=d, budget=budget, gens=gens, fixed=fixed
    )


def load_topology(ref: str) -> TopologySpec:
    if ref in PRESETS:
        return parse_topology(PRESETS[ref], source=f"<preset {ref}>")
    if os.path.exists(ref):
        with open(ref, "r", encoding="utf-8") as fh:
            return parse_topology(fh.read(), source=ref)
    raise TopologyError(
        f"{ref!r} is neither a preset ({', '.join(sorted(PRESETS))}) nor a file"
    )


def resolve_weights(spec: TopologySpec, weights_arg: str | None) -> np.ndarray:
    """Weight vector in generator order from --weights plus fixed entries."""
    needed = [lb for lb in spec.gens.labels if lb not in spec.fixed]
    given: list[float] = []
    if weights_arg:
        try:
            given = [float(tok) for tok in weights_arg.split(",") if tok.strip()]
        except ValueError as exc:
            raise TopologyError(f"--weights: {exc}") from exc
    if len(given) != len(needed):
        raise TopologyError(
            f"--weights supplies {len(given)} values but the topology has "
            f"{len(needed)} symbolic weights ({', '.join(needed) or 'none'})"
        )
    it = iter(given)
    out = []
    for lb in spec.gens.labels:
        out.append(spec.fixed[lb] if lb in spec.fixed else next(it))
    w = np.array(out, dtype=float)
    if np.any(w < 0):
        raise TopologyError("weights must be nonnegative")
    return w


def fmt(x: float) -> str:
    return f"{float(x):.12g}"


def fmt_c(z: complex) -> str:
    re_part = fmt(z.real)
    if abs(z.imag) < 1e-15:
        return re_part
    sign = "+" if z.imag >= 0 else "-"
    return f"{re_part}{sign}{fmt(abs(z.imag))}i"


def cycles_str(p) -> str:
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in to_cycles(p))


def _echo_config(spec: TopologySpec, w: np.ndarray, d: int) -> None:
    gens = spec.gens
    print(f"topology: {spec.name}  N={spec.n}  d={d}  budget={fmt(spec.budget)}")
    print(
        "generators: "
        + "  ".join(
            f"{cycles_str(p)}[{lb}]" for p, lb in zip(gens.perms, gens.labels)
        )
    )
    print("weights: " + " ".join(f"{lb}={fmt(v)}" for lb, v in zip(gens.labels, w)))
    cost = float(np.dot(gens.cycle_costs(), w))
    print(f"budget used: {fmt(cost)} of {fmt(spec.budget)}")


def cmd_rates(args) -> int:
    spec = load_topology(args.topology)
    d = args.d if args.d else spec.d
    w = resolve_weights(spec, args.weights)
    _echo_config(spec, w, d)
    rates = convergence_rates(spec.gens, w, d=d)
    print("per-partition lambda2(Re):")
    for parts in partitions_of(spec.n, d * d):
        print(f"  ({','.join(map(str, parts))}): {fmt(rates.per_partition[parts])}")
    print(f"lambda_cons: {fmt(rates.lambda_cons)}")
    print(f"lambda_synch: {fmt(rates.lambda_synch)}")
    vals = list(rates.per_partition.values())
    aldous = (max(vals) - min(vals)) <= INCLUSION_TOL
    print(f"aldous: {'true' if aldous else 'false'}")
    return 0


def cmd_pareto(args) -> int:
    spec = load_topology(args.topology)
    d = args.d if args.d else spec.d
    constraint = BudgetConstraint.for_generators(spec.gens, spec.budget)
    points = pareto_scan(spec.gens, constraint, resolution=args.resolution, d=d)
    out = args.out or f"{spec.name}-pareto.csv"
    labels = spec.gens.labels
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(",".join(labels) + ",lambda_cons,lambda_synch,on_front\n")
        for p in points:
            row = [repr(x) for x in p.weights]
            row += [repr(p.lambda_cons), repr(p.lambda_synch)]
            row.append("1" if p.on_front else "0")
            fh.write(",".join(row) + "\n")
    cons = np.array([p.lambda_cons for p in points])
    synch = np.array([p.lambda_synch for p in points])
    n_front = sum(1 for p in points if p.on_front)
    print(f"topology: {spec.name}  points: {len(points)}  front: {n_front}")
    for title, arr in (("lambda_cons", cons), ("lambda_synch", synch)):
        i = int(np.argmax(arr))
        at = " ".join(f"{lb}={fmt(v)}" for lb, v in zip(labels, points[i].weights))
        print(f"max {title}: {fmt(arr[i])} at {at}")
    print(f"wrote: {out}")
    return 0


def cmd_optimize(args) -> int:
    spec = load_topology(args.topology)
    d = args.d if args.d else spec.d
    constraint = BudgetConstraint.for_generators(spec.gens, spec.budget)
    weights, value = maximize_rate(
        spec.gens, constraint, objective=args.objective, d=d, seed=args.seed
    )
    print(f"topology: {spec.name}  objective: {args.objective}  d={d}")
    print(f"best value: {fmt(value)}")
    print(
        "weights: "
        + " ".join(f"{lb}={fmt(v)}" for lb, v in zip(spec.gens.labels, weights))
    )
    cost = float(np.dot(spec.gens.cycle_costs(), weights))
    print(f"budget used: {fmt(cost)} of {fmt(spec.budget)}")
    return 0


def _load_rho0(path: str, d: int) -> np.ndarray:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            entries = []
            for tok in line.split():
                re_s, _, im_s = tok.partition(",")
                entries.append(complex(float(re_s), float(im_s or 0.0)))
            rows.append(entries)
    rho = np.array(rows, dtype=complex)
    try:
        check_density(rho, d)
    except ValueError as exc:
        raise TopologyError(f"{path}: bad initial state: {exc}") from exc
    return rho


def cmd_simulate(args) -> int:
    spec = load_topology(args.topology)
    d = args.d if args.d else spec.d
    w = resolve_weights(spec, args.weights)
    _echo_config(spec, w, d)
    h0 = None
    if args.h0 == "zsum":
        h0 = uniform_site_hamiltonian(d, spec.n)
    if args.rho0 == "generic":
        rho0 = generic_state(d, spec.n, seed=args.seed, gens=spec.gens, weights=w)
    else:
        rho0 = _load_rho0(args.rho0, d)
    traj = evolve(
        rho0, h0, spec.gens, w, t_final=args.t, dt=args.dt,
        frame=args.frame, d=d, store_every=args.store_every,
    )
    group = generate_group(spec.gens)
    target = symmetric_state(rho0, group, d=d)
    sync = np.array([sync_distance(s, d) for s in traj.states])
    dist = frobenius_distances(traj.states, target)
    out = args.out or f"{spec.name}-trajectory.csv"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("t,sync_distance,distance_to_consensus\n")
        for t, s, c in zip(traj.times, sync, dist):
            fh.write(f"{repr(float(t))},{repr(float(s))},{repr(float(c))}\n")
    rates = convergence_rates(spec.gens, w, d=d)
    for label, series, ref in (
        ("sync", sync, rates.lambda_synch),
        ("consensus", dist, rates.lambda_cons),
    ):
        try:
            fitted = fit_decay_rate(traj.times, series)
        except InsufficientDecayError as exc:
            print(f"fitted {label} decay: unavailable ({exc})")
        else:
            rel = abs(fitted - ref) / ref if ref > 0 else float("inf")
            print(
                f"fitted {label} decay: {fmt(fitted)}  "
                f"(spectral {fmt(ref)}, rel dev {fmt(rel)})"
            )
    print(f"wrote: {out}")
    return 0


def cmd_spectrum(args) -> int:
    spec = load_topology(args.topology)
    d = args.d if args.d else spec.d
    w = resolve_weights(spec, args.weights)
    _echo_config(spec, w, d)
    if args.all:
        report = intertwining_check(spec.gens, w, d=d)
        print("intertwining:")
        for pc in report.pairs:
            inner = ",".join(map(str, pc.inner))
            outer = ",".join(map(str, pc.outer))
            verdict = "ok" if pc.included else f"VIOLATED at {fmt_c(pc.witness)}"
            print(
                f"  ({inner}) into ({outer}) [{pc.kind}]: {verdict} "
                f"(max defect {pc.max_defect:.3e})"
            )
        print(f"verdict: {'all inclusions hold' if report.ok else 'violations found'}")
        return 0
    if not args.partition:
        raise TopologyError("pass --partition like '2,1' or use --all")
    try:
        parts = tuple(int(tok) for tok in args.partition.split(","))
    except ValueError as exc:
        raise TopologyError(f"--partition: {exc}") from exc
    if sum(parts) != spec.n or any(p < 1 for p in parts) or list(parts) != sorted(
        parts, reverse=True
    ):
        raise TopologyError(
            f"--partition must be a non-increasing partition of {spec.n}"
        )
    if len(parts) == 1:
        raise TopologyError(
            "the one-part partition is excluded: its graph is a single vertex "
            "carrying the conserved trace coefficient"
        )
    ig = induced_laplacian(parts, spec.gens, w)
    print(f"partition: ({','.join(map(str, parts))})  vertices: {len(ig.vertices)}")
    print("laplacian:")
    for row in ig.laplacian:
        print("  " + " ".join(fmt(v) for v in row))
    print("spectrum:")
    for z in eigenvalues(ig.laplacian):
        print("  " + fmt_c(z))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcl",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=TOPOLOGY_GRAMMAR,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, weights: bool = True) -> None:
        p.add_argument("topology", help="preset name or topology file path")
        p.add_argument("--d", type=int, default=0, help="override site dimension")
        p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
        if weights:
            p.add_argument(
                "--weights", default=None,
                help="comma-separated values for the symbolic weights, file order",
            )

    p = sub.add_parser("rates", help="convergence rates at one weight vector")
    common(p)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("pareto", help="scan the budget face, write the cloud CSV")
    common(p, weights=False)
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV path (default <name>-pareto.csv)")
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("optimize", help="maximize one rate on the budget face")
    common(p, weights=False)
    p.add_argument(
        "--objective", choices=("consensus", "synchronization"), default="consensus"
    )
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", help="integrate the master equation, fit rates")
    common(p)
    p.add_argument("--rho0", default="generic", help="'generic' or matrix file path")
    p.add_argument("--t", type=float, default=20.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--frame", choices=("lab", "interaction"), default="lab")
    p.add_argument("--h0", choices=("zero", "zsum"), default="zero")
    p.add_argument("--store-every", type=int, default=10)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("spectrum", help="induced Laplacian and its spectrum")
    common(p)
    p.add_argument("--partition", default=None, help="e.g. '2,1'")
    p.add_argument("--all", action="store_true", help="print intertwining report")
    p.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(args) or 0)
    except TopologyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (NumericalFailureError, StepSizeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
