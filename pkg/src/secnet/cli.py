"""``secnet`` command line: solve, sweep, simulate, oracle.

Exit codes: 0 success, 2 infeasible, 3 unbounded, 4 input error, 5 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from collections.abc import Sequence
from pathlib import Path

from .fieldsim import SimConfig, SimulationError, reports_to_csv, simulate_trials, summarize
from .fieldsim.mds import FieldTooSmallError
from .fieldsim.simulate import CSV_COLUMNS
from .formulations import (
    ALGOS,
    FormulationConfig,
    SchemeSolution,
    SubsetLimitError,
    UnsolvedError,
    solve_scheme,
)
from .lpsolve import FEAS_TOL, PIVOT_TOL, IterationLimitError, Tolerances
from .netmodel import DEFAULT_MAX_PATHS, Network, NetworkError, PathLimitError, parse_network
from .oracles import LineParams, ParallelPairParams, line_bound, parallel_pair_bound
from .sweep import EVALUATORS, PRESETS, SweepSpec, run_sweep, to_csv

EXIT_OK, EXIT_INFEASIBLE, EXIT_UNBOUNDED, EXIT_INPUT, EXIT_LIMIT = 0, 2, 3, 4, 5


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read_network(path: str) -> Network:
    return parse_network(Path(path).read_text())


def _tolerances(args) -> Tolerances:
    return Tolerances(feas_tol=args.feas_tol, pivot_tol=args.pivot_tol)


def _emit(text: str, output: str | None) -> None:
    if output and output != "-":
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _g(v: float) -> str:
    return f"{v:.9g}"


def scheme_csv(scheme: SchemeSolution) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "name", "m", "k", "r", "s", "w", "value"])
    for g, er in scheme.per_edge.items():
        w.writerow(["edge", g, _g(er.m), _g(er.k), _g(er.r), _g(er.s), "", ""])
    for p, v in (scheme.per_path or {}).items():
        w.writerow(["path", p.label(), "", "", "", "", "", _g(v)])
    for (g, j), v in sorted((scheme.virtual_flows or {}).items()):
        w.writerow(["virtual", f"{g}>{j}", "", "", "", "", "", _g(v)])
    for g, v in (scheme.auxiliary or {}).items():
        w.writerow(["aux", g, "", "", "", "", "", _g(v)])
    for (l, g), sr in (scheme.per_source or {}).items():
        w.writerow(["source_edge", f"{l}:{g}", _g(sr.m), _g(sr.k), _g(sr.r), _g(sr.s), _g(sr.w), ""])
    return buf.getvalue()


def _config(args) -> FormulationConfig:
    return FormulationConfig(
        algo=args.algo,
        wiretap_count=args.wiretaps,
        max_paths=args.max_paths,
        arq_only=getattr(args, "arq_only", False),
    )


def cmd_solve(args) -> int:
    net = _read_network(args.network)
    scheme = solve_scheme(net, _config(args), _tolerances(args))
    print(f"{scheme.rate:.9f}")
    _emit(scheme_csv(scheme), args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    tol = _tolerances(args)
    if args.preset:
        header, rows = PRESETS[args.preset](tol)
    else:
        if not args.network or not args.edge:
            raise ValueError("sweep needs a network file and at least one --edge, or --preset")
        spec = SweepSpec(
            edges=tuple(args.edge),
            param=args.param,
            start=args.start,
            stop=args.stop,
            step=args.step,
            formulations=tuple(args.algos.split(",")),
            wiretap_count=args.wiretaps,
        )
        header, rows = run_sweep(_read_network(args.network), spec, tol)
    _emit(to_csv(header, rows), args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    net = _read_network(args.network)
    if not net.has_edge(args.eve):
        raise SimulationError(f"unknown eavesdropped edge {args.eve!r}")
    scheme = solve_scheme(net, _config(args), _tolerances(args))
    cfg = SimConfig(
        generation_slots=args.generation_slots,
        secrecy_margin=args.margin,
        two_phase=args.two_phase,
    )
    reps = simulate_trials(net, scheme, args.slots, args.eve, args.trials, args.seed, cfg)
    summary = summarize(reps)
    mean = {**summary, "trial": "mean", "seed": args.seed}
    std = {c: summary.get(f"{c}_std") for c in CSV_COLUMNS} | {"trial": "std", "seed": args.seed}
    text = reports_to_csv(reps, [mean, std]).splitlines()
    text[0] += ",lp_rate"
    text = [text[0]] + [line + "," + _g(scheme.rate) for line in text[1:]]
    _emit("\n".join(text) + "\n", args.output)
    return EXIT_OK


def _probabilities(values: Sequence[str]) -> list[float]:
    out = []
    for v in values:
        out.extend(float(x) for x in v.split())
    return out


def cmd_oracle(args) -> int:
    vals = _probabilities(args.params)
    tol = _tolerances(args)
    if args.kind == "parallel":
        if len(vals) != 4:
            raise ValueError("parallel oracle takes delta1 delta1e delta2 delta2e")
        rate = parallel_pair_bound(ParallelPairParams(*vals), tol)
    else:
        if not vals or len(vals) % 2:
            raise ValueError("line oracle takes delta_j delta_je pairs, one per hop")
        rate = line_bound(LineParams.of(list(zip(vals[::2], vals[1::2]))), tol)
    print(f"{rate:.9f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="secnet", description="Secure message rates over erasure networks with an eavesdropper.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--feas-tol", type=float, default=FEAS_TOL)
        sp.add_argument("--pivot-tol", type=float, default=PIVOT_TOL)
        sp.add_argument("--output", "-o", help="write CSV here instead of stdout")

    def formulation(sp, choices=ALGOS):
        sp.add_argument("--algo", choices=choices, default="1")
        sp.add_argument("--wiretaps", type=int, default=1, help="edges Eve observes (algo 4)")
        sp.add_argument("--max-paths", type=int, default=DEFAULT_MAX_PATHS)
        sp.add_argument("--arq-only", action="store_true", help="pin every MDS rate to zero")

    s = sub.add_parser("solve", help="solve one formulation and print the rate and scheme")
    s.add_argument("network")
    formulation(s)
    common(s)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("sweep", help="sweep an edge parameter or run a preset")
    s.add_argument("network", nargs="?")
    s.add_argument("--preset", choices=sorted(PRESETS))
    s.add_argument("--edge", action="append", help="edge to sweep (repeatable)")
    s.add_argument("--param", choices=("delta", "delta_e"), default="delta_e")
    s.add_argument("--start", type=float, default=0.0)
    s.add_argument("--stop", type=float, default=1.0)
    s.add_argument("--step", type=float, default=0.1)
    s.add_argument("--algos", default="1", help=f"comma list from {','.join(EVALUATORS)}")
    s.add_argument("--wiretaps", type=int, default=1)
    common(s)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("simulate", help="solve, then Monte-Carlo the scheme")
    s.add_argument("network")
    formulation(s, ("1", "2", "3"))
    s.add_argument("--slots", type=int, default=20000)
    s.add_argument("--eve", required=True, help="wiretapped edge id")
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--generation-slots", type=int, default=SimConfig.generation_slots)
    s.add_argument("--margin", type=float, default=SimConfig.secrecy_margin)
    s.add_argument("--two-phase", action="store_true", help="all key traffic before any message traffic")
    common(s)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("oracle", help="evaluate an outer-bound LP")
    s.add_argument("kind", choices=("parallel", "line"))
    s.add_argument("params", nargs="+", help="probabilities; line takes one 'delta delta_e' pair per hop")
    common(s)
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnsolvedError as exc:
        print(f"secnet: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE if exc.status == "infeasible" else EXIT_UNBOUNDED
    except (PathLimitError, SubsetLimitError, IterationLimitError, FieldTooSmallError) as exc:
        print(f"secnet: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (NetworkError, SimulationError, ValueError, KeyError, OSError) as exc:
        print(f"secnet: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
