"""Command line entry point: ``slimenet <command> ...``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .experiment import ExperimentConfig, RecordFormatError, extract_pareto, run_experiment, summary
from .generators import DEFAULT_GRID, Scenario, complete_network, slime_network, tree_network
from .graph import NetworkError, build_grid, fmt, load_network, save_network, snap_centers
from .metrics import indicators
from .physarum import MultiCenter, PhysarumParams, RandomPair, SingularNetworkError, run
from .postprocess import clean
from .render import render_pareto_svg, render_svg

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_INVALID = 0, 1, 2, 3

log = logging.getLogger("slimenet")


def _grid_dims(text: str) -> tuple[int, int]:
    rows, _, cols = text.lower().partition("x")
    try:
        return int(rows), int(cols or rows)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 15x15, got {text!r}") from None


def _centers(text: str) -> list[tuple[float, float]]:
    out = []
    for chunk in filter(None, text.split(";")):
        x, y = chunk.split(",")
        out.append((float(x), float(y)))
    return out


def _params(args) -> PhysarumParams:
    return PhysarumParams(
        gamma=args.gamma, t_f=args.tf, D0=args.d0, dt=args.dt, eps_conv=getattr(args, "eps_conv", 0.0)
    )


def _add_dynamics(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma", type=float, default=1.8)
    p.add_argument("--tf", type=int, default=1000, help="number of steps")
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--d0", type=float, default=0.5, help="initial diameter")


def _write_diameters(net, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["src", "dst", "diameter", "flow"])
        for e in net.edges:
            w.writerow([e.src, e.dst, fmt(e.diameter), fmt(e.flow)])


def cmd_grid(args) -> int:
    net = build_grid(*args.grid)
    if args.centers:
        net = snap_centers(net, _centers(args.centers))
    save_network(net, args.nodes, args.edges)
    print(f"{net.n_nodes} nodes, {net.n_edges} edges")
    return EXIT_OK


def cmd_generate(args) -> int:
    scenario = Scenario.load(args.scenario)
    connected = True
    if args.generator == "slime":
        res = slime_network(scenario, _params(args), args.grid)
        net, connected = res.network, res.connected
    elif args.generator == "complete":
        net = complete_network(scenario)
    else:
        net = tree_network(scenario)
    prefix = Path(args.out)
    save_network(net, f"{prefix}_nodes.csv", f"{prefix}_edges.csv")
    render_svg(net, f"{prefix}.svg", scenario, args.density)
    pair = indicators(net)
    print(json.dumps({
        "generator": args.generator, "nodes": net.n_nodes, "edges": net.n_edges,
        "connected": connected, "length_rel": pair.length_rel,
        "perf_rel": pair.perf_rel if pair.valid else None,
    }))
    return EXIT_OK


def cmd_run(args) -> int:
    net = load_network(args.nodes, args.edges)
    if args.centers:
        net = snap_centers(net, _centers(args.centers))
    params = _params(args)
    net.set_diameters(params.D0)
    centers = tuple(net.center_ids())
    scheduler = (MultiCenter if args.scheduler == "multi" else RandomPair)(centers, params.I0)
    result = run(net, params, scheduler, args.seed, record_trajectory=bool(args.trajectory))
    prefix = Path(args.out)
    _write_diameters(result.network, Path(f"{prefix}_diameters.csv"))
    render_svg(result.network, f"{prefix}.svg")
    designed, connected = clean(result.network)
    save_network(designed, f"{prefix}_design_nodes.csv", f"{prefix}_design_edges.csv")
    render_svg(designed, f"{prefix}_design.svg")
    if args.trajectory:
        with open(args.trajectory, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["step", "total_abs_change", "visible_length"])
            for step, change, visible in result.trajectory:
                w.writerow([step, fmt(change), fmt(visible)])
    print(json.dumps({"iterations": result.iterations, "converged": result.converged,
                      "design_edges": designed.n_edges, "connected": connected}))
    return EXIT_OK


def cmd_experiment(args) -> int:
    config = ExperimentConfig(
        n_lhs=args.lhs, n_reps=args.reps,
        N_range=(args.n_min, args.n_max), gamma_range=(args.gamma_min, args.gamma_max),
        grid_dims=args.grid, params=replace(PhysarumParams(), t_f=args.tf),
        seed=args.seed, out=Path(args.out), workers=args.workers, timings=args.timings,
    )
    records = run_experiment(config)
    print(json.dumps(summary(records), indent=2))
    return EXIT_OK if all(r.valid for r in records) else EXIT_INVALID


def cmd_pareto(args) -> int:
    front = extract_pareto(args.input, args.out)
    print(f"{len(front)} non-dominated records written to {args.out}")
    return EXIT_OK


def cmd_render(args) -> int:
    if args.kind == "network":
        if not (args.nodes and args.edges):
            raise ValueError("render network needs --nodes and --edges")
        scenario = Scenario.load(args.scenario) if args.scenario else None
        render_svg(load_network(args.nodes, args.edges), args.out, scenario, args.density)
    else:
        if not args.input:
            raise ValueError("render scatter needs --in")
        render_pareto_svg(args.input, args.out, args.front)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slimenet", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("grid", help="write a grid network to CSV")
    p.add_argument("--grid", type=_grid_dims, default=DEFAULT_GRID)
    p.add_argument("--centers", help='center positions, e.g. "0.1,0.2;0.8,0.9"')
    p.add_argument("--nodes", required=True)
    p.add_argument("--edges", required=True)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("generate", help="build one network from a scenario config")
    p.add_argument("--scenario", required=True, help="scenario JSON")
    p.add_argument("--generator", choices=("slime", "complete", "tree"), default="slime")
    p.add_argument("--grid", type=_grid_dims, default=DEFAULT_GRID)
    p.add_argument("--density", action="store_true", help="draw the density background")
    p.add_argument("--out", required=True, help="output prefix")
    _add_dynamics(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="single dynamics run on a network file")
    p.add_argument("--nodes", required=True)
    p.add_argument("--edges", required=True)
    p.add_argument("--centers", help="extra centers snapped onto the network")
    p.add_argument("--scheduler", choices=("multi", "pair"), default="pair")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps-conv", type=float, default=0.0)
    p.add_argument("--trajectory", help="per-step CSV dump")
    p.add_argument("--out", required=True, help="output prefix")
    _add_dynamics(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("experiment", help="LHS x replications x generators batch")
    p.add_argument("--lhs", type=int, default=100)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--gamma-min", type=float, default=0.5)
    p.add_argument("--gamma-max", type=float, default=2.5)
    p.add_argument("--grid", type=_grid_dims, default=DEFAULT_GRID)
    p.add_argument("--tf", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timings", action="store_true",
                   help="record wall time (output no longer byte-reproducible)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("pareto", help="extract the non-dominated records")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("render", help="SVG of a network or of an experiment scatter")
    p.add_argument("kind", choices=("network", "scatter"))
    p.add_argument("--nodes")
    p.add_argument("--edges")
    p.add_argument("--scenario")
    p.add_argument("--density", action="store_true")
    p.add_argument("--in", dest="input", help="experiment CSV (scatter)")
    p.add_argument("--front", action="store_true", help="ring the Pareto front")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (NetworkError, RecordFormatError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SingularNetworkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
