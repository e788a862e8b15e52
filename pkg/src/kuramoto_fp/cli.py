"""Command-line entry point.

Subcommands: solve, integrate, certify, scan, conj51, draw. Options may
also come from a ``key=value`` file given with ``--config``; flags on the
command line win. Exit status is 0 on success, 1 when a solver fails and 2
on bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .dynamics import PhaseState, integrate_rk4
from .errors import FormatError, KuramotoError
from .experiments import conjecture51_r, random_phases, theorem51_harness, trial_rng
from .fixpoint import (
    FixedPoint,
    format_phases,
    is_zero_fixed_point,
    parse_phases,
    solve_newton,
    twisted_state,
)
from .network import Network, circulant_network, complete_network, cycle_network, load_edge_list
from .render import render_circle_diagram
from .stability import (
    EXHAUSTIVE_MAX_N,
    centroid_singleton_cut,
    classify,
    cut_cosine_sum,
    find_unstable_cut,
)

EXIT_OK, EXIT_SOLVER, EXIT_INPUT = 0, 1, 2


class UsageError(KuramotoError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def load_config(path) -> dict:
    """Read ``key=value`` lines; ``#`` starts a comment line."""
    cfg = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        cfg[key.replace("-", "_")] = value
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kuramoto-fp", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file of option defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    net = argparse.ArgumentParser(add_help=False)
    net.add_argument("--network", choices=["complete", "cycle", "circulant", "file"])
    net.add_argument("--n", type=int)
    net.add_argument("--offsets", type=_int_list, help="circulant offsets, e.g. 1,4")
    net.add_argument("--edges", help="edge-list file for --network file")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--k", type=float, default=1.0)
    model.add_argument("--omega", default="zero", help="zero | const:<v> | file:<path>")
    model.add_argument("--theta", help="phase CSV file")
    model.add_argument("--seed", type=int, default=0)

    parser.subcommands = sub.choices
    p = sub.add_parser("solve", parents=[net, model], help="Newton solve for a fixed point")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--out", help="write the fixed point as a phase CSV")

    p = sub.add_parser("integrate", parents=[net, model], help="RK4 trajectory")
    p.add_argument("--h", type=float)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--record-every", type=int, default=1)
    p.add_argument("--out", help="trajectory CSV (default stdout)")
    p.add_argument("--figure", help="PNG of relative phases")

    p = sub.add_parser("certify", parents=[net, model], help="stability report and cut certificates")
    p.add_argument("--mode", choices=["auto", "exhaustive", "heuristic"], default="auto")
    p.add_argument("--out", help="write the report here as well as stdout")
    p.add_argument("--figure", help="PNG of the spectrum")
    p.add_argument("--eigenvalues", help="CSV of the sorted eigenvalues")

    p = sub.add_parser("scan", help="fixed-point search on near-complete networks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-degree", choices=["n-1", "n-2"], default="n-1")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write the report here as well as stdout")

    p = sub.add_parser("conj51", help="degree threshold r(n)")
    p.add_argument("--n", type=int, help="single n")
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--out", help="CSV of rows")
    p.add_argument("--figure", help="PNG of 2r/n against n")

    p = sub.add_parser("draw", parents=[net], help="SVG circle diagram")
    p.add_argument("--theta", help="phase CSV file")
    p.add_argument("--twist", type=int, help="use the q-twisted state instead of --theta")
    p.add_argument("--highlight", type=_int_list, default=[], help="nodes to mark, e.g. 0,1")
    p.add_argument("--out", required=True)
    return parser


def make_network(args) -> Network:
    kind = args.network
    if kind is None:
        raise UsageError("--network is required")
    if kind == "file":
        if not args.edges:
            raise UsageError("--network file needs --edges")
        return load_edge_list(Path(args.edges).read_text())
    if args.n is None:
        raise UsageError(f"--network {kind} needs --n")
    if kind == "complete":
        return complete_network(args.n)
    if kind == "cycle":
        return cycle_network(args.n)
    if not args.offsets:
        raise UsageError("--network circulant needs --offsets")
    return circulant_network(args.n, args.offsets)


def make_omega(spec: str, n: int) -> np.ndarray:
    if spec == "zero":
        return np.zeros(n)
    if spec.startswith("const:"):
        try:
            return np.full(n, float(spec[6:]))
        except ValueError:
            raise UsageError(f"bad omega constant in {spec!r}") from None
    if spec.startswith("file:"):
        omega = parse_phases(Path(spec[5:]).read_text())
        if omega.size != n:
            raise UsageError(f"omega file has {omega.size} values, network has {n} nodes")
        return omega
    raise UsageError(f"--omega must be zero, const:<v> or file:<path>, got {spec!r}")


def read_theta(path, n: int) -> np.ndarray:
    theta = parse_phases(Path(path).read_text())
    if theta.size != n:
        raise UsageError(f"phase file has {theta.size} values, network has {n} nodes")
    return theta


def _state(args, net: Network) -> PhaseState:
    omega = make_omega(args.omega, net.n)
    if args.theta:
        theta = read_theta(args.theta, net.n)
    else:
        theta = random_phases(trial_rng(args.seed, 0), net.n)
    return PhaseState(theta, omega, args.k)


def _emit(text: str, out) -> None:
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text)


def _phase_line(theta) -> str:
    return " ".join(f"{x:.12g}" for x in theta)


def cmd_solve(args) -> int:
    net = make_network(args)
    state = _state(args, net)
    result = solve_newton(net, state, tol=args.tol, max_iter=args.max_iter)
    lines = [
        f"status: {result.status}",
        f"iterations: {result.iterations}",
        f"residual_norm: {result.residual_norm:.12g}",
        f"theta: {_phase_line(result.theta)}",
    ]
    if not result.success:
        sys.stdout.write("\n".join(lines) + "\n")
        return EXIT_SOLVER
    report = classify(net, state.k, result.fixed_point)
    lines.append(f"classification: {report.classification}")
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        Path(args.out).write_text(format_phases(result.theta) + "\n")
    return EXIT_OK


def cmd_integrate(args) -> int:
    net = make_network(args)
    traj = integrate_rk4(net, _state(args, net), h=args.h, steps=args.steps, record_every=args.record_every)
    csv = traj.to_csv()
    if args.out:
        Path(args.out).write_text(csv)
    else:
        sys.stdout.write(csv)
    if args.figure:
        from .plotting import plot_trajectory

        plot_trajectory(traj, args.figure)
    return EXIT_OK


def certify_report(net: Network, state: PhaseState, mode: str = "auto"):
    """Report text plus the :class:`StabilityReport` it was built from."""
    fp = FixedPoint.from_state(net, state)
    if fp.residual_norm >= 1e-8:
        raise UsageError(f"phases are not a fixed point (residual {fp.residual_norm:.3e})")
    report = classify(net, state.k, fp)
    lines = [
        f"n: {net.n}",
        f"edges: {len(net.edges)}",
        f"k: {state.k:.12g}",
        f"residual_norm: {fp.residual_norm:.12g}",
        f"theta: {_phase_line(fp.theta)}",
    ]
    lines.append(report.to_text().rstrip("\n"))
    singles = [cut_cosine_sum(net, fp, [i]).cut_sum for i in range(net.n)]
    worst = int(np.argmin(singles))
    lines.append(f"min_singleton_node: {worst}")
    lines.append(f"min_singleton_cut_sum: {singles[worst]:.12g}")
    if mode == "auto":
        mode = "exhaustive" if net.n <= EXHAUSTIVE_MAX_N else "heuristic"
    lines.append(f"cut_search: {mode}")
    cert = find_unstable_cut(net, fp, mode=mode)
    if cert is None:
        lines.append("certificate: none")
    else:
        lines.append("certificate: found")
        lines.append(cert.to_text().rstrip("\n"))
    if net.min_degree >= net.n - 2 and report.classification != "degenerate":
        if not is_zero_fixed_point(fp.theta):
            cc = centroid_singleton_cut(net, fp)
            lines.append(f"centroid_node: {cc.node}")
            lines.append(f"centroid_cut_sum: {cc.cut_sum:.12g}")
            lines.append(f"centroid_magnitude: {cc.centroid_magnitude:.12g}")
    return "\n".join(lines) + "\n", report


def cmd_certify(args) -> int:
    net = make_network(args)
    if not args.theta:
        raise UsageError("certify needs --theta")
    state = PhaseState(read_theta(args.theta, net.n), make_omega(args.omega, net.n), args.k)
    text, report = certify_report(net, state, args.mode)
    _emit(text, args.out)
    if args.eigenvalues:
        Path(args.eigenvalues).write_text("eigenvalue\n" + "".join(f"{x:.17g}\n" for x in report.eigenvalues))
    if args.figure:
        from .plotting import plot_spectrum

        plot_spectrum(report.eigenvalues, report.tau, args.figure)
    return EXIT_OK


def cmd_scan(args) -> int:
    report = theorem51_harness(args.n, args.trials, args.seed, min_degree=args.min_degree, workers=args.workers)
    _emit(report.to_text(), args.out)
    return EXIT_OK


def cmd_conj51(args) -> int:
    if args.n is not None:
        row = conjecture51_r(args.n)
        sys.stdout.write(f"n: {row.n}\nr: {row.r}\nratio: {row.ratio:.12g}\n")
        rows = [row]
    else:
        if args.n_min is None or args.n_max is None:
            raise UsageError("conj51 needs --n or both --n-min and --n-max")
        rows = [conjecture51_r(n) for n in range(args.n_min, args.n_max + 1)]
        sys.stdout.write("n,r,ratio\n" + "".join(r.to_csv() + "\n" for r in rows))
    if args.out:
        Path(args.out).write_text("n,r,ratio\n" + "".join(r.to_csv() + "\n" for r in rows))
    if args.figure:
        from .plotting import plot_threshold_scan

        plot_threshold_scan(rows, args.figure)
    return EXIT_OK


def cmd_draw(args) -> int:
    net = make_network(args)
    if args.twist is not None:
        theta = twisted_state(net.n, args.twist)
    elif args.theta:
        theta = read_theta(args.theta, net.n)
    else:
        raise UsageError("draw needs --theta or --twist")
    render_circle_diagram(net, theta, args.out, highlight=args.highlight)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "integrate": cmd_integrate,
    "certify": cmd_certify,
    "scan": cmd_scan,
    "conj51": cmd_conj51,
    "draw": cmd_draw,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        first = argparse.ArgumentParser(add_help=False)
        first.add_argument("--config")
        known, _ = first.parse_known_args(argv)
        if known.config:
            cfg = load_config(known.config)
            command = next((a for a in argv if a in COMMANDS), None)
            if command is not None:
                subparser = parser.subcommands[command]
                valid = {a.dest for a in subparser._actions}
                unknown = sorted(set(cfg) - valid)
                if unknown:
                    raise UsageError(f"unknown config keys: {', '.join(unknown)}")
                subparser.set_defaults(**cfg)
    except (KuramotoError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except (KuramotoError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
