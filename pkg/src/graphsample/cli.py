"""Command-line entry point: ``graphsample <subcommand> ...``.

Options may also come from a ``key = value`` file passed with ``--config``
(keys are option names without dashes, e.g. ``K = 10``); command-line flags
win. When ``GRAPHSAMPLE_OUTPUT_DIR`` is set, relative output paths are
written under it.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from .harness import (
    ExperimentConfig,
    GraphSpec,
    compare_strategies,
    default_sizes,
    emit_csv,
    emit_plot_data,
    fit_curve_rate,
    parse_sizes,
    run_experiment,
)
from .recovery import linear_approx, mse, recover_designed, recover_least_squares, recover_random, write_result_csv
from .sampler import sample_scored, sample_uniform, write_samples_csv
from .signal_model import generate_blt_signal, load_signal, save_signal
from .spectral import classify_type1, classify_type2, decompose, norm_functionals, sampling_scores, save_basis
from .theory_bounds import gamma_interval, kappa_schedule, predicted_slope

OUTPUT_DIR_ENV = "GRAPHSAMPLE_OUTPUT_DIR"


def _out_path(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def read_config(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    cfg = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            cfg[key.lstrip("-").replace("-", "_")] = value
    return cfg


def _graph_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("graph")
    g.add_argument("--graph", choices=["ring", "er", "star"], default="ring")
    g.add_argument("--n", type=int, default=64, help="node count")
    g.add_argument("--k", type=int, default=4, help="ring: neighbors per node (even)")
    g.add_argument("--p", type=float, default=0.2, help="Erdos-Renyi edge probability")
    g.add_argument("--graph-seed", type=int, default=0, help="Erdos-Renyi seed")
    g.add_argument("--edges", default=None, help="read the graph from an edge-list file instead")


def _graph_spec(args) -> GraphSpec:
    if args.edges:
        return GraphSpec("file", path=args.edges)
    return GraphSpec(args.graph, args.n, args.k, args.p, args.graph_seed)


def _signal_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--K", type=int, default=10, help="signal bandwidth")
    p.add_argument("--beta", type=float, default=1.0, help="spectral decay exponent")


def _experiment_args(p: argparse.ArgumentParser) -> None:
    _graph_args(p)
    _signal_args(p)
    p.add_argument("--sigma2", type=float, default=0.01, help="noise variance")
    p.add_argument("--kappa", type=int, default=10, help="recovery bandwidth")
    p.add_argument("--kappa-schedule", choices=["type1"], default=None,
                   help="pick kappa per sample size as round(m^(1/(2 beta + 1)))")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--sizes", default=",".join(map(str, default_sizes())))
    p.add_argument("--strategies", default="random,designed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV output path")
    p.add_argument("--plot-data", default=None, help="gnuplot-style column output path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphsample", description=__doc__.splitlines()[0])
    parser.add_argument("--config", default=None, help="key = value option file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="decompose a graph and report basis statistics")
    _graph_args(p)
    p.add_argument("--kappa", type=int, default=10)
    p.add_argument("--type1-c", type=float, default=3.0)
    p.add_argument("--alpha", type=float, default=1.0, help="type-2 concentration constant")
    p.add_argument("--out", default=None, help="write N, eigenvalues and U to this file")

    p = sub.add_parser("gen-signal", help="draw an approximately bandlimited test signal")
    _graph_args(p)
    _signal_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    for name, choices, helptext in (
        ("sample", ["random", "designed"], "sample a signal"),
        ("recover", ["random", "designed", "least_squares"], "sample a signal and recover it"),
    ):
        p = sub.add_parser(name, help=helptext)
        _graph_args(p)
        _signal_args(p)
        p.add_argument("--signal", default=None, help="signal file; generated from --signal-seed if absent")
        p.add_argument("--signal-seed", type=int, default=0)
        p.add_argument("--strategy", choices=choices, default="random")
        p.add_argument("--kappa", type=int, default=10)
        p.add_argument("--m", type=int, default=100, help="number of samples")
        p.add_argument("--sigma2", type=float, default=0.01)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)

    p = sub.add_parser("experiment", help="Monte Carlo MSE curves for both strategies")
    _experiment_args(p)
    p = sub.add_parser("bounds", help="experiment plus the MSE upper bounds for each cell")
    _experiment_args(p)
    p = sub.add_parser("rates", help="fit log-log convergence slopes under the kappa schedule")
    _experiment_args(p)
    p.set_defaults(kappa_schedule="type1", K=3)
    p.add_argument("--k0", type=int, default=None, help="type-2 parameter for the gamma interval")
    return parser


def _basis(args):
    graph = _graph_spec(args).build()
    return graph, decompose(graph)


def _signal(args, basis):
    if args.signal:
        x = load_signal(args.signal)
        if x.shape[0] != basis.n:
            raise ValueError(f"signal has {x.shape[0]} entries but the graph has {basis.n} nodes")
        return x
    x, _ = generate_blt_signal(basis, args.K, args.beta, args.signal_seed)
    return x


def cmd_spectrum(args) -> int:
    _, basis = _basis(args)
    kappa = min(args.kappa, basis.n)
    lam = basis.eigenvalues
    t1, t1_val = classify_type1(basis, args.type1_c)
    t2, t2_val = classify_type2(basis, kappa, args.alpha, general=True)
    nf = norm_functionals(basis, kappa)
    w = sampling_scores(basis, kappa).scores
    print(f"N = {basis.n}")
    print(f"eigenvalues: max {lam[0]:.6g}, min {lam[-1]:.6g}")
    print(f"riesz constants: alpha1 = {basis.alpha1:.6g}, alpha2 = {basis.alpha2:.6g}")
    print(f"type-1 (c={args.type1_c}): {t1}  (max |U_ij| sqrt(N) = {t1_val:.4g})")
    print(f"general type-2 at K={kappa} (alpha={args.alpha}): {t2}  (ratio = {t2_val:.4g})")
    print(f"kappa={kappa}: N |U|_F^2 = {basis.n * nf.frob_sq:.6g}, |U|_21^2 = {nf.l21_sq:.6g}")
    print(f"sampling scores: min {w.min():.4g}, max {w.max():.4g}")
    out = _out_path(args.out)
    if out:
        save_basis(basis, out)
        print(f"basis written to {out}")
    return 0


def cmd_gen_signal(args) -> int:
    _, basis = _basis(args)
    x, _ = generate_blt_signal(basis, args.K, args.beta, args.seed)
    out = _out_path(args.out)
    save_signal(x, out)
    print(f"signal with N={basis.n} written to {out}")
    return 0


def _draw(args, basis, x):
    sigma = math.sqrt(args.sigma2)
    if args.strategy == "designed":
        return sample_scored(x, sampling_scores(basis, args.kappa), args.m, sigma, args.seed)
    return sample_uniform(x, args.m, sigma, args.seed)


def cmd_sample(args) -> int:
    _, basis = _basis(args)
    x = _signal(args, basis)
    samples = _draw(args, basis, x)
    out = _out_path(args.out)
    if out:
        write_samples_csv(samples, out)
        print(f"{len(samples)} samples written to {out}")
    else:
        write_samples_csv(samples, sys.stdout)
    return 0


def cmd_recover(args) -> int:
    _, basis = _basis(args)
    x = _signal(args, basis)
    samples = _draw(args, basis, x)
    recover = {"random": recover_random, "designed": recover_designed,
               "least_squares": recover_least_squares}[args.strategy]
    result = recover(basis, samples, args.kappa)
    print(f"strategy={args.strategy} kappa={args.kappa} m={args.m}")
    print(f"squared error: {mse(x, result.x_star):.6g}")
    print(f"linear-approximation floor: {mse(x, linear_approx(basis, x, args.kappa)):.6g}")
    out = _out_path(args.out)
    if out:
        write_result_csv(result, out)
        print(f"recovery written to {out}")
    return 0


def _config(args, basis) -> ExperimentConfig:
    sizes = parse_sizes(args.sizes)
    if args.kappa_schedule == "type1":
        kappa = tuple(kappa_schedule(args.beta, sizes, basis.n))
    else:
        kappa = args.kappa
    strategies = tuple(s.strip() for s in args.strategies.split(",") if s.strip())
    return ExperimentConfig(_graph_spec(args), sizes, bandwidth=args.K, beta=args.beta,
                            sigma2=args.sigma2, kappa=kappa, trials=args.trials, seed=args.seed,
                            strategies=strategies)


def _print_comparison(curve) -> None:
    if {"random", "designed"} <= set(curve.strategies):
        cmp = compare_strategies(curve.strategy("random"), curve.strategy("designed"))
        print("sample_size  random/designed  verdict")
        for m, r, lab in zip(cmp.sample_sizes, cmp.ratios, cmp.per_size):
            print(f"{int(m):>11}  {r:>15.4g}  {lab}")
        print(f"overall: {cmp.verdict}")


def cmd_experiment(args, with_bounds: bool = False) -> int:
    _, basis = _basis(args)
    curve = run_experiment(_config(args, basis), basis)
    out = _out_path(args.out)
    if out:
        emit_csv(curve, out, include_bounds=with_bounds)
        print(f"curve written to {out}")
    else:
        emit_csv(curve, sys.stdout, include_bounds=with_bounds)
    plot = _out_path(args.plot_data)
    if plot:
        emit_plot_data(curve, plot)
    _print_comparison(curve)
    if with_bounds:
        for s, bound in curve.mean_bound.items():
            if np.all(np.isnan(bound)):
                continue
            held = int(np.sum(curve.mean_mse[s] <= bound))
            print(f"{s}: mean MSE below bound in {held}/{bound.size} cells")
    return 0


def cmd_rates(args) -> int:
    _, basis = _basis(args)
    config = _config(args, basis)
    curve = run_experiment(config, basis)
    target = predicted_slope(args.beta)
    print(f"kappa schedule: {list(config.kappas())}")
    print(f"type-1 predicted slope: {target:.4f}")
    for s in curve.strategies:
        fit = fit_curve_rate(curve, s)
        print(f"{s}: slope {fit.slope:.4f}, r2 {fit.r2:.4f}")
    if args.k0 is not None:
        sizes = config.sample_sizes
        for m in (sizes[0], sizes[-1]):
            lo, hi = gamma_interval(args.beta, m, basis.n, args.K, args.k0)
            slopes = [predicted_slope(args.beta, g) for g in (lo, hi)]
            print(f"m={m}: type-2 gamma interval [{lo:.4g}, {hi:.4g}], "
                  f"designed slope from {slopes[0]:.4f} to {slopes[1]:.4f}")
    out = _out_path(args.out)
    if out:
        emit_csv(curve, out)
    return 0


def _split_config(argv: list[str]) -> tuple[str | None, list[str]]:
    rest, path = [], None
    it = iter(argv)
    for a in it:
        if a == "--config":
            path = next(it, None)
        elif a.startswith("--config="):
            path = a.split("=", 1)[1]
        else:
            rest.append(a)
    return path, rest


def _apply_config(parser: argparse.ArgumentParser, path: str, command: str | None) -> None:
    cfg = read_config(path)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    chosen = subparsers.choices.get(command)
    if chosen is not None:
        unknown = set(cfg) - {a.dest for a in chosen._actions}
        if unknown:
            parser.error(f"unknown config keys for {command}: {sorted(unknown)}")
        # string defaults are converted by each option's type on parse
        chosen.set_defaults(**cfg)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    config_path, argv = _split_config(argv)
    if config_path:
        command = next((a for a in argv if not a.startswith("-")), None)
        try:
            _apply_config(parser, config_path, command)
        except (ValueError, OSError) as exc:
            print(f"graphsample: error: {exc}", file=sys.stderr)
            return 2
    args = parser.parse_args(argv)
    try:
        if args.command == "spectrum":
            return cmd_spectrum(args)
        if args.command == "gen-signal":
            return cmd_gen_signal(args)
        if args.command == "sample":
            return cmd_sample(args)
        if args.command == "recover":
            return cmd_recover(args)
        if args.command == "experiment":
            return cmd_experiment(args)
        if args.command == "bounds":
            return cmd_experiment(args, with_bounds=True)
        if args.command == "rates":
            return cmd_rates(args)
    except (ValueError, OSError) as exc:
        print(f"graphsample: error: {exc}", file=sys.stderr)
        return 2
    return 1


if __name__ == "__main__":
    sys.exit(main())
