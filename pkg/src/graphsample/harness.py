"""Monte Carlo comparison of uniform and score-weighted sampling.

Each trial draws a fresh approximately bandlimited signal, samples it at
every size on the grid with every strategy, recovers it and records the
squared error together with the matching theoretical bound. Trials use
seeds derived from ``(seed, trial, ...)`` so results do not depend on
execution order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ._io import text_out
from .graph_core import GraphShift, build_erdos_renyi, build_ring_knn, build_star, load_edge_list, normalize_shift
from .recovery import linear_approx, mse, recover_designed, recover_least_squares, recover_random
from .sampler import sample_scored, sample_uniform
from .signal_model import blt_residual, generate_blt_signal
from .spectral import SpectralBasis, decompose, norm_functionals, sampling_scores
from .theory_bounds import BoundInputs, RateFit, bound_designed, bound_random, fit_rate

__all__ = [
    "GraphSpec",
    "ExperimentConfig",
    "StrategyCurve",
    "MseCurve",
    "Comparison",
    "run_experiment",
    "emit_csv",
    "read_csv",
    "emit_plot_data",
    "compare_strategies",
    "fit_curve_rate",
    "default_sizes",
    "parse_sizes",
]

STRATEGIES = ("random", "designed", "least_squares")
CSV_HEADER = ["sample_size", "strategy", "mean_mse", "std_err", "floor"]


@dataclass(frozen=True)
class GraphSpec:
    """Named graph family plus its parameters; ``family='file'`` reads an edge list."""

    family: str
    n: int = 64
    k: int = 4
    p: float = 0.2
    seed: int = 0
    path: str | None = None

    def build(self) -> GraphShift:
        if self.family == "ring":
            g = build_ring_knn(self.n, self.k)
        elif self.family == "er":
            g = build_erdos_renyi(self.n, self.p, self.seed)
        elif self.family == "star":
            g = build_star(self.n)
        elif self.family == "file":
            if self.path is None:
                raise ValueError("graph family 'file' needs a path")
            g = load_edge_list(self.path)
        else:
            raise ValueError(f"unknown graph family {self.family!r}; expected ring, er, star or file")
        return g if g.normalized else normalize_shift(g)


@dataclass(frozen=True)
class ExperimentConfig:
    graph: GraphSpec
    sample_sizes: tuple[int, ...]
    bandwidth: int = 10
    beta: float = 1.0
    sigma2: float = 0.01
    kappa: int | tuple[int, ...] = 10
    trials: int = 50
    seed: int = 0
    strategies: tuple[str, ...] = ("random", "designed")

    def __post_init__(self):
        sizes = tuple(int(m) for m in self.sample_sizes)
        object.__setattr__(self, "sample_sizes", sizes)
        if not sizes or any(m < 1 for m in sizes):
            raise ValueError("sample sizes must be positive")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError(f"sample sizes must be strictly increasing, got {sizes}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.sigma2 < 0:
            raise ValueError("noise variance must be nonnegative")
        if not isinstance(self.kappa, (int, np.integer)):
            kap = tuple(int(k) for k in self.kappa)
            if len(kap) != len(sizes):
                raise ValueError("a kappa schedule needs one value per sample size")
            object.__setattr__(self, "kappa", kap)
        bad = [s for s in self.strategies if s not in STRATEGIES]
        if bad:
            raise ValueError(f"unknown strategies {bad}; choose from {STRATEGIES}")

    def kappas(self) -> list[int]:
        if isinstance(self.kappa, tuple):
            return list(self.kappa)
        return [int(self.kappa)] * len(self.sample_sizes)


@dataclass(frozen=True)
class StrategyCurve:
    name: str
    sample_sizes: np.ndarray
    mean_mse: np.ndarray
    std_err: np.ndarray


@dataclass
class MseCurve:
    """Per-size Monte Carlo statistics for each strategy.

    ``floor`` is the mean over trials of ``|x - V_(kappa) U_(kappa) x|^2``,
    the error both estimators approach as samples grow. ``mean_bound`` holds
    the mean MSE upper bound per strategy (NaN where no bound applies).
    """

    sample_sizes: np.ndarray
    mean_mse: dict[str, np.ndarray]
    std_err: dict[str, np.ndarray]
    floor: np.ndarray
    kappas: np.ndarray | None = None
    floor_std_err: np.ndarray | None = None
    mean_bound: dict[str, np.ndarray] = field(default_factory=dict)
    trials: int | None = None

    @property
    def strategies(self) -> list[str]:
        return list(self.mean_mse)

    def strategy(self, name: str) -> StrategyCurve:
        return StrategyCurve(name, self.sample_sizes, self.mean_mse[name], self.std_err[name])


def _mean_and_se(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    t = values.shape[0]
    mean = values.mean(axis=0)
    if t < 2:
        return mean, np.zeros_like(mean)
    return mean, values.std(axis=0, ddof=1) / math.sqrt(t)


def run_experiment(config: ExperimentConfig, basis: SpectralBasis | None = None) -> MseCurve:
    """Run all trials of ``config`` and aggregate them into an :class:`MseCurve`.

    ``basis`` may be passed to reuse a decomposition of ``config.graph``.
    The bound for each recovery is evaluated with the signal's own tail bound
    measured at bandwidth ``kappa`` and its own largest squared entry.
    """
    if basis is None:
        basis = decompose(config.graph.build())
    n = basis.n
    sizes = config.sample_sizes
    kappas = config.kappas()
    if max(kappas) > n or min(kappas) < 1:
        raise ValueError(f"kappa values must lie in [1, {n}]")
    if not 1 <= config.bandwidth <= n:
        raise ValueError(f"signal bandwidth must lie in [1, {n}]")
    sigma = math.sqrt(config.sigma2)
    unique_k = sorted(set(kappas))
    scores = {k: sampling_scores(basis, k) for k in unique_k}
    norms = {k: norm_functionals(basis, k) for k in unique_k}

    t_count, s_count = config.trials, len(sizes)
    errors = {s: np.empty((t_count, s_count)) for s in config.strategies}
    bounds = {s: np.full((t_count, s_count), np.nan) for s in config.strategies}
    floors = np.empty((t_count, s_count))

    for t in range(t_count):
        x, _ = generate_blt_signal(basis, config.bandwidth, config.beta,
                                   np.random.SeedSequence([config.seed, t]))
        norm_sq = float(x @ x)
        max_sq = float(np.max(x**2))
        floor_k = {k: mse(x, linear_approx(basis, x, k)) for k in unique_k}
        mu_k = {k: blt_residual(basis, x, k, config.beta) for k in unique_k}
        for i, (m, k) in enumerate(zip(sizes, kappas)):
            floors[t, i] = floor_k[k]
            inputs = BoundInputs(alpha2=basis.alpha2, mu=mu_k[k], signal_norm_sq=norm_sq,
                                 max_coeff_sq=max_sq, sigma_sq=config.sigma2, kappa=k,
                                 beta=config.beta, m=m, frob_sq=norms[k].frob_sq,
                                 l21_sq=norms[k].l21_sq, n=n)
            for j, strategy in enumerate(config.strategies):
                draw_seed = np.random.SeedSequence([config.seed, t, i, j])
                if strategy == "designed":
                    samples = sample_scored(x, scores[k], m, sigma, draw_seed)
                    result = recover_designed(basis, samples, k)
                    bounds[strategy][t, i] = bound_designed(inputs)
                else:
                    samples = sample_uniform(x, m, sigma, draw_seed)
                    if strategy == "random":
                        result = recover_random(basis, samples, k)
                        bounds[strategy][t, i] = bound_random(inputs)
                    else:
                        result = recover_least_squares(basis, samples, k)
                errors[strategy][t, i] = mse(x, result.x_star)

    mean_mse, std_err, mean_bound = {}, {}, {}
    for s in config.strategies:
        mean_mse[s], std_err[s] = _mean_and_se(errors[s])
        mean_bound[s] = bounds[s].mean(axis=0)
    floor, floor_se = _mean_and_se(floors)
    return MseCurve(np.array(sizes), mean_mse, std_err, floor, np.array(kappas), floor_se,
                    mean_bound, t_count)


def _fmt(value: float) -> str:
    return repr(float(value))


def emit_csv(curve: MseCurve, path, include_bounds: bool = False) -> None:
    """Write ``sample_size,strategy,mean_mse,std_err,floor`` rows (plus ``bound`` if asked)."""
    header = CSV_HEADER + (["bound"] if include_bounds else [])
    with text_out(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i, m in enumerate(curve.sample_sizes):
            for s in curve.strategies:
                row = [int(m), s, _fmt(curve.mean_mse[s][i]), _fmt(curve.std_err[s][i]),
                       _fmt(curve.floor[i])]
                if include_bounds:
                    bound = curve.mean_bound.get(s)
                    row.append(_fmt(bound[i]) if bound is not None else "nan")
                writer.writerow(row)


def read_csv(path) -> MseCurve:
    """Parse a file written by :func:`emit_csv` back into a curve."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    sizes: list[int] = []
    floor: list[float] = []
    mean: dict[str, list[float]] = {}
    se: dict[str, list[float]] = {}
    bound: dict[str, list[float]] = {}
    for r in rows:
        m = int(r["sample_size"])
        if not sizes or sizes[-1] != m:
            sizes.append(m)
            floor.append(float(r["floor"]))
        s = r["strategy"]
        mean.setdefault(s, []).append(float(r["mean_mse"]))
        se.setdefault(s, []).append(float(r["std_err"]))
        if "bound" in r:
            bound.setdefault(s, []).append(float(r["bound"]))
    as_arr = lambda d: {k: np.array(v) for k, v in d.items()}  # noqa: E731
    return MseCurve(np.array(sizes), as_arr(mean), as_arr(se), np.array(floor),
                    mean_bound=as_arr(bound))


def emit_plot_data(curve: MseCurve, path) -> None:
    """Whitespace-separated columns for gnuplot: size, floor, then mean/stderr per strategy."""
    cols = ["sample_size", "floor"]
    for s in curve.strategies:
        cols += [f"{s}_mean", f"{s}_stderr"]
    with text_out(path) as fh:
        fh.write("# " + " ".join(cols) + "\n")
        for i, m in enumerate(curve.sample_sizes):
            vals = [str(int(m)), _fmt(curve.floor[i])]
            for s in curve.strategies:
                vals += [_fmt(curve.mean_mse[s][i]), _fmt(curve.std_err[s][i])]
            fh.write(" ".join(vals) + "\n")


@dataclass(frozen=True)
class Comparison:
    """Per-size ``mean_a / mean_b`` ratios and a 2-sigma verdict.

    ``per_size`` entries are ``"similar"``, ``"<a>-better"`` or ``"<b>-better"``.
    The overall ``verdict`` names a winner only when it is ahead at three or
    more consecutive sizes and never behind.
    """

    sample_sizes: np.ndarray
    ratios: np.ndarray
    pooled_se: np.ndarray
    per_size: list[str]
    verdict: str


def compare_strategies(a: StrategyCurve, b: StrategyCurve, n_sigma: float = 2.0,
                       run_length: int = 3) -> Comparison:
    if not np.array_equal(a.sample_sizes, b.sample_sizes):
        raise ValueError("curves are on different sample-size grids")
    diff = a.mean_mse - b.mean_mse
    pooled = np.sqrt(a.std_err**2 + b.std_err**2)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(b.mean_mse == a.mean_mse, 1.0, a.mean_mse / b.mean_mse)
    labels = []
    for d, p in zip(diff, pooled):
        if d > n_sigma * p:
            labels.append(f"{b.name}-better")
        elif d < -n_sigma * p:
            labels.append(f"{a.name}-better")
        else:
            labels.append("similar")

    def longest(label: str) -> int:
        best = cur = 0
        for lab in labels:
            cur = cur + 1 if lab == label else 0
            best = max(best, cur)
        return best

    a_win, b_win = f"{a.name}-better", f"{b.name}-better"
    verdict = "similar"
    if longest(b_win) >= run_length and a_win not in labels:
        verdict = b_win
    elif longest(a_win) >= run_length and b_win not in labels:
        verdict = a_win
    return Comparison(np.asarray(a.sample_sizes), ratios, pooled, labels, verdict)


def fit_curve_rate(curve: MseCurve, strategy: str = "random") -> RateFit:
    return fit_rate(curve.sample_sizes, curve.mean_mse[strategy])


def default_sizes(start: int = 25, count: int = 9) -> tuple[int, ...]:
    """Doubling grid ``25, 50, ..., 6400``."""
    return tuple(start * 2**i for i in range(count))


def parse_sizes(values: Sequence[int] | str) -> tuple[int, ...]:
    """Accept ``"25,50,100"`` or an iterable of ints."""
    if isinstance(values, str):
        return tuple(int(v) for v in values.replace(" ", "").split(",") if v)
    return tuple(int(v) for v in values)
