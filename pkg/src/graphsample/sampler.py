"""Noisy node sampling ``y = Psi x + eps`` under uniform or score-weighted draws."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._io import text_out
from .spectral import SamplingScores

__all__ = [
    "SampleSet",
    "sampling_operator",
    "sample_uniform",
    "sample_scored",
    "write_samples_csv",
    "read_samples_csv",
]


@dataclass(frozen=True)
class SampleSet:
    """Sampled node sequence (repeats allowed) with its measurements.

    ``probs[i]`` is the probability with which node ``indices[i]`` was drawn
    on draw ``i``. ``kappa`` is the bandwidth of the scores used for the
    draws, ``None`` for uniform sampling.
    """

    indices: np.ndarray
    measurements: np.ndarray
    probs: np.ndarray
    sigma: float
    n: int
    kappa: int | None = None

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.intp)
        y = np.asarray(self.measurements, dtype=float)
        p = np.asarray(self.probs, dtype=float)
        if idx.ndim != 1 or y.shape != idx.shape or p.shape != idx.shape:
            raise ValueError("indices, measurements and probs must be 1-d of equal length")
        if idx.size and (idx.min() < 0 or idx.max() >= self.n):
            raise ValueError(f"sample indices must lie in [0, {self.n})")
        if np.any(p <= 0):
            raise ValueError("draw probabilities must be positive")
        if self.sigma < 0:
            raise ValueError(f"noise level must be nonnegative, got {self.sigma}")
        for name, arr in (("indices", idx), ("measurements", y), ("probs", p)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return self.indices.shape[0]


def sampling_operator(indices, n: int) -> np.ndarray:
    """Dense ``|M| x N`` selection matrix with ``Psi[i, indices[i]] = 1``."""
    idx = np.asarray(indices, dtype=np.intp)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError(f"sample indices must lie in [0, {n})")
    psi = np.zeros((idx.shape[0], n))
    psi[np.arange(idx.shape[0]), idx] = 1.0
    return psi


def _measure(x: np.ndarray, idx: np.ndarray, sigma: float, rng: np.random.Generator) -> np.ndarray:
    y = x[idx]
    if sigma > 0:
        # one independent noise draw per measurement, repeated nodes included
        y = y + rng.normal(0.0, sigma, size=idx.shape[0])
    return y


def _check(x, m: int, sigma: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("signal must be a vector")
    if m < 1:
        raise ValueError(f"sample count must be >= 1, got {m}")
    if sigma < 0:
        raise ValueError(f"noise level must be nonnegative, got {sigma}")
    return x


def sample_uniform(x, m: int, sigma: float = 0.0, seed=None) -> SampleSet:
    """Draw ``m`` nodes uniformly with replacement and measure them with noise std ``sigma``."""
    x = _check(x, m, sigma)
    n = x.shape[0]
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n, size=m)
    y = _measure(x, idx, sigma, rng)
    return SampleSet(idx, y, np.full(m, 1.0 / n), sigma, n, kappa=None)


def sample_scored(x, scores: SamplingScores, m: int, sigma: float = 0.0, seed=None) -> SampleSet:
    """Draw ``m`` nodes i.i.d. from the categorical distribution ``scores``.

    Inverse-CDF sampling on the cumulative scores; zero-score nodes are never
    drawn.
    """
    x = _check(x, m, sigma)
    n = x.shape[0]
    if scores.n != n:
        raise ValueError(f"scores have length {scores.n}, signal has {n}")
    w = scores.scores
    if scores.column_norms is not None and np.any((w <= 0) & (scores.column_norms > 0)):
        raise ValueError("degenerate scores: a node with a nonzero column has zero probability")
    cdf = np.cumsum(w)
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    idx = np.searchsorted(cdf, rng.random(m), side="right")
    y = _measure(x, idx, sigma, rng)
    return SampleSet(idx, y, w[idx], sigma, n, kappa=scores.kappa)


def write_samples_csv(samples: SampleSet, path) -> None:
    with text_out(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "measurement", "prob"])
        for i, y, p in zip(samples.indices, samples.measurements, samples.probs):
            writer.writerow([int(i), repr(float(y)), repr(float(p))])


def read_samples_csv(path, n: int, sigma: float = 0.0, kappa: int | None = None) -> SampleSet:
    """Inverse of :func:`write_samples_csv`; N, sigma and kappa are not stored in the file."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    idx = [int(r["index"]) for r in rows]
    y = [float(r["measurement"]) for r in rows]
    p = [float(r["prob"]) for r in rows]
    return SampleSet(np.array(idx, dtype=np.intp), np.array(y), np.array(p), sigma, n, kappa=kappa)
