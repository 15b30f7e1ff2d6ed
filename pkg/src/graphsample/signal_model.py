"""Smoothness classes of graph signals and the synthetic test-signal generator."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .graph_core import GraphShift
from .spectral import SpectralBasis, gft

__all__ = [
    "BltParams",
    "Theorem1Thresholds",
    "global_smoothness",
    "blt_residual",
    "is_bandlimited",
    "theorem1_thresholds",
    "generate_blt_signal",
    "save_signal",
    "load_signal",
]


@dataclass(frozen=True)
class BltParams:
    """Approximately-bandlimited class parameters: bandwidth, decay exponent, tail bound."""

    k: int
    beta: float = 1.0
    mu: float = 0.0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"bandwidth K must be >= 1, got {self.k}")
        if self.beta < 1:
            raise ValueError(f"decay exponent beta must be >= 1, got {self.beta}")
        if self.mu < 0:
            raise ValueError(f"tail bound mu must be >= 0, got {self.mu}")


class Theorem1Thresholds(NamedTuple):
    eta: float
    mu: float | None


def _energy(x: np.ndarray) -> float:
    e = float(x @ x)
    if e == 0.0:
        raise ValueError("signal is identically zero")
    return e


def global_smoothness(a: GraphShift, x) -> float:
    """Smallest ``eta`` with ``|x - A x|^2 <= eta |x|^2``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (a.n,):
        raise ValueError(f"signal must have shape ({a.n},), got {x.shape}")
    r = x - a.weights @ x
    return float(r @ r) / _energy(x)


def _tail_weights(n: int, k: int, beta: float) -> np.ndarray:
    idx = np.arange(k, n, dtype=float)
    return 1.0 + idx ** (2.0 * beta)


def blt_residual(basis: SpectralBasis, x, k: int, beta: float) -> float:
    """Smallest ``mu`` for which ``x`` is approximately bandlimited with bandwidth ``k``.

    Computes ``sum_{i >= k} (1 + i^{2 beta}) xhat_i^2 / |x|^2``.
    """
    if not 1 <= k <= basis.n:
        raise ValueError(f"bandwidth must lie in [1, {basis.n}], got {k}")
    x = np.asarray(x, dtype=float)
    xhat = gft(basis, x)
    tail = xhat[k:]
    return float(np.sum(_tail_weights(basis.n, k, beta) * tail**2)) / _energy(x)


def is_bandlimited(basis: SpectralBasis, x, k: int, tol: float = 1e-9) -> bool:
    xhat = gft(basis, np.asarray(x, dtype=float))
    tail = xhat[k:]
    return bool(tail.size == 0 or np.max(np.abs(tail)) <= tol)


def theorem1_thresholds(
    params: BltParams,
    basis: SpectralBasis,
    eta: float | None = None,
    lambda_k: float | None = None,
    lambda_k_minus_1: float | None = None,
) -> Theorem1Thresholds:
    """Class-inclusion thresholds between smooth and approximately bandlimited signals.

    ``eta`` threshold: any signal of the approximately bandlimited class
    ``(K, beta, mu)`` is globally smooth with parameter at least
    ``(1 - lambda_{K-1} + sqrt(4 alpha2 mu / (1 + K^{2 beta})))^2``.

    ``mu`` threshold (needs ``eta``): globally smooth signals with parameter
    ``eta`` belong to the class once
    ``mu >= eta (1 + (N-1)^{2 beta}) / ((1 - lambda_K) alpha1)``.
    It is ``None`` when undefined (``lambda_K == 1``, ``K == N`` or no ``eta``).

    Eigenvalues default to those of ``basis``; pass them explicitly to
    evaluate the formulas at other values.
    """
    k, beta, mu = params.k, params.beta, params.mu
    n = basis.n
    if k > n:
        raise ValueError(f"bandwidth K={k} exceeds N={n}")
    if lambda_k_minus_1 is None:
        lambda_k_minus_1 = float(basis.eigenvalues[k - 1])
    if lambda_k is None and k < n:
        lambda_k = float(basis.eigenvalues[k])

    eta_thr = (1.0 - lambda_k_minus_1 + math.sqrt(4.0 * basis.alpha2 * mu / (1.0 + k ** (2.0 * beta)))) ** 2

    mu_thr = None
    if eta is not None and lambda_k is not None and lambda_k < 1.0:
        mu_thr = eta * (1.0 + (n - 1) ** (2.0 * beta)) / ((1.0 - lambda_k) * basis.alpha1)
    return Theorem1Thresholds(eta_thr, mu_thr)


def generate_blt_signal(basis: SpectralBasis, k: int, beta: float = 1.0, seed=None):
    """Draw a unit-spectrum approximately bandlimited test signal.

    Low frequencies ``i < k`` are Gaussian with mean 1 and variance 0.5; the
    tail is the deterministic ``k^{2 beta} / i^{2 beta}``. The spectrum is
    scaled to unit norm and mapped to the vertex domain.

    Returns
    -------
    x : ndarray
        Vertex-domain signal ``V xhat``.
    xhat : ndarray
        The unit-norm spectrum.
    """
    n = basis.n
    if not 1 <= k <= n:
        raise ValueError(f"bandwidth must lie in [1, {n}], got {k}")
    if beta < 1:
        raise ValueError(f"decay exponent beta must be >= 1, got {beta}")
    rng = np.random.default_rng(seed)
    xhat = np.empty(n)
    xhat[:k] = rng.normal(1.0, math.sqrt(0.5), size=k)
    idx = np.arange(k, n, dtype=float)
    xhat[k:] = (k / idx) ** (2.0 * beta)
    xhat /= np.linalg.norm(xhat)
    return basis.v @ xhat, xhat


def save_signal(x, path) -> None:
    x = np.asarray(x, dtype=float)
    with Path(path).open("w") as fh:
        fh.write(f"{x.shape[0]}\n")
        for value in x:
            fh.write(f"{float(value)!r}\n")


def load_signal(path) -> np.ndarray:
    with Path(path).open() as fh:
        header = fh.readline()
        try:
            n = int(header)
        except ValueError:
            raise ValueError(f"{path}: first line must be the signal length, got {header!r}") from None
        values = np.array([float(line) for line in fh if line.strip()])
    if values.shape != (n,):
        raise ValueError(f"{path}: header says {n} values, found {values.shape[0]}")
    return values
