"""Mean-squared-error upper bounds and convergence-rate predictions."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "BoundInputs",
    "RateFit",
    "bound_random",
    "bound_designed",
    "bias_term",
    "gamma_interval",
    "optimal_kappa",
    "kappa_schedule",
    "predicted_slope",
    "fit_rate",
]


@dataclass(frozen=True)
class BoundInputs:
    """Everything the two error bounds depend on.

    ``frob_sq`` and ``l21_sq`` are ``|U_(kappa)|_F^2`` and
    ``|U_(kappa)|_{2,1}^2``; ``mu`` is the tail bound of the signal class at a
    bandwidth not exceeding ``kappa``.
    """

    alpha2: float
    mu: float
    signal_norm_sq: float
    max_coeff_sq: float
    sigma_sq: float
    kappa: int
    beta: float
    m: int
    frob_sq: float
    l21_sq: float
    n: int

    def __post_init__(self):
        for name in ("alpha2", "mu", "signal_norm_sq", "max_coeff_sq", "sigma_sq", "frob_sq", "l21_sq"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.kappa < 1 or self.m < 1:
            raise ValueError("kappa and m must be >= 1")


class RateFit(NamedTuple):
    slope: float
    intercept: float
    r2: float


def bias_term(inputs: BoundInputs) -> float:
    return inputs.alpha2 * inputs.mu * inputs.signal_norm_sq / inputs.kappa ** (2.0 * inputs.beta)


def _noise_factor(inputs: BoundInputs) -> float:
    return inputs.alpha2 * (inputs.max_coeff_sq + inputs.sigma_sq) / inputs.m


def bound_random(inputs: BoundInputs) -> float:
    """Upper bound on ``E|x* - x|^2`` for uniform sampling (variance term ``N |U_(kappa)|_F^2``)."""
    return bias_term(inputs) + _noise_factor(inputs) * inputs.n * inputs.frob_sq


def bound_designed(inputs: BoundInputs) -> float:
    """Upper bound on ``E|x* - x|^2`` for score-weighted sampling (variance term ``|U_(kappa)|_{2,1}^2``)."""
    return bias_term(inputs) + _noise_factor(inputs) * inputs.l21_sq


def gamma_interval(beta: float, m: int, n: int, k: int, k0: int) -> tuple[float, float]:
    """Admissible range of the type-2 rate exponent ``gamma``.

    ``[max(1, 2b+2 - log m / log max(K, K0)), max(1, (2b+2) log N / (log N + log m))]``.
    The lower end may exceed the upper end for some inputs; both are returned
    as computed.
    """
    top = max(k, k0)
    if top <= 1:
        lower = 1.0
    else:
        lower = max(1.0, 2 * beta + 2 - math.log(m) / math.log(top))
    upper = max(1.0, (2 * beta + 2) * math.log(n) / (math.log(n) + math.log(m)))
    return lower, upper


def optimal_kappa(beta: float, m: int, n: int, gamma: float | None = None,
                  bandwidth: int | None = None) -> int:
    """Rate-optimal bandwidth ``round(m^{1/(2b+1)})``, or ``round(m^{1/(2b+2-gamma)})`` for type-2 graphs.

    The result is clamped to ``[1, n]``. When ``gamma`` and ``bandwidth``
    (``max(K, K0)``) are both given, a warning is issued if ``gamma`` falls
    outside :func:`gamma_interval`.
    """
    if m < 1:
        raise ValueError(f"sample count must be >= 1, got {m}")
    if gamma is None:
        denom = 2 * beta + 1
    else:
        denom = 2 * beta + 2 - gamma
        if denom <= 0:
            raise ValueError(f"gamma={gamma} leaves a nonpositive rate exponent")
        if bandwidth is not None:
            lo, hi = gamma_interval(beta, m, n, bandwidth, bandwidth)
            if not lo <= gamma <= hi:
                warnings.warn(f"gamma={gamma} outside the admissible interval [{lo:.4g}, {hi:.4g}]",
                              RuntimeWarning, stacklevel=2)
    kappa = int(round(m ** (1.0 / denom)))
    return min(max(kappa, 1), n)


def kappa_schedule(beta: float, sizes: Sequence[int], n: int, gamma: float | None = None) -> list[int]:
    return [optimal_kappa(beta, m, n, gamma) for m in sizes]


def predicted_slope(beta: float, gamma: float | None = None) -> float:
    """Log-log MSE slope ``-2b/(2b+1)``, or ``-2b/(2b+2-gamma)`` for the type-2 designed rate."""
    denom = 2 * beta + 1 if gamma is None else 2 * beta + 2 - gamma
    if denom <= 0:
        raise ValueError(f"gamma={gamma} leaves a nonpositive rate exponent")
    return -2 * beta / denom


def fit_rate(sizes, mse) -> RateFit:
    """Least-squares line through ``(log m, log MSE)``."""
    m = np.asarray(sizes, dtype=float)
    e = np.asarray(mse, dtype=float)
    if m.shape != e.shape or m.ndim != 1:
        raise ValueError("sizes and mse must be vectors of equal length")
    if m.size < 4:
        raise ValueError(f"need at least 4 sample sizes, got {m.size}")
    if np.any(m <= 0) or m.max() / m.min() < 10:
        raise ValueError("sample sizes must be positive and span at least one decade")
    if np.any(~np.isfinite(e)) or np.any(e <= 0):
        raise ValueError("MSE values must be finite and positive for a log-log fit")
    lx, ly = np.log(m), np.log(e)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return RateFit(float(slope), float(intercept), r2)
