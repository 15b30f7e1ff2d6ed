"""Signal recovery from node samples.

``recover_random`` and ``recover_designed`` estimate the first ``kappa``
graph-frequency coefficients without bias and synthesize the signal from
them. ``recover_least_squares`` is the classical bandlimited interpolation
baseline, and ``linear_approx`` is the noiseless projection both estimators
target on average.
"""

from __future__ import annotations

import csv
import enum
import warnings
from dataclasses import dataclass

import numpy as np

from ._io import text_out
from .sampler import SampleSet
from .spectral import SpectralBasis

__all__ = [
    "Method",
    "RecoveryResult",
    "RankDeficientWarning",
    "recover_random",
    "recover_designed",
    "recover_least_squares",
    "linear_approx",
    "mse",
    "write_result_csv",
]

PINV_RCOND = 1e-10


class Method(str, enum.Enum):
    RANDOM = "random"
    DESIGNED = "designed"
    LEAST_SQUARES = "least_squares"
    LINEAR_APPROX = "linear_approx"


class RankDeficientWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class RecoveryResult:
    """Recovered signal with its estimated spectrum (zero beyond ``kappa``)."""

    x_star: np.ndarray
    xhat_star: np.ndarray
    kappa: int
    method: Method
    rank_deficient: bool = False


def _check_kappa(basis: SpectralBasis, kappa: int) -> None:
    if not 1 <= kappa <= basis.n:
        raise ValueError(f"kappa must lie in [1, {basis.n}], got {kappa}")


def _check_samples(basis: SpectralBasis, samples: SampleSet) -> None:
    if len(samples) == 0:
        raise ValueError("cannot recover from an empty sample set")
    if samples.n != basis.n:
        raise ValueError(f"samples were taken on N={samples.n} nodes, basis has N={basis.n}")


def _synthesize(basis: SpectralBasis, coeffs: np.ndarray, kappa: int, method: Method) -> RecoveryResult:
    xhat = np.zeros(basis.n)
    xhat[:kappa] = coeffs
    return RecoveryResult(basis.v[:, :kappa] @ coeffs, xhat, kappa, method)


def recover_random(basis: SpectralBasis, samples: SampleSet, kappa: int) -> RecoveryResult:
    """Estimator for uniformly drawn samples: ``xhat_k = (N/|M|) sum_i U[k, M_i] y_i``."""
    _check_samples(basis, samples)
    _check_kappa(basis, kappa)
    n = basis.n
    if not np.allclose(samples.probs, 1.0 / n, rtol=1e-12, atol=0):
        raise ValueError("recover_random needs uniformly drawn samples (probs == 1/N)")
    m = len(samples)
    coeffs = (n / m) * (basis.u[:kappa, samples.indices] @ samples.measurements)
    return _synthesize(basis, coeffs, kappa, Method.RANDOM)


def recover_designed(basis: SpectralBasis, samples: SampleSet, kappa: int) -> RecoveryResult:
    """Importance-weighted estimator: ``xhat_k = (1/|M|) sum_i U[k, M_i] y_i / w_{M_i}``.

    The weights are the draw probabilities recorded in ``samples``. Samples
    drawn with scores for a different bandwidth are rejected.
    """
    _check_samples(basis, samples)
    _check_kappa(basis, kappa)
    if samples.kappa is not None and samples.kappa != kappa:
        raise ValueError(
            f"samples were drawn with scores for kappa={samples.kappa}, recovery asked for kappa={kappa}"
        )
    m = len(samples)
    coeffs = (basis.u[:kappa, samples.indices] @ (samples.measurements / samples.probs)) / m
    return _synthesize(basis, coeffs, kappa, Method.DESIGNED)


def linear_approx(basis: SpectralBasis, x, k: int) -> np.ndarray:
    """Projection ``V_(k) U_(k) x`` onto the first ``k`` graph frequencies."""
    _check_kappa(basis, k)
    x = np.asarray(x, dtype=float)
    return basis.v[:, :k] @ (basis.u[:k] @ x)


def recover_least_squares(basis: SpectralBasis, samples: SampleSet, k: int) -> RecoveryResult:
    """Minimum-norm solution ``V_(k) (Psi V_(k))^+ y``.

    Singular values below ``1e-10`` times the largest are dropped. A
    :class:`RankDeficientWarning` is issued, and ``rank_deficient`` set, when
    ``Psi V_(k)`` has rank below ``k``.
    """
    _check_samples(basis, samples)
    _check_kappa(basis, k)
    vk = basis.v[:, :k]
    # Psi V_(k) without materializing Psi: the sampled rows of V_(k)
    a = vk[samples.indices]
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    keep = s > PINV_RCOND * s[0] if s.size else np.zeros(0, dtype=bool)
    rank = int(np.count_nonzero(keep))
    coeffs = vt[keep].T @ ((u[:, keep].T @ samples.measurements) / s[keep])
    deficient = rank < k
    if deficient:
        warnings.warn(f"Psi V_(k) has rank {rank} < k={k}; returning the minimum-norm solution",
                      RankDeficientWarning, stacklevel=2)
    result = _synthesize(basis, coeffs, k, Method.LEAST_SQUARES)
    return RecoveryResult(result.x_star, result.xhat_star, k, Method.LEAST_SQUARES, deficient)


def mse(x, x_star) -> float:
    """Squared error ``|x_star - x|_2^2`` of a single recovery."""
    x = np.asarray(x, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    if x.shape != x_star.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {x_star.shape}")
    d = x_star - x
    return float(d @ d)


def write_result_csv(result: RecoveryResult, path) -> None:
    """One row per node: ``node,x_star,xhat_star`` (spectrum zero-padded to N)."""
    with text_out(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node", "x_star", "xhat_star"])
        for i, (xs, xh) in enumerate(zip(result.x_star, result.xhat_star)):
            writer.writerow([i, repr(float(xs)), repr(float(xh))])
