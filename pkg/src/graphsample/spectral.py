"""Graph Fourier basis of a symmetric shift and the quantities derived from it."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .graph_core import NORMALIZATION_TOL, GraphShift

__all__ = [
    "SpectralBasis",
    "SamplingScores",
    "NormFunctionals",
    "decompose",
    "gft",
    "igft",
    "riesz_constants",
    "sampling_scores",
    "uniform_scores",
    "norm_functionals",
    "classify_type1",
    "classify_type2",
    "save_basis",
    "load_basis",
]

# eigenvalues closer than this are treated as one degenerate eigenspace
TIE_TOL = 1e-9
_SIGN_TOL = 1e-9


@dataclass(frozen=True)
class SpectralBasis:
    """Eigendecomposition ``A = V diag(eigenvalues) U`` with ``U = V^{-1}``.

    Eigenvalues are sorted in descending order, so low graph frequencies come
    first. Columns of ``v`` are the basis vectors; rows of ``u`` give the
    graph Fourier transform. ``alpha1``/``alpha2`` are the tight Riesz bounds
    of ``v`` and are computed when not supplied.
    """

    eigenvalues: np.ndarray
    v: np.ndarray
    u: np.ndarray
    alpha1: float | None = None
    alpha2: float | None = None

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        v = np.asarray(self.v, dtype=float)
        u = np.asarray(self.u, dtype=float)
        n = lam.shape[0]
        if v.shape != (n, n) or u.shape != (n, n):
            raise ValueError(f"basis matrices must be {n}x{n}, got {v.shape} and {u.shape}")
        for arr, name in ((lam, "eigenvalues"), (v, "v"), (u, "u")):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.alpha1 is None or self.alpha2 is None:
            a1, a2 = _riesz(self.v)
            object.__setattr__(self, "alpha1", a1)
            object.__setattr__(self, "alpha2", a2)

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def low_rows(self, kappa: int) -> np.ndarray:
        """``U_(kappa)``: the first ``kappa`` rows of the GFT matrix."""
        _check_band(kappa, self.n, "kappa")
        return self.u[:kappa]

    def low_cols(self, kappa: int) -> np.ndarray:
        """``V_(kappa)``: the first ``kappa`` columns of the inverse GFT matrix."""
        _check_band(kappa, self.n, "kappa")
        return self.v[:, :kappa]


@dataclass(frozen=True)
class SamplingScores:
    """Node-selection probabilities for experimentally designed sampling.

    ``kappa`` is the bandwidth the scores were built for, or ``None`` for
    scores that do not depend on a bandwidth (uniform). ``column_norms`` holds
    the unnormalized column norms when known and is used to tell legitimately
    zero scores from degenerate ones.
    """

    scores: np.ndarray
    kappa: int | None
    column_norms: np.ndarray | None = None

    def __post_init__(self):
        w = np.array(self.scores, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("scores must be a non-empty vector")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("scores must be finite and nonnegative")
        if abs(w.sum() - 1.0) > 1e-9:
            raise ValueError(f"scores must sum to one, got {w.sum()!r}")
        w.setflags(write=False)
        object.__setattr__(self, "scores", w)

    @property
    def n(self) -> int:
        return self.scores.shape[0]


class NormFunctionals(NamedTuple):
    frob_sq: float
    l21_sq: float


def _check_band(k: int, n: int, name: str) -> None:
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= n:
        raise ValueError(f"{name} must be an integer in [1, {n}], got {k!r}")


def _riesz(v: np.ndarray) -> tuple[float, float]:
    s = np.linalg.svd(v, compute_uv=False)
    return float(s.min() ** 2), float(s.max() ** 2)


def _canonical_sign(vec: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(vec) > _SIGN_TOL)
    if nz.size and vec[nz[0]] < 0:
        return -vec
    return vec


def _canonical_eigenspace(q: np.ndarray) -> np.ndarray:
    """Basis-independent orthonormal basis of ``span(q)``.

    Greedy Gram-Schmidt on the columns of the projector ``q q^T``: at each
    step take the node whose projector column has the largest residual norm
    (lowest index among near-ties) and use that normalized column. The result
    depends only on the subspace, not on the basis the eigensolver returned.
    """
    rest = q
    picked = []
    for _ in range(q.shape[1]):
        # residual projector column j is rest @ rest[j]; its norm is |rest[j]|
        norms = np.linalg.norm(rest, axis=1)
        j = int(np.flatnonzero(norms >= norms.max() * (1 - 1e-8))[0])
        c = rest[j] / norms[j]
        picked.append(rest @ c)
        if rest.shape[1] == 1:
            break
        # Householder reflector sending c to a multiple of e_0; its other
        # columns span the orthogonal complement of c
        h = c.copy()
        h[0] += 1.0 if c[0] >= 0 else -1.0
        h /= np.linalg.norm(h)
        rest = (rest - 2.0 * np.outer(rest @ h, h))[:, 1:]
    return np.column_stack(picked)


def decompose(a: GraphShift) -> SpectralBasis:
    """Eigendecomposition of a normalized symmetric shift.

    Eigenvalues are sorted descending. Within a degenerate eigenspace the
    basis is chosen canonically (see :func:`_canonical_eigenspace`) and the
    vectors are ordered lexicographically, largest first. Each eigenvector is
    signed so that its first nonzero entry is positive.
    """
    if not a.normalized:
        raise ValueError("decompose expects a normalized shift; call normalize_shift first")
    try:
        lam, vecs = np.linalg.eigh(a.weights)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigendecomposition failed: {exc}") from exc
    radius = np.max(np.abs(lam))
    if abs(radius - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"shift is flagged normalized but has spectral radius {radius!r}")

    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    vecs = vecs[:, order]

    n = lam.shape[0]
    out = np.empty_like(vecs)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and lam[stop - 1] - lam[stop] <= TIE_TOL:
            stop += 1
        block = vecs[:, start:stop]
        if stop - start > 1:
            block = _canonical_eigenspace(block)
        block = np.column_stack([_canonical_sign(block[:, i]) for i in range(block.shape[1])])
        if block.shape[1] > 1:
            keys = np.round(block, 10)
            # lexsort sorts by the last key first; reverse rows for lexicographic order
            idx = np.lexsort(keys[::-1])[::-1]
            block = block[:, idx]
        out[:, start:stop] = block
        start = stop

    return SpectralBasis(eigenvalues=lam, v=out, u=out.T.copy())


def gft(basis: SpectralBasis, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[0] != basis.n:
        raise ValueError(f"signal has length {x.shape[0]}, basis has N={basis.n}")
    return basis.u @ x


def igft(basis: SpectralBasis, xhat) -> np.ndarray:
    xhat = np.asarray(xhat, dtype=float)
    if xhat.shape[0] != basis.n:
        raise ValueError(f"spectrum has length {xhat.shape[0]}, basis has N={basis.n}")
    return basis.v @ xhat


def riesz_constants(basis: SpectralBasis) -> tuple[float, float]:
    """Tight constants with ``alpha1 |x|^2 <= |V x|^2 <= alpha2 |x|^2``."""
    return _riesz(basis.v)


def sampling_scores(basis: SpectralBasis, kappa: int) -> SamplingScores:
    """Probabilities proportional to the 2-norm (not squared) of each column of ``U_(kappa)``."""
    norms = np.linalg.norm(basis.low_rows(kappa), axis=0)
    return SamplingScores(norms / norms.sum(), kappa=int(kappa), column_norms=norms)


def uniform_scores(n: int) -> SamplingScores:
    return SamplingScores(np.full(n, 1.0 / n), kappa=None)


def norm_functionals(basis: SpectralBasis, kappa: int) -> NormFunctionals:
    """``|U_(kappa)|_F^2`` and ``|U_(kappa)|_{2,1}^2`` (squared sum of column norms)."""
    uk = basis.low_rows(kappa)
    frob_sq = float(np.sum(uk**2))
    l21_sq = float(np.sum(np.linalg.norm(uk, axis=0)) ** 2)
    return NormFunctionals(frob_sq, l21_sq)


def classify_type1(basis: SpectralBasis, c: float = 3.0) -> tuple[bool, float]:
    """Check that every GFT entry is at most ``c / sqrt(N)`` in magnitude.

    Returns ``(is_type1, max|U_ij| * sqrt(N))``.
    """
    scaled = float(np.max(np.abs(basis.u)) * np.sqrt(basis.n))
    return scaled <= c, scaled


def _concentration_ratio(h: np.ndarray, k: int) -> float:
    # stable sort on -h: ties go to the lower index
    order = np.argsort(-h, kind="stable")
    top = h[order[:k]].sum()
    rest = h[order[k:]].sum()
    return float(rest / top)


def classify_type2(
    basis: SpectralBasis, k0: int, alpha: float, general: bool = False
) -> tuple[bool, float]:
    """Test whether cumulative column scores concentrate on a few nodes.

    For each bandwidth K, ``h_i = |column i of U_(K)|_2`` and ``T`` holds the
    K largest entries of ``h``; the condition is ``|h_{T^c}|_1 <= alpha |h_T|_1``.
    All K in ``[k0, N]`` are checked, or only ``K = k0`` when ``general`` is set.

    Returns ``(passes, worst ratio |h_{T^c}|_1 / |h_T|_1)``.
    """
    n = basis.n
    _check_band(k0, n, "k0")
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    ks = [k0] if general else range(k0, n + 1)
    # running column energy avoids recomputing the prefix sums for every K
    energy = np.cumsum(basis.u**2, axis=0)
    worst = 0.0
    for k in ks:
        h = np.sqrt(energy[k - 1])
        worst = max(worst, _concentration_ratio(h, k))
    return worst <= alpha, worst


def save_basis(basis: SpectralBasis, path) -> None:
    """Write N, then the eigenvalue row, then U row by row (whitespace separated)."""
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"{basis.n}\n")
        fh.write(" ".join(repr(float(x)) for x in basis.eigenvalues) + "\n")
        for row in basis.u:
            fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def load_basis(path) -> SpectralBasis:
    """Read a file written by :func:`save_basis`; V is recovered as ``U^{-1}``."""
    with Path(path).open() as fh:
        n = int(fh.readline())
        lam = np.array(fh.readline().split(), dtype=float)
        u = np.loadtxt(fh, ndmin=2)
    if lam.shape != (n,) or u.shape != (n, n):
        raise ValueError(f"basis file {path} is inconsistent with N={n}")
    return SpectralBasis(eigenvalues=lam, v=np.linalg.inv(u), u=u)
