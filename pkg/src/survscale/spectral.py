"""Full symmetric eigendecomposition and spectrum-only statistics.

Covers level spacings, the typical (geometric-mean) Heisenberg time
t_H = 2*pi / exp(<ln spacing>), and consecutive-spacing gap ratios
r = min(s_k, s_{k+1}) / max(s_k, s_{k+1}).

No unfolding or filtering is applied anywhere: every statistic acts on raw
eigenvalues.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NumericalError

# Relative scale (times the pooled spectral range) below which a spacing is
# treated as a degeneracy and dropped from log-averages.
SPACING_FLOOR_REL = 1e-12


@dataclass
class Spectrum:
    """Ascending eigenvalues and the orthogonal eigenvector matrix of one realization.

    Column nu of `vectors` is the eigenvector belonging to energies[nu].
    """

    energies: np.ndarray
    vectors: np.ndarray
    dim: int


@dataclass
class SpacingStats:
    """Pooled spacing statistics of an ensemble."""

    spacings: np.ndarray      # retained spacings, pooled over realizations
    delta_typ: float          # exp(mean ln spacing)
    t_h_typ: float            # 2*pi / delta_typ
    n_discarded: int          # near-degenerate spacings dropped from the log-average


def eigendecompose(H: np.ndarray, check: bool = True) -> Spectrum:
    """Full eigendecomposition of a dense symmetric matrix.

    `check` runs the cheap self-tests (orthonormality and eigen-residual on a
    few sampled columns); disable it only inside tight ensemble loops that
    have already validated the pipeline.
    """
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise NumericalError(f"expected a square matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise NumericalError("matrix has non-finite entries")
    try:
        energies, vectors = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigensolver failed to converge (dim={H.shape[0]}, "
            f"max|H|={np.abs(H).max():.3e}): {exc}"
        ) from exc
    spec = Spectrum(energies=energies, vectors=vectors, dim=H.shape[0])
    if check:
        _spot_check(H, spec)
    return spec


def eigenvalues_only(H: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues without eigenvectors (cheaper by roughly 2x)."""
    H = np.asarray(H, dtype=float)
    if not np.all(np.isfinite(H)):
        raise NumericalError("matrix has non-finite entries")
    try:
        return np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigensolver failed to converge (dim={H.shape[0]}): {exc}"
        ) from exc


def _spot_check(H: np.ndarray, spec: Spectrum, n_samples: int = 4) -> None:
    D = spec.dim
    norm = max(np.abs(spec.energies).max(), 1e-300)  # spectral norm of H
    cols = np.linspace(0, D - 1, min(n_samples, D)).astype(int)
    v = spec.vectors[:, cols]
    gram = v.T @ v
    if not np.allclose(gram, np.eye(len(cols)), atol=1e-8):
        raise NumericalError("eigenvector columns are not orthonormal")
    resid = np.linalg.norm(H @ v - v * spec.energies[cols], axis=0).max()
    if resid > 1e-8 * norm:
        raise NumericalError("eigen-residual exceeds 1e-8 * ||H||")


def level_spacings(energies: np.ndarray) -> np.ndarray:
    """Nearest-neighbor spacings of an ascending spectrum."""
    energies = np.asarray(energies, dtype=float)
    d = np.diff(energies)
    if d.size and d.min() < 0:
        raise NumericalError("energies must be ascending")
    return d


def typical_heisenberg_time(
    spacing_sets: Iterable[np.ndarray],
    floor: float = 0.0,
    per_realization: bool = False,
) -> SpacingStats:
    """Geometric-mean level spacing over a pooled ensemble and its Heisenberg time.

    Spacings below `floor` are treated as degeneracies: dropped from the
    log-average and counted.  By default all retained spacings are pooled
    with equal weight; `per_realization` instead averages the per-realization
    log-means with equal weight (a sensitivity variant, identical when every
    realization retains the same number of spacings).
    """
    sets = [np.asarray(s, dtype=float) for s in spacing_sets]
    retained = [s[s >= floor] if floor > 0 else s for s in sets]
    n_discarded = sum(s.size for s in sets) - sum(r.size for r in retained)
    pooled = np.concatenate(retained) if retained else np.empty(0)
    if pooled.size == 0:
        raise NumericalError("degenerate spectrum: no spacings above the floor")
    if pooled.min() <= 0.0:
        raise NumericalError("degenerate spectrum: zero spacing with no floor set")
    if per_realization:
        means = [np.log(r).mean() for r in retained if r.size]
        log_typ = float(np.mean(means))
    else:
        log_typ = float(np.log(pooled).mean())
    delta_typ = float(np.exp(log_typ))
    return SpacingStats(
        spacings=pooled,
        delta_typ=delta_typ,
        t_h_typ=2.0 * np.pi / delta_typ,
        n_discarded=int(n_discarded),
    )


def spacing_floor(spectral_range: float) -> float:
    """Degeneracy floor used by the ensemble pipelines."""
    return SPACING_FLOOR_REL * spectral_range


def mid_spectrum_window(dim: int, count: int) -> tuple[int, int]:
    """Index range of `count` levels centered on the middle of the spectrum."""
    count = min(count, dim)
    lo = (dim - count) // 2
    return lo, lo + count


def central_fraction_window(dim: int, fraction: float = 0.5) -> tuple[int, int]:
    """Index range covering the central `fraction` of all levels."""
    count = max(int(round(dim * fraction)), min(3, dim))
    return mid_spectrum_window(dim, count)


def gap_ratios(energies: np.ndarray, window: tuple[int, int] | None = None) -> np.ndarray:
    """Ratios of consecutive level spacings inside an index window of levels.

    Pairs whose larger spacing is exactly zero are dropped; the caller can
    count them as (window length - 2) - len(result).
    """
    energies = np.asarray(energies, dtype=float)
    if window is not None:
        lo, hi = window
        energies = energies[lo:hi]
    if energies.size < 3:
        raise NumericalError("gap ratios need at least 3 consecutive levels")
    s = np.diff(energies)
    big = np.maximum(s[:-1], s[1:])
    small = np.minimum(s[:-1], s[1:])
    ok = big > 0
    return small[ok] / big[ok]


def mean_gap_ratio(ratio_sets: Sequence[np.ndarray]) -> float:
    """Grand mean: average ratios within each realization, then across realizations."""
    if len(ratio_sets) == 0:
        raise NumericalError("empty gap-ratio ensemble")
    means = [float(np.mean(r)) for r in ratio_sets if len(r)]
    if not means:
        raise NumericalError("all gap-ratio sets are empty")
    return float(np.mean(means))
