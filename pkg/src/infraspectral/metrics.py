"""Suitability metrics for graph signals: total variation and compressibility.

Three quantities describe how well a signal matches the smooth/sparse
structure a harmonic basis expects:

* total variation, the Laplacian quadratic form f^H L f.  Small values mean
  the signal changes little across strongly weighted edges.  Normalizing by
  the signal energy makes it comparable across networks (it then lies
  between the smallest and largest eigenvalue).
* low-pass compressibility, the fewest consecutive lowest-frequency
  harmonics whose cumulative energy reaches a threshold fraction.
* general compressibility, the fewest harmonics of any frequency reaching
  that fraction, i.e. spectral sparsity.

Each compressibility count has a mean-removed variant that excludes the
zero-eigenvalue harmonics (the per-component signal means) from both the
candidate set and the energy total, isolating the structure of the
perturbations around the mean.  Counts are also reported as ratios over the
full vertex count so networks of different sizes share one scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import DegenerateSignalError, DimensionMismatchError
from .graph import UnderlyingLaplacian
from .spectral import GftBasis, GraphSignal, Spectrum, forward_gft, power_spectrum

DEFAULT_THRESHOLDS = (0.9, 0.999)

# Residual energy below this fraction of the signal energy marks a
# pure-DC signal, for which mean-removed metrics are undefined.
_DEGENERATE_RESIDUAL = 1e-14


@dataclass(frozen=True)
class CompressibilityRecord:
    """Per-threshold harmonic counts and count/N ratios."""

    lp_count: Mapping[float, int]
    lp_ratio: Mapping[float, float]
    gen_count: Mapping[float, int]
    gen_ratio: Mapping[float, float]


@dataclass(frozen=True)
class SpectralMetrics:
    """Full metric record for one signal on one network.

    ``mean_removed`` is None when the signal is pure DC (no residual
    energy to measure).
    """

    tv: float
    tv_normalized: float
    lp_count: Mapping[float, int]
    lp_ratio: Mapping[float, float]
    gen_count: Mapping[float, int]
    gen_ratio: Mapping[float, float]
    mean_removed: CompressibilityRecord | None


def total_variation(l: UnderlyingLaplacian, f: GraphSignal) -> float:
    """Laplacian quadratic form f^H L f.

    Equals the weighted sum of squared differences across edges, so it is
    real and nonnegative; rounding noise down to -1e-12 * ||f||^2 is
    clamped to zero.
    """
    if len(f) != l.vertex_count:
        raise DimensionMismatchError(
            f"signal of length {len(f)} against Laplacian of size {l.vertex_count}"
        )
    value = float(np.real(np.vdot(f.values, l.matrix @ f.values)))
    if value < 0:
        if value < -1e-12 * f.energy:
            raise ValueError(f"total variation {value:g} is negative beyond tolerance")
        value = 0.0
    return value


def _count_to_threshold(energies: np.ndarray, threshold: float) -> int:
    """Smallest prefix length of `energies` whose sum reaches threshold * total."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    cumulative = np.cumsum(energies)
    total = cumulative[-1]
    if total <= 0.0:
        raise DegenerateSignalError("signal has no energy")
    # Comparison is >= so a signal exactly at the threshold counts.
    return int(np.searchsorted(cumulative, threshold * total, side="left")) + 1


def lowpass_compressibility(s: Spectrum, threshold: float) -> int:
    """Consecutive low-frequency harmonics needed to capture the threshold energy."""
    return _count_to_threshold(power_spectrum(s), threshold)


def general_compressibility(s: Spectrum, threshold: float) -> int:
    """Fewest harmonics of any frequency capturing the threshold energy.

    Energies are sorted descending with ties broken by ascending harmonic
    index (stable sort), so the count is deterministic across platforms.
    """
    energies = power_spectrum(s)
    order = np.argsort(-energies, kind="stable")
    return _count_to_threshold(energies[order], threshold)


def mean_removed_metrics(
    b: GftBasis, s: Spectrum, thresholds: Iterable[float] = DEFAULT_THRESHOLDS
) -> CompressibilityRecord:
    """Compressibility of the non-constant harmonics only.

    The ``zero_count`` zero-eigenvalue harmonics (which carry the
    per-component means) are dropped from the candidate set and from the
    energy denominator.  Counts therefore range over N - zero_count
    harmonics, but ratios still divide by the full N so they remain
    comparable with the full-signal ratios.

    Raises :class:`DegenerateSignalError` when the residual energy is below
    1e-14 of the signal energy (pure-DC signal).
    """
    energies = power_spectrum(s)
    residual = energies[b.zero_count:]
    total = float(np.sum(energies))
    if total <= 0.0:
        raise DegenerateSignalError("signal has no energy")
    if float(np.sum(residual)) < _DEGENERATE_RESIDUAL * total:
        raise DegenerateSignalError(
            "signal is pure DC: no residual energy beyond the constant harmonics"
        )
    n = b.size
    descending = residual[np.argsort(-residual, kind="stable")]
    lp_count: dict[float, int] = {}
    gen_count: dict[float, int] = {}
    for t in thresholds:
        lp_count[t] = _count_to_threshold(residual, t)
        gen_count[t] = _count_to_threshold(descending, t)
    return CompressibilityRecord(
        lp_count=MappingProxyType(lp_count),
        lp_ratio=MappingProxyType({t: c / n for t, c in lp_count.items()}),
        gen_count=MappingProxyType(gen_count),
        gen_ratio=MappingProxyType({t: c / n for t, c in gen_count.items()}),
    )


def metrics_report(
    l: UnderlyingLaplacian,
    b: GftBasis,
    f: GraphSignal,
    thresholds: Iterable[float] = DEFAULT_THRESHOLDS,
) -> SpectralMetrics:
    """Compute the full metric record for one signal.

    ``mean_removed`` is None when the signal is pure DC; a signal with no
    energy at all is rejected.
    """
    thresholds = tuple(thresholds)
    energy = f.energy
    if energy <= 0.0:
        raise DegenerateSignalError("signal has no energy")
    s = forward_gft(b, f)
    tv = total_variation(l, f)
    energies = power_spectrum(s)
    n = b.size

    descending = energies[np.argsort(-energies, kind="stable")]
    lp_count: dict[float, int] = {}
    gen_count: dict[float, int] = {}
    for t in thresholds:
        lp_count[t] = _count_to_threshold(energies, t)
        gen_count[t] = _count_to_threshold(descending, t)

    try:
        mean_removed = mean_removed_metrics(b, s, thresholds)
    except DegenerateSignalError:
        mean_removed = None

    return SpectralMetrics(
        tv=tv,
        tv_normalized=tv / energy,
        lp_count=MappingProxyType(lp_count),
        lp_ratio=MappingProxyType({t: c / n for t, c in lp_count.items()}),
        gen_count=MappingProxyType(gen_count),
        gen_ratio=MappingProxyType({t: c / n for t, c in gen_count.items()}),
        mean_removed=mean_removed,
    )


def threshold_tag(threshold: float) -> str:
    """Column-name tag for a threshold: 0.9 -> '90', 0.999 -> '999'."""
    return f"{threshold * 100:g}".replace(".", "")


def metrics_csv_header(thresholds: Iterable[float] = DEFAULT_THRESHOLDS) -> list[str]:
    """Header for one-row-per-signal metric tables."""
    cols = ["name", "n_vertices", "n_edges", "generation_fraction", "tv", "tv_normalized"]
    for t in thresholds:
        tag = threshold_tag(t)
        cols += [f"lp{tag}", f"lp{tag}_ratio", f"gen{tag}", f"gen{tag}_ratio"]
    for t in thresholds:
        tag = threshold_tag(t)
        cols += [f"mr_lp{tag}", f"mr_lp{tag}_ratio", f"mr_gen{tag}", f"mr_gen{tag}_ratio"]
    cols.append("mr_degenerate")
    return cols


def metrics_csv_row(
    name: str,
    n_vertices: int,
    n_edges: int,
    generation_fraction: float | None,
    metrics: SpectralMetrics,
    thresholds: Iterable[float] = DEFAULT_THRESHOLDS,
) -> list[str]:
    """Serialize one metric record to CSV fields (shortest round-trip floats)."""
    row: list[str] = [
        name,
        str(n_vertices),
        str(n_edges),
        "" if generation_fraction is None else repr(float(generation_fraction)),
        repr(metrics.tv),
        repr(metrics.tv_normalized),
    ]
    for t in thresholds:
        row += [
            str(metrics.lp_count[t]),
            repr(metrics.lp_ratio[t]),
            str(metrics.gen_count[t]),
            repr(metrics.gen_ratio[t]),
        ]
    mr = metrics.mean_removed
    for t in thresholds:
        if mr is None:
            row += ["", "", "", ""]
        else:
            row += [
                str(mr.lp_count[t]),
                repr(mr.lp_ratio[t]),
                str(mr.gen_count[t]),
                repr(mr.gen_ratio[t]),
            ]
    row.append("1" if mr is None else "0")
    return row
