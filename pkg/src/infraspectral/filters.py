"""Per-harmonic graph filters: gain vectors applied in the transform domain.

A filter is a real gain per harmonic; applying it is two matrix-vector
products (forward transform, scale, inverse transform).  Filters are never
materialized as dense vertex-domain matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .spectral import GftBasis, GraphSignal


@dataclass(frozen=True)
class FilterResponse:
    """Real per-harmonic gains tied to a basis."""

    gains: np.ndarray
    basis: GftBasis

    def __post_init__(self):
        gains = np.array(self.gains, dtype=float)
        if gains.shape != (self.basis.size,):
            raise DimensionMismatchError(
                f"{gains.shape} gains for a basis of size {self.basis.size}"
            )
        if not np.all(np.isfinite(gains)) or np.any(gains < 0):
            raise ValueError("filter gains must be finite and nonnegative")
        gains.flags.writeable = False
        object.__setattr__(self, "gains", gains)


def apply_filter(b: GftBasis, h: FilterResponse, f: GraphSignal) -> GraphSignal:
    """Rescale each harmonic of f by its gain: U diag(h) U^T f."""
    if h.basis.size != b.size:
        raise DimensionMismatchError("filter built on a basis of different size")
    if len(f) != b.size:
        raise DimensionMismatchError(
            f"signal of length {len(f)} against basis of size {b.size}"
        )
    coefs = b.vectors.T @ f.values
    return GraphSignal(b.vectors @ (h.gains * coefs), graph_name=f.graph_name)


def lowpass_filter(b: GftBasis, cutoff_count: int) -> FilterResponse:
    """Unit gain on the lowest `cutoff_count` harmonics, zero above."""
    if not 1 <= cutoff_count <= b.size:
        raise ValueError(f"cutoff_count must lie in [1, {b.size}], got {cutoff_count}")
    gains = np.zeros(b.size)
    gains[:cutoff_count] = 1.0
    return FilterResponse(gains, b)


def highpass_complement(h_lp: FilterResponse) -> FilterResponse:
    """Entrywise complement 1 - gains; with the source filter it sums to identity."""
    if np.any(h_lp.gains > 1.0):
        raise ValueError("complement requires gains in [0, 1]")
    return FilterResponse(1.0 - h_lp.gains, h_lp.basis)


def tv_regularization_filter(b: GftBasis, alpha: float) -> FilterResponse:
    """Smoothing gains (1 + 2*alpha*lambda_k)^-1 from quadratic-form regularization.

    Gain is exactly 1 at lambda = 0 for any alpha, so component means pass
    through untouched.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    return FilterResponse(1.0 / (1.0 + 2.0 * alpha * b.eigenvalues), b)
