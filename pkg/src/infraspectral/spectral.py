"""Graph Fourier transform built from the Laplacian eigendecomposition.

The Laplacian of the underlying graph is real symmetric PSD, so it admits
an orthonormal eigendecomposition L = U diag(lambda) U^T with eigenvalues
sorted ascending.  Columns of U are the graph harmonics; eigenvalues play
the role of squared frequencies.  The forward transform projects a vertex
signal onto the harmonics, the inverse reassembles it, and both preserve
energy because U is orthogonal.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, EigendecompositionError
from .graph import UnderlyingLaplacian

# Validation tolerances for a freshly computed basis.  Relative to the
# largest eigenvalue for residuals; absolute for orthonormality of an
# orthogonal matrix of unit-scale entries.
_ORTHO_TOL = 1e-9
_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class GftBasis:
    """Orthonormal harmonic basis of an underlying Laplacian.

    ``vectors`` holds the harmonics as columns, ordered by ascending
    eigenvalue; ``zero_count`` is the number of (clamped) zero eigenvalues,
    i.e. the number of connected components of the source graph.
    """

    vectors: np.ndarray
    eigenvalues: np.ndarray
    zero_count: int
    graph_name: str = ""

    def __post_init__(self):
        vecs = np.array(self.vectors, dtype=float)
        vals = np.array(self.eigenvalues, dtype=float)
        if vecs.ndim != 2 or vecs.shape[0] != vecs.shape[1]:
            raise ValueError(f"basis must be square, got shape {vecs.shape}")
        if vals.shape != (vecs.shape[0],):
            raise ValueError("eigenvalue vector length must match basis size")
        if np.any(np.diff(vals) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        vecs.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "eigenvalues", vals)

    @property
    def size(self) -> int:
        return self.vectors.shape[0]


@dataclass(frozen=True)
class GraphSignal:
    """Complex vertex signal aligned to a graph's vertex order."""

    values: np.ndarray
    graph_name: str = ""

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.ndim != 1:
            raise ValueError(f"signal must be one-dimensional, got shape {vals.shape}")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def energy(self) -> float:
        """Squared Euclidean norm of the signal."""
        return float(np.sum(np.abs(self.values) ** 2))


@dataclass(frozen=True)
class Spectrum:
    """Harmonic coefficients of a signal in a given basis."""

    coefficients: np.ndarray
    basis: GftBasis

    def __post_init__(self):
        coefs = np.array(self.coefficients, dtype=complex)
        if coefs.shape != (self.basis.size,):
            raise DimensionMismatchError(
                f"{coefs.shape[0]} coefficients for a basis of size {self.basis.size}"
            )
        coefs.flags.writeable = False
        object.__setattr__(self, "coefficients", coefs)

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Scale each column so its largest-modulus entry is positive.

    Ties are broken by lowest index (np.argmax convention).  Idempotent,
    and removes the eigensolver's arbitrary per-vector sign.
    """
    fixed = vectors.copy()
    for k in range(fixed.shape[1]):
        col = fixed[:, k]
        lead = col[np.argmax(np.abs(col))]
        if lead < 0:
            fixed[:, k] = -col
    return fixed


def compute_gft_basis(l: UnderlyingLaplacian) -> GftBasis:
    """Eigendecompose the Laplacian into an orthonormal harmonic basis.

    Eigenvalues are sorted ascending and clamped to exactly zero when
    within ``l.zero_tolerance`` (relative to the largest eigenvalue); the
    per-vector sign is fixed deterministically.  Within a degenerate
    eigenspace the particular vectors remain eigensolver-dependent; only
    quantities defined on whole-eigenspace energies are
    platform-independent there.  Raises :class:`EigendecompositionError`
    if the solver fails or the result is outside tolerance.
    """
    name = l.graph_name or "<unnamed graph>"
    try:
        vals, vecs = np.linalg.eigh(l.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigendecompositionError(f"eigendecomposition failed for {name}: {exc}") from exc

    lam_max = float(vals[-1]) if vals.size else 0.0
    scale = max(lam_max, 0.0)
    if vals.size and vals[0] < -l.zero_tolerance * max(scale, 1.0):
        raise EigendecompositionError(
            f"negative eigenvalue {vals[0]:g} for {name}: Laplacian not PSD within tolerance"
        )

    threshold = l.zero_tolerance * scale
    zero_mask = np.abs(vals) <= threshold
    vals = vals.copy()
    vals[zero_mask] = 0.0
    zero_count = int(np.count_nonzero(zero_mask))

    vecs = _fix_signs(vecs)

    n = l.vertex_count
    ortho_err = float(np.max(np.abs(vecs.T @ vecs - np.eye(n)))) if n else 0.0
    if ortho_err > _ORTHO_TOL:
        raise EigendecompositionError(
            f"basis for {name} is not orthonormal: max deviation {ortho_err:g}"
        )
    residual = float(np.max(np.abs(l.matrix @ vecs - vecs * vals)))
    if residual > _RESIDUAL_TOL * max(scale, 1.0):
        raise EigendecompositionError(
            f"eigen-residual {residual:g} exceeds tolerance for {name}"
        )

    return GftBasis(vecs, vals, zero_count, graph_name=l.graph_name)


def forward_gft(b: GftBasis, f: GraphSignal) -> Spectrum:
    """Project a vertex signal onto the harmonics: coefficients = U^T f."""
    if len(f) != b.size:
        raise DimensionMismatchError(
            f"signal of length {len(f)} against basis of size {b.size}"
        )
    return Spectrum(b.vectors.T @ f.values, b)


def inverse_gft(b: GftBasis, s: Spectrum) -> GraphSignal:
    """Reassemble the vertex signal from harmonic coefficients: f = U f~."""
    if s.basis.size != b.size:
        raise DimensionMismatchError(
            f"spectrum of size {s.basis.size} against basis of size {b.size}"
        )
    return GraphSignal(b.vectors @ s.coefficients, graph_name=b.graph_name)


def power_spectrum(s: Spectrum) -> np.ndarray:
    """Per-harmonic energy |coefficient|^2, summing to the signal energy."""
    return np.abs(s.coefficients) ** 2


def spectrum_csv(s: Spectrum) -> str:
    """Render (harmonic_index, eigenvalue, power) rows as CSV for plotting."""
    power = power_spectrum(s)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["harmonic_index", "eigenvalue", "power"])
    for k in range(s.basis.size):
        writer.writerow([k + 1, repr(float(s.basis.eigenvalues[k])), repr(float(power[k]))])
    return buf.getvalue()
