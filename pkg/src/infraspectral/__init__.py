"""Graph Fourier analysis of signals on infrastructure networks.

Builds harmonic bases from admittance-weighted power grids and
hydraulically weighted pipe networks, measures how compressible and smooth
vertex signals are in those bases, and runs denoising, injection
detectability, correlation, and weight-search experiments on top.
"""

from .errors import (
    DegenerateSignalError,
    DimensionMismatchError,
    EigendecompositionError,
    InfraSpectralError,
    ParseError,
)
from .experiments import (
    CorrelationResult,
    DenoiseConfig,
    DenoiseResult,
    FdiDetectability,
    add_white_noise,
    default_alpha_grid,
    denoise_experiment,
    fdi_detectability,
    snr_db,
    spearman,
)
from .filters import (
    FilterResponse,
    apply_filter,
    highpass_complement,
    lowpass_filter,
    tv_regularization_filter,
)
from .graph import (
    InfraGraph,
    UnderlyingLaplacian,
    adjacency_matrix,
    connected_components,
    incidence_matrix,
    underlying_adjacency,
    underlying_laplacian,
)
from .metrics import (
    CompressibilityRecord,
    SpectralMetrics,
    general_compressibility,
    lowpass_compressibility,
    mean_removed_metrics,
    metrics_report,
    total_variation,
)
from .powercase import (
    PowerCase,
    bus_voltage_signal,
    generation_fraction,
    parse_power_case,
    power_graph,
)
from .spectral import (
    GftBasis,
    GraphSignal,
    Spectrum,
    compute_gft_basis,
    forward_gft,
    inverse_gft,
    power_spectrum,
    spectrum_csv,
)
from .water import (
    PipeTable,
    hazen_williams_headloss,
    hydraulic_graph,
    parse_pipe_table,
    parse_signal_table,
)
from .weightsearch import (
    SearchConfig,
    SearchResult,
    objective_value,
    random_search,
)

__version__ = "0.1.0"
