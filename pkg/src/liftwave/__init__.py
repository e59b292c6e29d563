"""Tunable biorthogonal wavelet filter banks built by lifting."""
from .lifting import (
    FilterPair,
    LiftingError,
    LiftingParams,
    build_filters,
    closed_form_filters,
    filter_jacobian,
    haar_base,
    init_params,
    reference_h1,
    solve_params,
)
from .filterbank import AnalysisMatrices, analyze_1d, build_matrices, synthesize_1d
from .dwt2d import Subbands, dwt2, idwt2
from .spectral import FrequencyResponse, freqz

__version__ = "0.1.0"
