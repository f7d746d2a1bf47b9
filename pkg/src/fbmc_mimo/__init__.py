"""FBMC/OQAM massive-MIMO uplink: filter banks, combiners, PDP equalizer, SINR theory and simulation."""

from .channel import ChannelSet, PdpModel, apply_uplink, draw_channels, estimate_pdp, exp_pdp, freq_response
from .combining import Combiner, CombinerKind, build_combiner, combine
from .equalizer import (
    FullRateEqualizer,
    LowRateEqualizer,
    design_fullrate,
    design_lowrate,
    equalize_stream,
    lowrate_from_fullrate,
)
from .estimators import FbmcModulator, LinearCombiner, PdpEqualizer
from .exceptions import DomainError, IllConditionedPdpError, NumericalRankError, ParameterError, WindowError
from .experiments import ExperimentConfig, RunReport, SinrEstimate, measure_sinr_trial, ofdm_baseline, run_sweep
from .filters import PrototypeFilter, analyze, design_phydyas, synthesize
from .theory import (
    SinrValue,
    build_psi_table,
    mrc_sinr_theory,
    saturation_sinr,
    zf_sinr_theory,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelSet", "PdpModel", "apply_uplink", "draw_channels", "estimate_pdp", "exp_pdp", "freq_response",
    "Combiner", "CombinerKind", "build_combiner", "combine",
    "FullRateEqualizer", "LowRateEqualizer", "design_fullrate", "design_lowrate", "equalize_stream",
    "lowrate_from_fullrate",
    "FbmcModulator", "LinearCombiner", "PdpEqualizer",
    "DomainError", "IllConditionedPdpError", "NumericalRankError", "ParameterError", "WindowError",
    "ExperimentConfig", "RunReport", "SinrEstimate", "measure_sinr_trial", "ofdm_baseline", "run_sweep",
    "PrototypeFilter", "analyze", "design_phydyas", "synthesize",
    "SinrValue", "build_psi_table", "mrc_sinr_theory", "saturation_sinr", "zf_sinr_theory",
]
