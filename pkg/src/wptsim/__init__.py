"""wptsim: simulator and optimizer for an analog multi-antenna RF power transmitter."""

from .channel import (
    ArrayGeometry,
    ChannelMatrix,
    ReceiverPosition,
    build_channel_matrix,
    channel_coefficient,
    element_positions,
    radiation_profile,
    received_signal,
)
from .config import PROFILES, build_setup, dump_config, load_config
from .errors import ConfigurationError, DomainError, NumericalError
from .optimizer import (
    OptimizationResult,
    SwarmConfig,
    brute_force_grid,
    decode_particle,
    evaluate_candidate,
    fitness,
    particle_bounds,
    pso_run,
)
from .power_model import (
    PowerBreakdown,
    PowerParams,
    dac_power,
    hpa_power,
    signal_power,
    total_power,
)
from .rectenna import (
    HarvestResult,
    RectennaParams,
    dc_output_voltage,
    harvest_from_signal,
    harvested_power,
    lambert_w0,
    lambert_w0_log,
    rhs_log_mean,
    solve_rectifier_equation,
)
from .signal_chain import (
    BASEBAND,
    PASSBAND,
    ChainConfig,
    PhaseWord,
    SampledSignal,
    ToneSet,
    apply_phase_shifters,
    default_sim_rate,
    lowpass_filter,
    quantize_dac,
    rapp_amplifier,
    synthesize_multitone,
    upconvert,
)
from .simulation import ChainStages, SimulationOutcome, SystemModel, evaluate_solution, run_chain

__version__ = "0.1.0"

__all__ = [
    "ArrayGeometry",
    "BASEBAND",
    "ChainConfig",
    "ChainStages",
    "ChannelMatrix",
    "ConfigurationError",
    "DomainError",
    "HarvestResult",
    "NumericalError",
    "OptimizationResult",
    "PASSBAND",
    "PROFILES",
    "PhaseWord",
    "PowerBreakdown",
    "PowerParams",
    "ReceiverPosition",
    "RectennaParams",
    "SampledSignal",
    "SimulationOutcome",
    "SwarmConfig",
    "SystemModel",
    "ToneSet",
    "apply_phase_shifters",
    "brute_force_grid",
    "build_channel_matrix",
    "build_setup",
    "channel_coefficient",
    "dac_power",
    "dc_output_voltage",
    "decode_particle",
    "default_sim_rate",
    "dump_config",
    "element_positions",
    "evaluate_candidate",
    "evaluate_solution",
    "fitness",
    "harvest_from_signal",
    "harvested_power",
    "hpa_power",
    "lambert_w0",
    "lambert_w0_log",
    "load_config",
    "lowpass_filter",
    "particle_bounds",
    "pso_run",
    "quantize_dac",
    "radiation_profile",
    "rapp_amplifier",
    "received_signal",
    "rhs_log_mean",
    "run_chain",
    "signal_power",
    "solve_rectifier_equation",
    "synthesize_multitone",
    "total_power",
    "upconvert",
]
