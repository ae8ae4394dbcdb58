"""Simulated delayed teleoperation with TDPA and model-mediated control,
perceptual deadband coding and QoE-driven scheme switching."""
from .channel import DelayChannel, DelayProfile, Direction, Packet, RttMonitor
from .config import ConfigError, PRESETS, load_scenario, parse_scenario, preset
from .deadband import DeadbandCodec, reconstruct, should_transmit
from .engine import (
    CSV_COLUMNS,
    DeadbandFloors,
    MmtParams,
    SchemeMode,
    SessionConfig,
    TraceLog,
    handover,
    run_scenario,
)
from .environment import HuntCrossleyParams, contact_force
from .metrics import RunSummary, displayed_stiffness, mean_abs_force_error, packet_rate, summarize
from .mmt import LocalModel, StiffnessEstimate, estimate_stiffness, master_force, update_local_model
from .qoe import (
    DEFAULT_QOE,
    DegenerateFitError,
    FitResult,
    FourPLParams,
    HysteresisConfig,
    SchemeId,
    SchemeSelector,
    best_scheme,
    crossing_point,
    evaluate,
    fit_4pl,
    select_scheme,
)
from .tdpa import EnergyLedger, PcState, Port, pc_master, pc_slave, update_po
from .trajectory import ScriptKind, TrajectoryScript, master_position

__version__ = "0.1.0"
