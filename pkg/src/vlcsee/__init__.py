"""Energy-efficient artificial-noise precoding for secure indoor visible-light links."""

from .channel import (ChannelState, DegenerateChannelError, OpticalParams, PowerParams,
                      RoomScenario, Scheme, build_channel)
from .experiments import ExperimentResult, SchemeVariant, SweepSpec, run_sweep
from .known_csi import MaxMinConfig, MaxMinOutcome, maxmin_see
from .metrics import PrecoderSolution, ee_bob, min_see
from .unknown_csi import DesignConfig, DesignOutcome, design_unknown

__version__ = "0.1.0"

__all__ = [
    "ChannelState", "DegenerateChannelError", "OpticalParams", "PowerParams", "RoomScenario",
    "Scheme", "build_channel", "ExperimentResult", "SchemeVariant", "SweepSpec", "run_sweep",
    "MaxMinConfig", "MaxMinOutcome", "maxmin_see", "PrecoderSolution", "ee_bob", "min_see",
    "DesignConfig", "DesignOutcome", "design_unknown",
]
