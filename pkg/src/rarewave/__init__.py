"""Planar rarefaction wave laboratory for 2D isentropic compressible flow."""

from .burgers import BurgersWave
from .euler import (GasModel, RiemannData, char_speed, connect_end_states,
                    connect_riemann_data, make_riemann_data, rarefaction_fan,
                    riemann_invariant)
from .solver import (FlowState, PerturbationSpec, PositivityError, SolverConfig,
                     initialize, run, step)
from .wave import WaveProfile, evaluate_wave, sample_profile

__version__ = "0.1.0"

__all__ = [
    "BurgersWave", "GasModel", "RiemannData", "char_speed", "connect_end_states",
    "connect_riemann_data", "make_riemann_data", "rarefaction_fan",
    "riemann_invariant", "FlowState", "PerturbationSpec", "PositivityError",
    "SolverConfig", "initialize", "run", "step", "WaveProfile", "evaluate_wave",
    "sample_profile", "__version__",
]
