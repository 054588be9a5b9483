"""Markov hierarchy of effective Hamiltonians for laser-driven multi-level systems.

Zeroth order is standard adiabatic elimination; first order adds the
memory correction and a metric on the relevant sector.  Everything works
on small dense matrices with hbar = 1.
"""

from .dynamics import (
    Trajectory,
    compare_trajectories,
    evolve_effective,
    evolve_exact,
    rabi_effective,
    rabi_exact,
    reconstruct_history,
    time_grid,
)
from .elimination import (
    EffectiveModel,
    Order,
    compose_elimination,
    estimate_irrelevant,
    heff0,
    heff1,
    heff1_dressed,
    metric,
)
from .model import (
    BlockHamiltonian,
    LevelLadder,
    PartitionPlan,
    Scenario,
    build_cascade,
    detunings_from_lab,
    partition,
    scenario_four_level,
    scenario_lambda,
    scenario_rydberg_pair,
    scenario_two_atom,
    shift_picture,
)
from .picture import PictureCondition, ShiftRule, shift_condition_a, shift_minimize, shifted_effective

__version__ = "0.1.0"
