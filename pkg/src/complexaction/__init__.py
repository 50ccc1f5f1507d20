"""Trajectory solvers for the 1-D TDSE built on a truncated complex-action hierarchy."""

from complexaction.hierarchy import (
    PhaseJet,
    PhysicalConstants,
    TrajectoryState,
    hierarchy_rhs,
    leibniz_square,
    reconstruct_amplitude,
)
from complexaction.potentials import Free, Harmonic, Morse, Polynomial, eval_derivative
from complexaction.strategies import (
    Bomca,
    Dpm,
    DpmSplitState,
    RealClassical,
    Zevca,
    dpm_split_rhs,
    full_rhs,
    jet_to_split,
    split_to_jet,
    velocity_of,
)
from complexaction.integrator import IntegrationConfig, integrate, rk4_step
from complexaction.engine import (
    GaussianWavepacket,
    PolynomialLogWavepacket,
    RootSearchConfig,
    bomca_root_grid,
    bomca_root_search,
    init_jet,
    init_velocity_real,
    propagate_fan,
)
from complexaction.spectral import (
    GridSpec,
    GridWavefunction,
    free_gaussian,
    harmonic_ground_state,
    harmonic_gaussian,
    sample_wavepacket,
    split_operator_propagate,
)
from complexaction.branches import (
    Branch,
    BranchedAmplitudes,
    branch_amplitude,
    classify_branches,
    find_nodes,
    interfere,
    superpose,
)

__version__ = "0.1.0"
