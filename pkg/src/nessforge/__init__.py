"""Steady states of boundary-driven interacting qubit chains.

Dense Lindblad-equation toolkit: model builders, two steady-state solvers,
current/correlation observables, a parity-selection-rule audit, and a
symmetry engine that predicts which observables are forced to vanish.
"""

from .liouvillian import (
    DegenerateSteadyStateError,
    Liouvillian,
    SolveInfo,
    SolveOptions,
    UniquenessReport,
    apply_lindbladian,
    build_superoperator,
    check_uniqueness,
    evolve_state,
    solve_ness,
    solve_ness_evolution,
    solve_ness_nullspace,
)
from .model import (
    CouplingGraph,
    Dephasing,
    IncoherentHop,
    Model,
    Raw,
    TargetProfile,
    TargetX,
    TargetY,
    TargetZ,
    build_general_hamiltonian,
    build_lindblad,
    build_model,
    build_xxz_chain,
    model_to_config,
    preset_setup,
    target_profile,
    twist_targets,
)
from .observables import (
    CurrentOperators,
    PsrReport,
    bond_energy_operator,
    build_current_operators,
    correlation,
    default_selections,
    energy_current,
    energy_current_operator,
    is_x_state,
    jy_operator,
    magnetization_profile,
    parse_selection,
    parse_selections,
    psr_audit,
    psr_mask,
    spin_current,
    spin_current_operator,
    structure_factor,
    total_magnetization,
)
from .operators import (
    embed_local,
    expectation,
    hermitize,
    maximally_mixed,
    partial_trace,
    pauli_at,
    sigma_minus,
    sigma_plus,
    sigma_x,
    sigma_y,
    sigma_z,
)
from .sweeps import (
    SweepConfig,
    SweepResult,
    fig_dataset,
    run_sweep,
    sweep_config_from_dict,
    write_sweep_csv,
)
from .symmetry import (
    InvarianceReport,
    SymmetryTransform,
    UniquenessNotEstablished,
    forced_zeros,
    liouvillian_commutes,
    make_transform,
    observable_parity,
    reflection_permutation,
    transform_state,
)

__version__ = "0.1.0"
