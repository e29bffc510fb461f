"""Dissipative dynamics of two two-level atoms in a maximally noisy environment.

Simulation and analysis toolkit for a pair of atoms with collective damping:
master-equation integration, closed-form solutions in the equal-damping
regime, Werner-state asymptotics, and Wootters concurrence diagnostics.
"""

from . import errors
from .closed_form import (
    AsymptoticClass,
    Populations,
    XStateInit,
    as_x_init,
    asymptotic_state,
    classify_asymptotic,
    fidelity_max_entangled,
    fidelity_product,
    populations_closed,
    quarter_curve_theta,
    region_E_boundary_theta,
    region_E_contains,
    x_state_concurrence,
    x_state_trajectory,
)
from .dynamics import (
    IntegratorConfig,
    Trajectory,
    TrajectorySample,
    collective_rhs,
    evolve_collective,
    evolve_many,
    evolve_numeric,
    lindblad_rhs,
    verify_unital,
    write_trajectory_csv,
)
from .entanglement import (
    LocalUnitary,
    apply_local,
    concurrence,
    concurrence_sqrt_form,
    fidelity_singlet,
    local_unitary,
    purity,
    spin_flip,
)
from .qstate import (
    CollectiveElements,
    DensityMatrix,
    Qubit,
    SystemParams,
    bell_diagonal,
    density_from_pairs,
    density_to_pairs,
    from_collective,
    make_density,
    max_entangled,
    product_state,
    pure_phi,
    random_density,
    random_qubit,
    to_collective,
    werner_state,
    x_initial,
)

__version__ = "0.1.0"
