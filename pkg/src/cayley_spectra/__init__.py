"""Finite rotation point groups, their Cayley graphs, group-algebra spectra,
irreducible-representation pairings, and topological spectral flows."""

from .rotations import (
    GOLDEN_RATIO,
    FiniteGroup,
    GroupTolerance,
    Rotation,
    conjugacy_classes,
    cyclic_group,
    find_standard_generators,
    generate_group,
    group_from_json,
    group_to_json,
    icosahedral_group,
    permute_elements,
    rotation_angle,
    rotation_from_axis_angle,
)
from .cayley import (
    CayleyGraph,
    MetricChoice,
    adjacency_element,
    angular_distance,
    c60_hopping_element,
    cayley_graph,
    generator_cycles,
    graph_diameter,
    graph_to_dot,
    graph_to_json,
    standard_graph,
    word_distance,
    word_distances_from,
)
from .algebra import (
    AlgebraElement,
    RegularOperator,
    add,
    adjoint,
    canonical_trace,
    element_from_json,
    element_to_json,
    from_scalar_coeffs,
    group_element,
    identity_element,
    left_regular,
    multiply,
    operator_norm,
    right_regular,
    scale,
    translation_unitary,
    zero_element,
)
from .spectra import (
    CharacterTable,
    EigenCluster,
    SpectralData,
    class_alignment,
    hermitian_eig,
    icosahedral_character_table,
    identify_irrep,
    irrep_multiplicities,
    level_character,
    projector_to_algebra,
    random_selfadjoint,
    spectral_projector,
    tensor_multiplicities,
)
from .models import (
    IRREP_LABELS,
    CutoffFunction,
    FundamentalModel,
    TruncationSweep,
    adjacency_irrep_eigenvalues,
    coupling_range,
    squared_shift_model,
    truncation_family,
    truncation_model,
)
from .flows import (
    PAIR_ORDER,
    FlowExperiment,
    FlowResult,
    all_pairs_suite,
    diagonal_disorder,
    random_perturbation_K,
    rescale_unit_gap,
    run_flow,
)
from .molecule import (
    CouplingSpec,
    OrbitLattice,
    Pose,
    assemble_dynamical_matrix,
    coupling_from_kernel,
    driven_response,
    orbit_lattice,
)
from . import errors

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
