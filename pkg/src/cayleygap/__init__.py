"""Cayley graphs of finite groups: exact Cheeger constants, normalised
spectra, bipartiteness certificates, and a mechanically checked pipeline that
extracts an index-2 subgroup from a near-bipartite spectrum."""

from .cayley import (
    CayleyGraph,
    GeneratingSet,
    MultisetGenerators,
    build,
    edge_boundary_count,
    generating_set,
    left_translate,
    mask_members,
    mask_of,
    multiset_image_excess,
    parse_generators,
    right_translate,
    set_image,
    square_multiset,
    vertex_boundary,
)
from .cheeger import (
    CheegerCertificate,
    bauer_jost_check,
    cheeger_buser_check,
    dual_cheeger,
    edge_cheeger,
    expansion_check,
    vertex_cheeger,
    vertex_cheeger_from_masks,
    vertex_edge_relation_check,
)
from .errors import (
    CapExceededError,
    CayleyGapError,
    ConvergenceError,
    DisconnectedGraphError,
    ElementCapError,
    GeneratingSetError,
    GroupValidationError,
    SpecParseError,
)
from .groups import (
    FiniteGroup,
    GroupSpec,
    default_generators,
    expand_group_specs,
    from_cyclic,
    from_dihedral,
    from_direct_product,
    from_permutations,
    from_symmetric,
    from_table,
    load_table,
    parse_group_spec,
    parse_permutation,
    validate_axioms,
)
from .proof import (
    ProofParameters,
    ProofTrace,
    beta_of_zeta,
    construct_subgroup,
    dichotomy_check,
    disjointness_check,
    find_candidate_set,
    agreement_set_bounds_check,
    large_set_expansion_check,
    make_parameters,
    run_pipeline,
    set_property_check,
    translate_profile,
    zeta_max,
    zeta_max_candidate,
)
from .spectral import (
    SpectralSummary,
    eigenvalues_symmetric,
    is_bipartite_spectral,
    is_connected,
    normalized_adjacency,
    spectrum,
    square_normalized_adjacency,
    square_spectrum_consistency,
)
from .subgroups import (
    SubgroupCertificate,
    closure,
    index2_subgroups,
    is_bipartite_structural,
    proposition_equivalence_check,
    squares_commutators_subgroup,
)
from .verify import (
    VerificationReport,
    build_graph,
    eigenvalue_interval_check,
    full_report,
    main_bound_check,
    main_bound_constant,
    report_to_csv,
    report_to_json,
    report_to_text,
    sweep,
    sweep_to_csv,
    sweep_to_json,
    sweep_to_text,
    tightness_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "CayleyGapError",
    "CayleyGraph",
    "CheegerCertificate",
    "ConvergenceError",
    "DisconnectedGraphError",
    "ElementCapError",
    "FiniteGroup",
    "GeneratingSet",
    "GeneratingSetError",
    "GroupSpec",
    "GroupValidationError",
    "MultisetGenerators",
    "ProofParameters",
    "ProofTrace",
    "SpecParseError",
    "SpectralSummary",
    "SubgroupCertificate",
    "VerificationReport",
    "agreement_set_bounds_check",
    "bauer_jost_check",
    "beta_of_zeta",
    "build",
    "build_graph",
    "cheeger_buser_check",
    "closure",
    "construct_subgroup",
    "default_generators",
    "dichotomy_check",
    "disjointness_check",
    "dual_cheeger",
    "edge_boundary_count",
    "edge_cheeger",
    "eigenvalue_interval_check",
    "eigenvalues_symmetric",
    "expand_group_specs",
    "expansion_check",
    "find_candidate_set",
    "from_cyclic",
    "from_dihedral",
    "from_direct_product",
    "from_permutations",
    "from_symmetric",
    "from_table",
    "full_report",
    "generating_set",
    "index2_subgroups",
    "is_bipartite_spectral",
    "is_bipartite_structural",
    "is_connected",
    "large_set_expansion_check",
    "left_translate",
    "load_table",
    "main_bound_check",
    "main_bound_constant",
    "make_parameters",
    "mask_members",
    "mask_of",
    "multiset_image_excess",
    "normalized_adjacency",
    "parse_generators",
    "parse_group_spec",
    "parse_permutation",
    "proposition_equivalence_check",
    "report_to_csv",
    "report_to_json",
    "report_to_text",
    "right_translate",
    "run_pipeline",
    "set_image",
    "set_property_check",
    "spectrum",
    "square_multiset",
    "square_normalized_adjacency",
    "square_spectrum_consistency",
    "squares_commutators_subgroup",
    "sweep",
    "sweep_to_csv",
    "sweep_to_json",
    "sweep_to_text",
    "tightness_ratio",
    "translate_profile",
    "validate_axioms",
    "vertex_boundary",
    "vertex_cheeger",
    "vertex_cheeger_from_masks",
    "vertex_edge_relation_check",
    "zeta_max",
    "zeta_max_candidate",
]
