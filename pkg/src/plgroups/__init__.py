"""Exact computations in subgroups of PL+(I).

Maps act on the right: ``f * g`` applies ``f`` first. All coordinates are
exact rationals.
"""

from .builders import (
    Imbalance,
    Inconsistent,
    TransitionChain,
    build_exemplary_tower,
    depth_lower_bound,
    derive_tower,
    find_witness,
)
from .certificates import TowerCertificate, replay
from .errors import (
    DegenerateInputError,
    DomainError,
    InconclusiveError,
    InvalidMapError,
    NotAnOrbitalError,
    ParseError,
    PLGroupsError,
    PreconditionError,
    ResourceError,
    VerificationError,
)
from .geometry import (
    Realization,
    SignedOrbital,
    TransitionChainWitness,
    classify_realization,
    detect_transition_chain,
    find_mover,
    group_orbitals,
    imbalance_search,
    inconsistent_search,
)
from .groups import AnalysisConfig, AnalysisReport, analyze, derived_sample, f_generators
from .plmap import (
    IDENTITY,
    Direction,
    Interval,
    PLMap,
    commutator,
    compare_left_order,
    compose,
    conjugate,
    double_commutator,
    edge_slopes,
    evaluate,
    inverse,
    orbitals_of_map,
    power,
    project,
)
from .rat import Rat, as_rat, format_rat, parse_rat
from .towers import Tower, conjugate_tower, fits_fundamental_domain, is_exemplary, max_tower
from .words import GroupSpec, Word, enumerate_elements
from .wreath import (
    build_family,
    bump_on,
    dc_properties_check,
    efficiency_exponents,
    mutual_efficiency,
    obstruction_demo,
    rescale_into,
    wreath_with_Z,
)

__all__ = [
    "AnalysisConfig", "AnalysisReport", "analyze", "as_rat", "build_exemplary_tower",
    "build_family", "bump_on", "classify_realization", "commutator", "compare_left_order",
    "compose", "conjugate", "conjugate_tower", "dc_properties_check",
    "DegenerateInputError", "depth_lower_bound", "derive_tower", "derived_sample",
    "detect_transition_chain", "Direction", "DomainError", "double_commutator",
    "edge_slopes", "efficiency_exponents", "enumerate_elements", "evaluate", "f_generators",
    "find_mover", "find_witness", "fits_fundamental_domain", "format_rat", "group_orbitals",
    "GroupSpec", "IDENTITY", "Imbalance", "imbalance_search", "InconclusiveError",
    "Inconsistent", "inconsistent_search", "Interval", "InvalidMapError", "inverse",
    "is_exemplary", "max_tower", "mutual_efficiency", "NotAnOrbitalError",
    "obstruction_demo", "orbitals_of_map", "parse_rat", "ParseError", "PLGroupsError",
    "PLMap", "power", "PreconditionError", "project", "Rat", "Realization", "replay",
    "rescale_into", "ResourceError", "SignedOrbital", "Tower", "TowerCertificate",
    "TransitionChain", "TransitionChainWitness", "VerificationError", "Word",
    "wreath_with_Z",
]

__version__ = "0.1.0"
