"""Noncrossing partition lattices of G(1,1,n) and G(d,d,n), their symmetric
decompositions, and Sperner-type checks on graded posets."""

from .catalog import GroupInvariants, catalog, narayana
from .colored_perm import (
    ColoredPermutation, GroupParams, Reflection, compose, coxeter_element, fix_dim,
    format_element, identity, inverse, parse_element, reflections,
)
from .decompose import (
    chunk_decompose, rank_recursion, rank_recursion_printed, rearranged_decompose, sbd,
    scd_from_sbd, su_decompose,
)
from .io import (
    export_decomposition, export_dot, export_poset, import_decomposition, import_poset,
    verify_reference_table,
)
from .poset import (
    Decomposition, GradedPoset, Part, gamma_from_boolean_parts, gamma_vector, is_isomorphic,
    rank_profile, verify_decomposition,
)
from .reflection_order import (
    LatticeTooLarge, NCLattice, build_nc_lattice, leq_T, reflection_length, standard_lattice,
)
from .sperner import (
    griggs_scd_exists, is_sperner, is_strongly_sperner, max_k_family_bruteforce,
    normalized_matching, truncate, width,
)

__version__ = "0.1.0"
