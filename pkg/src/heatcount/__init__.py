"""Counting solutions of equations in finite groups with characters and heat kernels.

Finite groups are handled exactly: every count is a character sum that is
rounded and certified.  The compact-group counterparts (SU(2), SU(3)) are
series over dominant weights with rigorous truncation bounds.
"""
from .characters import CharacterTable, ClassFunction, character_table
from .counting import (CountResult, WordEquation, brute_force_count, count_conjugate_subgroup_product,
                       count_klein, count_n_commutator, count_surface, count_with_square,
                       parse_word, pushforward_class_function, weighted_count)
from .errors import (ConsistencyError, DegeneracyError, DivergenceError, DomainError, HeatCountError,
                     ParseError, ResourceError, SingularityWarning, SingularPointError, UsageError)
from .groups import ConjugacyClass, FiniteGroup, Subgroup, build_group
from .heat import SpectralWeight, cayley_weight, heat_count_limit, heat_kernel

__version__ = "0.1.0"

__all__ = [
    "CharacterTable", "ClassFunction", "character_table",
    "CountResult", "WordEquation", "brute_force_count", "count_conjugate_subgroup_product",
    "count_klein", "count_n_commutator", "count_surface", "count_with_square", "parse_word",
    "pushforward_class_function", "weighted_count",
    "ConsistencyError", "DegeneracyError", "DivergenceError", "DomainError", "HeatCountError",
    "ParseError", "ResourceError", "SingularityWarning", "SingularPointError", "UsageError",
    "ConjugacyClass", "FiniteGroup", "Subgroup", "build_group",
    "SpectralWeight", "cayley_weight", "heat_count_limit", "heat_kernel",
]
