"""Heat-kernel series on SU(2) and SU(3)."""
from .roots import (DominantWeight, RootSystemData, TorusPoint, casimir, dominant_weights,
                    parse_torus_point, root_system, weyl_character, weyl_dimension)
from .series import (SeriesResult, commutator_density, lie_n_commutator_density,
                     moduli_volume_series, subgroup_pushforward_density, vanishing_limit,
                     witten_zeta_partial)
from .montecarlo import expected_bin_probabilities, mc_commutator_histogram, total_variation

__all__ = [
    "DominantWeight", "RootSystemData", "TorusPoint", "casimir", "dominant_weights",
    "parse_torus_point", "root_system", "weyl_character", "weyl_dimension",
    "SeriesResult", "commutator_density", "lie_n_commutator_density", "moduli_volume_series",
    "subgroup_pushforward_density", "vanishing_limit", "witten_zeta_partial",
    "expected_bin_probabilities", "mc_commutator_histogram", "total_variation",
]
