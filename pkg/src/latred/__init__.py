"""Exact reduction theory for lattices over Z and F_q[t].

Canonical slope filtrations of module lattices, exact volumes on the
integer, function-field and S-arithmetic sides, local building
combinatorics, and the cover systems cut out by instability thresholds.
"""

from .exactmath import (ExactMatrix, SNFDecomposition, hermite_normal_form,
                        minors, prime_part, saturate, smith_normal_form,
                        valuation)
from .filtration import (FiltrationReport, GradedPoint, c_value,
                         canonical_filtration, canonical_plot)
from .latz import (InnerProduct, ZSummand, canonical_filtration_z,
                   enumerate_summands, gram_logvol, gram_vol2, instability_z,
                   spd_distance)
from .latff import (DiagonalBasisResult, FFSummand, VolumeSpace,
                    diagonal_basis, ff_invariants_and_filtration, ff_logvol,
                    instability_ff, sub_quotient)
from .logs import ExactLog
from .sarith import (IntegralStructure, LocalizedContext, LocSummand,
                     factorize, factorize_conjugated, intersect_integral,
                     loc_c, loc_logvol)
from .building import (BuildingContext, SimplexDecomposition, Vertex,
                       apartment_coords, canonical_vertex,
                       count_chambers_on_edge, edge_length, edge_length_sq,
                       label_difference, neighbors, triangulate_point)
from .covers import (CoverSystem, SimplexPoint, core_orbit_reps, core_test,
                     cover_membership, thinned_membership)

__all__ = [name for name in dir() if not name.startswith("_")]
