"""Exact computation of the stable-pairs one-leg descendent vertex.

Everything is computed in exact arithmetic: arbitrary-precision rationals,
multivariate rational functions in the equivariant weights, and integer
Laurent characters.  The package verifies pole cancellation under
s3 = (s1+s2)/a, Laurent polynomiality of the specialized vertex, the
rational denominator ansatz in q, and the boundary pairing identities on the
Hilbert scheme of plane points.
"""

from .boxconfig import (BoxConfig, FProfile, enumerate_box_configs, f_profile,
                        validate_config_oracle)
from .cancellation import (DiagonalPermutation, SigmaPoly, admissible_h,
                           classify_f, count_nonvanishing_permutations,
                           enumerate_sym, phi, poly_division_on_points,
                           psi_construct, vanishing_sum_check)
from .errors import (CalibrationFailed, DivisionByZero, HypothesisFailed,
                     NoFit, NotPolynomial, PoleSurvived, PTVertexError,
                     RankDeficient, Underdetermined, ZeroWeight)
from .hilbert import (correspondence_matrix, descendent_class_at_fixed_point,
                      fixed_point_tangent_weights, hilb_descendent_pairing,
                      nakajima_pairing, nakajima_transition)
from .partitions import enumerate_partitions
from .polys import MPoly
from .qseries import QSeries
from .ratfunc import RationalFunction
from .tcharacter import TCharacter, chern_character_eval, euler_class, simplify_character
from .tqft import (GluingBlock, RationalQ, fit_rational,
                   functional_equation_check, glue_series,
                   stationary_reference_series)
from .vertexcore import (assemble_cap_leading, cylinder_and_edge_characters,
                         descendent_weight, edge_weight, group_sum_by_profile,
                         specialize_and_check, vertex_character, vertex_series)

__version__ = "0.1.0"
