"""Hyperbolic structures and canonical decompositions of cusped 3-manifold triangulations."""

from .canonical import (CanonicalDecomposition, canonize, decomposition_signature,
                        face_verdicts, hull_oracle, lift_to_lightcone, manifolds_equal, tilts)
from .cusps import build_cross_sections, cusp_generators, holonomy_dilation, normalize_equal_volume
from .enumeration import EnumerationFilter, enumerate_pairings
from .geometry import edge_moduli, lobachevsky, tet_volume
from .gluing import ShapeAssignment, assemble_equations, solve, total_volume
from .isosig import are_isomorphic, iso_signature
from .moves import move_1_4, move_2_3, move_3_2
from .triangulation import (Triangulation, build_triangulation, parse_triangulation,
                            read_triangulation, write_triangulation)

__version__ = "0.1.0"
