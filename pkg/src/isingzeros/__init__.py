"""Geometric zeros of the inhomogeneous 2d Ising model on embedded polyhedra."""

from .canonical import CanonicalSpec, build_canonical, edge_classes, reference_couplings, reference_polynomial
from .errors import *  # noqa: F401,F403
from .geometry import (
    EdgeRecord,
    circumcircle_center_angle,
    edge_records,
    face_normal,
    opposite_angles,
    orient_outward,
    regge_action,
    signed_dihedral,
    triangle_angles,
)
from .graph import IsingGraph, build_dual, cycle_space_basis, theta_graph
from .ising import (
    EvaluationReport,
    duality_map,
    geometric_couplings,
    loop_polynomial,
    loop_polynomial_even_subgraphs,
    loop_polynomial_spin_sum,
    partition_function,
    perturb_couplings,
)
from .mesh import EmbeddedMesh, load_mesh, save_mesh
from .meshgen import RescaleConfig, SamplerConfig, delaunay_sphere, radial_rescale, sample_sphere, validate_closed

__version__ = "0.1.0"
