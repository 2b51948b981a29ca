"""Siamese dipyramids: isomer enumeration, rigidity atlas and almost flexions."""
from .atlas import characteristic_points, jacobian, trace_singular_curve, fold_image
from .deformation import flexion_report, natural_path, admissible, hat_points
from .geometry import (FaceParams, HeightsPair, SiameseConfig, aperture, build_mesh,
                       edge_lengths, export_obj, system_residual, validate_base_length)
from .roots import solve_heights, transition_base_length

__version__ = "0.1.0"

__all__ = [
    "FaceParams", "HeightsPair", "SiameseConfig", "admissible", "aperture", "build_mesh",
    "characteristic_points", "edge_lengths", "export_obj", "flexion_report", "fold_image",
    "hat_points", "jacobian", "natural_path", "solve_heights", "system_residual",
    "trace_singular_curve", "transition_base_length", "validate_base_length",
]
