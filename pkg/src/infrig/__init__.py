"""Infinitesimal rigidity of bar-joint frameworks in Euclidean, hyperbolic and spherical space."""

__version__ = "0.1.0"

from .errors import RigidityError
from .framework import Framework, Geometry, load_framework, parse_framework
from .linalg import EXACT, FLOATING, Tolerance
from .rigidity import analyze_kinematics, analyze_statics, resolve_load
from .projective import ProjectiveMap, apply_projective, phi_kin, phi_stat
from .pogorelov import central_project, pogorelov_transport
from .catalog import blaschke_check, make_example

__all__ = [
    "__version__",
    "RigidityError",
    "Framework",
    "Geometry",
    "load_framework",
    "parse_framework",
    "Tolerance",
    "EXACT",
    "FLOATING",
    "analyze_kinematics",
    "analyze_statics",
    "resolve_load",
    "ProjectiveMap",
    "apply_projective",
    "phi_stat",
    "phi_kin",
    "central_project",
    "pogorelov_transport",
    "make_example",
    "blaschke_check",
]
