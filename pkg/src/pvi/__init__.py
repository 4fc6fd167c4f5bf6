"""Painleve VI as a dynamical system.

Parameter space with its affine Weyl symmetry (params), the family of
affine cubic surfaces carrying the monodromy data (cubic), the polynomial
modular-group action on those surfaces (modular), the correspondence from
canonical coordinates to monodromy via an explicit scalar equation
(fuchsian), Hamiltonian integration with nonlinear monodromy and the
Riccati locus (flow), the birational symmetries (backlund), and a
command-line front door (cli).
"""

from . import backlund, cli, cubic, flow, fuchsian, modular, params, rk, serialize
from .cubic import SurfacePoint
from .fuchsian import PhasePoint
from .modular import AmbientPoint
from .params import Exponents

__all__ = [
    "AmbientPoint",
    "Exponents",
    "PhasePoint",
    "SurfacePoint",
    "backlund",
    "cli",
    "cubic",
    "flow",
    "fuchsian",
    "modular",
    "params",
    "rk",
    "serialize",
]

__version__ = "0.1.0"
