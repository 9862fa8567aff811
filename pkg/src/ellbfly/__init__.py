"""ellbfly: O(d log d) elliptic butterflies for Riemann-Roch spaces L(<t>).

Evaluation, interpolation and reduction in the space of functions with simple
poles along a cyclic subgroup <t> of order d = 2^delta on an elliptic curve
over F_p, plus three applications: residue-ring/normal-basis multiplication,
MDS elliptic Goppa codes, and a toy Elliptic-LWE encryption scheme.
"""

from .fields import ExtField, OpCounter, PrimeField
from .curves import Curve, Isogeny2, PoleError, find_torsion_curve, point_order
from .bases import BasisCtx, coset, u_to_v, v_to_u
from .butterfly import (
    bidiagonal_apply,
    bidiagonal_det,
    bidiagonal_solve,
    butterfly_evaluate,
    butterfly_interpolate,
    butterfly_reduce,
)
from .tower import Tower, build_tower, load_tower, save_tower
from .ntt import NttCtx
from .ring import (
    EllipticNormalBasis,
    KummerNormalBasis,
    RingCtx,
    build_normal_basis_field,
)
from .goppa import GoppaCode
from .lwe import PRESETS, LweScheme, make_scheme

__version__ = "0.1.0"

__all__ = [
    "ExtField", "OpCounter", "PrimeField",
    "Curve", "Isogeny2", "PoleError", "find_torsion_curve", "point_order",
    "BasisCtx", "coset", "u_to_v", "v_to_u",
    "bidiagonal_apply", "bidiagonal_det", "bidiagonal_solve",
    "butterfly_evaluate", "butterfly_interpolate", "butterfly_reduce",
    "Tower", "build_tower", "load_tower", "save_tower",
    "NttCtx",
    "EllipticNormalBasis", "KummerNormalBasis", "RingCtx",
    "build_normal_basis_field",
    "GoppaCode",
    "PRESETS", "LweScheme", "make_scheme",
]
