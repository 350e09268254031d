"""Exact computations in the u-deformed module of twisted involutions."""

from .coxeter import CoxeterSpec, GroupTable, enumerate_group
from .exactring import LaurentPoly, Localized, Residue
from .hecke import HeckeAlgebra, HeckeElt
from .invmod import InvolutionModule, LTable, compute_L_table
from .twistinv import TwistTable, enumerate_twisted

__version__ = "0.1.0"

__all__ = [
    "CoxeterSpec", "GroupTable", "enumerate_group", "LaurentPoly", "Localized",
    "Residue", "HeckeAlgebra", "HeckeElt", "InvolutionModule", "LTable",
    "compute_L_table", "TwistTable", "enumerate_twisted", "__version__",
]
