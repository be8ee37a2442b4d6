"""Structural analysis of polynomial and rational matrices via pencil linearizations."""
from .analysis import (StructureReport, is_pm_regular, is_pm_unimodular, pm_eigvals,
                       pm_kstruct, pm_poles, pm_rank, pm_roots, pm_zeros, realization_kstruct,
                       rm_analyze, rm_kstruct, rm_poles, rm_rank, rm_zeros)
from .errors import StructureError
from .linearize import (build_companion, fraction_linearize, rm_linearize, sp_realize,
                        spm_linearize)
from .pencil import Pencil, klf_reduce, pkstruct
from .polymat import PolyMatrix, RationalMatrix, pm2poly, poly2pm
from .realize import lpsminreal, lsminreal, realization_to_matrix
from .system import PencilRealization, PolySystemMatrix

__all__ = [
    "StructureReport", "is_pm_regular", "is_pm_unimodular", "pm_eigvals", "pm_kstruct",
    "pm_poles", "pm_rank", "pm_roots", "pm_zeros", "realization_kstruct", "rm_analyze",
    "rm_kstruct", "rm_poles", "rm_rank", "rm_zeros", "StructureError", "build_companion",
    "fraction_linearize", "rm_linearize", "sp_realize", "spm_linearize", "Pencil",
    "klf_reduce", "pkstruct", "PolyMatrix", "RationalMatrix", "pm2poly", "poly2pm",
    "lpsminreal", "lsminreal", "realization_to_matrix", "PencilRealization",
    "PolySystemMatrix",
]
