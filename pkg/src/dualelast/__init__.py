"""Dual variational solver for 1-D nonconvex elasticity and a convexity lab for its dual densities."""

from .basestate import BaseState, DynamicBaseState, PiecewiseLinear
from .cases import CASE_NAMES, build_case, refinement_study, run_dynamic_case, run_static_case
from .convexity import NeoHookeanDualPoint, SvkDualPoint, g_neo_hookean, g_svk, svk_witness_value
from .dtp import AuxPotentialParams
from .errors import (
    ConfigError,
    DtPError,
    DualElastError,
    NewtonError,
    RegimeMismatch,
    UnknownCase,
)
from .fem_spacetime import DynamicCase, SpaceTimeMesh
from .fem_static import CaseBC, Mesh1D
from .material import SvkParams
from .newton import NewtonConfig, newton_solve
from .primal import evolve_primal

__version__ = "0.1.0"

__all__ = [
    "AuxPotentialParams",
    "BaseState",
    "CASE_NAMES",
    "CaseBC",
    "ConfigError",
    "DtPError",
    "DualElastError",
    "DynamicBaseState",
    "DynamicCase",
    "Mesh1D",
    "NeoHookeanDualPoint",
    "NewtonConfig",
    "NewtonError",
    "PiecewiseLinear",
    "RegimeMismatch",
    "SpaceTimeMesh",
    "SvkDualPoint",
    "SvkParams",
    "UnknownCase",
    "build_case",
    "evolve_primal",
    "g_neo_hookean",
    "g_svk",
    "newton_solve",
    "refinement_study",
    "run_dynamic_case",
    "run_static_case",
    "svk_witness_value",
]
