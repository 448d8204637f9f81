"""
Analysis of 3-webs: the obstruction tower, its evaluation at a point,
integration of linearizations and verdict reports.
"""

from .linearize import (
    FieldGrid, LinearizationField, assemble_L, integrate_base, integrate_parallel, integrate_tz,
    prepare_grid, prelinearization_residuals, projective_equiv_check, verify,
)
from .obstruction import ObstructionTower, TowerBuilder, evaluate_tower, materialize
from .report import Report

__all__ = [
    "FieldGrid", "LinearizationField", "assemble_L", "integrate_base", "integrate_parallel", "integrate_tz",
    "prepare_grid", "prelinearization_residuals", "projective_equiv_check", "verify",
    "ObstructionTower", "TowerBuilder", "evaluate_tower", "materialize", "Report",
]
