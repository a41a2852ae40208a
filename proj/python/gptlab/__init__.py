"""Workbench for polytopal state spaces.

Exact (rational) and floating-point analysis of general probabilistic
theories on polytopes: symmetry groups, bit symmetry, the constructive
self-duality pipeline, maximal tensor products, and CHSH optimization.
All functions return plain dicts mirroring the CLI's JSON reports
(top-level ``"schema": 1``).
"""

from ._core import (
    BudgetError,
    GptlabError,
    analyze,
    catalog,
    distinguish,
    space_info,
    tensor,
)

__all__ = [
    "BudgetError",
    "GptlabError",
    "analyze",
    "catalog",
    "distinguish",
    "space_info",
    "tensor",
]
