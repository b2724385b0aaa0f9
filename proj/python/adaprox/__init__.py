"""Safeguarded adaptive proximal-gradient solver.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its surface.
"""

from ._core import (
    FAMILIES,
    RULES,
    SolverError,
    __version__,
    adapg_candidate,
    fixed_point_residual,
    local_estimates,
    safeguarded_gamma,
    solve,
)

__all__ = [
    "FAMILIES",
    "RULES",
    "SolverError",
    "__version__",
    "adapg_candidate",
    "fixed_point_residual",
    "local_estimates",
    "safeguarded_gamma",
    "solve",
]
