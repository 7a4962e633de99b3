"""Exact computations with linked chains of vector spaces on the integer line.

Modules:

- ``exactlin``: matrices and subspaces over Q, F_p and Q(t)
- ``zrep``: representations, axioms, classification, simple bases
- ``strata``: arrow profiles, strata, components, finite-field oracle, deformations
- ``hilbert``: wedge-relation ideals, multigraded Hilbert functions, smoothings and lifts
- ``curve``: section towers on a two-component nodal curve and Riemann-Roch data
- ``cli``: the ``linkedchains`` command
"""

from .errors import (
    ClassificationError,
    ConfigurationError,
    ContractViolation,
    DimensionError,
    LinkedChainsError,
    ParseError,
    SimpleBasisError,
    SizeBoundError,
)

__version__ = "0.1.0"

__all__ = [
    "ClassificationError",
    "ConfigurationError",
    "ContractViolation",
    "DimensionError",
    "LinkedChainsError",
    "ParseError",
    "SimpleBasisError",
    "SizeBoundError",
    "__version__",
]
