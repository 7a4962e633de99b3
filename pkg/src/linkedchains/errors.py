"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: parse problems exit 2, contract
violations exit 3, size-bound refusals exit 4.
"""


class LinkedChainsError(Exception):
    """Base class for all library errors."""


class ParseError(LinkedChainsError):
    """Malformed input (JSON, field names, scalar literals)."""


class ConfigurationError(LinkedChainsError):
    """Objects over different fields were combined."""


class ContractViolation(LinkedChainsError):
    """A documented precondition does not hold."""


class DimensionError(ContractViolation):
    """Ambient or shape mismatch between operands."""


class ClassificationError(ContractViolation):
    """Input to the classifier fails one of the chain axioms."""


class SimpleBasisError(ContractViolation):
    """The pushed-forward family at some vertex is not a basis."""


class SizeBoundError(LinkedChainsError):
    """A brute-force search or rank computation exceeds its bound."""
