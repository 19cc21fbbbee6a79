"""Semantic exception hierarchy for certint.

Public functions never raise bare ``ValueError``; configuration problems
(bad tolerances, malformed regions, out-of-range dimensions) raise
:class:`ConfigurationError`, while integrands or sample generators that
return NaN, infinities, or out-of-contract values raise
:class:`EvaluationError`.
"""


class CertintError(Exception):
    """Base error for this package."""


class ConfigurationError(CertintError, ValueError):
    """Inputs violate a documented contract (domain, shape, range)."""


class EvaluationError(CertintError, ArithmeticError):
    """A user callback produced NaN/Inf or out-of-contract values."""


class DataFileError(CertintError):
    """A bundled data file is missing, truncated, or fails its checksum."""
