"""
Exception hierarchy shared by the library and the experiment layer.
"""


class LaurentLabError(Exception):
    """Base class for all laurent-lab errors."""


class DomainError(LaurentLabError, ValueError):
    """A parameter or input lies outside its declared range."""


class UnsupportedError(LaurentLabError, NotImplementedError):
    """The operation is not available for this representation or space kind."""


class DiagnosticError(LaurentLabError, RuntimeError):
    """A numerical procedure could not produce a trustworthy result."""


class ConfigError(LaurentLabError, ValueError):
    """Malformed configuration file, literal, or command-line override."""
