"""Exception types shared across the package.

``exit_code`` is what the command line interface returns when the error
escapes to the top level: 2 for invalid input, 3 for requests beyond the
enumeration and simulation limits, 4 for conditioning on an outcome of
probability zero.
"""

from __future__ import annotations


class PhaseAmpError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class InvalidSizeError(PhaseAmpError, ValueError):
    """A size parameter is outside the valid range for the construction."""


class InvalidGraphError(PhaseAmpError, ValueError):
    """A graph violates a structural requirement, or a graph file is malformed."""


class InvalidParameterError(PhaseAmpError, ValueError):
    """A numeric or flag argument is outside its documented domain."""


class NoAmplificationError(InvalidParameterError):
    """The two-peak filter cannot separate the peaks for these parameters."""


class ResourceLimitError(PhaseAmpError):
    """The request exceeds the enumeration or simulation limits."""

    exit_code = 3


class UnsupportedSizeError(ResourceLimitError):
    """Assignment-level tables are disabled for graphs this large."""


class ImpossibleOutcomeError(PhaseAmpError):
    """A measurement outcome with probability zero was requested."""

    exit_code = 4
