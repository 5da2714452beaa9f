"""Package identity constants embedded in emitted reports."""

__version__ = "0.1.0"

# Bumped whenever the shape of an emitted JSON document changes.
SCHEMA_VERSION = "phase-amp.report/1"
