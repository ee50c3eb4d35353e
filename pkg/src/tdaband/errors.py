"""Exception types shared across the library and the CLI.

The CLI maps these onto process exit codes: configuration problems exit
with 2, numerical solver failures with 3, and I/O errors with 4.
"""


class TdabandError(Exception):
    """Base class for all library-specific errors."""


class ConfigError(TdabandError, ValueError):
    """Invalid user-supplied configuration, flags, or input data."""


class SolverError(TdabandError, RuntimeError):
    """A numerical solve failed, e.g. no sign change in a bisection bracket."""
