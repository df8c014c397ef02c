"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid model or sweep configuration (CLI exit code 2)."""


class NumericalError(RuntimeError):
    """Numerical failure: solver non-convergence, degenerate spectra, bad fits (CLI exit code 3)."""


class OutputError(OSError):
    """Persistence failure: unwritable directory, refused overwrite (CLI exit code 4)."""
