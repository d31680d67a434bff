"""Exception types shared across the library."""


class InputError(ValueError):
    """Malformed user input: files, logs, or argument values."""


class ConfigError(ValueError):
    """A run configuration that cannot be simulated."""


class QueueOverflowError(RuntimeError):
    """Sample queue at capacity; the new sample was not stored."""


class UsageError(Exception):
    """Bad command-line flags or config file; maps to exit code 1."""
