"""Exception taxonomy shared by all modules.

The CLI maps these onto exit codes: usage problems exit 2, capacity and
sampling failures exit 3, verdict failures exit 1.
"""


class ParameterError(ValueError):
    """An argument is out of range or inconsistent with the key/scheme."""


class ConfigurationError(ValueError):
    """An unknown backend, adversary, or mechanism name was requested."""


class CapacityError(RuntimeError):
    """An enumeration was requested over a space too large to enumerate."""


class SamplingFailureError(RuntimeError):
    """A rejection sampler exhausted its budget; signals misconfiguration."""


class InvariantViolationError(RuntimeError):
    """Internal state contradicts a documented invariant (e.g. empty preimage)."""
