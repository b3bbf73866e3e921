"""Exception types shared across the package.

The CLI maps these onto its exit codes, so raising the right class matters:
config problems exit 2, unsupported inputs exit 3, search-space guards exit 4
and internal cross-check failures exit 5.
"""


class ConfigError(ValueError):
    """Malformed or incomplete run configuration."""


class UnsupportedFieldError(ValueError):
    """Base field outside the supported range (rationals or real quadratic)."""


class TwoAdicUnsupportedError(ValueError):
    """Splitting data over 2 requested for a real quadratic base field.

    The dyadic classification over a real quadratic base is deliberately not
    guessed; callers either avoid dyadic primes or degrade to bound mode.
    """


class SettingError(ValueError):
    """The (field, extension, algebra) triple fails a workflow precondition."""


class StrongApproximationError(SettingError):
    """No archimedean place of the extension splits the algebra."""


class GuardExceededError(RuntimeError):
    """Brute-force search space larger than the configured guard."""


class ConsistencyError(RuntimeError):
    """Two independent routes to the same quantity disagree."""
