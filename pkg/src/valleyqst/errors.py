"""Exception types shared across the package.

The command-line interface maps these onto exit codes: parameter and
configuration problems exit with 2, numerical failures with 3.
"""


class ParameterError(ValueError):
    """A physical parameter is out of its allowed range or inconsistent."""


class ConfigError(ValueError):
    """A configuration document could not be parsed or validated.

    Messages include the 1-based line number of the offending entry when
    one is available.
    """


class NumericalError(RuntimeError):
    """A computation failed to converge or hit a degenerate condition."""
