"""Exception types shared across the package."""


class HyperavgError(Exception):
    """Base class for all package-specific errors."""


class OutOfRangeError(HyperavgError):
    """A vertex index lies outside [0, n)."""


class DegenerateTripleError(HyperavgError):
    """A hyperedge repeats a vertex."""


class TooSmallTorusError(HyperavgError):
    """Torus side length too small for non-degenerate triples."""


class IsolatedVertexError(HyperavgError):
    """Some vertex has no neighbor pairs (zero degree)."""


class NonpositiveNormalizationError(HyperavgError):
    """A per-vertex normalization factor came out non-positive."""

    def __init__(self, vertex, value):
        self.vertex = vertex
        self.value = value
        super().__init__(
            f"normalization z_{vertex} = {value} <= 0; "
            "truncated power-series weights can go negative"
        )


class NonBinaryStateError(HyperavgError):
    """State entries are not all in {-1, +1}."""


class SingularLocalNormalizationError(HyperavgError):
    """A local closed-form denominator is non-positive."""


class BadRangeError(HyperavgError):
    """State entries outside the declared two-level set."""


class LambdaOutOfRangeError(HyperavgError):
    """Coupling parameter outside the admissible interval for a rescaling."""


class SingularDenominatorError(HyperavgError):
    """A closed-form denominator is zero (or non-positive where positivity is required)."""


class ZeroWeightedSumError(HyperavgError):
    """Degree-weighted sum of initial states is (numerically) zero; the shift is undefined."""


class NuNotLessThanOneError(HyperavgError):
    """Second eigenvalue is not strictly below 1; the graph does not mix."""


class WrongInitProbabilityError(HyperavgError):
    """An operation requires a balanced (p = 1/2) ensemble."""


class ConfigError(HyperavgError):
    """Malformed experiment configuration."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
