"""Exception types shared across the package."""


class EntrobellError(ValueError):
    """Base class for all argument/contract violations raised here."""


class NotHermitian(EntrobellError):
    """Matrix deviates from its conjugate transpose beyond tolerance."""


class BadSubset(EntrobellError):
    """Qubit subset for a partial trace is empty, full, or out of range."""


class UnsupportedSize(EntrobellError):
    """Requested qubit count / dimension outside the supported range."""


class BadRatio(EntrobellError):
    """Participation ratio outside the admissible interval."""


class BadWeight(EntrobellError):
    """Mixing or simplex weights are negative or do not sum to one."""


class OutsideTetrahedron(EntrobellError):
    """Simplex-coordinate point does not correspond to a valid spectrum."""


class BadSettings(EntrobellError):
    """Measurement settings have the wrong arity or non-unit vectors."""


class NotDensityMatrix(EntrobellError):
    """Matrix fails the unit-trace / positivity requirements."""


class UnsupportedMeasure(EntrobellError):
    """Survey measure not defined for the requested qubit count."""


class MissingMeasure(EntrobellError):
    """Coincidence statistics requested for a measure absent from records."""


class StateFormatError(EntrobellError):
    """State file exists but its content is malformed."""


class OptimizerFailure(RuntimeError):
    """Independent optimizer runs disagree beyond the acceptance gate."""


class SamplerStalled(RuntimeError):
    """Rejection sampler exceeded its attempt budget."""
