"""Exception types raised across amdahl_lens.

Every error derives from :class:`AmdahlLensError` (itself a ``ValueError``),
so callers can catch the whole family in one place. The CLI maps
:class:`ModelInfeasibleError` subclasses to exit code 3.
"""


class AmdahlLensError(ValueError):
    pass


class ModelInfeasibleError(AmdahlLensError):
    """Input data cannot be explained by the model (as opposed to bad usage)."""


class DegenerateInstanceError(ModelInfeasibleError):
    """Alpha is undefined, e.g. for a single processing unit."""


class InconsistentMeasurementError(ModelInfeasibleError):
    """A measured speedup/efficiency lies outside what the model allows."""


class OverSubscribedContributionsError(ModelInfeasibleError):
    """The sequential contributions add up to one or more."""


class OutOfModelRangeError(ModelInfeasibleError):
    pass


class InvalidClusteringError(ModelInfeasibleError):
    pass


class InfeasibleDecompositionError(ModelInfeasibleError):
    """Base for the two ways a time pair can fall outside the feasibility band."""


class InvertedTimesError(InfeasibleDecompositionError):
    pass


class NegativeHousekeepingError(InfeasibleDecompositionError):
    pass


class SnapshotParseError(AmdahlLensError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class IntegrityError(ModelInfeasibleError):
    """A record violates 0 < r_max <= r_peak or 1 <= cores_used <= cores_total."""
