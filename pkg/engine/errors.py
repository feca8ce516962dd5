"""Exception hierarchy shared by every engine package."""


class PolarError(Exception):
    """Base error; ``detail`` carries the human-readable reason."""

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class IndexRangeError(PolarError, ValueError):
    pass


class LengthMismatchError(PolarError, ValueError):
    pass


class GridMismatchError(PolarError, ValueError):
    pass


class OracleLimitError(PolarError, ValueError):
    pass


class NoStoppingSetError(PolarError, ValueError):
    pass


class InfeasibleDesignError(PolarError, ValueError):
    pass


class SwapSafetyError(PolarError, ValueError):
    pass


class PartitionError(PolarError, ValueError):
    pass


class ConfigError(PolarError, ValueError):
    pass


class SimulationIOError(PolarError, OSError):
    """I/O failure during a sweep; the records finished so far are kept."""

    def __init__(self, detail: str, partial_records=None):
        super().__init__(detail)
        self.partial_records = list(partial_records or [])
