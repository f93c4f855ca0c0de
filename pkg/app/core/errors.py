from typing import Literal, Optional


class PDBEPError(Exception):
    """Base class for every error raised by the solver library."""

    # CLI exit status when this error escapes a verb
    exit_code: int = 2


class InstanceParseError(PDBEPError, ValueError):
    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ParameterError(PDBEPError, ValueError):
    pass


class OracleLimitError(PDBEPError):
    def __init__(self, edges: int, limit: int):
        self.edges = edges
        self.limit = limit
        super().__init__(f"oracle refuses instance with {edges} edges (limit {limit})")


class TreeStructureError(PDBEPError):
    def __init__(self, reason: Literal["edge-count", "cycle", "disconnected"], message: str):
        self.reason = reason
        super().__init__(message)


class SolverMismatchError(PDBEPError):
    pass


class LPError(PDBEPError):
    exit_code = 1


class LPInfeasibleError(LPError):
    pass


class LPUnboundedError(LPError):
    pass


class RoundingInvariantError(PDBEPError):
    exit_code = 1
