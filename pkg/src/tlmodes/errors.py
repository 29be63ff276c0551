"""Exception hierarchy for the solver stack.

Parse-level problems derive from :class:`NetlistError` (a ``ValueError``) so the
CLI can map them to a usage exit code; numerical failures derive from
:class:`SolverError`.
"""


class NetlistError(ValueError):
    pass


class NetlistSyntaxError(NetlistError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class DuplicateIdError(NetlistError):
    pass


class UnknownNodeError(NetlistError):
    pass


class DisconnectedGraphError(NetlistError):
    pass


class MissingDeclarationError(NetlistError):
    """Ground, port_in or port_out missing or inconsistent."""


class SolverError(RuntimeError):
    pass


class DegenerateCapacitanceError(SolverError):
    pass


class NearPoleError(SolverError):
    def __init__(self, omega: float, pole: float):
        self.omega = omega
        self.pole = pole
        super().__init__(
            f"omega={omega:.9e} rad/s is within the guard band of inner resonance {pole:.9e} rad/s"
        )


class IllConditionedError(SolverError):
    pass


class NoRootsInRangeError(SolverError):
    pass


class ZeroNormError(SolverError):
    pass


class BranchCutContaminationError(SolverError):
    pass


class NonConvergenceError(SolverError):
    pass


class TargetUnreachableError(SolverError):
    pass


class IdentificationFailureError(SolverError):
    pass
