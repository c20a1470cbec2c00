"""Exception hierarchy shared by all modules."""


class DeBrangesError(Exception):
    """Base class for every error raised by this package."""


class RootFindingError(DeBrangesError):
    pass


class NotDivisibleError(DeBrangesError):
    def __init__(self, residual: float, message: str = "not divisible"):
        super().__init__(f"{message} (residual norm {residual:.3e})")
        self.residual = residual


class DiskError(DeBrangesError):
    """A denominator vanishes in the closed unit disk."""


class BallError(DeBrangesError):
    """The function is not in the closed unit ball of H-infinity."""


class InnerFunctionError(DeBrangesError):
    """The boundary defect vanishes identically, so there is no mate."""


class TrigPolynomialError(DeBrangesError):
    pass


class KernelUndefinedError(DeBrangesError):
    pass


class SingularLogError(DeBrangesError):
    pass


class LimitError(DeBrangesError):
    """A radial limit did not stabilize under extrapolation."""


class NotAnalyticError(DeBrangesError):
    pass


class MembershipError(DeBrangesError):
    def __init__(self, verdict: str, message: str):
        super().__init__(message)
        self.verdict = verdict
