"""Exception hierarchy."""


class VConvError(Exception):
    pass


class PointOutsideDomainError(VConvError, ValueError):
    def __init__(self, point, message="point lies outside the domain"):
        super().__init__(f"{message}: {tuple(float(c) for c in point)}")
        self.point = point


class DimensionMismatchError(VConvError, ValueError):
    pass


class MemberIndexError(VConvError, IndexError):
    pass


class EvaluationError(VConvError, RuntimeError):
    """Evaluator failure, carrying the offending point."""

    def __init__(self, point, cause=None, message="evaluation failed"):
        pt = tuple(float(c) for c in point)
        super().__init__(f"{message} at {pt}" + (f": {cause}" if cause else ""))
        self.point = pt
        self.cause = cause


class HorizonMismatchError(VConvError, ValueError):
    pass


class ConfigError(VConvError, ValueError):
    pass


class UnknownFamilyError(VConvError, KeyError):
    def __init__(self, name, available):
        self.name = name
        self.available = list(available)
        super().__init__(f"unknown corpus family {name!r}; available: {', '.join(self.available)}")

    def __str__(self):
        return self.args[0]
