"""Exception hierarchy shared by all deltaideal modules."""


class DeltaIdealError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(DeltaIdealError, ValueError):
    pass


class DimensionMismatch(DeltaIdealError, ValueError):
    pass


class SymmetryViolation(DeltaIdealError, ValueError):
    def __init__(self, family, deviation):
        self.family = family
        self.deviation = float(deviation)
        super().__init__(f"{family} symmetry violated: max deviation {deviation:.3e}")


class DegeneratePlane(DeltaIdealError, ValueError):
    pass


class RankError(DeltaIdealError, ValueError):
    pass


class UnknownSpectrum(DeltaIdealError, LookupError):
    pass


class DegenerateFace(DeltaIdealError, ValueError):
    pass


class NonManifoldEdge(DeltaIdealError, ValueError):
    pass


class NotCentrallySymmetric(DeltaIdealError, ValueError):
    def __init__(self, vertex):
        self.vertex = int(vertex)
        super().__init__(f"vertex {vertex} has no antipodal partner")


class SolverFailure(DeltaIdealError, RuntimeError):
    def __init__(self, iterations, message="eigensolver did not converge"):
        self.iterations = int(iterations)
        super().__init__(f"{message} after {iterations} iterations")


class MismatchedPair(DeltaIdealError, ValueError):
    pass


class PullbackViolation(DeltaIdealError, ValueError):
    pass


class NotIrreducible(DeltaIdealError, ValueError):
    pass


class RankDeficiency(DeltaIdealError, ValueError):
    pass


class DomainError(DeltaIdealError, ValueError):
    pass


class InconsistentSpectrum(DeltaIdealError, ValueError):
    """lambda1 below n * delta0 for a space declared irreducible."""
