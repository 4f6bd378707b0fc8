"""Exception hierarchy shared by all horocanon modules."""


class HorocanonError(Exception):
    pass


# triangulation_core
class TriangulationError(HorocanonError):
    pass


class NotInvolution(TriangulationError):
    def __init__(self, message, face=None):
        super().__init__(message)
        self.face = face


class NotConnected(TriangulationError):
    pass


class NotOrientable(TriangulationError):
    pass


class ParseError(TriangulationError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class MoveError(TriangulationError):
    pass


class SelfAdjacentFace(MoveError):
    pass


class BadValence(MoveError):
    pass


class RepeatedTetrahedron(MoveError):
    pass


class TooSmall(MoveError):
    pass


# hyperbolic_geometry
class DegenerateModulus(HorocanonError, ValueError):
    pass


class NonPositiveInput(HorocanonError, ValueError):
    pass


class NotLightCone(HorocanonError, ValueError):
    pass


# gluing_solver
class NotCusped(HorocanonError):
    pass


class NoConvergence(HorocanonError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DegenerateSolution(HorocanonError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class AngleSumViolation(HorocanonError):
    def __init__(self, edge, angle_sum):
        super().__init__(f"edge {edge}: angle sum {angle_sum!r} != 2*pi")
        self.edge = edge
        self.angle_sum = angle_sum


# cusp_sections
class NotConsistent(HorocanonError):
    pass


class OpenCurve(HorocanonError):
    pass


class IncompleteStructure(HorocanonError):
    pass


# canonical
class FlatTetrahedron(HorocanonError):
    pass


class Stuck(HorocanonError):
    pass


class IterationCap(HorocanonError):
    pass


class Undecided(HorocanonError):
    pass


class DevelopingMismatch(HorocanonError):
    pass


class DegenerateFace(HorocanonError):
    pass


# minkowski_oracle_fixtures
class InconsistentVolumes(HorocanonError):
    pass


# enumeration
class CeilingExceeded(HorocanonError):
    """Enumeration refused: ``n`` is above the configured resource ceiling."""
