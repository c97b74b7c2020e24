"""Exception types raised across the package."""


class RigidityError(Exception):
    """Base class for all errors raised by infrig."""


class SchemaError(RigidityError, ValueError):
    pass


class NonFiniteEntry(RigidityError, ValueError):
    pass


class ExactModeUnavailable(RigidityError, TypeError):
    pass


class DimensionMismatch(RigidityError, ValueError):
    pass


class CoincidentEdgeEndpoints(RigidityError, ValueError):
    def __init__(self, edge):
        self.edge = tuple(edge)
        super().__init__(f"edge {self.edge} joins two copies of the same point")


class OffSurfaceVertex(RigidityError, ValueError):
    def __init__(self, index, residual):
        self.index = index
        self.residual = residual
        super().__init__(f"vertex {index} is off the model surface (norm residual {residual:.3g})")


class NonPositiveSheet(RigidityError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"vertex {index} has x0 <= 0 (not on the upper sheet)")


class DegenerateSpan(RigidityError, ValueError):
    pass


class SingularMap(RigidityError, ValueError):
    pass


class VertexAtInfinity(RigidityError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"vertex {index} is sent to infinity")


class PointAtInfinity(RigidityError, ValueError):
    pass


class AffineMap(RigidityError, ValueError):
    """The map has no finite hyperplane at infinity."""


class BasePointMismatch(RigidityError, ValueError):
    pass


class NonDecomposable(RigidityError, ValueError):
    def __init__(self, total):
        self.total = total
        super().__init__("force system does not reduce to a single force or a couple")


class OutsideDisk(RigidityError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"vertex {index} lies outside the open unit disk")


class TangencyViolation(RigidityError, ValueError):
    def __init__(self, index, residual):
        self.index = index
        self.residual = residual
        super().__init__(f"velocity at vertex {index} is not tangent (residual {residual:.3g})")


class InvalidParameters(RigidityError, ValueError):
    pass


class NotOctahedral(RigidityError, ValueError):
    pass


class ImproperColoring(RigidityError, ValueError):
    pass
