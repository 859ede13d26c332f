"""Exception types raised across the package."""


class IsingZerosError(Exception):
    """Base class for all package errors."""


class MeshError(IsingZerosError):
    """Invalid mesh topology or geometry."""


class DegenerateTriangle(MeshError):
    pass


class ZeroAreaFace(MeshError):
    pass


class NonPlanarFace(MeshError):
    pass


class NotConcyclic(MeshError):
    pass


class NonManifoldEdge(MeshError):
    pass


class OrientationError(MeshError):
    pass


class OrientationAmbiguous(OrientationError):
    pass


class DegenerateInput(MeshError):
    """Point set cannot produce a 3d convex hull (coplanar or duplicate points)."""


class AngleOutOfRange(IsingZerosError):
    pass


class TooManyNodes(IsingZerosError):
    pass


class CycleSpaceTooLarge(IsingZerosError):
    pass


class SignSpaceTooLarge(IsingZerosError):
    pass


class PoleAtMinusOne(IsingZerosError, ZeroDivisionError):
    pass


class InvalidParameters(IsingZerosError, ValueError):
    pass


class ShapeMismatch(IsingZerosError, ValueError):
    pass
