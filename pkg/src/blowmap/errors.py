"""Exception types shared across the package."""


class BlowmapError(Exception):
    """Base class for all domain errors."""


class NonSphere(BlowmapError):
    """Rotation data does not describe a 2-sphere (Euler characteristic != 2)."""


class MalformedRotation(BlowmapError):
    """Dart appears twice, pairing is not a fixed-point-free involution, etc."""


class InvalidTarget(BlowmapError):
    """Refinement instruction references a missing face or edge."""


class CarrierMismatch(BlowmapError):
    """Objects expected on a common carrier sketch live on different ones."""


class IsolatedVertex(BlowmapError):
    """Graph operation requires a graph without isolated vertices."""


class VertexSetMismatch(BlowmapError):
    """Graph comparison requires a common vertex set."""


class NonzeroIntersection(BlowmapError):
    """An edge that must be disjoint from the reference graph is not."""


class NotAdmissible(BlowmapError):
    """Pair fails the admissibility check."""


class VertexCoverViolation(BlowmapError):
    """Preimage input graph must contain every critical point as a vertex."""


class NotEssential(BlowmapError):
    """Curve operation requires an essential curve."""


class NotInvariant(BlowmapError):
    """Multicurve is not invariant under the map."""


class NotCompletelyInvariant(BlowmapError):
    """Multicurve is not completely invariant under the map."""


class NotSimpleTransversal(BlowmapError):
    """Curve is essential but not a simple transversal for the graph."""


class InvalidSpec(BlowmapError):
    """Rotation-surgery specification is malformed."""


class TooFewCritical(BlowmapError):
    """Boundary-lift pairs are ambiguous with two or fewer critical points."""


class NotRealized(BlowmapError):
    """Shortcut valid only for realized models was used on an obstructed one."""


class NonTermination(BlowmapError):
    """Iteration guard tripped; indicates an implementation bug."""


class ParseError(BlowmapError):
    """Pair-file syntax error, with location."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


class ValidationError(BlowmapError):
    """Pair-file parsed but the described pair is invalid."""
