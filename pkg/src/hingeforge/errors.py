"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class HingeForgeError(Exception):
    exit_code = 3
    stage = "internal"

    def __init__(self, message, stage=None, **details):
        super().__init__(message)
        if stage is not None:
            self.stage = stage
        self.details = details


class FormatError(HingeForgeError):
    """Malformed input text or references (exit code 2)."""

    exit_code = 2
    stage = "format"


class MeshError(FormatError):
    """Mesh parsed but violates a Polyhedron invariant.

    ``code`` is one of: non-manifold, open-boundary, non-planar-face,
    non-convex-face, degenerate-face, euler, unused-vertex.
    """

    def __init__(self, message, code, **details):
        super().__init__(message, stage="load", **details)
        self.code = code


class DomainError(HingeForgeError):
    """Valid input that fails a domain check (exit code 1)."""

    exit_code = 1
    stage = "domain"


class DegenerateSegmentError(DomainError):
    stage = "geom"


class NonSimplePolygonError(DomainError):
    stage = "geom"


class NonCrossingError(DomainError):
    stage = "noncross"


class NotANetError(DomainError):
    stage = "unfold"


class CycleError(DomainError):
    stage = "cycle"


class GluingError(DomainError):
    stage = "glue"


class InvariantError(HingeForgeError):
    """An internal invariant failed; indicates a bug or a clearance failure."""

    exit_code = 3
    stage = "invariant"
