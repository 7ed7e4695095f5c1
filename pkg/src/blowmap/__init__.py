"""Combinatorial models of critically fixed sphere maps.

Blow-ups of admissible pairs (planar embedded graph + homeomorphism),
charge-graph reconstruction by iterated tree pullback, realization and
canonical-obstruction decisions, and the graph-rotation solution of the
twisting problem for twists about simple transversals.
"""

from .sphere import Sketch, build_complex, trace_faces, GraphView, enumerate_isomorphisms

__all__ = [
    "Sketch", "build_complex", "trace_faces", "GraphView",
    "enumerate_isomorphisms",
]
