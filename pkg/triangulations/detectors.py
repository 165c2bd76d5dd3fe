"""
Small embedded 2-spheres that rule a triangulation out of a minimal census.

A pillow 2-sphere is two faces joined along all three of their edges. A
snapped 2-sphere is two tetrahedra, each folded onto itself around a
degree-one edge, whose opposite edges are identified.
"""
from typing import FrozenSet, List
import logging

from .perm import face_edges
from .triangulation import Triangulation

logger = logging.getLogger(__name__)


def _face_class_edges(tri: Triangulation) -> List[FrozenSet[int]]:
    skeleton = tri.skeleton
    result = []
    for members in skeleton.face_classes:
        t, f = members[0]
        result.append(frozenset(skeleton.tet_edge[t][e] for e in face_edges(f)))
    return result


def detect_pillow_2sphere(tri: Triangulation) -> bool:
    """True iff two distinct face classes bound the same three distinct edge classes."""
    seen = set()
    for edges in _face_class_edges(tri):
        if len(edges) != 3:
            continue
        if edges in seen:
            logger.debug(f"Pillow 2-sphere on edge classes {sorted(edges)}")
            return True
        seen.add(edges)
    return False


def detect_snapped_2sphere(tri: Triangulation) -> bool:
    """True iff two distinct tetrahedra fold around degree-one edges whose opposite edges coincide."""
    skeleton = tri.skeleton
    # Opposite edge class -> tetrahedra folded around a degree-one edge facing it.
    folded = {}
    for t in range(tri.size):
        for e in range(6):
            if skeleton.edge_degree(skeleton.tet_edge[t][e]) != 1:
                continue
            opposite = skeleton.tet_edge[t][5 - e]
            folded.setdefault(opposite, set()).add(t)
    for edge, tets in folded.items():
        if len(tets) >= 2:
            logger.debug(f"Snapped 2-sphere through edge class {edge}")
            return True
    return False
