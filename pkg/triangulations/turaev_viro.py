"""
Turaev-Viro state sums.

Edges are coloured by 0..r-2 (twice the spin). A colouring is admissible
when the three colours around every face have even sum, satisfy the
triangle inequalities and sum to at most 2(r-2). The value is

    sum over admissible colourings of
        vertex^V * prod(edge weights) * prod(face weights) * prod(tet weights)

with quantum integers [k] = sin(k pi / r) / sin(pi / r) and

    vertex              2 sin^2(pi / r) / r
    edge (colour c)     (-1)^c [c + 1]
    face (a, b, c)      (-1)^((a+b+c)/2) [(a+b-c)/2]! [(b+c-a)/2]! [(c+a-b)/2]! / [(a+b+c)/2 + 1]!
    tetrahedron         sum_z (-1)^z [z + 1]! / (prod_i [z - A_i]! prod_j [B_j - z]!)

where A_i are the half colour sums of the four faces and B_j the half colour
sums of the three pairs of opposite edges. Colourings are visited in
lexicographic order of edge class, so the floating point sum is
reproducible.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple
import logging
import math

import numpy as np

from .exceptions import InvalidTriangulationError, UnsupportedSizeError
from .triangulation import Triangulation

logger = logging.getLogger(__name__)

MIN_LEVEL = 3
MAX_LEVEL = 8
DEFAULT_TOLERANCE = 1e-9

# Tetrahedron edges bounding each face, indexed by the opposite vertex.
_FACE_EDGES = ((3, 4, 5), (1, 2, 5), (0, 2, 4), (0, 1, 3))
# Pairs of opposite edges.
_OPPOSITE_PAIRS = ((0, 5), (1, 4), (2, 3))


@dataclass(frozen=True)
class TuraevViroValue:
    r: int
    value: float
    tolerance: float = DEFAULT_TOLERANCE

    def matches(self, other: 'TuraevViroValue') -> bool:
        return self.r == other.r and abs(self.value - other.value) < max(self.tolerance, other.tolerance)

    def __str__(self):
        return f"{self.value:.12f}"


class _Weights:
    """Quantum factorial tables and cached local weights for one level r."""

    def __init__(self, r: int):
        self.r = r
        k = np.arange(0, r + 1, dtype=float)
        brackets = np.sin(k * math.pi / r) / math.sin(math.pi / r)
        factorials = np.ones(r + 1)
        factorials[1:] = np.cumprod(brackets[1:])
        self.bracket: List[float] = brackets.tolist()
        self.fact: List[float] = factorials.tolist()
        self.vertex = 2.0 * math.sin(math.pi / r) ** 2 / r
        self.edge = [(-1.0 if c % 2 else 1.0) * self.bracket[c + 1] for c in range(r - 1)]
        self.face = lru_cache(maxsize=None)(self._face)
        self.tet = lru_cache(maxsize=None)(self._tet)

    def admissible(self, a: int, b: int, c: int) -> bool:
        return (
            (a + b + c) % 2 == 0
            and a <= b + c and b <= a + c and c <= a + b
            and a + b + c <= 2 * (self.r - 2)
        )

    def _face(self, a: int, b: int, c: int) -> float:
        s = (a + b + c) // 2
        value = self.fact[s - c] * self.fact[s - a] * self.fact[s - b] / self.fact[s + 1]
        return -value if s % 2 else value

    def _tet(self, colours: Tuple[int, ...]) -> float:
        lower = [sum(colours[e] for e in edges) // 2 for edges in _FACE_EDGES]
        upper = [
            (colours[p] + colours[q] + colours[s] + colours[t]) // 2
            for (p, q), (s, t) in ((_OPPOSITE_PAIRS[0], _OPPOSITE_PAIRS[1]),
                                   (_OPPOSITE_PAIRS[0], _OPPOSITE_PAIRS[2]),
                                   (_OPPOSITE_PAIRS[1], _OPPOSITE_PAIRS[2]))
        ]
        fact = self.fact
        total = 0.0
        # Terms with z + 1 >= r vanish because [r] = 0.
        for z in range(max(lower), min(min(upper), self.r - 2) + 1):
            denominator = 1.0
            for a in lower:
                denominator *= fact[z - a]
            for b in upper:
                denominator *= fact[b - z]
            term = fact[z + 1] / denominator
            total += -term if z % 2 else term
        return total


def turaev_viro(tri: Triangulation, r: int, tolerance: float = DEFAULT_TOLERANCE) -> TuraevViroValue:
    """
    Turaev-Viro invariant at level ``r`` with q = exp(i pi / r).

    Raises:
        UnsupportedSizeError: If r lies outside 3..8.
        InvalidTriangulationError: If the triangulation is not a closed
            3-manifold triangulation.
    """
    if not MIN_LEVEL <= r <= MAX_LEVEL:
        raise UnsupportedSizeError(f"Turaev-Viro level r={r} outside {MIN_LEVEL}..{MAX_LEVEL}")
    if not tri.validity().closed_manifold:
        raise InvalidTriangulationError("Turaev-Viro needs a closed 3-manifold triangulation")

    skeleton = tri.skeleton
    weights = _Weights(r)
    num_edges = skeleton.num_edges

    # Faces and tetrahedra become fully coloured once their highest edge is set.
    faces_at: Dict[int, List[Tuple[int, int, int]]] = {e: [] for e in range(num_edges)}
    for members in skeleton.face_classes:
        t, face = members[0]
        edges = tuple(skeleton.tet_edge[t][e] for e in _FACE_EDGES[face])
        faces_at[max(edges)].append(edges)
    tets_at: Dict[int, List[Tuple[int, ...]]] = {e: [] for e in range(num_edges)}
    for t in range(tri.size):
        edges = skeleton.tet_edge[t]
        tets_at[max(edges)].append(edges)

    colours = [0] * num_edges
    top = r - 2
    total = 0.0

    def descend(e: int, weight: float):
        nonlocal total
        if e == num_edges:
            total += weight
            return
        for c in range(top + 1):
            colours[e] = c
            w = weight * weights.edge[c]
            ok = True
            for a, b, d in faces_at[e]:
                ca, cb, cd = colours[a], colours[b], colours[d]
                if not weights.admissible(ca, cb, cd):
                    ok = False
                    break
                w *= weights.face(ca, cb, cd)
            if not ok:
                continue
            for edges in tets_at[e]:
                w *= weights.tet(tuple(colours[x] for x in edges))
            if w != 0.0:
                descend(e + 1, w)

    descend(0, weights.vertex ** skeleton.num_vertices)
    logger.debug(f"TV_{r} = {total:.12f} over {num_edges} edges")
    return TuraevViroValue(r=r, value=total, tolerance=tolerance)


def turaev_viro_vector(tri: Triangulation, levels: Sequence[int], tolerance: float = DEFAULT_TOLERANCE) -> Tuple[TuraevViroValue, ...]:
    return tuple(turaev_viro(tri, r, tolerance) for r in levels)
