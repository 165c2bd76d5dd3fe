"""
Normal surfaces in standard coordinates.

Tetrahedron ``t`` owns coordinates ``7t .. 7t+6``: triangles cutting off
vertices 0..3, then the quadrilaterals Q0 = {01|23}, Q1 = {02|13} and
Q2 = {03|12}. Vertex surfaces are the admissible extreme rays of the cone
cut out by the matching equations, found with the double description method
in exact integer arithmetic.
"""
from collections import deque
from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np

from .exceptions import InvalidTriangulationError, UnsupportedSizeError
from .perm import EDGE_NUMBER, EDGE_VERTICES
from .triangulation import Triangulation

logger = logging.getLogger(__name__)

DEFAULT_MAX_TETRAHEDRA = 8

# Quadrilateral type separating each unordered vertex pair from the other two.
QUAD_PAIRS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
QUAD_OF_PAIR = {}
for _q, _sides in enumerate(QUAD_PAIRS):
    for _a, _b in _sides:
        QUAD_OF_PAIR[(_a, _b)] = _q
        QUAD_OF_PAIR[(_b, _a)] = _q


def quad_coordinate(tet: int, a: int, b: int) -> int:
    """Coordinate of the quadrilateral type that keeps vertices ``a`` and ``b`` on one side."""
    return 7 * tet + 4 + QUAD_OF_PAIR[(a, b)]


NormalVector = Tuple[int, ...]


class SurfaceKind(str, Enum):
    SPHERE = "sphere"
    PROJECTIVE_PLANE = "projective-plane"
    OTHER = "other"


class P2Verdict(str, Enum):
    IRREDUCIBLE = "irreducible"
    NOT_IRREDUCIBLE = "not-irreducible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SurfaceClassification:
    euler_characteristic: int
    connected: bool
    orientable: bool
    kind: SurfaceKind
    vertex_linking: bool
    components: int = 1


def _require_closed(tri: Triangulation, max_tetrahedra: int) -> None:
    if tri.size > max_tetrahedra:
        raise UnsupportedSizeError(f"normal surfaces limited to {max_tetrahedra} tetrahedra, got {tri.size}")
    if not tri.validity().closed_manifold:
        raise InvalidTriangulationError("normal surface enumeration needs a closed 3-manifold triangulation")


def matching_equations(tri: Triangulation) -> np.ndarray:
    """
    One row per (internal face class, corner of that face).

    Row for face ``f`` of ``t`` glued to ``u`` by ``p`` and corner ``v``:
    the arcs cutting corner ``v`` must match the arcs cutting corner
    ``p(v)`` on the other side. Rows that cancel to zero are dropped.
    """
    rows = []
    for members in tri.skeleton.face_classes:
        if len(members) != 2:
            continue
        t, f = members[0]
        u, perm = tri.gluing(t, f)
        g = perm(f)
        for v in range(4):
            if v == f:
                continue
            row = np.zeros(7 * tri.size, dtype=np.int64)
            row[7 * t + v] += 1
            row[quad_coordinate(t, v, f)] += 1
            row[7 * u + perm(v)] -= 1
            row[quad_coordinate(u, perm(v), g)] -= 1
            if row.any():
                rows.append(row)
    if not rows:
        return np.zeros((0, 7 * tri.size), dtype=np.int64)
    return np.vstack(rows)


def vertex_link_vector(tri: Triangulation, vertex: int) -> NormalVector:
    coords = [0] * (7 * tri.size)
    for t, v in tri.skeleton.vertex_classes[vertex]:
        coords[7 * t + v] += 1
    return tuple(coords)


def is_admissible(vector: Sequence[int]) -> bool:
    if any(x < 0 for x in vector):
        return False
    return all(
        sum(1 for q in range(3) if vector[7 * t + 4 + q]) <= 1
        for t in range(len(vector) // 7)
    )


def _primitive(vector: Sequence[int]) -> NormalVector:
    g = 0
    for x in vector:
        g = gcd(g, x)
    if g > 1:
        return tuple(x // g for x in vector)
    return tuple(vector)


def _support_mask(vector: Sequence[int]) -> int:
    mask = 0
    for i, x in enumerate(vector):
        if x:
            mask |= 1 << i
    return mask


def _quad_masks(n: int) -> List[int]:
    return [sum(1 << (7 * t + 4 + q) for q in range(3)) for t in range(n)]


def _compatible(mask: int, quad_masks: Sequence[int]) -> bool:
    for quads in quad_masks:
        hit = mask & quads
        if hit & (hit - 1):
            return False
    return True


def _double_description(
    dimension: int,
    equations: Sequence[Sequence[int]],
    quad_masks: Optional[Sequence[int]],
) -> List[NormalVector]:
    """
    Extreme rays of {x >= 0, equations . x = 0}.

    With ``quad_masks`` given, pairs whose combination would use two
    quadrilateral types in one tetrahedron are never combined.
    """
    full = (1 << dimension) - 1
    rays: List[Tuple[NormalVector, int]] = [
        (tuple(1 if i == j else 0 for i in range(dimension)), 1 << j) for j in range(dimension)
    ]
    for number, equation in enumerate(equations):
        terms = [(i, int(c)) for i, c in enumerate(equation) if c]
        positive, negative, zero = [], [], []
        for ray, support in rays:
            value = sum(c * ray[i] for i, c in terms)
            if value > 0:
                positive.append((ray, support, value))
            elif value < 0:
                negative.append((ray, support, value))
            else:
                zero.append((ray, support))
        produced: List[Tuple[NormalVector, int]] = []
        for p_ray, p_support, p_value in positive:
            for n_ray, n_support, n_value in negative:
                joint = p_support | n_support
                if quad_masks is not None and not _compatible(joint, quad_masks):
                    continue
                # Adjacent iff no third ray vanishes wherever both of them vanish.
                outside = full & ~joint
                adjacent = True
                for other, other_support in rays:
                    if other_support & outside:
                        continue
                    if other == p_ray or other == n_ray:
                        continue
                    adjacent = False
                    break
                if not adjacent:
                    continue
                combined = tuple(-n_value * a + p_value * b for a, b in zip(p_ray, n_ray))
                combined = _primitive(combined)
                produced.append((combined, _support_mask(combined)))
        unique: Dict[NormalVector, int] = {}
        for ray, support in zero + produced:
            unique.setdefault(ray, support)
        rays = sorted(unique.items())
        logger.debug(f"Double description step {number + 1}/{len(equations)}: {len(rays)} rays")
    return [ray for ray, _ in rays]


def vertex_normal_surfaces(
    tri: Triangulation,
    max_tetrahedra: int = DEFAULT_MAX_TETRAHEDRA,
    filter_during: bool = True,
) -> List[NormalVector]:
    """
    Admissible vertex normal surfaces in standard coordinates, each primitive.

    Args:
        filter_during: Skip quadrilateral-incompatible combinations while
            enumerating. The final admissible set is the same either way.

    Raises:
        UnsupportedSizeError: If the triangulation is larger than ``max_tetrahedra``.
        InvalidTriangulationError: If it is not a closed 3-manifold triangulation.
    """
    _require_closed(tri, max_tetrahedra)
    equations = matching_equations(tri).tolist()
    quad_masks = _quad_masks(tri.size) if filter_during else None
    rays = _double_description(7 * tri.size, equations, quad_masks)
    surfaces = sorted(ray for ray in rays if is_admissible(ray))
    logger.debug(f"{len(surfaces)} vertex normal surfaces on {tri.size} tetrahedra")
    return surfaces


# Classification


def euler_characteristic(tri: Triangulation, vector: Sequence[int]) -> int:
    """Euler characteristic as the linear function vertices - arcs + discs."""
    skeleton = tri.skeleton
    vertices = 0
    for members in skeleton.edge_classes:
        t, e, _ = members[0]
        vertices += _edge_weight(vector, t, e)
    arcs = 0
    for members in skeleton.face_classes:
        t, f = members[0]
        for v in range(4):
            if v != f:
                arcs += vector[7 * t + v] + vector[quad_coordinate(t, v, f)]
    discs = sum(vector)
    return vertices - arcs + discs


def _edge_weight(vector: Sequence[int], t: int, e: int) -> int:
    a, b = EDGE_VERTICES[e]
    crossing = sum(vector[7 * t + 4 + q] for q in range(3) if q != QUAD_OF_PAIR[(a, b)])
    return vector[7 * t + a] + vector[7 * t + b] + crossing


def classify_surface(tri: Triangulation, vector: Sequence[int]) -> SurfaceClassification:
    """
    Build the surface from its normal discs and read off its topology.

    Discs are stacked inside each tetrahedron: triangle copy 0 lies nearest
    its vertex, and quadrilateral copy 0 nearest the edge joining the first
    vertex pair of its type. Arcs in a face are numbered outward from the
    corner they cut, so glued faces match arcs with equal numbers.

    Raises:
        ValueError: If the vector is not admissible.
    """
    if not is_admissible(vector) or len(vector) != 7 * tri.size:
        raise ValueError("classify_surface needs an admissible vector")
    skeleton = tri.skeleton

    # Discs: (tet, coordinate, copy).
    discs = [
        (t, k, copy)
        for t in range(tri.size)
        for k in range(7)
        for copy in range(vector[7 * t + k])
    ]

    def arc_key(t: int, f: int, corner: int, position: int) -> Tuple[int, int, int]:
        face_class = skeleton.tet_face[t][f]
        t0, f0 = skeleton.face_classes[face_class][0]
        if (t, f) != (t0, f0):
            u, perm = tri.gluing(t, f)
            corner = perm(corner)
        return face_class, corner, position

    def arc_direction(t: int, f: int, corner: int, x: int, y: int) -> int:
        """+1 if running from edge (corner, x) to edge (corner, y) matches the arc's reference direction."""
        face_class = skeleton.tet_face[t][f]
        t0, f0 = skeleton.face_classes[face_class][0]
        if (t, f) != (t0, f0):
            _, perm = tri.gluing(t, f)
            x, y = perm(x), perm(y)
        return 1 if x < y else -1

    # Each disc's boundary as a cycle of tetrahedron edges around it.
    incidences: Dict[Tuple[int, int, int], List[Tuple[int, int]]] = {}
    points = set()
    for d, (t, k, copy) in enumerate(discs):
        if k < 4:
            others = [v for v in range(4) if v != k]
            cycle = [(k, others[0]), (k, others[1]), (k, others[2])]
        else:
            (a, b), (c, dd) = QUAD_PAIRS[k - 4]
            cycle = [(a, c), (a, dd), (b, dd), (b, c)]
        for i, (p, q) in enumerate(cycle):
            r, s = cycle[(i + 1) % len(cycle)]
            corner = ({p, q} & {r, s}).pop()
            x = p if q == corner else q
            y = r if s == corner else s
            f = 6 - corner - x - y
            if k < 4:
                position = copy
            elif corner in QUAD_PAIRS[k - 4][0]:
                position = vector[7 * t + corner] + copy
            else:
                position = vector[7 * t + corner] + vector[7 * t + k] - 1 - copy
            key = arc_key(t, f, corner, position)
            incidences.setdefault(key, []).append((d, arc_direction(t, f, corner, x, y)))
            points.add(_point_key(tri, vector, t, p, q, k, copy))

    # Orientation and components by breadth-first search over shared arcs.
    neighbours: Dict[int, List[Tuple[int, int]]] = {d: [] for d in range(len(discs))}
    orientable = True
    for key, sides in incidences.items():
        if len(sides) != 2:
            raise ValueError(f"arc {key} is not shared by exactly two discs")
        (d1, s1), (d2, s2) = sides
        # Consistent orientations traverse a shared arc in opposite directions.
        relation = -s1 * s2
        neighbours[d1].append((d2, relation))
        neighbours[d2].append((d1, relation))
    sign = [0] * len(discs)
    components = 0
    for start in range(len(discs)):
        if sign[start]:
            continue
        components += 1
        sign[start] = 1
        queue = deque([start])
        while queue:
            d = queue.popleft()
            for other, relation in neighbours[d]:
                want = sign[d] * relation
                if sign[other] == 0:
                    sign[other] = want
                    queue.append(other)
                elif sign[other] != want:
                    orientable = False

    euler = len(points) - len(incidences) + len(discs)
    connected = components == 1
    if connected and euler == 2:
        kind = SurfaceKind.SPHERE
    elif connected and euler == 1:
        kind = SurfaceKind.PROJECTIVE_PLANE
    else:
        kind = SurfaceKind.OTHER
    linking = any(tuple(vector) == vertex_link_vector(tri, v) for v in range(skeleton.num_vertices))
    return SurfaceClassification(
        euler_characteristic=euler,
        connected=connected,
        orientable=orientable,
        kind=kind,
        vertex_linking=linking,
        components=components,
    )


def _point_key(tri: Triangulation, vector: Sequence[int], t: int, p: int, q: int, k: int, copy: int) -> Tuple[int, int]:
    """Identify the point where a disc meets tetrahedron edge (p, q), as (edge class, offset)."""
    skeleton = tri.skeleton
    e = EDGE_NUMBER[(p, q)]
    low, high = EDGE_VERTICES[e]
    if k < 4:
        # Triangle at vertex k; its copy-th point from k.
        offset = copy if k == low else _edge_weight(vector, t, e) - 1 - copy
    else:
        # Quadrilaterals sit after the triangles at the pair-side vertex.
        (a, b), _ = QUAD_PAIRS[k - 4]
        near = low if low in (a, b) else high
        from_near = vector[7 * t + near] + copy
        offset = from_near if near == low else _edge_weight(vector, t, e) - 1 - from_near
    if skeleton.edge_tet_orientation[t][e]:
        offset = _edge_weight(vector, t, e) - 1 - offset
    return skeleton.tet_edge[t][e], offset


def p2_verdict(tri: Triangulation, max_tetrahedra: int = DEFAULT_MAX_TETRAHEDRA) -> P2Verdict:
    """
    Decide P²-irreducibility from the vertex normal surfaces where possible.

    A connected vertex surface of Euler characteristic 1 in a non-orientable
    triangulation proves the manifold is not P²-irreducible. If every vertex
    surface of positive Euler characteristic is a vertex link, the manifold
    is P²-irreducible. Anything else is left undecided.
    """
    orientable = tri.is_orientable()
    positive = []
    for vector in vertex_normal_surfaces(tri, max_tetrahedra):
        info = classify_surface(tri, vector)
        if info.kind == SurfaceKind.PROJECTIVE_PLANE and not orientable:
            logger.info(f"Projective plane among vertex surfaces of a {tri.size}-tetrahedron triangulation")
            return P2Verdict.NOT_IRREDUCIBLE
        if info.euler_characteristic > 0 and not info.vertex_linking:
            positive.append(info)
    if not positive:
        return P2Verdict.IRREDUCIBLE
    return P2Verdict.UNKNOWN
