"""
Elementary moves and the simplification search built on them.

Every move removes a few tetrahedra, inserts a few new ones and reattaches
the surrounding faces. The shared machinery is :func:`_rebuild`: new
tetrahedra are appended after the surviving ones (which keep their relative
order), and faces that a move flattens together are followed as chains until
they reach a surviving face or the boundary.
"""
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple
import logging
import random

from .exceptions import IllegalMoveError, InvalidGluingError, ParseError
from .isosig import component_signatures, is_isomorphic
from .perm import EDGE_NUMBER, EDGE_VERTICES, Perm4
from .triangulation import Triangulation

logger = logging.getLogger(__name__)

DEFAULT_HEIGHT = 2
DEFAULT_MAX_STATES = 100000

Face = Tuple[int, int]


class MoveKind(str, Enum):
    PACHNER_32 = "3-2"
    PACHNER_23 = "2-3"
    FOUR_FOUR = "4-4"
    TWO_ZERO_VERTEX = "2-0v"
    TWO_ZERO_EDGE = "2-0e"
    TWO_ONE_EDGE = "2-1"


# Moves that lower the tetrahedron count, in tie-breaking order.
REDUCING_KINDS = (
    MoveKind.PACHNER_32,
    MoveKind.TWO_ZERO_VERTEX,
    MoveKind.TWO_ZERO_EDGE,
    MoveKind.TWO_ONE_EDGE,
)

SIZE_CHANGE = {
    MoveKind.PACHNER_32: -1,
    MoveKind.PACHNER_23: 1,
    MoveKind.FOUR_FOUR: 0,
    MoveKind.TWO_ZERO_VERTEX: -2,
    MoveKind.TWO_ZERO_EDGE: -2,
    MoveKind.TWO_ONE_EDGE: -1,
}

_HAS_OPTION = (MoveKind.FOUR_FOUR, MoveKind.TWO_ONE_EDGE)


@dataclass(frozen=True, order=True)
class MoveSite:
    """
    Where to apply a move.

    ``target`` is a face class for 2-3, a vertex class for 2-0 vertex moves
    and an edge class otherwise. ``option`` is the 4-4 axis or the 2-1 side.
    """

    kind: MoveKind
    target: int
    option: int = 0

    def __str__(self):
        if self.kind in _HAS_OPTION:
            return f"{self.kind.value}:{self.option} {self.target}"
        return f"{self.kind.value} {self.target}"

    @classmethod
    def parse(cls, text: str) -> 'MoveSite':
        try:
            head, target = text.split()
            kind, _, option = head.partition(':')
            return cls(MoveKind(kind), int(target), int(option) if option else 0)
        except ValueError:
            raise ParseError(f"cannot parse move {text!r}") from None


# Local rebuilding


def _rebuild(
    tri: Triangulation,
    removed: Iterable[int],
    new_count: int,
    internal: Sequence[Tuple[int, int, int, Perm4]] = (),
    outer: Optional[Dict[Face, Tuple[int, int, Perm4]]] = None,
    flatten: Sequence[Tuple[Face, Face, Perm4]] = (),
) -> Triangulation:
    """
    Replace the ``removed`` tetrahedra by ``new_count`` new ones.

    Args:
        internal: Gluings ``(i, face, j, perm)`` between new tetrahedra.
        outer: Maps a face of a removed tetrahedron to ``(i, face, sigma)``:
            new tetrahedron ``i`` takes over that face, and ``sigma`` carries
            old vertex labels to new ones.
        flatten: Triples ``(X, Y, rho)`` identifying face X of a removed
            tetrahedron with face Y, vertices matched by ``rho``.

    Raises:
        IllegalMoveError: If the reattached faces do not form a triangulation.
    """
    removed = set(removed)
    outer = outer or {}
    kept = [t for t in range(tri.size) if t not in removed]
    index = {t: i for i, t in enumerate(kept)}
    base = len(kept)
    identity = Perm4.identity()

    through: Dict[Face, Tuple[Face, Perm4]] = {}
    for x, y, rho in flatten:
        through[x] = (y, rho)
        through[y] = (x, rho.inverse())

    def location(face: Face) -> Optional[Tuple[int, int, Perm4]]:
        t, f = face
        if t not in removed:
            return index[t], f, identity
        if face in outer:
            i, g, sigma = outer[face]
            return base + i, g, sigma
        return None

    table: List[List] = [[None] * 4 for _ in range(base + new_count)]

    def attach(start: Face):
        here = location(start)
        entry = tri.gluing(*start)
        new_tet, new_face, sigma = here
        if entry is None:
            return
        u, phi = entry
        x = (u, phi(start[1]))
        for _ in range(len(through) + 2):
            there = location(x)
            if there is not None:
                v, g, sigma_x = there
                table[new_tet][new_face] = (v, sigma_x * phi * sigma.inverse())
                return
            if x not in through:
                raise IllegalMoveError(f"face {x} has no place in the new triangulation")
            y, rho = through[x]
            phi = rho * phi
            entry = tri.gluing(*y)
            if entry is None:
                return
            w, beta = entry
            phi = beta * phi
            x = (w, beta(y[1]))
        raise IllegalMoveError("flattened faces close up on themselves")

    for t in kept:
        for f in range(4):
            attach((t, f))
    for face in outer:
        attach(face)
    for i, f, j, perm in internal:
        table[base + i][f] = (base + j, perm)
        table[base + j][perm(f)] = (base + i, perm.inverse())
    try:
        return Triangulation(table)
    except InvalidGluingError as e:
        raise IllegalMoveError(f"move produced an invalid gluing: {e}") from None


def _ball_move(
    tri: Triangulation,
    names: Dict[int, Tuple[str, ...]],
    new_tets: Sequence[Tuple[str, ...]],
) -> Triangulation:
    """
    Retriangulate a ball given symbolic names for its vertices.

    ``names[t][v]`` names vertex ``v`` of removed tetrahedron ``t``; each new
    tetrahedron is a 4-tuple of names. New faces with equal name sets are
    glued together; every other new face takes over the removed face with
    the same name set.
    """
    faces: Dict[frozenset, List[Tuple[int, int]]] = {}
    for i, tet in enumerate(new_tets):
        for f in range(4):
            key = frozenset(tet[:f] + tet[f + 1:])
            faces.setdefault(key, []).append((i, f))

    def matching(src: Tuple[str, ...], src_face: int, dst: Tuple[str, ...], dst_face: int) -> Perm4:
        images = [dst_face if v == src_face else dst.index(name) for v, name in enumerate(src)]
        return Perm4(images)

    internal = []
    for key, sides in faces.items():
        if len(sides) == 2:
            (i, f), (j, g) = sides
            internal.append((i, f, j, matching(new_tets[i], f, new_tets[j], g)))
    outer = {}
    for t, labels in names.items():
        for f in range(4):
            key = frozenset(labels[:f] + labels[f + 1:])
            sides = faces.get(key)
            if sides is None:
                continue
            if len(sides) != 1:
                raise IllegalMoveError("ambiguous face in retriangulated ball")
            i, g = sides[0]
            outer[(t, f)] = (i, g, matching(labels, f, new_tets[i], g))
    return _rebuild(tri, names.keys(), len(new_tets), internal, outer)


# Edge rings


def _edge_ring(tri: Triangulation, edge: int) -> Optional[List[Tuple[int, Perm4]]]:
    """
    Walk around a non-boundary edge.

    Returns embeddings ``(t, p)`` where ``p(0)p(1)`` is the edge in ``t``,
    the next tetrahedron is reached across the face opposite ``p(2)`` and the
    previous one across the face opposite ``p(3)``. None if the walk does not
    close up consistently.
    """
    skeleton = tri.skeleton
    if skeleton.edge_boundary[edge] or edge in skeleton.self_reversed_edges:
        return None
    t, tet_edge, _ = skeleton.edge_classes[edge][0]
    a, b = EDGE_VERTICES[tet_edge]
    c, d = (v for v in range(4) if v not in (a, b))
    start = (t, Perm4(a, b, c, d))
    ring = [start]
    swap = Perm4(0, 1, 3, 2)
    t, p = start
    for _ in range(skeleton.edge_degree(edge)):
        entry = tri.gluing(t, p(2))
        if entry is None:
            return None
        u, g = entry
        t, p = u, g * p * swap
        ring.append((t, p))
    if ring[-1] != start:
        return None
    return ring[:-1]


# Legality checks


def _pachner_ring(tri: Triangulation, edge: int, degree: int) -> Optional[List[Tuple[int, Perm4]]]:
    skeleton = tri.skeleton
    if not 0 <= edge < skeleton.num_edges or skeleton.edge_degree(edge) != degree:
        return None
    ring = _edge_ring(tri, edge)
    if ring is None or len({t for t, _ in ring}) != degree:
        return None
    return ring


def _legal_32(tri, site):
    return _pachner_ring(tri, site.target, 3) is not None


def _legal_23(tri, site):
    skeleton = tri.skeleton
    if not 0 <= site.target < skeleton.num_faces:
        return False
    members = skeleton.face_classes[site.target]
    return len(members) == 2 and members[0][0] != members[1][0]


def _legal_44(tri, site):
    return site.option in (0, 1) and _pachner_ring(tri, site.target, 4) is not None


def _two_zero_vertex_data(tri: Triangulation, vertex: int):
    skeleton = tri.skeleton
    if not 0 <= vertex < skeleton.num_vertices:
        return None
    corners = skeleton.vertex_classes[vertex]
    if len(corners) != 2 or skeleton.vertex_boundary[vertex]:
        return None
    if not skeleton.vertex_links[vertex].is_sphere:
        return None
    (t0, v0), (t1, v1) = corners
    if t0 == t1:
        return None
    images = {}
    for f in range(4):
        if f == v0:
            continue
        entry = tri.gluing(t0, f)
        if entry is None or entry[0] != t1 or entry[1](v0) != v1:
            return None
        for w in range(4):
            if w not in (v0, f):
                image = entry[1](w)
                if images.setdefault(w, image) != image:
                    return None
    images[v0] = v1
    rho = Perm4([images[w] for w in range(4)])
    bottom0, bottom1 = tri.gluing(t0, v0), tri.gluing(t1, v1)
    if bottom0 is None and bottom1 is None:
        return None
    if bottom0 is not None and bottom0[0] == t1 and bottom0[1](v0) == v1:
        return None
    return t0, v0, t1, v1, rho


def _legal_20v(tri, site):
    return _two_zero_vertex_data(tri, site.target) is not None


def _two_zero_edge_data(tri: Triangulation, edge: int):
    skeleton = tri.skeleton
    if not 0 <= edge < skeleton.num_edges or skeleton.edge_degree(edge) != 2:
        return None
    ring = _edge_ring(tri, edge)
    if ring is None:
        return None
    (t0, p0), (t1, p1) = ring
    if t0 == t1:
        return None
    g = skeleton.tet_edge[t0][EDGE_NUMBER[(p0(2), p0(3))]]
    h = skeleton.tet_edge[t1][EDGE_NUMBER[(p1(2), p1(3))]]
    if g == h or (skeleton.edge_boundary[g] and skeleton.edge_boundary[h]):
        return None
    g1, g2 = (t0, p0(0)), (t0, p0(1))
    h1, h2 = (t1, p1(0)), (t1, p1(1))
    four = (g1, g2, h1, h2)

    def partner(face):
        entry = tri.gluing(*face)
        return None if entry is None else (entry[0], entry[1](face[1]))

    partners = {face: partner(face) for face in four}
    if partners[g1] == h1 or partners[g2] == h2:
        return None
    inside = [face for face in four if partners[face] in four]
    if len(inside) == 4:
        return None
    boundary = [face for face in four if partners[face] is None]
    if len(inside) == 2 and len(boundary) == 2:
        return None
    m = p1 * Perm4(0, 1, 3, 2) * p0.inverse()
    return (g1, h1, m), (g2, h2, m)


def _legal_20e(tri, site):
    return _two_zero_edge_data(tri, site.target) is not None


def _two_one_edge_data(tri: Triangulation, edge: int, side: int):
    skeleton = tri.skeleton
    if side not in (0, 1) or not 0 <= edge < skeleton.num_edges:
        return None
    if skeleton.edge_degree(edge) != 1 or skeleton.edge_boundary[edge]:
        return None
    if edge in skeleton.self_reversed_edges:
        return None
    delta, tet_edge, _ = skeleton.edge_classes[edge][0]
    a, b = EDGE_VERTICES[tet_edge]
    if side:
        a, b = b, a
    c, d = (v for v in range(4) if v not in (a, b))
    upper = tri.gluing(delta, b)
    if upper is None or upper[0] == delta:
        return None
    other, perm = upper
    e_vertex = perm(b)
    g = skeleton.tet_edge[other][EDGE_NUMBER[(perm(c), e_vertex)]]
    h = skeleton.tet_edge[other][EDGE_NUMBER[(perm(d), e_vertex)]]
    if g == h or (skeleton.edge_boundary[g] and skeleton.edge_boundary[h]):
        return None
    return delta, a, b, c, d, other, perm


def _legal_21(tri, site):
    return _two_one_edge_data(tri, site.target, site.option) is not None


_LEGAL = {
    MoveKind.PACHNER_32: _legal_32,
    MoveKind.PACHNER_23: _legal_23,
    MoveKind.FOUR_FOUR: _legal_44,
    MoveKind.TWO_ZERO_VERTEX: _legal_20v,
    MoveKind.TWO_ZERO_EDGE: _legal_20e,
    MoveKind.TWO_ONE_EDGE: _legal_21,
}


def legal(tri: Triangulation, site: MoveSite) -> bool:
    """True iff every hypothesis of the move's lemma holds at ``site``."""
    result = _LEGAL[site.kind](tri, site)
    if result and tri.size + SIZE_CHANGE[site.kind] < 1:
        return False
    return result


# Applying moves


def _ring_names(ring: List[Tuple[int, Perm4]]) -> Dict[int, Tuple[str, ...]]:
    """Name ring vertices: edge ends a, b and x0, x1, ... around the edge."""
    degree = len(ring)
    names = {}
    for i, (t, p) in enumerate(ring):
        labels = [''] * 4
        labels[p(0)] = 'a'
        labels[p(1)] = 'b'
        labels[p(3)] = f"x{i}"
        labels[p(2)] = f"x{(i + 1) % degree}"
        names[t] = tuple(labels)
    return names


def _apply_32(tri, site):
    names = _ring_names(_pachner_ring(tri, site.target, 3))
    return _ball_move(tri, names, [('x0', 'x1', 'x2', 'a'), ('x0', 'x1', 'x2', 'b')])


def _apply_23(tri, site):
    (t0, f0), (t1, f1) = tri.skeleton.face_classes[site.target]
    u, perm = tri.gluing(t0, f0)
    labels0 = [''] * 4
    labels1 = [''] * 4
    labels0[f0] = 'a'
    labels1[perm(f0)] = 'b'
    for k, v in enumerate(w for w in range(4) if w != f0):
        labels0[v] = f"x{k}"
        labels1[perm(v)] = f"x{k}"
    # The new edge ab is edge 0 of every new tetrahedron.
    new_tets = [('a', 'b', f"x{(k + 1) % 3}", f"x{(k + 2) % 3}") for k in range(3)]
    return _ball_move(tri, {t0: tuple(labels0), t1: tuple(labels1)}, new_tets)


def _apply_44(tri, site):
    names = _ring_names(_pachner_ring(tri, site.target, 4))
    k = site.option
    axis = (f"x{k}", f"x{k + 2}")
    cycle = ('a', f"x{k + 1}", 'b', f"x{(k + 3) % 4}")
    new_tets = [axis + (cycle[i], cycle[(i + 1) % 4]) for i in range(4)]
    return _ball_move(tri, names, new_tets)


def _apply_20v(tri, site):
    t0, v0, t1, v1, rho = _two_zero_vertex_data(tri, site.target)
    return _rebuild(tri, (t0, t1), 0, flatten=[((t0, v0), (t1, v1), rho)])


def _apply_20e(tri, site):
    first, second = _two_zero_edge_data(tri, site.target)
    t0, t1 = first[0][0], first[1][0]
    return _rebuild(tri, (t0, t1), 0, flatten=[first, second])


def _apply_21(tri, site):
    delta, a, b, c, d, other, perm = _two_one_edge_data(tri, site.target, site.option)
    e = perm(b)
    ca, cc, cd = perm(a), perm(c), perm(d)
    # New tetrahedron labels: 0 = B, 1 = E, 2 = C, 3 = D; edge BE has degree one.
    fold = Perm4(0, 1, 3, 2)
    outer = {
        (delta, a): (0, 1, Perm4.from_pairs((b, c, d), (0, 2, 3))),
        (other, ca): (0, 0, Perm4.from_pairs((cc, cd, e), (2, 3, 1))),
    }
    flatten = [((other, cd), (other, cc), Perm4.from_pairs((ca, cc, e), (ca, cd, e)))]
    return _rebuild(tri, (delta, other), 1, internal=[(0, 3, 0, fold)], outer=outer, flatten=flatten)


_APPLY = {
    MoveKind.PACHNER_32: _apply_32,
    MoveKind.PACHNER_23: _apply_23,
    MoveKind.FOUR_FOUR: _apply_44,
    MoveKind.TWO_ZERO_VERTEX: _apply_20v,
    MoveKind.TWO_ZERO_EDGE: _apply_20e,
    MoveKind.TWO_ONE_EDGE: _apply_21,
}


def apply(tri: Triangulation, site: MoveSite) -> Triangulation:
    """
    Perform a move.

    Raises:
        IllegalMoveError: If the move's hypotheses fail at ``site``.
    """
    if not legal(tri, site):
        raise IllegalMoveError(f"move {site} is not legal on a {tri.size}-tetrahedron triangulation")
    result = _APPLY[site.kind](tri, site)
    logger.debug(f"Applied {site}: {tri.size} -> {result.size} tetrahedra")
    return result


def candidate_sites(tri: Triangulation, kinds: Iterable[MoveKind] = tuple(MoveKind)) -> Iterator[MoveSite]:
    """Every site of the given kinds, legal or not, in (kind, target, option) order."""
    skeleton = tri.skeleton
    counts = {
        MoveKind.PACHNER_23: skeleton.num_faces,
        MoveKind.TWO_ZERO_VERTEX: skeleton.num_vertices,
    }
    for kind in kinds:
        options = (0, 1) if kind in _HAS_OPTION else (0,)
        for target in range(counts.get(kind, skeleton.num_edges)):
            for option in options:
                yield MoveSite(kind, target, option)


def legal_sites(tri: Triangulation, kinds: Iterable[MoveKind] = tuple(MoveKind)) -> List[MoveSite]:
    return [site for site in candidate_sites(tri, kinds) if legal(tri, site)]


# Simplification


def reduce_greedily(tri: Triangulation) -> Triangulation:
    """Apply reducing moves, lowest (kind, class) first, until none is legal."""
    current = tri
    while True:
        for site in candidate_sites(current, REDUCING_KINDS):
            if legal(current, site):
                current = _APPLY[site.kind](current, site)
                break
        else:
            return current


def _key(tri: Triangulation) -> Tuple[str, ...]:
    return component_signatures(tri)


def _neighbours(tri: Triangulation, ceiling: int, kinds: Sequence[MoveKind]) -> Iterator[Tuple[MoveSite, Triangulation]]:
    for site in candidate_sites(tri, kinds):
        if site.kind == MoveKind.PACHNER_23 and tri.size + 1 > ceiling:
            continue
        if legal(tri, site):
            yield site, _APPLY[site.kind](tri, site)


def simplify(tri: Triangulation, height: int = DEFAULT_HEIGHT, max_states: int = DEFAULT_MAX_STATES,
             seed: Optional[int] = None) -> Triangulation:
    """
    Try to reduce the number of tetrahedra.

    Reducing moves are applied greedily; then a breadth-first search over
    4-4 moves and up to ``height`` extra tetrahedra of 2-3 moves looks for a
    state from which greedy reduction goes lower. States are deduplicated by
    isomorphism signature. Each level is visited in signature order, or
    shuffled by a generator seeded with ``seed``. The search stops after
    ``max_states`` states.
    """
    rng = random.Random(seed) if seed is not None else None
    current = reduce_greedily(tri)
    while height > 0:
        improved = _search_for_reduction(current, height, max_states, rng)
        if improved is None:
            break
        logger.info(f"Simplified {current.size} -> {improved.size} tetrahedra")
        current = improved
    return current


def _search_for_reduction(start: Triangulation, height: int, max_states: int,
                          rng: Optional[random.Random] = None) -> Optional[Triangulation]:
    ceiling = start.size + height
    seen = {_key(start)}
    frontier = [start]
    kinds = (MoveKind.PACHNER_23, MoveKind.FOUR_FOUR)
    while frontier and len(seen) < max_states:
        discovered = {}
        for state in frontier:
            for _, neighbour in _neighbours(state, ceiling, kinds):
                key = _key(neighbour)
                if key in seen or key in discovered:
                    continue
                discovered[key] = neighbour
        order = sorted(discovered)
        if rng is not None:
            rng.shuffle(order)
        next_frontier = []
        for key in order:
            if len(seen) >= max_states:
                break
            seen.add(key)
            neighbour = discovered[key]
            reduced = reduce_greedily(neighbour)
            if reduced.size < start.size:
                return reduced
            next_frontier.append(neighbour)
        frontier = next_frontier
    if len(seen) >= max_states:
        logger.debug(f"Simplify search hit the {max_states} state cap at {start.size} tetrahedra")
    return None


def move_connect(
    a: Triangulation,
    b: Triangulation,
    height: int = DEFAULT_HEIGHT,
    max_states: int = DEFAULT_MAX_STATES,
) -> Optional[List[MoveSite]]:
    """
    Search for a sequence of 2-3, 3-2 and 4-4 moves turning ``a`` into a triangulation isomorphic to ``b``.

    Intermediate triangulations use at most ``height`` extra tetrahedra.
    Returns the move list (empty when ``a`` and ``b`` are already
    isomorphic), verified by replay, or None if no path was found within the
    budget. None is not a proof that the manifolds differ.
    """
    if a.size != b.size:
        return None
    target = _key(b)
    start_key = _key(a)
    if start_key == target:
        return []
    ceiling = a.size + height
    parents: Dict[Tuple[str, ...], Tuple[Tuple[str, ...], MoveSite]] = {}
    states = {start_key: a}
    queue = deque([start_key])
    kinds = (MoveKind.PACHNER_32, MoveKind.PACHNER_23, MoveKind.FOUR_FOUR)
    found = None
    while queue and found is None and len(states) < max_states:
        key = queue.popleft()
        for site, neighbour in _neighbours(states[key], ceiling, kinds):
            nkey = _key(neighbour)
            if nkey in states:
                continue
            states[nkey] = neighbour
            parents[nkey] = (key, site)
            if nkey == target:
                found = nkey
                break
            queue.append(nkey)
    if found is None:
        return None
    path = []
    key = found
    while key != start_key:
        key, site = parents[key][0], parents[key][1]
        path.append(site)
    path.reverse()
    replay(a, path, expect=b)
    return path


def replay(tri: Triangulation, path: Sequence[MoveSite], expect: Optional[Triangulation] = None) -> Triangulation:
    """
    Apply a recorded move path.

    Raises:
        IllegalMoveError: If a step is illegal or the end result is not
            isomorphic to ``expect``.
    """
    current = tri
    for site in path:
        current = apply(current, site)
    if expect is not None and not is_isomorphic(current, expect):
        raise IllegalMoveError("replayed move path does not reach the expected triangulation")
    return current
