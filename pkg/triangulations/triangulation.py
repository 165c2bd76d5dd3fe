"""
The triangulation data model.

A triangulation is a list of tetrahedra whose faces are glued in pairs by
vertex permutations. Face ``f`` of a tetrahedron is the face opposite vertex
``f``; a gluing ``(t, f) -> (u, p)`` identifies face ``f`` of tetrahedron
``t`` with face ``p(f)`` of tetrahedron ``u``, sending vertex ``v`` of ``t``
to vertex ``p(v)`` of ``u``.

Triangulations are immutable once built. The skeleton (vertex, edge and face
classes together with vertex links) is derived on first use and cached.
"""
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from .exceptions import InvalidGluingError, ParseError
from .perm import EDGE_NUMBER, EDGE_VERTICES, Perm4, face_edges

logger = logging.getLogger(__name__)

Gluing = Optional[Tuple[int, Perm4]]


class _ParityUnionFind:
    """Union-find whose elements carry a parity bit relative to their root."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.parity = [0] * size

    def find(self, x: int) -> Tuple[int, int]:
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        # Compress, accumulating parity from the top of the path down.
        acc = 0
        for node in reversed(path):
            acc ^= self.parity[node]
            self.parity[node] = acc
            self.parent[node] = root
        return root, (self.parity[path[0]] if path else 0)

    def union(self, a: int, b: int, relative: int = 0) -> bool:
        """
        Declare that ``a`` and ``b`` differ by ``relative``.

        Returns False when the two were already joined with the opposite
        parity.
        """
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == relative
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ relative
        return True


def _number_classes(uf: _ParityUnionFind, size: int) -> Tuple[List[int], List[List[int]]]:
    """Number union-find classes by first appearance; return label per element and members per class."""
    label: Dict[int, int] = {}
    of = [0] * size
    members: List[List[int]] = []
    for x in range(size):
        root, _ = uf.find(x)
        if root not in label:
            label[root] = len(members)
            members.append([])
        of[x] = label[root]
        members[label[root]].append(x)
    return of, members


@dataclass(frozen=True)
class VertexLink:
    """Descriptor of the triangulated surface linking a vertex."""

    euler_characteristic: int
    orientable: bool
    connected: bool
    has_boundary: bool
    triangles: int

    @property
    def is_sphere(self) -> bool:
        return self.euler_characteristic == 2 and self.connected and not self.has_boundary

    @property
    def is_disc(self) -> bool:
        return self.euler_characteristic == 1 and self.connected and self.has_boundary

    @property
    def is_ideal(self) -> bool:
        """Closed link other than a sphere (torus, Klein bottle, ...)."""
        return not self.has_boundary and not self.is_sphere


@dataclass(frozen=True)
class Skeleton:
    """
    Vertex, edge and face classes of a triangulation.

    ``tet_vertex[t][v]``, ``tet_edge[t][e]`` and ``tet_face[t][f]`` give the
    class containing each sub-simplex. Edge members carry an orientation bit
    (0 when the tetrahedron edge runs in the same direction as the class's
    first member). ``edge_tet_orientation[t][e]`` stores that bit per
    tetrahedron edge.
    """

    vertex_classes: Tuple[Tuple[Tuple[int, int], ...], ...]
    edge_classes: Tuple[Tuple[Tuple[int, int, int], ...], ...]
    face_classes: Tuple[Tuple[Tuple[int, int], ...], ...]
    tet_vertex: Tuple[Tuple[int, ...], ...]
    tet_edge: Tuple[Tuple[int, ...], ...]
    edge_tet_orientation: Tuple[Tuple[int, ...], ...]
    tet_face: Tuple[Tuple[int, ...], ...]
    edge_boundary: Tuple[bool, ...]
    vertex_boundary: Tuple[bool, ...]
    face_boundary: Tuple[bool, ...]
    self_reversed_edges: Tuple[int, ...]
    vertex_links: Tuple[VertexLink, ...]

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_classes)

    @property
    def num_edges(self) -> int:
        return len(self.edge_classes)

    @property
    def num_faces(self) -> int:
        return len(self.face_classes)

    def edge_degree(self, edge: int) -> int:
        return len(self.edge_classes[edge])

    def vertex_degree(self, vertex: int) -> int:
        return len(self.vertex_classes[vertex])

    def euler_characteristic(self, tetrahedra: int) -> int:
        return self.num_vertices - self.num_edges + self.num_faces - tetrahedra


@dataclass(frozen=True)
class ValidityReport:
    edge_self_reversed: bool
    all_vertex_links_spheres: bool
    closed: bool
    orientable: bool
    connected: bool

    @property
    def closed_manifold(self) -> bool:
        """True for a closed 3-manifold triangulation."""
        return self.closed and not self.edge_self_reversed and self.all_vertex_links_spheres


class Triangulation:
    """
    An immutable generalised triangulation.

    Args:
        gluings: ``gluings[t][f]`` is None for a boundary face, otherwise a
            pair ``(u, perm)``.

    Raises:
        InvalidGluingError: If the gluings do not form an involution on the
            faces, a permutation does not carry face to face, or a face is
            glued to itself.
    """

    def __init__(self, gluings: Sequence[Sequence[Gluing]]):
        table = tuple(tuple(row) for row in gluings)
        n = len(table)
        for t, row in enumerate(table):
            if len(row) != 4:
                raise InvalidGluingError("tetrahedron must have four faces", t, None)
            for f, entry in enumerate(row):
                if entry is None:
                    continue
                u, perm = entry
                if not 0 <= u < n:
                    raise InvalidGluingError(f"adjacent tetrahedron {u} out of range", t, f)
                g = perm(f)
                if u == t and g == f:
                    raise InvalidGluingError("face glued to itself", t, f)
                mirror = table[u][g]
                if mirror is None or mirror[0] != t or mirror[1] is not perm.inverse():
                    raise InvalidGluingError("involution violated", t, f)
        self._gluings = table

    # Basic access

    @property
    def size(self) -> int:
        return len(self._gluings)

    def gluing(self, tet: int, face: int) -> Gluing:
        return self._gluings[tet][face]

    def adjacent(self, tet: int, face: int) -> Optional[int]:
        entry = self._gluings[tet][face]
        return None if entry is None else entry[0]

    @property
    def gluings(self) -> Tuple[Tuple[Gluing, ...], ...]:
        return self._gluings

    def boundary_faces(self) -> List[Tuple[int, int]]:
        return [(t, f) for t in range(self.size) for f in range(4) if self._gluings[t][f] is None]

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self._gluings == other._gluings

    def __hash__(self):
        return hash(self._gluings)

    def __repr__(self):
        return f"<Triangulation n={self.size}>"

    def __reduce__(self):
        return (Triangulation.from_text, (self.to_text(),))

    # Text format

    def to_text(self) -> str:
        """Gluing table text: one line per tetrahedron, entries ``t:abcd`` or ``bdy``."""
        lines = []
        for row in self._gluings:
            entries = ['bdy' if e is None else f"{e[0]}:{e[1]}" for e in row]
            lines.append(' '.join(entries))
        return ''.join(line + '\n' for line in lines)

    @classmethod
    def from_text(cls, text: str) -> 'Triangulation':
        rows = []
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            entries = line.split()
            if len(entries) != 4:
                raise ParseError(f"expected 4 entries, found {len(entries)}", number)
            row = []
            for entry in entries:
                if entry == 'bdy':
                    row.append(None)
                    continue
                tet, sep, images = entry.partition(':')
                if not sep or not tet.isdigit():
                    raise ParseError(f"malformed entry {entry!r}", number)
                try:
                    row.append((int(tet), Perm4.from_string(images)))
                except ValueError as e:
                    raise ParseError(str(e), number) from None
            rows.append(row)
        return cls(rows)

    # Relabelling and components

    def relabel(self, tet_map: Sequence[int], vertex_maps: Sequence[Perm4]) -> 'Triangulation':
        """
        Return an isomorphic copy.

        Tetrahedron ``t`` becomes ``tet_map[t]`` and its vertex ``v`` becomes
        vertex ``vertex_maps[t](v)`` of the new tetrahedron.
        """
        n = self.size
        table: List[List[Gluing]] = [[None] * 4 for _ in range(n)]
        for t, row in enumerate(self._gluings):
            rho = vertex_maps[t]
            for f, entry in enumerate(row):
                if entry is None:
                    continue
                u, perm = entry
                table[tet_map[t]][rho(f)] = (tet_map[u], vertex_maps[u] * perm * rho.inverse())
        return Triangulation(table)

    def components(self) -> List['Triangulation']:
        """Connected components, each relabelled with tetrahedra in their original order."""
        seen = [-1] * self.size
        groups: List[List[int]] = []
        for start in range(self.size):
            if seen[start] >= 0:
                continue
            group = [start]
            seen[start] = len(groups)
            queue = deque([start])
            while queue:
                t = queue.popleft()
                for entry in self._gluings[t]:
                    if entry is not None and seen[entry[0]] < 0:
                        seen[entry[0]] = len(groups)
                        group.append(entry[0])
                        queue.append(entry[0])
            groups.append(sorted(group))
        result = []
        for group in groups:
            index = {t: i for i, t in enumerate(group)}
            table = [
                [None if e is None else (index[e[0]], e[1]) for e in self._gluings[t]]
                for t in group
            ]
            result.append(Triangulation(table))
        return result

    # Derived structure

    @cached_property
    def skeleton(self) -> Skeleton:
        return _compute_skeleton(self)

    @cached_property
    def tetrahedron_orientation(self) -> Optional[Tuple[int, ...]]:
        """
        A consistent +1/-1 orientation per tetrahedron, or None if none exists.

        Gluing by an odd permutation joins tetrahedra of the same sign; an even
        permutation joins tetrahedra of opposite sign.
        """
        n = self.size
        sign = [0] * n
        for start in range(n):
            if sign[start]:
                continue
            sign[start] = 1
            queue = deque([start])
            while queue:
                t = queue.popleft()
                for entry in self._gluings[t]:
                    if entry is None:
                        continue
                    u, perm = entry
                    want = -perm.sign() * sign[t]
                    if sign[u] == 0:
                        sign[u] = want
                        queue.append(u)
                    elif sign[u] != want:
                        return None
        return tuple(sign)

    def is_orientable(self) -> bool:
        return self.tetrahedron_orientation is not None

    def is_connected(self) -> bool:
        if self.size == 0:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            for entry in self._gluings[queue.popleft()]:
                if entry is not None and entry[0] not in seen:
                    seen.add(entry[0])
                    queue.append(entry[0])
        return len(seen) == self.size

    def has_boundary(self) -> bool:
        return any(e is None for row in self._gluings for e in row)

    def validity(self) -> ValidityReport:
        skeleton = self.skeleton
        return ValidityReport(
            edge_self_reversed=bool(skeleton.self_reversed_edges),
            all_vertex_links_spheres=all(link.is_sphere for link in skeleton.vertex_links),
            closed=not self.has_boundary() and all(link.is_sphere for link in skeleton.vertex_links),
            orientable=self.is_orientable(),
            connected=self.is_connected(),
        )

    def is_valid(self) -> bool:
        """No edge identified with itself in reverse, and every bounded vertex link is a disc."""
        skeleton = self.skeleton
        if skeleton.self_reversed_edges:
            return False
        return all(link.is_disc or not link.has_boundary for link in skeleton.vertex_links)

    def is_closed_manifold(self) -> bool:
        return self.validity().closed_manifold

    def vertex_link(self, vertex: int) -> VertexLink:
        return self.skeleton.vertex_links[vertex]


def _compute_skeleton(tri: Triangulation) -> Skeleton:
    n = tri.size
    gluings = tri.gluings

    # Vertices and faces.
    vertex_uf = _ParityUnionFind(4 * n)
    face_uf = _ParityUnionFind(4 * n)
    edge_uf = _ParityUnionFind(6 * n)
    self_reversed_roots = set()
    for t in range(n):
        for f in range(4):
            entry = gluings[t][f]
            if entry is None:
                continue
            u, perm = entry
            face_uf.union(4 * t + f, 4 * u + perm(f))
            for v in range(4):
                if v != f:
                    vertex_uf.union(4 * t + v, 4 * u + perm(v))
            for e in face_edges(f):
                a, b = EDGE_VERTICES[e]
                pa, pb = perm(a), perm(b)
                image = EDGE_NUMBER[(pa, pb)]
                if not edge_uf.union(6 * t + e, 6 * u + image, 0 if pa < pb else 1):
                    self_reversed_roots.add(6 * t + e)

    vertex_of, vertex_members = _number_classes(vertex_uf, 4 * n)
    face_of, face_members = _number_classes(face_uf, 4 * n)
    edge_of, edge_members = _number_classes(edge_uf, 6 * n)

    edge_classes = []
    edge_orientation = [0] * (6 * n)
    for members in edge_members:
        _, base = edge_uf.find(members[0])
        row = []
        for x in members:
            _, parity = edge_uf.find(x)
            edge_orientation[x] = parity ^ base
            row.append((x // 6, x % 6, parity ^ base))
        edge_classes.append(tuple(row))

    self_reversed = sorted({edge_of[x] for x in self_reversed_roots})

    face_boundary = [False] * len(face_members)
    edge_boundary = [False] * len(edge_members)
    vertex_boundary = [False] * len(vertex_members)
    for t in range(n):
        for f in range(4):
            if gluings[t][f] is None:
                face_boundary[face_of[4 * t + f]] = True
                for e in face_edges(f):
                    edge_boundary[edge_of[6 * t + e]] = True
                for v in range(4):
                    if v != f:
                        vertex_boundary[vertex_of[4 * t + v]] = True

    links = tuple(_vertex_link(tri, members) for members in vertex_members)

    return Skeleton(
        vertex_classes=tuple(tuple((x // 4, x % 4) for x in m) for m in vertex_members),
        edge_classes=tuple(edge_classes),
        face_classes=tuple(tuple((x // 4, x % 4) for x in m) for m in face_members),
        tet_vertex=tuple(tuple(vertex_of[4 * t: 4 * t + 4]) for t in range(n)),
        tet_edge=tuple(tuple(edge_of[6 * t: 6 * t + 6]) for t in range(n)),
        edge_tet_orientation=tuple(tuple(edge_orientation[6 * t: 6 * t + 6]) for t in range(n)),
        tet_face=tuple(tuple(face_of[4 * t: 4 * t + 4]) for t in range(n)),
        edge_boundary=tuple(edge_boundary),
        vertex_boundary=tuple(vertex_boundary),
        face_boundary=tuple(face_boundary),
        self_reversed_edges=tuple(self_reversed),
        vertex_links=links,
    )


def _vertex_link(tri: Triangulation, corners: List[int]) -> VertexLink:
    """
    Build the link of one vertex class from its corner triangles.

    Corner ``(t, v)`` is a triangle with one edge in each face ``f != v`` and
    one vertex on each tetrahedron edge ``(v, w)``.
    """
    gluings = tri.gluings
    corner_index = {c: i for i, c in enumerate(corners)}

    # Link vertices: (corner, w) for w != v; link edges: (corner, f) for f != v.
    link_vertex_uf = _ParityUnionFind(4 * len(corners))
    link_edge_uf = _ParityUnionFind(4 * len(corners))
    sign = [0] * len(corners)
    orientable = True
    boundary = False
    sign[0] = 1
    queue = deque([0])
    visited = {0}
    # Glue every corner edge, tracking orientation by breadth-first search.
    for i, corner in enumerate(corners):
        t, v = divmod(corner, 4)
        for f in range(4):
            if f == v:
                continue
            entry = gluings[t][f]
            if entry is None:
                boundary = True
                continue
            u, perm = entry
            j = corner_index[4 * u + perm(v)]
            link_edge_uf.union(4 * i + f, 4 * j + perm(f))
            for w in range(4):
                if w != v and w != f:
                    link_vertex_uf.union(4 * i + w, 4 * j + perm(w))
    while queue:
        i = queue.popleft()
        t, v = divmod(corners[i], 4)
        for f in range(4):
            if f == v or gluings[t][f] is None:
                continue
            u, perm = gluings[t][f]
            j = corner_index[4 * u + perm(v)]
            want = -perm.sign() * sign[i]
            if sign[j] == 0:
                sign[j] = want
            elif sign[j] != want:
                orientable = False
            if j not in visited:
                visited.add(j)
                queue.append(j)

    vertex_roots = set()
    edge_roots = set()
    for i, corner in enumerate(corners):
        v = corner % 4
        for x in range(4):
            if x == v:
                continue
            vertex_roots.add(link_vertex_uf.find(4 * i + x)[0])
            edge_roots.add(link_edge_uf.find(4 * i + x)[0])
    euler = len(vertex_roots) - len(edge_roots) + len(corners)
    return VertexLink(
        euler_characteristic=euler,
        orientable=orientable,
        connected=len(visited) == len(corners),
        has_boundary=boundary,
        triangles=len(corners),
    )


class TriangulationBuilder:
    """
    Mutable scratch space for assembling a triangulation tetrahedron by tetrahedron.

    Constructions use this to glue faces incrementally, then call
    :meth:`build` to obtain an immutable, validated Triangulation.
    """

    def __init__(self, size: int = 0):
        self.table: List[List[Gluing]] = [[None] * 4 for _ in range(size)]

    @classmethod
    def from_triangulation(cls, tri: Triangulation) -> 'TriangulationBuilder':
        builder = cls()
        builder.table = [list(row) for row in tri.gluings]
        return builder

    @property
    def size(self) -> int:
        return len(self.table)

    def new_tetrahedron(self) -> int:
        self.table.append([None] * 4)
        return len(self.table) - 1

    def join(self, tet: int, face: int, other: int, perm: Perm4) -> None:
        """Glue face ``face`` of ``tet`` to face ``perm(face)`` of ``other``."""
        target = perm(face)
        if self.table[tet][face] is not None or self.table[other][target] is not None:
            raise InvalidGluingError("face already glued", tet, face)
        if tet == other and target == face:
            raise InvalidGluingError("face glued to itself", tet, face)
        self.table[tet][face] = (other, perm)
        self.table[other][target] = (tet, perm.inverse())

    def unjoin(self, tet: int, face: int) -> None:
        entry = self.table[tet][face]
        if entry is None:
            return
        other, perm = entry
        self.table[other][perm(face)] = None
        self.table[tet][face] = None

    def build(self) -> Triangulation:
        return Triangulation(self.table)
