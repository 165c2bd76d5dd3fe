"""
Layering and layered solid tori.

A layered solid torus is grown from the one-tetrahedron solid torus by
repeatedly layering a tetrahedron on a boundary edge. Its parameters are
the numbers of times the meridian disc meets each of the three boundary
edges; they sum to zero once signs are chosen consistently around a
boundary face.
"""
from dataclasses import dataclass
from math import gcd
from typing import Optional, Tuple, Union
import logging

from triangulations.homology import cycle_class_map, directed_edge_chain
from triangulations.perm import EDGE_VERTICES, Perm4
from triangulations.triangulation import Triangulation, TriangulationBuilder

from .exceptions import ConstructionError

logger = logging.getLogger(__name__)

EdgeRef = Tuple[int, int]
FaceRef = Tuple[int, int]


def find_boundary_face(tri: Triangulation, tet: int, tet_edge: int, exclude: Optional[FaceRef] = None) -> FaceRef:
    """A boundary face of ``tet`` containing ``tet_edge``, other than ``exclude``."""
    a, b = EDGE_VERTICES[tet_edge]
    for face in range(4):
        if face in (a, b) or (tet, face) == exclude:
            continue
        if tri.gluing(tet, face) is None:
            return tet, face
    raise ConstructionError(f"edge {tet_edge} of tetrahedron {tet} lies in no boundary face")


def walk_to_other_boundary_face(tri: Triangulation, tet: int, face: int, start: int, end: int) -> Tuple[int, int, int, int]:
    """
    Walk around an edge from one boundary face to the other.

    Starts in boundary face ``face`` of ``tet`` at the edge ``start``-``end``
    and passes through interior faces around that edge.

    Returns:
        Tuple: ``(tet, face, start, end)`` for the boundary face reached,
        with the edge endpoints carried along the walk.
    """
    t, x, y = tet, start, end
    exit_face = 6 - start - end - face
    for _ in range(4 * tri.size + 1):
        entry = tri.gluing(t, exit_face)
        if entry is None:
            return t, exit_face, x, y
        u, perm = entry
        enter = perm(exit_face)
        t, x, y = u, perm(x), perm(y)
        exit_face = 6 - x - y - enter
    raise ConstructionError("edge is not on the boundary")


def layer_on_edge(tri: Triangulation, tet: int, face: int, tet_edge: int) -> Tuple[Triangulation, int]:
    """
    Layer a new tetrahedron on a boundary edge.

    The edge is named by a boundary face ``(tet, face)`` containing it. The
    new tetrahedron's faces 3 and 2 are glued to the two boundary faces
    beside the edge, its edge 01 covering it. Faces 0 and 1 of the new
    tetrahedron become boundary and edge 23 is the new boundary edge.

    Returns:
        Tuple: The new triangulation and the index of the new tetrahedron.

    Raises:
        ConstructionError: If the face is not a boundary face or the edge
            meets the boundary in a single face.
    """
    if tri.gluing(tet, face) is not None:
        raise ConstructionError(f"face {face} of tetrahedron {tet} is not a boundary face")
    a, b = EDGE_VERTICES[tet_edge]
    if face in (a, b):
        raise ConstructionError(f"edge {tet_edge} does not lie in face {face}")
    other_tet, other_face, x, y = walk_to_other_boundary_face(tri, tet, face, a, b)
    if (other_tet, other_face) == (tet, face):
        raise ConstructionError("edge meets the boundary in a single face")

    builder = TriangulationBuilder.from_triangulation(tri)
    new = builder.new_tetrahedron()
    builder.join(new, 3, tet, Perm4.from_pairs((0, 1, 2), (a, b, 6 - a - b - face)))
    builder.join(new, 2, other_tet, Perm4.from_pairs((0, 1, 3), (x, y, 6 - x - y - other_face)))
    return builder.build(), new


def layered_parameters(p: int, q: int, r: int) -> Tuple[int, int, int]:
    """Parameters after layering on the edge carrying ``r``."""
    return p, -q, q - p


def _check_parameters(p: int, q: int, r: int) -> None:
    if p + q + r != 0:
        raise ConstructionError(f"parameters ({p},{q},{r}) do not sum to zero")
    if gcd(p, q) != 1:
        raise ConstructionError(f"parameters ({p},{q},{r}) are not coprime")


@dataclass(frozen=True)
class MobiusBand:
    """
    The degenerate layered solid torus with parameters (2,-1,-1).

    It has no tetrahedra: attaching it folds an annulus onto itself about
    the edge that carries the parameter 2.
    """

    params: Tuple[int, int, int] = (2, -1, -1)
    size: int = 0

    @property
    def fold_index(self) -> int:
        return max(range(3), key=lambda i: abs(self.params[i]))


@dataclass(frozen=True)
class LayeredSolidTorus:
    """
    A standard layered solid torus.

    ``edges[i]`` is a (tetrahedron, edge) pair on the boundary whose edge
    class carries parameter ``params[i]``.
    """

    triangulation: Triangulation
    params: Tuple[int, int, int]
    edges: Tuple[EdgeRef, EdgeRef, EdgeRef]

    @property
    def size(self) -> int:
        return self.triangulation.size

    def edge_class(self, index: int) -> int:
        t, e = self.edges[index]
        return self.triangulation.skeleton.tet_edge[t][e]

    def boundary_faces(self) -> Tuple[FaceRef, FaceRef]:
        faces = self.triangulation.boundary_faces()
        if len(faces) != 2:
            raise ConstructionError(f"layered solid torus has {len(faces)} boundary faces")
        return faces[0], faces[1]

    def roles(self, face: FaceRef) -> Tuple[int, int, int]:
        """
        Vertices of a boundary face opposite the edges carrying each parameter.

        Returns the vertex of ``face`` opposite the ``params[0]`` edge, then
        the one opposite ``params[1]``, then ``params[2]``.
        """
        t, f = face
        skeleton = self.triangulation.skeleton
        classes = [self.edge_class(i) for i in range(3)]
        result = [None, None, None]
        for e, (a, b) in enumerate(EDGE_VERTICES):
            if f in (a, b):
                continue
            index = classes.index(skeleton.tet_edge[t][e])
            result[index] = 6 - a - b - f
        if None in result:
            raise ConstructionError("boundary face does not carry all three parameter edges")
        return tuple(result)

    def layer(self, index: int) -> 'LayeredSolidTorus':
        """Layer a tetrahedron on the edge carrying ``params[index]``."""
        t, e = self.edges[index]
        face = find_boundary_face(self.triangulation, t, e)
        tri, new = layer_on_edge(self.triangulation, t, face[1], e)
        others = [i for i in range(3) if i != index]
        p, q, r = layered_parameters(self.params[others[0]], self.params[others[1]], self.params[index])
        params = [0, 0, 0]
        params[others[0]], params[others[1]], params[index] = p, q, r
        edges = list(self.edges)
        edges[index] = (new, 5)
        return LayeredSolidTorus(triangulation=tri, params=tuple(params), edges=tuple(edges))

    def with_order(self, params: Tuple[int, int, int]) -> 'LayeredSolidTorus':
        """Reorder (and re-sign) so that ``params`` matches the requested triple."""
        order = []
        for value in params:
            for i in range(3):
                if i not in order and abs(self.params[i]) == abs(value):
                    order.append(i)
                    break
        if len(order) != 3:
            raise ConstructionError(f"cannot match {params} against {self.params}")
        return LayeredSolidTorus(
            triangulation=self.triangulation,
            params=tuple(params),
            edges=tuple(self.edges[i] for i in order),
        )


def one_tetrahedron_solid_torus() -> LayeredSolidTorus:
    """LST(1,2,-3): face 012 of a single tetrahedron glued to face 123."""
    builder = TriangulationBuilder(1)
    builder.join(0, 3, 0, Perm4(1, 2, 3, 0))
    # Edge 01 (weight 1), 02 (weight 2) and 03 (weight 3).
    return LayeredSolidTorus(triangulation=builder.build(), params=(1, 2, -3), edges=((0, 0), (0, 1), (0, 2)))


def _chain(weights: Tuple[int, int, int]) -> list:
    """Absolute parameter triples from (1,2,3) up to ``weights``."""
    chain = [weights]
    a, b, c = weights
    while (a, b, c) != (1, 2, 3):
        a, b, c = tuple(sorted((a, b - a, b)))
        chain.append((a, b, c))
    chain.reverse()
    return chain


def lst(p: int, q: int, r: int) -> Union[LayeredSolidTorus, MobiusBand]:
    """
    Build the minimal standard layered solid torus LST(p,q,r).

    Parameters are unordered and sign-symmetric. Each step layers on the
    middle edge of the current triple, which replaces it by the sum of the
    other two.

    Raises:
        ConstructionError: If the parameters do not sum to zero, are not
            coprime or describe no solid torus (a zero parameter).
    """
    _check_parameters(p, q, r)
    weights = tuple(sorted((abs(p), abs(q), abs(r))))
    if weights == (1, 1, 2):
        return MobiusBand(params=(p, q, r))
    if weights[0] == 0:
        raise ConstructionError(f"LST({p},{q},{r}) has a zero parameter")

    solid = one_tetrahedron_solid_torus()
    chain = _chain(weights)
    for previous, target in zip(chain, chain[1:]):
        # The edge carrying b - a of the previous triple becomes a + b.
        flipped = target[1] - target[0]
        index = next(i for i in range(3) if abs(solid.params[i]) == flipped)
        solid = solid.layer(index)
    logger.debug(f"Built LST({p},{q},{r}) from {solid.size} tetrahedra")
    return solid.with_order((p, q, r))


def meridian_weights(solid: LayeredSolidTorus) -> Tuple[int, int, int]:
    """
    How often the meridian meets each parameter edge, read off homology.

    A boundary curve of a solid torus maps to the core class times its
    intersection number with the meridian.
    """
    tri = solid.triangulation
    classes = cycle_class_map(tri)
    if classes.rank != 1 or classes.torsion:
        raise ConstructionError("triangulation is not a solid torus")
    weights = []
    for t, e in solid.edges:
        a, b = EDGE_VERTICES[e]
        weights.append(abs(classes.free_part(directed_edge_chain(tri, t, a, b))[0]))
    return tuple(weights)
