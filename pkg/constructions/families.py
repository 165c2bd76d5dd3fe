"""
The named triangulation families.

Layered surface bundles (B), plugged thin I-bundles (H), plugged thick
I-bundles (K) and the exceptional triangulations (E) are all assembled from
thin I-bundles by layering tetrahedra and by gluing boundary faces together.

Each family kind rests on a particular I-bundle, drawn in the literature
rather than specified combinatorially. ``resolve_block`` recovers it from
the candidate layouts in ``ibundles``. A candidate must build every census
member of its kind with the published homology and size, and the census
members must come out pairwise non-isomorphic apart from the published
coincidences. Candidates are tried in a fixed order and the first that
qualifies is kept; the bundle kinds are settled together because the
coincidence ties two of them.
"""
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import chain, permutations, product
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple
import logging

from triangulations.exceptions import TriangulationError
from triangulations.homology import AbelianGroup, cycle_class_map, directed_edge_chain, homology_h1
from triangulations.isosig import signature
from triangulations.perm import EDGE_NUMBER, EDGE_VERTICES, Perm4, face_vertices
from triangulations.triangulation import Triangulation, TriangulationBuilder

from . import golden
from .exceptions import ConstructionError
from .ibundles import (
    TWISTED_FIVE_LAYOUTS,
    TWISTED_SIX_LAYOUTS,
    TWISTED_THREE_LAYOUTS,
    UNTWISTED_KLEIN_LAYOUTS,
    UNTWISTED_TORUS_LAYOUTS,
    Layout,
    boundary_components,
    build_candidates,
    strip_layouts,
)
from .lst import FaceRef, LayeredSolidTorus, MobiusBand, layer_on_edge, lst
from .naming import (
    BUNDLE_KINDS,
    DEFAULT_PLUG,
    THICK_KINDS,
    THIN_KINDS,
    FamilyName,
    format_family_name,
    parse_family_name,
)

logger = logging.getLogger(__name__)

DirectedEdge = Tuple[int, int, int]
Vector = Tuple[int, ...]

# Layerings tried while exposing the curves a bundle gluing needs.
MAX_LAYERINGS = 12


def directed_face_edges(face: FaceRef) -> List[DirectedEdge]:
    t, f = face
    a, b, c = face_vertices(f)
    return [(t, a, b), (t, a, c), (t, b, c)]


class EdgeClasses:
    """H1 coordinates of the directed edges of one triangulation."""

    def __init__(self, tri: Triangulation):
        self.triangulation = tri
        self.map = cycle_class_map(tri)

    @property
    def has_torsion(self) -> bool:
        return bool(self.map.torsion)

    def vector(self, edge: DirectedEdge) -> Vector:
        return self.map.classify(directed_edge_chain(self.triangulation, *edge))

    def combine(self, *terms: Tuple[int, Vector]) -> Vector:
        """The class of ``sum(coefficient * vector)``."""
        rank = self.map.rank
        total = [0] * (rank + len(self.map.torsion))
        for coefficient, vector in terms:
            for i, x in enumerate(vector):
                total[i] += coefficient * x
        residues = [x % d for x, d in zip(total[rank:], self.map.torsion)]
        return tuple(total[:rank]) + tuple(residues)

    def up_to_sign(self, u: Vector, v: Vector) -> bool:
        return u == v or u == self.combine((-1, v))


@lru_cache(maxsize=256)
def edge_classes(tri: Triangulation) -> EdgeClasses:
    return EdgeClasses(tri)


def split_boundary(tri: Triangulation, marker: FaceRef) -> Tuple[List[FaceRef], List[FaceRef]]:
    """The boundary component containing ``marker`` and the other one."""
    components = boundary_components(tri)
    if len(components) != 2:
        raise ConstructionError(f"expected two boundary components, found {len(components)}")
    first, second = components
    return (first, second) if marker in first else (second, first)


def face_maps(classes: EdgeClasses, source: FaceRef, target: FaceRef, wanted: Dict[DirectedEdge, Vector]) -> List[Perm4]:
    """Gluings of ``source`` onto ``target`` carrying each directed edge to the class ``wanted`` for it."""
    t, f = source
    u, g = target
    result = []
    for images in permutations(face_vertices(g)):
        perm = Perm4.from_pairs(face_vertices(f), images)
        if all(classes.vector((u, perm(a), perm(b))) == wanted[(t, a, b)] for _, a, b in directed_face_edges(source)):
            result.append(perm)
    return result


def glue_closed(tri: Triangulation, options: Sequence[Tuple[FaceRef, FaceRef, Sequence[Perm4]]]) -> Iterator[Triangulation]:
    """
    Closed manifold triangulations from gluing each source face to its target.

    ``options`` lists ``(source, target, perms)``; every combination of one
    permutation per pair is tried.
    """
    for perms in product(*(perms for _, _, perms in options)):
        builder = TriangulationBuilder.from_triangulation(tri)
        for (source, target, _), perm in zip(options, perms):
            builder.join(source[0], source[1], target[0], perm)
        result = builder.build()
        if result.is_closed_manifold():
            yield result


# Calibration

class _Mismatch(Exception):
    pass


@dataclass(frozen=True)
class GoldenMember:
    name: FamilyName
    size: int
    homology: AbelianGroup


def golden_members(family: str, kind: str) -> List[GoldenMember]:
    """Census members of one family kind with their published size and homology."""
    result = []
    for manifold in golden.GOLDEN_MANIFOLDS:
        for text in manifold.members:
            name = parse_family_name(text)
            if name.family == family and name.kind == kind:
                result.append(GoldenMember(name, manifold.tetrahedra, AbelianGroup.parse(manifold.homology)))
    return result


def _check_member(tri: Triangulation, member: GoldenMember) -> None:
    if tri.size != member.size:
        raise _Mismatch(f"{member.name} has {tri.size} tetrahedra, expected {member.size}")
    if tri.is_orientable():
        raise _Mismatch(f"{member.name} is orientable")
    group = homology_h1(tri)
    if group != member.homology:
        raise _Mismatch(f"{member.name} has homology {group}, expected {member.homology}")


@dataclass
class Fit:
    """A candidate block together with the signatures of the census members it builds."""

    candidate: object
    signatures: Dict[str, str]


def fits(label: str, candidates: Iterator, build: Callable, members: Sequence[GoldenMember],
         accept: Optional[Callable[[object, Dict[str, Triangulation]], bool]] = None) -> Iterator[Fit]:
    """
    Candidates that build every member with its published size and homology.

    The members of a fit are pairwise non-isomorphic and pass ``accept``.
    A candidate building exactly the triangulations of an earlier fit is
    skipped.
    """
    seen = set()
    for candidate in candidates:
        built: Dict[str, Triangulation] = {}
        for member in members:
            try:
                tri = build(candidate, member)
                _check_member(tri, member)
            except (TriangulationError, _Mismatch) as e:
                logger.debug(f"{label} candidate {candidate}: {e}")
                break
            built[str(member.name)] = tri
        else:
            signatures = {name: signature(tri) for name, tri in built.items()}
            if len(set(signatures.values())) < len(signatures):
                logger.debug(f"{label} candidate {candidate}: two members are isomorphic")
                continue
            key = frozenset(signatures.items())
            if key in seen:
                continue
            seen.add(key)
            if accept is not None and not accept(candidate, built):
                logger.debug(f"{label} candidate {candidate}: rejected")
                continue
            yield Fit(candidate, signatures)


def calibrate(label: str, candidates: Iterator, build: Callable, members: Sequence[GoldenMember],
              accept: Optional[Callable[[object, Dict[str, Triangulation]], bool]] = None):
    """
    The first candidate that reproduces every census member.

    Raises:
        ConstructionError: If no candidate builds all members as distinct
            triangulations passing ``accept``.
    """
    for fit in fits(label, candidates, build, members, accept):
        logger.info(f"Resolved {label} from {fit.candidate}")
        return fit.candidate
    raise ConstructionError(f"no {label} candidate reproduces its census members as distinct triangulations")


class LazyFits:
    """The fits of one kind, computed on first use and remembered."""

    def __init__(self, source: Iterator[Fit]):
        self._source = source
        self._items: List[Fit] = []
        self._exhausted = False

    def __iter__(self) -> Iterator[Fit]:
        index = 0
        while True:
            if index == len(self._items):
                if self._exhausted:
                    return
                try:
                    self._items.append(next(self._source))
                except StopIteration:
                    self._exhausted = True
                    return
            yield self._items[index]
            index += 1


def _coincident(a: str, b: str) -> bool:
    return (a, b) in golden.ISOMORPHIC_NAMES or (b, a) in golden.ISOMORPHIC_NAMES


def compatible(fit: Fit, chosen: Sequence[Fit]) -> bool:
    """Members of different kinds are distinct, except the published coincidences, which must hold."""
    for other in chosen:
        for name, sig in fit.signatures.items():
            for other_name, other_sig in other.signatures.items():
                if _coincident(name, other_name) != (sig == other_sig):
                    return False
    return True


def resolve_jointly(pools: Sequence[Tuple[str, LazyFits]]) -> Dict[str, Fit]:
    """
    One fit per kind, all compatible with each other.

    Kinds are settled in order, going back to an earlier kind when a later
    one has no compatible fit.

    Raises:
        ConstructionError: If no combination is compatible.
    """

    def search(index: int, chosen: List[Fit]) -> Optional[List[Fit]]:
        if index == len(pools):
            return chosen
        for fit in pools[index][1]:
            if compatible(fit, chosen):
                found = search(index + 1, chosen + [fit])
                if found is not None:
                    return found
        return None

    found = search(0, [])
    if found is None:
        kinds = ', '.join(kind for kind, _ in pools)
        raise ConstructionError(f"no blocks for {kinds} give distinct census triangulations")
    return {kind: fit for (kind, _), fit in zip(pools, found)}


# Layered surface bundles

@dataclass(frozen=True)
class BundleBlock:
    """
    An untwisted thin I-bundle with marked curves on its upper boundary.

    ``alpha`` and ``beta`` are directed edges of the upper boundary. The
    lower boundary uses ``alpha`` and ``beta + shear * alpha``, read through
    the I-bundle, as its own pair of curves.
    """

    kind: str
    triangulation: Triangulation
    upper: FaceRef
    alpha: DirectedEdge
    beta: DirectedEdge
    shear: int = 0
    origin: str = ''

    def __str__(self):
        return f"{self.kind} from {self.origin} alpha={self.alpha} beta={self.beta}"


# Surface, third upper edge, third lower edge, shear. The third edge of a
# boundary is alpha + rule * beta on that boundary; 0 leaves it free.
BUNDLE_RULES = {
    'T6^1': ('T', -1, -1, 0),
    'T6^2': ('T', 1, -1, 0),
    'T7': ('T7', -1, 1, 1),
    'K6^1': ('K', 0, 0, 0),
    'K6^2': ('K', 0, 0, 0),
}


def _normal_sign(v: Vector) -> Vector:
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def _upper_targets(classes: EdgeClasses, block: BundleBlock, upper: Sequence[FaceRef],
                   params: Tuple[int, int, int, int]) -> Dict[DirectedEdge, Vector]:
    """Where each directed upper edge must land so that alpha -> p.alpha + q.beta and beta -> r.alpha + s.beta."""
    p, q, r, s = params
    a = classes.vector(block.alpha)
    b = classes.vector(block.beta)
    lower_b = classes.combine((1, b), (block.shear, a))
    image_a = classes.combine((p, a), (q, lower_b))
    image_b = classes.combine((r, a), (s, lower_b))
    wanted = {}
    for face in upper:
        for edge in directed_face_edges(face):
            v = classes.vector(edge)
            images = {
                classes.combine((x, image_a), (y, image_b))
                for x, y in product((-1, 0, 1), repeat=2)
                if classes.combine((x, a), (y, b)) == v
            }
            if len(images) != 1:
                raise ConstructionError(f"edge {edge} is not a well-defined combination of the marked curves")
            wanted[edge] = images.pop()
    return wanted


def _flip_path(start: Sequence[Vector], goal: Sequence[Vector], limit: int) -> Optional[List[Vector]]:
    """
    Shortest sequence of edge classes to layer on to turn one boundary edge triple into another.

    Layering on the edge of class x in a two-triangle torus with edges
    x, y, z replaces x by whichever of y + z and y - z is not x.
    """
    origin = frozenset(_normal_sign(v) for v in start)
    target = frozenset(_normal_sign(v) for v in goal)
    if len(origin) != 3 or len(target) != 3:
        return None
    queue = deque([(origin, [])])
    seen = {origin}
    while queue:
        state, path = queue.popleft()
        if state == target:
            return path
        if len(path) >= limit:
            continue
        for x in state:
            y, z = (w for w in state if w != x)
            sums = {
                _normal_sign(tuple(i + j for i, j in zip(y, z))),
                _normal_sign(tuple(i - j for i, j in zip(y, z))),
            } - {x}
            if len(sums) != 1:
                continue
            following = (state - {x}) | sums
            if following not in seen:
                seen.add(following)
                queue.append((following, path + [x]))
    return None


def _layer_on_class(tri: Triangulation, classes: EdgeClasses, faces: Sequence[FaceRef], target: Vector) -> Triangulation:
    for face in faces:
        for t, a, b in directed_face_edges(face):
            if _normal_sign(classes.vector((t, a, b))) == target:
                layered, _ = layer_on_edge(tri, t, face[1], EDGE_NUMBER[(a, b)])
                return layered
    raise ConstructionError(f"no boundary edge carries the class {target}")


def close_bundle(block: BundleBlock, params: Tuple[int, int, int, int], max_layerings: int = MAX_LAYERINGS) -> Triangulation:
    """
    Identify the upper boundary of a block with its lower boundary.

    The lower boundary is layered until it carries the images of the upper
    edges, then the two faces are glued to match directed edge classes.

    Raises:
        ConstructionError: If no identification realises the parameters
            within ``max_layerings`` layerings.
    """
    tri = block.triangulation
    for _ in range(max_layerings + 1):
        classes = edge_classes(tri)
        upper, lower = split_boundary(tri, block.upper)
        wanted = _upper_targets(classes, block, upper, params)
        for targets in permutations(lower):
            options = [(source, target, face_maps(classes, source, target, wanted)) for source, target in zip(upper, targets)]
            for result in glue_closed(tri, options):
                logger.debug(f"Closed {block.kind} bundle {params} with {result.size - block.triangulation.size} layerings")
                return result
        if classes.has_torsion:
            break
        current = [classes.vector(e) for face in lower for e in directed_face_edges(face)]
        path = _flip_path(set(current), set(wanted.values()), MAX_LAYERINGS)
        if not path:
            break
        tri = _layer_on_class(tri, classes, lower, path[0])
    p, q, r, s = params
    raise ConstructionError(f"no boundary identification of {block.kind} realises {p},{q}|{r},{s}")


def bundle_layouts(surface: str) -> Iterable[Layout]:
    """Untwisted layouts behind the bundle kinds on ``surface``, simplest first."""
    if surface == 'T':
        return chain(UNTWISTED_TORUS_LAYOUTS, strip_layouts(2))
    if surface == 'K':
        return chain(UNTWISTED_KLEIN_LAYOUTS, strip_layouts(2, flips=True))
    if surface == 'T7':
        return strip_layouts(3)
    raise ConstructionError(f"unknown bundle surface {surface!r}")


# Kinds are settled in this order, the coinciding pair first.
BUNDLE_ORDER = ('T6^1', 'K6^2', 'T6^2', 'K6^1', 'T7')


@lru_cache(maxsize=None)
def _untwisted_bases(surface: str) -> Tuple[Tuple[Triangulation, FaceRef, str], ...]:
    result = []
    for bundle in build_candidates(bundle_layouts(surface), twisted=False):
        # Strip layouts with flips close up as tori as well as Klein bottles.
        if edge_classes(bundle.triangulation).has_torsion != (surface == 'K'):
            continue
        for component in boundary_components(bundle.triangulation):
            result.append((bundle.triangulation, component[0], str(bundle.layout)))
    return tuple(result)


def _generates(classes: EdgeClasses, a: Vector, b: Vector) -> bool:
    """Whether two boundary classes generate the homology of a torus or Klein bottle."""
    if classes.has_torsion:
        # Two orientation-reversing curves differing by the class of order two.
        return a[0] % 2 == 1 and b[0] % 2 == 1 and a[1:] != b[1:]
    return abs(a[0] * b[1] - a[1] * b[0]) == 1


def _block_roles(classes: EdgeClasses, upper: FaceRef, lower: Sequence[FaceRef],
                 rules: Tuple[int, int, int]) -> Iterator[Tuple[DirectedEdge, DirectedEdge]]:
    """
    Choices of alpha and beta among the edges of an upper boundary face.

    alpha and beta generate the homology of the surface, the third edge of
    each boundary follows its rule, and the lower boundary carries alpha and
    ``beta + shear * alpha`` as edges.
    """
    upper_rule, lower_rule, shear = rules
    edges = directed_face_edges(upper)
    directed = edges + [(t, b, a) for t, a, b in edges]
    lower_classes = [classes.vector(e) for face in lower for e in directed_face_edges(face)]

    def on_lower(v: Vector) -> bool:
        return any(classes.up_to_sign(w, v) for w in lower_classes)

    for alpha, beta in permutations(directed, 2):
        pair = ({alpha[1], alpha[2]}, {beta[1], beta[2]})
        if pair[0] == pair[1]:
            continue
        (third,) = [e for e in edges if {e[1], e[2]} not in pair]
        a, b = classes.vector(alpha), classes.vector(beta)
        if not _generates(classes, a, b):
            continue
        if upper_rule and not classes.up_to_sign(classes.vector(third), classes.combine((1, a), (upper_rule, b))):
            continue
        lower_b = classes.combine((1, b), (shear, a))
        if not (on_lower(a) and on_lower(lower_b)):
            continue
        if lower_rule and not on_lower(classes.combine((1, a), (lower_rule, lower_b))):
            continue
        yield alpha, beta


def bundle_candidates(kind: str) -> Iterator[BundleBlock]:
    surface, upper_rule, lower_rule, shear = BUNDLE_RULES[kind]
    for tri, upper, origin in _untwisted_bases(surface):
        classes = edge_classes(tri)
        _, lower = split_boundary(tri, upper)
        for alpha, beta in _block_roles(classes, upper, lower, (upper_rule, lower_rule, shear)):
            yield BundleBlock(kind, tri, upper, alpha, beta, shear, origin)


def _build_bundle_member(block: BundleBlock, member: GoldenMember) -> Triangulation:
    return close_bundle(block, member.name.params, max_layerings=member.size - block.triangulation.size)


def _bundle_fits(kind: str) -> LazyFits:
    return LazyFits(fits(f"B[{kind}]", bundle_candidates(kind), _build_bundle_member, golden_members('B', kind)))


@lru_cache(maxsize=None)
def resolve_bundle_blocks() -> Dict[str, BundleBlock]:
    """
    The blocks behind every ``B[kind|...]``, settled together.

    Each block builds the census members of its kind with the published
    size and homology. Members of different kinds are pairwise
    non-isomorphic except for the pairs in ``golden.ISOMORPHIC_NAMES``,
    which must coincide.

    Raises:
        ConstructionError: If no choice of blocks meets these conditions.
    """
    chosen = resolve_jointly([(kind, _bundle_fits(kind)) for kind in BUNDLE_ORDER])
    for kind, fit in chosen.items():
        logger.info(f"Resolved B[{kind}] from {fit.candidate}")
    return {kind: fit.candidate for kind, fit in chosen.items()}


def resolve_bundle_block(kind: str) -> BundleBlock:
    """The block behind ``B[kind|...]``."""
    if kind not in BUNDLE_RULES:
        raise ConstructionError(f"unknown bundle kind {kind!r}")
    return resolve_bundle_blocks()[kind]


@lru_cache(maxsize=None)
def golden_bundle_signatures() -> frozenset:
    """Signatures of the census members of every bundle kind."""
    blocks = resolve_bundle_blocks()
    return frozenset(
        signature(_build_bundle_member(blocks[kind], member))
        for kind in BUNDLE_KINDS
        for member in golden_members('B', kind)
    )


def layered_surface_bundle(kind: str, p: int, q: int, r: int, s: int) -> Triangulation:
    """
    Build ``B[kind|p,q|r,s]``.

    The directed curve alpha on one boundary of the block is sent to
    ``p.alpha + q.beta`` on the other and beta to ``r.alpha + s.beta``,
    layering tetrahedra on the second boundary as needed.

    Raises:
        ConstructionError: If the kind is unknown, the matrix is not
            invertible over the integers or no identification exists.
    """
    if kind not in BUNDLE_KINDS:
        raise ConstructionError(f"unknown bundle kind {kind!r}")
    if abs(p * s - q * r) != 1:
        raise ConstructionError(f"parameters {p},{q}|{r},{s} do not describe a homeomorphism")
    return close_bundle(resolve_bundle_block(kind), (p, q, r, s))


# Plugged I-bundles

Plug = Tuple[int, int]
Roles = Tuple[int, int, int]


@dataclass(frozen=True)
class Annulus:
    """
    Two boundary faces forming an annulus.

    ``roles[i]`` lists, for face ``faces[i]``, the vertices opposite its
    boundary circle, its crossing edge and its diagonal: the edges that
    receive the p, q and r edges of a plug.
    """

    faces: Tuple[FaceRef, FaceRef]
    roles: Tuple[Roles, Roles]


@dataclass(frozen=True)
class PluggedBlock:
    """A twisted I-bundle whose torus boundary is split into two annuli."""

    kind: str
    triangulation: Triangulation
    annuli: Tuple[Annulus, Annulus]
    origin: str = ''
    base: Optional[Triangulation] = None

    def __str__(self):
        return f"{self.kind} from {self.origin}"


def _face_edge_classes(tri: Triangulation, face: FaceRef) -> Optional[Dict[int, int]]:
    """Edge class of each side of a face mapped to the vertex opposite it, or None if a class repeats."""
    t, f = face
    result = {}
    for e, (a, b) in enumerate(EDGE_VERTICES):
        if f in (a, b):
            continue
        result[tri.skeleton.tet_edge[t][e]] = 6 - a - b - f
    return result if len(result) == 3 else None


def _annulus_sides(tri: Triangulation, x: FaceRef, y: FaceRef):
    ex, ey = _face_edge_classes(tri, x), _face_edge_classes(tri, y)
    if ex is None or ey is None:
        return None
    shared = sorted(set(ex) & set(ey))
    if len(shared) != 2:
        return None
    (cx,) = set(ex) - set(shared)
    (cy,) = set(ey) - set(shared)
    if cx == cy:
        return None
    return ex, ey, cx, cy, shared


def annulus_splittings(tri: Triangulation) -> Iterator[Tuple[Annulus, Annulus]]:
    """
    Ways to cut a four-triangle boundary torus into two annuli.

    Each annulus is a pair of faces sharing two edges; the remaining edge
    of each face is a boundary circle, and the two annuli share both
    circles. Either shared edge may act as the crossing edge.
    """
    faces = tri.boundary_faces()
    if len(faces) != 4:
        return
    first = faces[0]
    for partner in faces[1:]:
        rest = tuple(f for f in faces[1:] if f != partner)
        halves = [_annulus_sides(tri, first, partner), _annulus_sides(tri, *rest)]
        if None in halves:
            continue
        (_, _, cx1, cy1, shared1), (_, _, cx2, cy2, shared2) = halves
        if {cx1, cy1} != {cx2, cy2} or set(shared1) & set(shared2):
            continue
        for crossings in product((0, 1), repeat=2):
            annuli = []
            for (x, y), (ex, ey, cx, cy, shared), k in zip(((first, partner), rest), halves, crossings):
                c, d = shared[k], shared[1 - k]
                annuli.append(Annulus(faces=(x, y), roles=((ex[cx], ex[c], ex[d]), (ey[cy], ey[c], ey[d]))))
            yield annuli[0], annuli[1]


def plug_solid(p: int, q: int):
    """The layered solid torus (or Mobius band) plugging an annulus with parameters p, q."""
    if p == 0:
        raise ConstructionError(f"plug {p},{q} has p = 0")
    return lst(p, q, -(p + q))


def append_triangulation(builder: TriangulationBuilder, tri: Triangulation) -> int:
    """Copy ``tri`` into ``builder`` as new tetrahedra; return the index of the first."""
    offset = builder.size
    for _ in range(tri.size):
        builder.new_tetrahedron()
    for t in range(tri.size):
        for f in range(4):
            entry = tri.gluing(t, f)
            if entry is not None and builder.table[offset + t][f] is None:
                u, perm = entry
                builder.join(offset + t, f, offset + u, perm)
    return offset


def _attach(builder: TriangulationBuilder, annulus: Annulus, solid, swap: bool) -> None:
    (x, y), (rx, ry) = annulus.faces, annulus.roles
    if isinstance(solid, MobiusBand):
        # Fold the annulus about the edge of weight two; the other two roles trade places.
        k = solid.fold_index
        i, j = (m for m in range(3) if m != k)
        builder.join(x[0], x[1], y[0], Perm4.from_pairs((rx[k], rx[i], rx[j]), (ry[k], ry[j], ry[i])))
        return
    offset = append_triangulation(builder, solid.triangulation)
    targets = ((y, ry), (x, rx)) if swap else ((x, rx), (y, ry))
    for face, (target, roles) in zip(solid.boundary_faces(), targets):
        builder.join(offset + face[0], face[1], target[0], Perm4.from_pairs(solid.roles(face), roles))


def plug_block(block: PluggedBlock, first: Plug, second: Plug) -> Triangulation:
    """
    Attach a plug to each annulus of a block.

    Raises:
        ConstructionError: If a plug is invalid or no attachment closes up.
    """
    solids = [plug_solid(*first), plug_solid(*second)]
    choices = [(False, True) if isinstance(s, LayeredSolidTorus) else (False,) for s in solids]
    for swaps in product(*choices):
        builder = TriangulationBuilder.from_triangulation(block.triangulation)
        for annulus, solid, swap in zip(block.annuli, solids, swaps):
            _attach(builder, annulus, solid, swap)
        result = builder.build()
        if result.is_closed_manifold():
            return result
    raise ConstructionError(f"plugs {first} and {second} do not close up {block.kind}")


def _plugged_blocks(kind: str, bases: Sequence[Tuple[Triangulation, str, Optional[Triangulation]]]) -> Iterator[PluggedBlock]:
    for tri, origin, base in bases:
        for annuli in annulus_splittings(tri):
            yield PluggedBlock(kind, tri, annuli, origin, base)


def _build_plugged_member(block: PluggedBlock, member: GoldenMember) -> Triangulation:
    p1, q1, p2, q2 = member.name.params
    return plug_block(block, (p1, q1), (p2, q2))


def _plug_symmetric(block: PluggedBlock, built: Dict[str, Triangulation]) -> bool:
    """Whether swapping the two plugs of every member leaves its triangulation unchanged."""
    for text, tri in built.items():
        p1, q1, p2, q2 = parse_family_name(text).params
        if (p1, q1) == (p2, q2):
            continue
        try:
            swapped = plug_block(block, (p2, q2), (p1, q1))
        except ConstructionError:
            return False
        if signature(swapped) != signature(tri):
            return False
    return True

def _excluding(signatures: set, build: Callable) -> Callable:
    """Wrap a member builder so that triangulations already claimed by another kind are rejected."""

    def wrapped(block, member):
        tri = build(block, member)
        if signature(tri) in signatures:
            raise _Mismatch(f"{member.name} repeats a triangulation of another kind")
        return tri

    return wrapped


def _claimed(family: str, kinds: Sequence[str], resolve: Callable) -> set:
    result = set()
    for kind in kinds:
        block = resolve(kind)
        for member in golden_members(family, kind):
            result.add(signature(_build_plugged_member(block, member)))
    return result


@lru_cache(maxsize=None)
def _thin_bases() -> Tuple[Tuple[Triangulation, str, None], ...]:
    return tuple((b.triangulation, str(b.layout), None) for b in build_candidates(TWISTED_SIX_LAYOUTS, twisted=True))


@lru_cache(maxsize=None)
def resolve_thin_block(kind: str) -> PluggedBlock:
    """The block behind ``H[kind|...]``."""
    if kind not in THIN_KINDS:
        raise ConstructionError(f"unknown thin I-bundle {kind!r}")
    claimed = set(golden_bundle_signatures())
    claimed |= _claimed('H', THIN_KINDS[:THIN_KINDS.index(kind)], resolve_thin_block)
    return calibrate(
        f"H[{kind}]",
        _plugged_blocks(kind, _thin_bases()),
        _excluding(claimed, _build_plugged_member),
        golden_members('H', kind),
        _plug_symmetric,
    )


def plugged_thin(kind: str, p1: int, q1: int, p2: int = DEFAULT_PLUG[0], q2: int = DEFAULT_PLUG[1]) -> Triangulation:
    """Build ``H[kind|p1,q1|p2,q2]``."""
    return plug_block(resolve_thin_block(kind), (p1, q1), (p2, q2))


def _both_directions(face: FaceRef) -> List[DirectedEdge]:
    return [e for t, a, b in directed_face_edges(face) for e in ((t, a, b), (t, b, a))]


def attach_pyramid(tri: Triangulation, face: FaceRef, start: int, end: int) -> Triangulation:
    """
    Cap a two-triangle torus boundary with a square pyramid of two tetrahedra.

    The base diagonal of the pyramid covers the edge of ``face`` running from
    vertex ``start`` to vertex ``end``; the apex becomes a new vertex.

    Raises:
        ConstructionError: If the boundary is not two triangles or no
            attachment gives a valid triangulation.
    """
    faces = tri.boundary_faces()
    if len(faces) != 2 or face not in faces:
        raise ConstructionError(f"pyramids cap two-triangle boundaries, not {len(faces)} faces")
    (other,) = [f for f in faces if f != face]
    chain = directed_edge_chain(tri, face[0], start, end)
    third = 6 - start - end - face[1]
    for _, a, b in _both_directions(other):
        if directed_edge_chain(tri, other[0], a, b) != chain:
            continue
        builder = TriangulationBuilder.from_triangulation(tri)
        lower = builder.new_tetrahedron()
        upper = builder.new_tetrahedron()
        builder.join(lower, 1, upper, Perm4(0, 2, 1, 3))
        builder.join(lower, 3, face[0], Perm4.from_pairs((0, 2, 1), (start, end, third)))
        builder.join(upper, 3, other[0], Perm4.from_pairs((0, 1, 2), (a, b, 6 - a - b - other[1])))
        result = builder.build()
        if result.is_valid():
            return result
    raise ConstructionError(f"no pyramid fits over edge {start}{end} of {face}")


def _pyramid_variants(tri: Triangulation) -> List[Triangulation]:
    seen, result = set(), []
    face = tri.boundary_faces()[0]
    for _, start, end in _both_directions(face):
        try:
            capped = attach_pyramid(tri, face, start, end)
        except TriangulationError:
            continue
        sig = signature(capped)
        if sig not in seen:
            seen.add(sig)
            result.append(capped)
    return result


def _boundary_layerings(tri: Triangulation) -> List[Tuple[Triangulation, str]]:
    """One tetrahedron layered on each boundary edge in turn."""
    seen, result = set(), []
    for face in tri.boundary_faces():
        for t, a, b in directed_face_edges(face):
            edge_class = tri.skeleton.tet_edge[t][EDGE_NUMBER[(a, b)]]
            if edge_class in seen:
                continue
            seen.add(edge_class)
            try:
                layered, _ = layer_on_edge(tri, t, face[1], EDGE_NUMBER[(a, b)])
            except ConstructionError:
                continue
            result.append((layered, f"edge {edge_class}"))
    return result


@lru_cache(maxsize=None)
def _three_bases() -> Tuple[Triangulation, ...]:
    return tuple(b.triangulation for b in build_candidates(TWISTED_THREE_LAYOUTS, twisted=True))


@lru_cache(maxsize=None)
def _thick_bases(kind: str) -> Tuple[Tuple[Triangulation, str, Triangulation], ...]:
    """Five-tetrahedron two-vertex I-bundles for a kind, each with one boundary edge layered."""
    fives = []
    if kind == THICK_KINDS[0]:
        fives = [(b.triangulation, str(b.layout), b.triangulation) for b in build_candidates(TWISTED_FIVE_LAYOUTS, twisted=True)]
    else:
        for index, three in enumerate(_three_bases()):
            fives.extend((capped, f"three-tetrahedron bundle {index} with a pyramid", three) for capped in _pyramid_variants(three))
    result = []
    for five, origin, base in fives:
        for layered, where in _boundary_layerings(five):
            result.append((layered, f"{origin}, layered on {where}", base))
    return tuple(result)


@lru_cache(maxsize=None)
def resolve_thick_block(kind: str) -> PluggedBlock:
    """The block behind ``K[kind|...]``."""
    if kind not in THICK_KINDS:
        raise ConstructionError(f"unknown thick I-bundle {kind!r}")
    claimed = set(golden_bundle_signatures())
    claimed |= _claimed('H', THIN_KINDS, resolve_thin_block)
    claimed |= _claimed('K', THICK_KINDS[:THICK_KINDS.index(kind)], resolve_thick_block)
    return calibrate(
        f"K[{kind}]",
        _plugged_blocks(kind, _thick_bases(kind)),
        _excluding(claimed, _build_plugged_member),
        golden_members('K', kind),
        _plug_symmetric,
    )


def plugged_thick(kind: str, p1: int, q1: int, p2: int = DEFAULT_PLUG[0], q2: int = DEFAULT_PLUG[1]) -> Triangulation:
    """Build ``K[kind|p1,q1|p2,q2]``."""
    return plug_block(resolve_thick_block(kind), (p1, q1), (p2, q2))


# Exceptional triangulations

EXCEPTIONAL_HOMOLOGY = {
    '6,1': AbelianGroup(rank=1, torsion=(2, 2)),
    '6,2': AbelianGroup(rank=1, torsion=(4,)),
    '6,3': AbelianGroup(rank=2),
}


def _face_pairings(faces: Sequence[FaceRef]) -> Iterator[List[Tuple[FaceRef, FaceRef]]]:
    """Every way to pair up an even number of faces."""
    if not faces:
        yield []
        return
    first, rest = faces[0], faces[1:]
    for i, partner in enumerate(rest):
        for tail in _face_pairings(rest[:i] + rest[i + 1:]):
            yield [(first, partner)] + tail


def _all_face_maps(source: FaceRef, target: FaceRef) -> List[Perm4]:
    return [Perm4.from_pairs(face_vertices(source[1]), images) for images in permutations(face_vertices(target[1]))]


def _smallest_closing(tri: Triangulation, pairings: Iterator[List[Tuple[FaceRef, FaceRef]]],
                      homology: AbelianGroup, excluded: set) -> Triangulation:
    """The closing of ``tri`` with the given homology and the smallest signature."""
    best, best_sig = None, None
    for pairing in pairings:
        options = [(source, target, _all_face_maps(source, target)) for source, target in pairing]
        for result in glue_closed(tri, options):
            if result.is_orientable() or homology_h1(result) != homology:
                continue
            sig = signature(result)
            if sig in excluded:
                continue
            if best_sig is None or sig < best_sig:
                best, best_sig = result, sig
    if best is None:
        raise ConstructionError(f"no closing of the boundary has homology {homology}")
    return best


def _golden_signatures(index: int) -> set:
    """Signatures of every bundle and plugged census member and of the exceptional triangulations before ``index``."""
    result = set(golden_bundle_signatures())
    result |= _claimed('H', THIN_KINDS, resolve_thin_block)
    result |= _claimed('K', THICK_KINDS, resolve_thick_block)
    result |= {signature(exceptional(earlier)) for earlier in range(1, index)}
    return result


@lru_cache(maxsize=None)
def exceptional(index: int) -> Triangulation:
    """
    Build ``E[6,index]``.

    The first two close up the boundary torus of the thin I-bundles behind
    ``H[~T6^1]`` and ``H[~T6^2]`` by gluing its faces in pairs. The third
    glues two copies of the three-tetrahedron twisted I-bundle together
    along their boundaries.
    """
    key = f"6,{index}"
    if key not in EXCEPTIONAL_HOMOLOGY:
        raise ConstructionError(f"there is no exceptional triangulation E[{key}]")
    excluded = _golden_signatures(index)
    if index in (1, 2):
        tri = resolve_thin_block(THIN_KINDS[index - 1]).triangulation
        return _smallest_closing(tri, _face_pairings(tri.boundary_faces()), EXCEPTIONAL_HOMOLOGY[key], excluded)
    base = resolve_thick_block(THICK_KINDS[1]).base
    builder = TriangulationBuilder.from_triangulation(base)
    offset = append_triangulation(builder, base)
    doubled = builder.build()
    ours = [face for face in doubled.boundary_faces() if face[0] < offset]
    theirs = [face for face in doubled.boundary_faces() if face[0] >= offset]
    pairings = (list(zip(ours, order)) for order in permutations(theirs))
    return _smallest_closing(doubled, pairings, EXCEPTIONAL_HOMOLOGY[key], excluded)


# Names

def resolve_block(family: str, kind: str):
    """The calibrated block behind a family kind."""
    if family == 'B':
        return resolve_bundle_block(kind)
    if family == 'H':
        return resolve_thin_block(kind)
    if family == 'K':
        return resolve_thick_block(kind)
    raise ConstructionError(f"family {family!r} has no block")


def build_family(name: FamilyName):
    """
    Build the triangulation a family name describes.

    Returns a Triangulation, or for ``LST(2,-1,-1)`` and its relatives the
    Mobius band marker.
    """
    logger.debug(f"Building {format_family_name(name)}")
    if name.family == 'B':
        return layered_surface_bundle(name.kind, *name.params)
    if name.family == 'H':
        return plugged_thin(name.kind, *name.params)
    if name.family == 'K':
        return plugged_thick(name.kind, *name.params)
    if name.family == 'E':
        return exceptional(int(name.kind.split(',')[1]))
    if name.family == 'LST':
        solid = lst(*name.params)
        return solid if isinstance(solid, MobiusBand) else solid.triangulation
    raise ConstructionError(f"unknown family {name.family!r}")


def construct(text: str):
    """Parse a family name and build it."""
    return build_family(parse_family_name(text))
