"""
Thin I-bundles from well-balanced surface decompositions.

A decomposition of a closed surface into triangles and quadrilaterals is
thickened into a triangulation by enclosing each cell in its own
tetrahedron: a triangle separates vertex 3 from vertices 0, 1, 2 and a
quadrilateral separates {0, 1} from {2, 3}. Cell sides that meet in the
surface become identified tetrahedron faces; faces parallel to triangles
stay on the boundary.
"""
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union
import logging

from triangulations.exceptions import TriangulationError
from triangulations.isosig import signature
from triangulations.perm import EDGE_VERTICES, Perm4
from triangulations.triangulation import Triangulation, TriangulationBuilder

from .exceptions import ConstructionError, NotWellBalancedError
from .lst import FaceRef, walk_to_other_boundary_face

logger = logging.getLogger(__name__)

TRIANGLE = 3
QUAD = 4


# Tetrahedron edge through each corner of an enclosed cell, in cyclic order.
TRIANGLE_CORNERS: Tuple[Tuple[int, int], ...] = ((0, 3), (1, 3), (2, 3))
QUAD_CORNERS: Tuple[Tuple[int, int], ...] = ((0, 2), (0, 3), (1, 3), (1, 2))


def corner_edges(sides: int) -> Tuple[Tuple[int, int], ...]:
    return TRIANGLE_CORNERS if sides == TRIANGLE else QUAD_CORNERS


def side_geometry(sides: int, side: int) -> Tuple[int, int, int, int]:
    """
    Where side ``side`` of an enclosed cell meets its tetrahedron.

    Returns:
        Tuple: ``(face, cut, start, end)``. The side is a normal arc in
        ``face`` cutting off vertex ``cut``; ``start`` and ``end`` are the
        far vertices of the corner edges at the side's first and second
        corner.
    """
    corners = corner_edges(sides)
    first = set(corners[side])
    second = set(corners[(side + 1) % sides])
    (cut,) = first & second
    (start,) = first - {cut}
    (end,) = second - {cut}
    return 6 - cut - start - end, cut, start, end


@dataclass(frozen=True)
class SidePairing:
    """
    Side ``side_a`` of cell ``cell_a`` meets side ``side_b`` of ``cell_b``.

    Without a flip the first corner of one side meets the second corner of
    the other, as for two consistently oriented polygons.
    """

    cell_a: int
    side_a: int
    cell_b: int
    side_b: int
    flip: bool = False

    def corner_pairs(self, sizes: Sequence[int]) -> Tuple[Tuple[Tuple[int, int], Tuple[int, int]], ...]:
        na, nb = sizes[self.cell_a], sizes[self.cell_b]
        a0, a1 = (self.cell_a, self.side_a), (self.cell_a, (self.side_a + 1) % na)
        b0, b1 = (self.cell_b, self.side_b), (self.cell_b, (self.side_b + 1) % nb)
        if self.flip:
            return (a0, b0), (a1, b1)
        return (a0, b1), (a1, b0)


@dataclass
class Decomposition:
    """
    Triangles and quadrilaterals of a closed surface with their side pairings.

    ``cells[i]`` is 3 or 4. Every side appears in exactly one pairing.
    """

    cells: List[int] = field(default_factory=list)
    pairings: List[SidePairing] = field(default_factory=list)

    def add_cell(self, sides: int) -> int:
        self.cells.append(sides)
        return len(self.cells) - 1

    def pair(self, cell_a: int, side_a: int, cell_b: int, side_b: int, flip: bool = False) -> None:
        self.pairings.append(SidePairing(cell_a, side_a, cell_b, side_b, flip))

    @property
    def triangles(self) -> int:
        return sum(1 for c in self.cells if c == TRIANGLE)

    @property
    def quads(self) -> int:
        return sum(1 for c in self.cells if c == QUAD)

    def partner(self) -> Dict[Tuple[int, int], Tuple[int, int]]:
        """Map each side to the side it meets, checking that sides pair up exactly once."""
        result: Dict[Tuple[int, int], Tuple[int, int]] = {}
        for p in self.pairings:
            a, b = (p.cell_a, p.side_a), (p.cell_b, p.side_b)
            if a == b:
                raise ConstructionError(f"side {a} paired with itself")
            for side in (a, b):
                if side in result:
                    raise ConstructionError(f"side {side} is paired twice")
            result[a] = b
            result[b] = a
        for cell, sides in enumerate(self.cells):
            for s in range(sides):
                if (cell, s) not in result:
                    raise ConstructionError(f"side {s} of cell {cell} is unpaired")
        return result

    def vertices(self) -> Tuple[Dict[Tuple[int, int], int], int]:
        """Label the surface vertex at every cell corner."""
        parent: Dict[Tuple[int, int], Tuple[int, int]] = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for p in self.pairings:
            for x, y in p.corner_pairs(self.cells):
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[ry] = rx
        labels: Dict[Tuple[int, int], int] = {}
        roots: Dict[Tuple[int, int], int] = {}
        for cell, sides in enumerate(self.cells):
            for corner in range(sides):
                root = find((cell, corner))
                labels[(cell, corner)] = roots.setdefault(root, len(roots))
        return labels, len(roots)

    def euler_characteristic(self) -> int:
        _, vertices = self.vertices()
        return vertices - len(self.pairings) + len(self.cells)


def check_well_balanced(decomposition: Decomposition) -> None:
    """
    Raise unless all three well-balanced conditions hold.

    1. Every vertex meets an even number of quadrilateral corners.
    2. Removing the closed quadrilaterals leaves open discs.
    3. No walk through quadrilaterals by opposite sides closes up.

    Raises:
        NotWellBalancedError: Naming the failing condition and where.
    """
    cells = decomposition.cells
    partner = decomposition.partner()
    labels, vertex_count = decomposition.vertices()

    quad_corners = [0] * vertex_count
    for (cell, _corner), v in labels.items():
        if cells[cell] == QUAD:
            quad_corners[v] += 1
    for v, count in enumerate(quad_corners):
        if count % 2:
            raise NotWellBalancedError(1, f"vertex {v} meets {count} quadrilateral corners")

    # Triangle components joined across triangle-triangle sides.
    component = {c: c for c, sides in enumerate(cells) if sides == TRIANGLE}

    def find(c):
        while component[c] != c:
            component[c] = component[component[c]]
            c = component[c]
        return c

    shared_sides = []
    for p in decomposition.pairings:
        if cells[p.cell_a] == TRIANGLE and cells[p.cell_b] == TRIANGLE:
            shared_sides.append(p.cell_a)
            ra, rb = find(p.cell_a), find(p.cell_b)
            if ra != rb:
                component[rb] = ra
    euler: Dict[int, int] = {}
    for c in component:
        euler[find(c)] = euler.get(find(c), 0) + 1
    for c in shared_sides:
        euler[find(c)] -= 1
    owner: Dict[int, int] = {}
    for (cell, _corner), v in labels.items():
        if quad_corners[v] == 0:
            owner[v] = find(cell)
    for v, root in owner.items():
        euler[root] += 1
    for root, chi in euler.items():
        if chi != 1:
            raise NotWellBalancedError(2, f"triangles around cell {root} do not form a disc (euler characteristic {chi})")

    for cell, sides in enumerate(cells):
        if sides != QUAD:
            continue
        for entry in range(4):
            seen = set()
            current, side = cell, entry
            while cells[current] == QUAD:
                if (current, side) in seen:
                    raise NotWellBalancedError(3, f"quadrilateral {cell} lies on a cycle of quadrilaterals")
                seen.add((current, side))
                current, side = partner[(current, (side + 2) % 4)]


def enclosing_triangulation(decomposition: Decomposition, check: bool = True) -> Triangulation:
    """
    Thicken a well-balanced decomposition into a thin I-bundle.

    Tetrahedron ``i`` encloses cell ``i``. Each side pairing glues the two
    faces its sides cross, sending the cut-off vertex to the cut-off vertex
    and matching the corner edges as the sides are matched.
    """
    if check:
        check_well_balanced(decomposition)
    else:
        decomposition.partner()
    cells = decomposition.cells
    builder = TriangulationBuilder(len(cells))
    for p in decomposition.pairings:
        face_a, cut_a, start_a, end_a = side_geometry(cells[p.cell_a], p.side_a)
        face_b, cut_b, start_b, end_b = side_geometry(cells[p.cell_b], p.side_b)
        if p.flip:
            targets = (cut_b, start_b, end_b)
        else:
            targets = (cut_b, end_b, start_b)
        perm = Perm4.from_pairs((cut_a, start_a, end_a), targets)
        builder.join(p.cell_a, face_a, p.cell_b, perm)
    return builder.build()


def boundary_components(tri: Triangulation) -> List[List[FaceRef]]:
    """Boundary faces grouped into the surfaces they form."""
    faces = tri.boundary_faces()
    index = {face: i for i, face in enumerate(faces)}
    parent = list(range(len(faces)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, (t, f) in enumerate(faces):
        for e, (a, b) in enumerate(EDGE_VERTICES):
            if f in (a, b):
                continue
            other_t, other_f, _, _ = walk_to_other_boundary_face(tri, t, f, a, b)
            j = index[(other_t, other_f)]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[rj] = ri
    groups: Dict[int, List[FaceRef]] = {}
    for i, face in enumerate(faces):
        groups.setdefault(find(i), []).append(face)
    return list(groups.values())


def is_twisted(tri: Triangulation) -> bool:
    """A thin I-bundle is twisted iff its boundary is connected."""
    components = boundary_components(tri)
    if len(components) not in (1, 2):
        raise ConstructionError(f"thin I-bundle with {len(components)} boundary components")
    return len(components) == 1


# Grid layouts
#
# A grid decomposition tiles the surface by unit squares. Each square is a
# quadrilateral (axis 'Q' or rotated 'R'), a pair of triangles split along a
# diagonal ('/' or '\\') or a fan of four triangles around a centre ('F').
# Rows wrap horizontally; the top row meets the bottom row shifted, or
# reflected when ``glide`` is set, which makes the surface a Klein bottle.

DIRECTIONS = ('bottom', 'right', 'top', 'left')


def _square_cells(decomposition: Decomposition, kind: str) -> Dict[str, Tuple[int, int]]:
    """Add the cells of one square; return the cell side exposed in each direction."""
    if kind in ('Q', 'R'):
        q = decomposition.add_cell(QUAD)
        order = DIRECTIONS if kind == 'Q' else DIRECTIONS[1:] + DIRECTIONS[:1]
        return {direction: (q, s) for s, direction in enumerate(order)}
    if kind == '/':
        lower = decomposition.add_cell(TRIANGLE)  # BL, BR, TR
        upper = decomposition.add_cell(TRIANGLE)  # BL, TR, TL
        decomposition.pair(lower, 2, upper, 0)
        return {'bottom': (lower, 0), 'right': (lower, 1), 'top': (upper, 1), 'left': (upper, 2)}
    if kind == '\\':
        lower = decomposition.add_cell(TRIANGLE)  # BL, BR, TL
        upper = decomposition.add_cell(TRIANGLE)  # BR, TR, TL
        decomposition.pair(lower, 1, upper, 2)
        return {'bottom': (lower, 0), 'right': (upper, 0), 'top': (upper, 1), 'left': (lower, 2)}
    if kind == 'F':
        fan = [decomposition.add_cell(TRIANGLE) for _ in range(4)]
        for k in range(4):
            decomposition.pair(fan[k], 1, fan[(k + 1) % 4], 2)
        return {direction: (fan[k], 0) for k, direction in enumerate(DIRECTIONS)}
    raise ConstructionError(f"unknown grid square {kind!r}")


@dataclass(frozen=True)
class GridLayout:
    """
    Rows of square kinds, bottom row first.

    ``shift`` moves the top row's upper neighbours left; with ``glide`` the
    top of column ``x`` meets the bottom of column ``shift - 1 - x`` reversed.
    """

    rows: Tuple[str, ...]
    shift: int = 0
    glide: bool = False

    @property
    def width(self) -> int:
        return len(self.rows[0])

    @property
    def height(self) -> int:
        return len(self.rows)

    def decomposition(self) -> Decomposition:
        d = Decomposition()
        squares = {}
        for y, row in enumerate(self.rows):
            for x, kind in enumerate(row):
                squares[(x, y)] = _square_cells(d, kind)
        w, h = self.width, self.height
        for y in range(h):
            for x in range(w):
                right = squares[((x + 1) % w, y)]
                cell, side = squares[(x, y)]['right']
                d.pair(cell, side, *right['left'])
                cell, side = squares[(x, y)]['top']
                if y + 1 < h:
                    d.pair(cell, side, *squares[(x, y + 1)]['bottom'])
                elif self.glide:
                    d.pair(cell, side, *squares[((self.shift - 1 - x) % w, 0)]['bottom'], flip=True)
                else:
                    d.pair(cell, side, *squares[((x - self.shift) % w, 0)]['bottom'])
        return d

    def __str__(self):
        rows = '/'.join(self.rows)
        return f"{rows}{'~' if self.glide else '+'}{self.shift}"


# Candidate layouts for each named I-bundle. The named bundles are fixed by
# pictures rather than by their cell counts alone, so each name carries every
# layout consistent with its cell counts, surface and twisting; the family
# builders settle which candidate is meant (see families.resolve_block).


def _checkerboard(glide: bool) -> List[GridLayout]:
    return [
        GridLayout(rows=(lower + 'Q', 'Q' + upper), shift=1 if glide else 0, glide=glide)
        for lower, upper in product('/\\', repeat=2)
    ]


def row_layouts(squares: int, quads: int, glide: bool = False) -> List[GridLayout]:
    """
    Single-row layouts with ``squares`` triangle squares and ``quads`` quadrilaterals.

    Every arrangement of the two kinds of square is tried with every
    diagonal, every quadrilateral rotation and every shift.
    """
    width = squares + quads
    result = []
    for order in sorted(set(permutations('T' * squares + 'Q' * quads))):
        for tri_kinds in product('/\\', repeat=squares):
            for quad_kinds in product('QR', repeat=quads):
                diagonals, rotations = iter(tri_kinds), iter(quad_kinds)
                row = ''.join(next(diagonals) if slot == 'T' else next(rotations) for slot in order)
                result.extend(GridLayout(rows=(row,), shift=shift, glide=glide) for shift in range(width))
    return result


def grid_layouts(squares: str, glide: bool = False) -> List[GridLayout]:
    """
    Layouts of the given squares on every rectangular grid.

    ``squares`` has one letter per square: ``T`` for two triangles, ``Q``
    for a quadrilateral and ``F`` for a fan. Every arrangement is tried on
    every grid shape, widest first, with every diagonal, rotation and shift.
    """
    count = len(squares)
    kinds = {'T': ('/', '\\'), 'Q': ('Q', 'R'), 'F': ('F',)}
    result = []
    for width in range(count, 0, -1):
        if count % width:
            continue
        height = count // width
        for order in sorted(set(permutations(squares))):
            for cells in product(*(kinds[slot] for slot in order)):
                rows = tuple(''.join(cells[y * width:(y + 1) * width]) for y in range(height))
                result.extend(GridLayout(rows=rows, shift=shift, glide=glide) for shift in range(width))
    return result


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _split(items: Sequence, lengths: Sequence[int]) -> Tuple[tuple, ...]:
    result, start = [], 0
    for n in lengths:
        result.append(tuple(items[start:start + n]))
        start += n
    return tuple(result)


@dataclass(frozen=True)
class StripLayout:
    """
    Two pairs of triangles joined by strips of quadrilaterals.

    Cells 0 and 1 are the triangles facing one boundary, cells 2 and 3 those
    facing the other, and quadrilateral ``q`` is cell ``4 + q``. Side ``i``
    of triangle 0 reaches side ``lower[i]`` of triangle 1 through the
    quadrilaterals of ``lower_strips[i]``, entering each by side 1 and leaving
    by side 3. Side ``i`` of triangle 2 reaches side ``upper[i]`` of triangle
    3 through ``upper_strips[i]``, entering each quadrilateral by side 0 when
    its flag is set and by side 2 otherwise. ``flips`` has one entry per
    link, lower strips first.

    Around every boundary edge of a thin I-bundle the faces run from one
    boundary triangle to the other through the quadrilaterals on that edge,
    so every untwisted thin I-bundle with two triangles on each boundary has
    a layout of this form.
    """

    lower: Tuple[int, ...]
    upper: Tuple[int, ...]
    lower_strips: Tuple[Tuple[int, ...], ...]
    upper_strips: Tuple[Tuple[Tuple[int, bool], ...], ...]
    flips: Tuple[bool, ...] = ()

    @property
    def quads(self) -> int:
        return sum(len(strip) for strip in self.lower_strips)

    def lower_links(self) -> List[Tuple[int, int, int, int]]:
        result = []
        for side, strip in enumerate(self.lower_strips):
            current = (0, side)
            for q in strip:
                result.append(current + (4 + q, 1))
                current = (4 + q, 3)
            result.append(current + (1, self.lower[side]))
        return result

    def upper_links(self) -> List[Tuple[int, int, int, int]]:
        result = []
        for side, strip in enumerate(self.upper_strips):
            current = (2, side)
            for q, forward in strip:
                entry, leave = (0, 2) if forward else (2, 0)
                result.append(current + (4 + q, entry))
                current = (4 + q, leave)
            result.append(current + (3, self.upper[side]))
        return result

    def decomposition(self) -> Decomposition:
        d = Decomposition()
        for _ in range(4):
            d.add_cell(TRIANGLE)
        for _ in range(self.quads):
            d.add_cell(QUAD)
        links = self.lower_links() + self.upper_links()
        flips = self.flips or (False,) * len(links)
        for link, flip in zip(links, flips):
            d.pair(*link, flip=flip)
        return d

    def __str__(self):
        lower = ','.join(''.join(map(str, s)) + f'>{t}' for s, t in zip(self.lower_strips, self.lower))
        upper = ','.join(
            ''.join(f"{q}{'' if forward else '^'}" for q, forward in s) + f'>{t}'
            for s, t in zip(self.upper_strips, self.upper)
        )
        flips = ''.join('1' if f else '0' for f in self.flips)
        return f"strips[{lower}|{upper}|{flips}]"


def _free_links(links: Sequence[Tuple[int, int, int, int]], joined: Sequence[int]) -> List[int]:
    """Links closing a cycle once the cells in ``joined`` are already connected."""
    parent: Dict[int, int] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x

    for cell in joined[1:]:
        parent[find(cell)] = find(joined[0])
    free = []
    for i, (a, _, b, _) in enumerate(links):
        ra, rb = find(a), find(b)
        if ra == rb:
            free.append(i)
        else:
            parent[rb] = ra
    return free


def _strip_flips(strips: Sequence[tuple], flips: Sequence[bool]) -> List[bool]:
    """Whether each strip, read as one side pairing, is flipped."""
    result, start = [], 0
    for strip in strips:
        n = len(strip) + 1
        result.append(sum(flips[start:start + n]) % 2 == 1)
        start += n
    return result


def _one_vertex_surface(sides: Sequence[int], flips: Sequence[bool]) -> bool:
    """Whether two triangles, side i of one meeting side ``sides[i]`` of the other, close up with one vertex."""
    d = Decomposition()
    d.add_cell(TRIANGLE)
    d.add_cell(TRIANGLE)
    for side, (other, flip) in enumerate(zip(sides, flips)):
        d.pair(0, side, 1, other, flip=flip)
    return d.euler_characteristic() == 0


def _with_flips(links: int, free: Sequence[int], flips: bool) -> Iterator[Tuple[bool, ...]]:
    if not flips:
        yield (False,) * links
        return
    for bits in product((False, True), repeat=len(free)):
        chosen = [False] * links
        for i, bit in zip(free, bits):
            chosen[i] = bit
        yield tuple(chosen)


def strip_layouts(quads: int, flips: bool = False) -> Iterator[StripLayout]:
    """
    Strip layouts with ``quads`` quadrilaterals whose surface has Euler characteristic 0.

    Without ``flips`` every side pairing keeps orientation and only tori
    arise. With ``flips`` the pairings outside a spanning tree of the cells
    may also reverse it, which reaches the Klein bottles too. Triangles 1
    and 3 are rotated so that side 0 of the first triangle of each pair
    reaches their side 0.
    """
    matchings = ((0, 1, 2), (0, 2, 1))
    lower_cells = [0, 1] + [4 + q for q in range(quads)]
    lowers = []
    for lower in matchings:
        for lengths in _compositions(quads, 3):
            strips = _split(range(quads), lengths)
            links = StripLayout(lower, lower, strips, ((), (), ())).lower_links()
            for bits in _with_flips(len(links), _free_links(links, [links[0][0]]), flips):
                if _one_vertex_surface(lower, _strip_flips(strips, bits)):
                    lowers.append((lower, strips, bits))
    uppers = []
    for upper in matchings:
        for order in permutations(range(quads)):
            for lengths in _compositions(quads, 3):
                for forwards in product((True, False), repeat=quads):
                    strips = _split(tuple(zip(order, forwards)), lengths)
                    links = StripLayout(upper, upper, ((),) * 3, strips).upper_links()
                    for bits in _with_flips(len(links), _free_links(links, lower_cells), flips):
                        if _one_vertex_surface(upper, _strip_flips(strips, bits)):
                            uppers.append((upper, strips, bits))
    for lower, lower_strips, lower_bits in lowers:
        for upper, upper_strips, upper_bits in uppers:
            layout = StripLayout(lower, upper, lower_strips, upper_strips, lower_bits + upper_bits)
            if layout.decomposition().euler_characteristic() == 0:
                yield layout


# The first layouts of each list are the simplest pictures; build_candidates
# drops the repeats the wider grids produce.
UNTWISTED_TORUS_LAYOUTS = _checkerboard(glide=False) + row_layouts(2, 2) + grid_layouts('TTQQ') + grid_layouts('FQQ')
UNTWISTED_KLEIN_LAYOUTS = (
    _checkerboard(glide=True) + row_layouts(2, 2, glide=True)
    + grid_layouts('TTQQ', glide=True) + grid_layouts('FQQ', glide=True)
)
TWISTED_SIX_LAYOUTS = row_layouts(2, 2)
TWISTED_THREE_LAYOUTS = row_layouts(1, 1)
TWISTED_FIVE_LAYOUTS = [GridLayout(rows=(row,), shift=shift) for row in ('FQ', 'FR', 'QF', 'RF') for shift in range(2)]
Layout = Union[GridLayout, StripLayout]


@dataclass(frozen=True)
class ThinIBundle:
    """An enclosing triangulation together with the layout it came from."""

    layout: Layout
    triangulation: Triangulation

    @property
    def twisted(self) -> bool:
        return is_twisted(self.triangulation)


def build_candidates(layouts: Iterable[Layout], twisted: bool) -> List[ThinIBundle]:
    """
    Enclosing triangulations of the well-balanced layouts with the requested twisting.

    Layouts failing a well-balanced condition or giving the other twisting
    are skipped; isomorphic results are kept once.
    """
    seen = set()
    result = []
    for layout in layouts:
        try:
            tri = enclosing_triangulation(layout.decomposition())
            if not tri.is_valid():
                logger.debug(f"Layout {layout} gives an invalid triangulation")
                continue
            bundle = ThinIBundle(layout=layout, triangulation=tri)
            if bundle.twisted != twisted:
                continue
        except TriangulationError as e:
            logger.debug(f"Layout {layout} rejected: {e}")
            continue
        sig = signature(tri)
        if sig in seen:
            continue
        seen.add(sig)
        result.append(bundle)
    return result
