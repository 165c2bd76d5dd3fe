"""
Homology and fundamental group of a triangulation.

Both are computed from the cell complex whose cells are the vertex, edge and
face classes of the skeleton. Integer linear algebra goes through sympy's
DomainMatrix over ZZ, so every entry is an arbitrary-precision integer.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from sympy import Matrix
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from .exceptions import DisconnectedError, InvalidTriangulationError
from .perm import EDGE_NUMBER, EDGE_VERTICES, face_vertices
from .triangulation import Triangulation

logger = logging.getLogger(__name__)

DEFAULT_TIETZE_STEPS = 10000


@dataclass(frozen=True)
class AbelianGroup:
    """
    A finitely generated abelian group Z^rank + Z_d1 + ... + Z_dk.

    ``torsion`` is kept in invariant-factor form: every entry is at least 2
    and each divides the next.
    """

    rank: int = 0
    torsion: Tuple[int, ...] = ()

    @classmethod
    def from_diagonal(cls, free: int, diagonal: Sequence[int]) -> 'AbelianGroup':
        """Build from a free rank and the diagonal of a Smith normal form."""
        torsion = tuple(sorted(abs(d) for d in diagonal if abs(d) > 1))
        for a, b in zip(torsion, torsion[1:]):
            if b % a:
                raise ValueError(f"diagonal {diagonal} is not a divisibility chain")
        return cls(rank=free, torsion=torsion)

    @classmethod
    def parse(cls, text: str) -> 'AbelianGroup':
        """Inverse of ``str``: ``"Z + Z + Z_2"``, ``"Z_4"``, ``"0"``."""
        text = text.strip()
        if text == '0':
            return cls()
        rank = 0
        torsion = []
        for term in text.split('+'):
            term = term.strip()
            if term == 'Z':
                rank += 1
            elif term.startswith('Z_') and term[2:].isdigit():
                torsion.append(int(term[2:]))
            else:
                raise ValueError(f"cannot parse group term {term!r}")
        return cls(rank=rank, torsion=tuple(sorted(torsion)))

    def __str__(self):
        terms = ['Z'] * self.rank + [f"Z_{d}" for d in self.torsion]
        return ' + '.join(terms) if terms else '0'


@dataclass(frozen=True)
class SmithForm:
    """Result of a Smith normal form decomposition: ``left * matrix * right == diagonal``."""

    diagonal: Tuple[int, ...]
    left: List[List[int]] = field(repr=False)
    right: List[List[int]] = field(repr=False)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _domain(rows: Sequence[Sequence[int]], shape: Tuple[int, int]) -> DomainMatrix:
    if shape[0] == 0 or shape[1] == 0:
        return DomainMatrix.zeros(shape, ZZ).to_dense()
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], shape, ZZ)


def _to_lists(m: DomainMatrix) -> List[List[int]]:
    return [[int(x) for x in row] for row in m.to_list()]


def smith_normal_form(matrix: Sequence[Sequence[int]], columns: Optional[int] = None) -> SmithForm:
    """
    Smith normal form of an integer matrix.

    Args:
        matrix: Rows of integers.
        columns: Column count, needed only when ``matrix`` has no rows.

    Returns:
        SmithForm: Diagonal entries d1 | d2 | ... (nonnegative) and unimodular
        transforms with ``left * matrix * right`` equal to the diagonal matrix.
    """
    rows = len(matrix)
    cols = columns if columns is not None else (len(matrix[0]) if rows else 0)
    m = _domain(matrix, (rows, cols))
    diagonal_matrix, left, right = smith_normal_decomp(m)
    d = _to_lists(diagonal_matrix)
    diagonal = [d[i][i] for i in range(min(rows, cols))]
    left = _to_lists(left)
    right = _to_lists(right)
    # Normalise signs so the diagonal is nonnegative.
    for i, value in enumerate(diagonal):
        if value < 0:
            diagonal[i] = -value
            left[i] = [-x for x in left[i]]
    return SmithForm(diagonal=tuple(diagonal), left=left, right=right)


def _require_valid(tri: Triangulation) -> None:
    if not tri.is_valid():
        raise InvalidTriangulationError("homology needs a valid triangulation")


def boundary_matrices(tri: Triangulation) -> Tuple[List[List[int]], List[List[int]]]:
    """
    Cellular boundary maps of the skeleton cell complex.

    Returns ``(d1, d2)`` where ``d1`` is vertices x edges and ``d2`` is
    edges x faces. Each edge class is oriented like its first member, and
    each face class like the increasing vertex order of its first member.
    """
    skeleton = tri.skeleton
    d1 = [[0] * skeleton.num_edges for _ in range(skeleton.num_vertices)]
    for e, members in enumerate(skeleton.edge_classes):
        t, tet_edge, orientation = members[0]
        a, b = _tet_edge_vertices(tet_edge)
        if orientation:
            a, b = b, a
        d1[skeleton.tet_vertex[t][b]][e] += 1
        d1[skeleton.tet_vertex[t][a]][e] -= 1
    d2 = [[0] * skeleton.num_faces for _ in range(skeleton.num_edges)]
    for f, members in enumerate(skeleton.face_classes):
        t, face = members[0]
        i, j, k = face_vertices(face)
        for (x, y), coefficient in (((j, k), 1), ((i, k), -1), ((i, j), 1)):
            tet_edge = EDGE_NUMBER[(x, y)]
            e = skeleton.tet_edge[t][tet_edge]
            sign = -1 if skeleton.edge_tet_orientation[t][tet_edge] else 1
            d2[e][f] += coefficient * sign
    return d1, d2


def _tet_edge_vertices(tet_edge: int) -> Tuple[int, int]:
    return EDGE_VERTICES[tet_edge]


def homology_h1(tri: Triangulation) -> AbelianGroup:
    """
    First homology with integer coefficients.

    Raises:
        InvalidTriangulationError: If some edge is identified with itself in
            reverse or a bounded vertex link is not a disc.
    """
    _require_valid(tri)
    skeleton = tri.skeleton
    d1, d2 = boundary_matrices(tri)
    rank_d1 = smith_normal_form(d1, skeleton.num_edges).rank
    snf = smith_normal_form(d2, skeleton.num_faces)
    free = skeleton.num_edges - rank_d1 - snf.rank
    return AbelianGroup.from_diagonal(free, [d for d in snf.diagonal if d != 0])


def homology_h1_z2(tri: Triangulation) -> int:
    """Dimension of H1 with Z/2 coefficients, read off H1 by universal coefficients."""
    group = homology_h1(tri)
    return group.rank + sum(1 for d in group.torsion if d % 2 == 0)


def _unimodular_inverse(matrix: List[List[int]]) -> List[List[int]]:
    size = len(matrix)
    if size == 0:
        return []
    inverse = Matrix(matrix).inv()
    return [[int(inverse[i, j]) for j in range(size)] for i in range(size)]


def _apply(matrix: List[List[int]], vector: Sequence[int]) -> List[int]:
    return [sum(a * b for a, b in zip(row, vector)) for row in matrix]


@dataclass(frozen=True)
class CycleClassMap:
    """
    Sends integer 1-cycles on the edge classes to coordinates in H1.

    Coordinates are the free part followed by one residue per torsion
    factor, so two cycles are homologous iff their coordinate tuples agree.
    """

    rank: int
    torsion: Tuple[int, ...]
    _cycle_rows: List[List[int]] = field(repr=False)
    _torsion_rows: List[List[int]] = field(repr=False)
    _free_rows: List[List[int]] = field(repr=False)

    def classify(self, chain: Sequence[int]) -> Tuple[int, ...]:
        y = _apply(self._cycle_rows, chain)
        free = _apply(self._free_rows, y)
        residues = [value % d for value, d in zip(_apply(self._torsion_rows, y), self.torsion)]
        return tuple(free) + tuple(residues)

    def free_part(self, chain: Sequence[int]) -> Tuple[int, ...]:
        return self.classify(chain)[:self.rank]


def cycle_class_map(tri: Triangulation) -> CycleClassMap:
    """
    Build the map from edge chains to H1 coordinates.

    The kernel of the first boundary map is read off its Smith form; the
    second boundary map is rewritten in that kernel basis and diagonalised
    again, which splits H1 into its free and torsion coordinates.
    """
    _require_valid(tri)
    skeleton = tri.skeleton
    edges = skeleton.num_edges
    d1, d2 = boundary_matrices(tri)
    first = smith_normal_form(d1, edges)
    kernel_start = first.rank
    to_kernel = _unimodular_inverse(first.right)[kernel_start:]
    relations = [_apply(to_kernel, [d2[e][f] for e in range(edges)]) for f in range(skeleton.num_faces)]
    # Columns of ``relations`` are faces; transpose to rows of the kernel basis.
    kernel_size = edges - kernel_start
    relation_matrix = [[relations[f][i] for f in range(len(relations))] for i in range(kernel_size)]
    second = smith_normal_form(relation_matrix, len(relations))
    nonzero = [d for d in second.diagonal if d != 0]
    torsion_rows = [second.left[i] for i, d in enumerate(nonzero) if d > 1]
    torsion = tuple(d for d in nonzero if d > 1)
    free_rows = second.left[len(nonzero):]
    return CycleClassMap(
        rank=kernel_size - len(nonzero),
        torsion=torsion,
        _cycle_rows=to_kernel,
        _torsion_rows=torsion_rows,
        _free_rows=free_rows,
    )


def directed_edge_chain(tri: Triangulation, tet: int, start: int, end: int) -> List[int]:
    """The edge chain of the tetrahedron edge running from vertex ``start`` to ``end``."""
    skeleton = tri.skeleton
    tet_edge = EDGE_NUMBER[(start, end)]
    chain = [0] * skeleton.num_edges
    sign = 1 if start < end else -1
    if skeleton.edge_tet_orientation[tet][tet_edge]:
        sign = -sign
    chain[skeleton.tet_edge[tet][tet_edge]] = sign
    return chain


# Fundamental group

Word = Tuple[int, ...]


@dataclass
class GroupPresentation:
    """
    Generators 0..generators-1 and relators as words.

    A word is a tuple of nonzero integers: ``k + 1`` stands for generator
    ``k`` and ``-(k + 1)`` for its inverse.
    """

    generators: int
    relators: List[Word]

    def abelianization(self) -> AbelianGroup:
        if self.generators == 0:
            return AbelianGroup()
        matrix = []
        for word in self.relators:
            row = [0] * self.generators
            for letter in word:
                row[abs(letter) - 1] += 1 if letter > 0 else -1
            matrix.append(row)
        snf = smith_normal_form(matrix, self.generators)
        return AbelianGroup.from_diagonal(self.generators - snf.rank, [d for d in snf.diagonal if d != 0])

    @staticmethod
    def _letter(letter: int) -> str:
        names = 'abcdefghijklmnopqrstuvwxyz'
        index = abs(letter) - 1
        name = names[index] if index < len(names) else f"g{index}"
        return name if letter > 0 else f"{name}^-1"

    def word_to_string(self, word: Word) -> str:
        parts = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            power = j - i
            base = self._letter(abs(word[i]))
            exponent = power if word[i] > 0 else -power
            parts.append(base if exponent == 1 else f"{base}^{exponent}")
            i = j
        return ' '.join(parts) if parts else '1'

    def __str__(self):
        names = ', '.join(self._letter(k + 1) for k in range(self.generators))
        relators = ', '.join(self.word_to_string(w) for w in self.relators)
        return f"< {names} | {relators} >"


def _reduce(word: Sequence[int]) -> Word:
    """Free and cyclic reduction."""
    stack: List[int] = []
    for letter in word:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    start, end = 0, len(stack)
    while end - start > 1 and stack[start] == -stack[end - 1]:
        start += 1
        end -= 1
    return tuple(stack[start:end])


def _cyclic_key(word: Word) -> Word:
    """Canonical representative of a relator up to rotation and inversion."""
    if not word:
        return word
    inverse = tuple(-x for x in reversed(word))
    candidates = []
    for w in (word, inverse):
        for i in range(len(w)):
            candidates.append(w[i:] + w[:i])
    return min(candidates)


def _invert(word: Word) -> Word:
    return tuple(-x for x in reversed(word))


def _substitute(word: Word, generator: int, replacement: Word) -> Word:
    out: List[int] = []
    for letter in word:
        if abs(letter) == generator:
            out.extend(replacement if letter > 0 else _invert(replacement))
        else:
            out.append(letter)
    return _reduce(out)


def simplify_presentation(presentation: GroupPresentation, max_steps: int = DEFAULT_TIETZE_STEPS) -> GroupPresentation:
    """
    Apply Tietze moves until none apply or the step budget is spent.

    Moves, tried in this order each round: drop trivial and duplicate
    relators; eliminate a generator occurring exactly once in some relator
    (shortest such relator first, lowest generator breaking ties).
    """
    relators = [_reduce(w) for w in presentation.relators]
    alive = set(range(1, presentation.generators + 1))
    steps = 0
    while steps < max_steps:
        unique = {}
        for w in relators:
            if w:
                unique.setdefault(_cyclic_key(w), w)
        relators = [unique[key] for key in sorted(unique, key=lambda k: (len(k), k))]
        candidate = None
        for index, w in enumerate(relators):
            counts: Dict[int, int] = {}
            for letter in w:
                counts[abs(letter)] = counts.get(abs(letter), 0) + 1
            singles = sorted(g for g, c in counts.items() if c == 1)
            if singles:
                candidate = (index, singles[0])
                break
        if candidate is None:
            break
        index, generator = candidate
        w = relators.pop(index)
        position = next(i for i, letter in enumerate(w) if abs(letter) == generator)
        rotated = w[position:] + w[:position]
        # rotated = g^e * rest, so g^e = rest^-1.
        rest = rotated[1:]
        replacement = _invert(rest) if rotated[0] > 0 else rest
        relators = [_substitute(r, generator, replacement) for r in relators]
        alive.discard(generator)
        steps += 1
    if steps >= max_steps:
        logger.warning(f"Tietze simplification stopped after {max_steps} steps")
    renumber = {g: i + 1 for i, g in enumerate(sorted(alive))}
    relators = [tuple(renumber[abs(x)] * (1 if x > 0 else -1) for x in w) for w in relators if w]
    return GroupPresentation(generators=len(alive), relators=relators)


def fundamental_group(tri: Triangulation, max_steps: int = DEFAULT_TIETZE_STEPS) -> GroupPresentation:
    """
    Presentation of the fundamental group from the 2-skeleton.

    Edges outside a spanning tree of the 1-skeleton are generators; each face
    class contributes the relator read around its boundary. The result is
    then simplified by Tietze moves.

    Raises:
        InvalidTriangulationError: If the triangulation is not valid.
        DisconnectedError: If it is disconnected.
    """
    _require_valid(tri)
    if not tri.is_connected():
        raise DisconnectedError("fundamental group needs a connected triangulation")
    skeleton = tri.skeleton

    # Spanning tree of the 1-skeleton, edges in class order.
    parent = list(range(skeleton.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    generator_of: Dict[int, int] = {}
    for e, members in enumerate(skeleton.edge_classes):
        t, tet_edge, _ = members[0]
        a, b = _tet_edge_vertices(tet_edge)
        ra, rb = find(skeleton.tet_vertex[t][a]), find(skeleton.tet_vertex[t][b])
        if ra != rb:
            parent[ra] = rb
        else:
            generator_of[e] = len(generator_of) + 1

    relators = []
    for members in skeleton.face_classes:
        t, face = members[0]
        i, j, k = face_vertices(face)
        word = []
        for x, y in ((i, j), (j, k), (k, i)):
            tet_edge = EDGE_NUMBER[(x, y)]
            e = skeleton.tet_edge[t][tet_edge]
            if e not in generator_of:
                continue
            forward = x < y
            if skeleton.edge_tet_orientation[t][tet_edge]:
                forward = not forward
            word.append(generator_of[e] if forward else -generator_of[e])
        relators.append(tuple(word))
    presentation = GroupPresentation(generators=len(generator_of), relators=relators)
    logger.debug(f"Raw presentation: {len(generator_of)} generators, {len(relators)} relators")
    return simplify_presentation(presentation, max_steps)
