"""
Face pairings up to relabelling.

A face pairing of n tetrahedra matches the 4n faces in 2n pairs, ignoring
the permutations used to glue them. Since the faces of a tetrahedron can be
relabelled freely, a face pairing is the same thing as a connected
4-regular multigraph on the tetrahedra, loops allowed; it is stored as the
symmetric matrix of edge multiplicities with loops on the diagonal.

Pairings are generated in breadth-first order: every tetrahedron after the
first is joined to an earlier one, and the earliest neighbour of each
tetrahedron never decreases. The canonical form is the breadth-first
relabelling with the smallest key, so partial pairings that break this
ordering can never complete to a canonical pairing and are abandoned.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, List, Optional, Sequence, Tuple
import logging

from triangulations.exceptions import UnsupportedSizeError

logger = logging.getLogger(__name__)

Face = Tuple[int, int]
Matrix = Tuple[Tuple[int, ...], ...]

DEGREE = 4


@dataclass(frozen=True)
class FacePairing:
    """
    A face pairing given by its multiplicity matrix.

    ``matrix[i][i]`` counts loops at tetrahedron i (each uses two faces);
    ``matrix[i][j]`` counts faces of i glued to faces of j.
    """

    matrix: Matrix

    @property
    def size(self) -> int:
        return len(self.matrix)

    @cached_property
    def pairs(self) -> Tuple[Tuple[Face, Face], ...]:
        """
        Explicit face pairs, smallest face first, sorted.

        Faces of each tetrahedron are handed out in order: its loops first,
        then its joins to tetrahedra in increasing order.
        """
        n = self.size
        next_face = [0] * n
        result = []

        def take(t: int) -> Face:
            face = (t, next_face[t])
            next_face[t] += 1
            return face

        for i in range(n):
            for _ in range(self.matrix[i][i]):
                result.append((take(i), take(i)))
            for j in range(i + 1, n):
                for _ in range(self.matrix[i][j]):
                    result.append((take(i), take(j)))
        return tuple(sorted(result))

    def key(self) -> Tuple[int, ...]:
        return _key(self.matrix, list(range(self.size)))

    def is_canonical(self) -> bool:
        return self.key() == canonical_key(self.matrix)

    def to_text(self) -> str:
        """``0:0-0:1 0:2-1:0 ...``"""
        return ' '.join(f"{a}:{b}-{c}:{d}" for (a, b), (c, d) in self.pairs)

    def __str__(self):
        return self.to_text()


def _key(matrix: Sequence[Sequence[int]], order: Sequence[int]) -> Tuple[int, ...]:
    """Upper triangle column by column after placing tetrahedron ``order[k]`` at position k."""
    return tuple(matrix[order[i]][order[j]] for j in range(len(order)) for i in range(j + 1))


def _bfs_order_ok(matrix: Sequence[Sequence[int]], order: Sequence[int]) -> bool:
    """Every placed tetrahedron after the first has an earlier neighbour, and earliest neighbours never decrease."""
    previous = 0
    for k in range(1, len(order)):
        parents = [i for i in range(k) if matrix[order[i]][order[k]]]
        if not parents or parents[0] < previous:
            return False
        previous = parents[0]
    return True


def canonical_key(matrix: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    """
    The smallest key over all breadth-first relabellings.

    Positions are filled one at a time and a branch is cut as soon as its
    key prefix exceeds the best found.
    """
    n = len(matrix)
    best: List[Optional[Tuple[int, ...]]] = [None]

    def extend(order: List[int], parent: int, prefix: Tuple[int, ...]) -> None:
        k = len(order)
        if k == n:
            if best[0] is None or prefix < best[0]:
                best[0] = prefix
            return
        for t in range(n):
            if t in order:
                continue
            column = tuple(matrix[order[i]][t] for i in range(k)) + (matrix[t][t],)
            if k:
                parents = [i for i in range(k) if column[i]]
                if not parents or parents[0] < parent:
                    continue
                next_parent = parents[0]
            else:
                next_parent = 0
            candidate = prefix + column
            if best[0] is not None and candidate > best[0][:len(candidate)]:
                continue
            extend(order + [t], next_parent, candidate)

    extend([], 0, ())
    return best[0]


def _labelled_pairings(n: int) -> Iterator[List[List[int]]]:
    """
    Breadth-first labelled 4-regular multigraphs on ``n`` nodes.

    Node i's row is completed before node i + 1's; node i + 1 must already be
    joined to an earlier node when its turn comes.
    """
    matrix = [[0] * n for _ in range(n)]
    degree = [0] * n

    def fill(i: int, j: int, parent: int) -> Iterator[List[List[int]]]:
        if i == n:
            yield [row[:] for row in matrix]
            return
        if j == i:
            if i and not any(matrix[k][i] for k in range(i)):
                return
            if i:
                first = next(k for k in range(i) if matrix[k][i])
                if first < parent:
                    return
                parent = first
            # Loops at i.
            for loops in range((DEGREE - degree[i]) // 2 + 1):
                matrix[i][i] = loops
                degree[i] += 2 * loops
                yield from fill(i, i + 1, parent)
                degree[i] -= 2 * loops
            matrix[i][i] = 0
            return
        if j == n:
            if degree[i] == DEGREE:
                yield from fill(i + 1, i + 1, parent)
            return
        room = min(DEGREE - degree[i], DEGREE - degree[j])
        for count in range(room, -1, -1):
            matrix[i][j] = matrix[j][i] = count
            degree[i] += count
            degree[j] += count
            yield from fill(i, j + 1, parent)
            degree[i] -= count
            degree[j] -= count
        matrix[i][j] = matrix[j][i] = 0

    yield from fill(0, 0, 0)


def enumerate_face_pairings(n: int, max_size: int = 8) -> List[FacePairing]:
    """
    One canonical face pairing for every connected closed face pairing on ``n`` tetrahedra.

    Raises:
        UnsupportedSizeError: If ``n`` is below 1 or above ``max_size``.
    """
    if n < 1 or n > max_size:
        raise UnsupportedSizeError(f"face pairings are enumerated for 1 to {max_size} tetrahedra, not {n}")
    result = []
    examined = 0
    for matrix in _labelled_pairings(n):
        examined += 1
        frozen = tuple(tuple(row) for row in matrix)
        pairing = FacePairing(frozen)
        if pairing.is_canonical():
            result.append(pairing)
    result.sort(key=lambda p: p.key())
    logger.info(f"Found {len(result)} face pairings on {n} tetrahedra from {examined} labelled pairings")
    return result


def parse_face_pairing(text: str) -> FacePairing:
    """Inverse of ``FacePairing.to_text``."""
    pairs = []
    for chunk in text.split():
        left, right = chunk.split('-')
        pairs.append(tuple(tuple(int(x) for x in side.split(':')) for side in (left, right)))
    n = max(max(a[0], b[0]) for a, b in pairs) + 1
    matrix = [[0] * n for _ in range(n)]
    for (a, _), (b, _) in pairs:
        if a == b:
            matrix[a][a] += 1
        else:
            matrix[a][b] += 1
            matrix[b][a] += 1
    return FacePairing(tuple(tuple(row) for row in matrix))
