"""
Gluing permutations for a face pairing.

Each face pair is glued by one of the six maps taking the first face onto
the second. Pairs are assigned depth first. Tetrahedron edges are tracked in
a union-find structure that also records relative orientation, so a branch
is abandoned the moment an edge becomes identified with itself in reverse.
In aggressive mode a branch is also abandoned when it completes an edge of
degree one or two. Completed triangulations are kept once per isomorphism
class, compared by isomorphism signature.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Set, Tuple
import logging

from triangulations.isosig import signature
from triangulations.perm import EDGE_NUMBER, EDGE_VERTICES, Perm4
from triangulations.triangulation import Triangulation, TriangulationBuilder

from .pairings import Face, FacePairing

logger = logging.getLogger(__name__)

# Degrees of completed edges pruned in aggressive mode.
LOW_DEGREE = 2


class CensusMode(str, Enum):
    CONSERVATIVE = "conservative"
    AGGRESSIVE = "aggressive"


@dataclass(frozen=True)
class CensusFilter:
    """
    What the gluing search keeps.

    Invalid edges are always pruned; there is no flag for it.
    """

    require_closed: bool = True
    require_non_orientable: bool = True
    prune_low_degree_edges: bool = False

    @property
    def prune_invalid_edges(self) -> bool:
        return True

    @classmethod
    def for_mode(cls, mode: CensusMode, non_orientable: bool = True) -> 'CensusFilter':
        return cls(
            require_non_orientable=non_orientable,
            prune_low_degree_edges=CensusMode(mode) == CensusMode.AGGRESSIVE,
        )


def face_maps(source: int, target: int) -> List[Perm4]:
    """The six permutations sending face ``source`` to face ``target``, in index order."""
    return [p for p in Perm4.all() if p(source) == target]


class EdgeUnion:
    """
    Union-find over tetrahedron edges with orientation parity.

    Node ``6 * tet + edge``; the parity of a node says whether its edge runs
    against the orientation of its class representative.
    """

    def __init__(self, n: int):
        self.parent = list(range(6 * n))
        self.parity = [0] * (6 * n)

    def copy(self) -> 'EdgeUnion':
        other = EdgeUnion.__new__(EdgeUnion)
        other.parent = self.parent[:]
        other.parity = self.parity[:]
        return other

    def find(self, x: int) -> Tuple[int, int]:
        parity = 0
        while self.parent[x] != x:
            parity ^= self.parity[x]
            x = self.parent[x]
        return x, parity

    def union(self, a: int, b: int, flipped: int) -> bool:
        """Identify a with b (reversed when ``flipped``); False if that reverses an edge onto itself."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == flipped
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ flipped
        return True

    def members(self, x: int) -> List[int]:
        root, _ = self.find(x)
        return [y for y in range(len(self.parent)) if self.find(y)[0] == root]


class GluingSearch:
    """Depth-first search over the gluing permutations of one face pairing."""

    def __init__(self, pairing: FacePairing, census_filter: CensusFilter):
        self.pairing = pairing
        self.filter = census_filter
        self.n = pairing.size
        self.pairs: Sequence[Tuple[Face, Face]] = pairing.pairs
        self.options = [face_maps(f, g) for (_, f), (_, g) in self.pairs]
        self.glued: List[List[bool]] = [[False] * 4 for _ in range(self.n)]
        self.signatures: Set[str] = set()
        self.visited = 0

    def run(self, first: Optional[int] = None) -> Iterator[Triangulation]:
        """
        Closed, valid triangulations passing the filter.

        Args:
            first: Index of the permutation used for the first pair, or None
                for all six.
        """
        choices: List[Perm4] = []
        yield from self._extend(0, choices, EdgeUnion(self.n), first)

    def _extend(self, depth: int, choices: List[Perm4], edges: EdgeUnion, first: Optional[int]) -> Iterator[Triangulation]:
        if depth == len(self.pairs):
            tri = self._complete(choices)
            if tri is not None:
                yield tri
            return
        (t, f), (u, g) = self.pairs[depth]
        options = self.options[depth]
        if depth == 0 and first is not None:
            options = [options[first]]
        for perm in options:
            self.visited += 1
            branch = edges.copy()
            if not self._glue(branch, t, f, u, perm):
                continue
            self.glued[t][f] = self.glued[u][g] = True
            if not (self.filter.prune_low_degree_edges and self._low_degree(branch, t, f)):
                choices.append(perm)
                yield from self._extend(depth + 1, choices, branch, first)
                choices.pop()
            self.glued[t][f] = self.glued[u][g] = False

    @staticmethod
    def _glue(edges: EdgeUnion, t: int, f: int, u: int, perm: Perm4) -> bool:
        for e, (a, b) in enumerate(EDGE_VERTICES):
            if f in (a, b):
                continue
            x, y = perm(a), perm(b)
            if not edges.union(6 * t + e, 6 * u + EDGE_NUMBER[(x, y)], int(x > y)):
                return False
        return True

    def _complete_class(self, members: Sequence[int]) -> bool:
        for node in members:
            t, e = divmod(node, 6)
            a, b = EDGE_VERTICES[e]
            if not all(self.glued[t][face] for face in range(4) if face not in (a, b)):
                return False
        return True

    def _low_degree(self, edges: EdgeUnion, t: int, f: int) -> bool:
        """Whether the last gluing completed an edge of low degree."""
        for e, (a, b) in enumerate(EDGE_VERTICES):
            if f in (a, b):
                continue
            members = edges.members(6 * t + e)
            if len(members) <= LOW_DEGREE and self._complete_class(members):
                return True
        return False

    def _complete(self, choices: Sequence[Perm4]) -> Optional[Triangulation]:
        builder = TriangulationBuilder(self.n)
        for ((t, f), (u, _)), perm in zip(self.pairs, choices):
            builder.join(t, f, u, perm)
        tri = builder.build()
        if self.filter.require_closed and not tri.is_closed_manifold():
            return None
        if self.filter.require_non_orientable and tri.is_orientable():
            return None
        sig = signature(tri)
        if sig in self.signatures:
            return None
        self.signatures.add(sig)
        return tri


def enumerate_gluings(pairing: FacePairing, census_filter: CensusFilter, first: Optional[int] = None) -> Iterator[Triangulation]:
    """One triangulation per isomorphism class among those with this face pairing that pass the filter."""
    search = GluingSearch(pairing, census_filter)
    yield from search.run(first)
    logger.debug(f"Pairing {pairing} (first={first}): {search.visited} nodes visited")
