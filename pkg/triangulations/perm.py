"""
Permutations of the four vertex labels of a tetrahedron.

Every gluing in a triangulation is described by one of these. Instances are
interned, so there are exactly 24 Perm4 objects per process and identity
comparison is equality.
"""
from itertools import permutations
from typing import Iterable, List, Tuple


class Perm4:
    """
    A permutation of {0, 1, 2, 3}.

    The permutation is stored by its images: ``Perm4(1, 0, 3, 2)`` maps
    0->1, 1->0, 2->3 and 3->2. Composition follows function notation, so
    ``(p * q)(i) == p(q(i))``.
    """

    __slots__ = ('images', 'index', '_sign')

    _table: dict = {}
    _by_index: List['Perm4'] = []

    def __new__(cls, *images):
        if len(images) == 1 and not isinstance(images[0], int):
            images = tuple(images[0])
        try:
            return cls._table[tuple(images)]
        except KeyError:
            raise ValueError(f"Not a permutation of 0123: {images}") from None

    def __reduce__(self):
        return (Perm4, (self.images,))

    @classmethod
    def _intern(cls, images: Tuple[int, ...], index: int) -> 'Perm4':
        perm = object.__new__(cls)
        perm.images = images
        perm.index = index
        inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if images[i] > images[j])
        perm._sign = -1 if inversions % 2 else 1
        return perm

    # Construction helpers

    @classmethod
    def identity(cls) -> 'Perm4':
        return cls._by_index[0]

    @classmethod
    def from_index(cls, index: int) -> 'Perm4':
        return cls._by_index[index]

    @classmethod
    def all(cls) -> List['Perm4']:
        """All 24 permutations in lexicographic order of their images."""
        return list(cls._by_index)

    @classmethod
    def transposition(cls, a: int, b: int) -> 'Perm4':
        images = [0, 1, 2, 3]
        images[a], images[b] = images[b], images[a]
        return cls(images)

    @classmethod
    def from_pairs(cls, sources: Iterable[int], targets: Iterable[int]) -> 'Perm4':
        """
        Build the permutation sending ``sources[i]`` to ``targets[i]``.

        Three pairs are enough: the fourth image is forced.
        """
        sources = list(sources)
        targets = list(targets)
        if len(sources) == 3:
            sources.append(6 - sum(sources))
            targets.append(6 - sum(targets))
        images = [None] * 4
        for s, t in zip(sources, targets):
            images[s] = t
        return cls(images)

    @classmethod
    def from_string(cls, text: str) -> 'Perm4':
        if len(text) != 4 or not text.isdigit():
            raise ValueError(f"Not a permutation string: {text!r}")
        return cls(int(c) for c in text)

    # Algebra

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: 'Perm4') -> 'Perm4':
        return Perm4(self.images[other.images[i]] for i in range(4))

    def inverse(self) -> 'Perm4':
        images = [0] * 4
        for i, image in enumerate(self.images):
            images[image] = i
        return Perm4(images)

    def sign(self) -> int:
        return self._sign

    def is_even(self) -> bool:
        return self._sign == 1

    def pre_image(self, image: int) -> int:
        return self.images.index(image)

    # Ordering and printing

    def __hash__(self):
        return self.index

    def __lt__(self, other: 'Perm4') -> bool:
        return self.index < other.index

    def __str__(self):
        return ''.join(str(i) for i in self.images)

    def __repr__(self):
        return f"Perm4({str(self)})"


for _index, _images in enumerate(permutations(range(4))):
    _perm = Perm4._intern(_images, _index)
    Perm4._table[_images] = _perm
    Perm4._by_index.append(_perm)

# Unordered vertex pairs, indexed the same way in every tetrahedron.
EDGE_VERTICES: Tuple[Tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_NUMBER = {pair: e for e, pair in enumerate(EDGE_VERTICES)}
EDGE_NUMBER.update({(b, a): e for (a, b), e in list(EDGE_NUMBER.items())})


def edge_opposite(edge: int) -> int:
    """Index of the edge disjoint from ``edge`` in the same tetrahedron."""
    return 5 - edge


def face_vertices(face: int) -> Tuple[int, int, int]:
    """The three vertices of the face opposite vertex ``face``, in increasing order."""
    return tuple(v for v in range(4) if v != face)


def face_edges(face: int) -> Tuple[int, int, int]:
    """The three edges lying in the face opposite vertex ``face``."""
    return tuple(e for e, (a, b) in enumerate(EDGE_VERTICES) if face not in (a, b))
