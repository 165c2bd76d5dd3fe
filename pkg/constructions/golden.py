"""
Published census results for closed non-orientable minimal triangulations.

Every minimal P^2-irreducible triangulation on at most seven tetrahedra,
grouped by underlying 3-manifold, together with the summary counts those
groupings imply. Family names use the grammar of ``constructions.naming``.
"""
from dataclasses import dataclass
from typing import Dict, List, Tuple


@dataclass(frozen=True)
class GoldenManifold:
    """One census manifold with its first homology and minimal triangulations."""

    label: str
    tetrahedra: int
    homology: str
    members: Tuple[str, ...]


GOLDEN_MANIFOLDS: Tuple[GoldenManifold, ...] = (
    GoldenManifold(
        label='T2 x I / ((-1,1),(1,0))',
        tetrahedra=6,
        homology='Z',
        members=('B[T6^2|-1,1|1,0]',),
    ),
    GoldenManifold(
        label='T2 x I / ((0,1),(1,0))',
        tetrahedra=6,
        homology='Z + Z',
        members=(
            'B[T6^1|-1,0|-1,1]',
            'B[T6^1|0,-1|-1,0]',
            'B[T6^1|0,1|1,0]',
            'B[T6^1|1,0|1,-1]',
            'B[K6^1|0,-1|-1,0]',
            'B[K6^2|0,-1|-1,0]',
            'E[6,3]',
        ),
    ),
    GoldenManifold(
        label='K2 x S1',
        tetrahedra=6,
        homology='Z + Z + Z_2',
        members=(
            'B[T6^2|1,0|0,-1]',
            'B[K6^1|1,0|0,1]',
            'B[K6^2|1,0|0,1]',
        ),
    ),
    GoldenManifold(
        label='K2 x I / ((-1,1),(0,-1))',
        tetrahedra=6,
        homology='Z + Z_4',
        members=(
            'B[K6^1|0,1|1,0]',
            'B[K6^2|0,1|1,0]',
            'H[~T6^1]',
            'H[~T6^2]',
            'H[~T6^3]',
            'K[~T5^1]',
            'K[~T5^2]',
            'K[~T5^3]',
            'E[6,2]',
        ),
    ),
    GoldenManifold(
        label='K2 x I / ((1,0),(0,-1))',
        tetrahedra=6,
        homology='Z + Z_2 + Z_2',
        members=(
            'B[K6^1|-1,0|0,-1]',
            'B[K6^2|-1,0|0,-1]',
            'H[~T6^4]',
            'K[~T5^4]',
            'E[6,1]',
        ),
    ),
    GoldenManifold(
        label='T2 x I / ((2,1),(1,0))',
        tetrahedra=7,
        homology='Z + Z_2',
        members=(
            'B[T6^2|-1,1|2,-1]',
            'B[T6^2|0,-1|-1,2]',
            'B[T7|-1,-1|-1,0]',
            'B[T7|1,1|1,0]',
        ),
    ),
    GoldenManifold(
        label='SFS(RP2: (2,1) (3,1))',
        tetrahedra=7,
        homology='Z',
        members=(
            'H[~T6^1|3,-2]',
            'H[~T6^1|3,-1]',
            'H[~T6^2|3,-2]',
            'H[~T6^2|3,-1]',
            'H[~T6^3|3,-1]',
            'K[~T5^1|3,-1]',
            'K[~T5^2|3,-2]',
            'K[~T5^2|3,-1]',
            'K[~T5^3|3,-2]',
            'K[~T5^3|3,-1]',
        ),
    ),
    GoldenManifold(
        label='SFS(D: (2,1) (3,1))',
        tetrahedra=7,
        homology='Z + Z_2',
        members=(
            'H[~T6^4|3,-1]',
            'K[~T5^4|3,-2]',
            'K[~T5^4|3,-1]',
        ),
    ),
)

# Two six-tetrahedron names describe the same triangulation.
ISOMORPHIC_NAMES: Tuple[Tuple[str, str], ...] = (
    ('B[T6^1|0,1|1,0]', 'B[K6^2|0,-1|-1,0]'),
)

FAMILY_LABELS: Dict[str, str] = {
    'B-T': 'Layered torus bundles',
    'B-K': 'Layered Klein bottle bundles',
    'H': 'Plugged thin I-bundles',
    'K': 'Plugged thick I-bundles',
    'E': 'Exceptional triangulations',
}

# Triangulations and manifolds per tetrahedron count.
CENSUS_COUNTS: Dict[int, Tuple[int, int]] = {
    1: (0, 0),
    2: (0, 0),
    3: (0, 0),
    4: (0, 0),
    5: (0, 0),
    6: (24, 5),
    7: (17, 3),
}


def family_of(name: str) -> str:
    """The family key of a golden name, as used by ``FAMILY_LABELS``."""
    if name.startswith('B[K'):
        return 'B-K'
    if name.startswith('B['):
        return 'B-T'
    return name[0]


def members_by_size() -> Dict[int, List[str]]:
    result: Dict[int, List[str]] = {}
    for manifold in GOLDEN_MANIFOLDS:
        result.setdefault(manifold.tetrahedra, []).extend(manifold.members)
    return result


def family_frequencies() -> Dict[str, Dict[int, int]]:
    """
    How many golden names each family contributes per tetrahedron count.

    Names are counted, not triangulations: the six-tetrahedron column sums
    to one more than the census count because of ``ISOMORPHIC_NAMES``.
    """
    table: Dict[str, Dict[int, int]] = {key: {6: 0, 7: 0} for key in FAMILY_LABELS}
    for manifold in GOLDEN_MANIFOLDS:
        for name in manifold.members:
            table[family_of(name)][manifold.tetrahedra] += 1
    return table


def manifold_of(name: str) -> GoldenManifold:
    for manifold in GOLDEN_MANIFOLDS:
        if name in manifold.members:
            return manifold
    raise KeyError(name)
