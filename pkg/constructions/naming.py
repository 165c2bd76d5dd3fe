"""
Family names and the manifolds they triangulate.

Family names follow a small bracket grammar::

    B[T7|1,1|1,0]       layered surface bundle, kind then p,q|r,s
    H[~T6^1|3,-1]       plugged thin I-bundle, up to two plug pairs
    K[~T5^4|3,-2]       plugged thick I-bundle, up to two plug pairs
    E[6,3]              exceptional triangulation
    LST(3,7,-10)        layered solid torus

Plug pairs left out of an H or K name default to 2,-1 (a Mobius band).
Canonical formatting drops trailing default plugs, so every golden name
formats back to itself.

Manifold names are torus bundles, Klein bottle bundles or Seifert fibred
spaces over RP2 or over a disc with reflector boundary.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple, Union
import logging
import re

import numpy as np

from .exceptions import ConstructionError, NameParseError

logger = logging.getLogger(__name__)

BUNDLE_KINDS = ('T6^1', 'T6^2', 'T7', 'K6^1', 'K6^2')
THIN_KINDS = ('~T6^1', '~T6^2', '~T6^3', '~T6^4')
THICK_KINDS = ('~T5^1', '~T5^2', '~T5^3', '~T5^4')
EXCEPTIONAL_KINDS = ('6,1', '6,2', '6,3')
DEFAULT_PLUG = (2, -1)

# Entries of the conjugating matrices tried when comparing bundle monodromies.
CONJUGATOR_BOUND = 10

_INT = r'\s*(-?\d+)\s*'
_BUNDLE_RE = re.compile(r'^B\[\s*(T6\^1|T6\^2|T7|K6\^1|K6\^2)\s*\|' + _INT + ',' + _INT + r'\|' + _INT + ',' + _INT + r'\]$')
_PLUGGED_RE = re.compile(r'^([HK])\[\s*(~T[56]\^[1-4])\s*((?:\|\s*-?\d+\s*,\s*-?\d+\s*){0,2})\]$')
_EXCEPTIONAL_RE = re.compile(r'^E\[\s*6\s*,\s*([123])\s*\]$')
_LST_RE = re.compile(r'^LST\(' + _INT + ',' + _INT + ',' + _INT + r'\)$')

Matrix = Tuple[Tuple[int, int], Tuple[int, int]]


@dataclass(frozen=True)
class FamilyName:
    """
    A parsed family name.

    ``params`` holds ``(p, q, r, s)`` for B, ``(p1, q1, p2, q2)`` with
    defaults filled in for H and K, ``(p, q, r)`` for LST and nothing for E.
    """

    family: str
    kind: str
    params: Tuple[int, ...] = ()

    def __str__(self):
        return format_family_name(self)


def parse_family_name(text: str) -> FamilyName:
    """
    Parse a family name.

    Raises:
        NameParseError: If the text matches no family in the grammar.
    """
    text = text.strip()
    match = _BUNDLE_RE.match(text)
    if match:
        kind = match.group(1)
        return FamilyName('B', kind, tuple(int(g) for g in match.groups()[1:]))
    match = _PLUGGED_RE.match(text)
    if match:
        family, kind, plugs = match.groups()
        allowed = THIN_KINDS if family == 'H' else THICK_KINDS
        if kind not in allowed:
            raise NameParseError(f"{family} names take one of {', '.join(allowed)}, not {kind}")
        pairs = [tuple(int(v) for v in chunk.split(',')) for chunk in plugs.split('|') if chunk.strip()]
        while len(pairs) < 2:
            pairs.append(DEFAULT_PLUG)
        return FamilyName(family, kind, pairs[0] + pairs[1])
    match = _EXCEPTIONAL_RE.match(text)
    if match:
        return FamilyName('E', f"6,{match.group(1)}")
    match = _LST_RE.match(text)
    if match:
        return FamilyName('LST', 'LST', tuple(int(g) for g in match.groups()))
    raise NameParseError(f"unrecognised family name {text!r}")


def format_family_name(name: FamilyName) -> str:
    if name.family == 'B':
        p, q, r, s = name.params
        return f"B[{name.kind}|{p},{q}|{r},{s}]"
    if name.family in ('H', 'K'):
        pairs = [name.params[:2], name.params[2:]]
        while pairs and tuple(pairs[-1]) == DEFAULT_PLUG:
            pairs.pop()
        plugs = ''.join(f"|{a},{b}" for a, b in pairs)
        return f"{name.family}[{name.kind}{plugs}]"
    if name.family == 'E':
        return f"E[{name.kind}]"
    if name.family == 'LST':
        return 'LST({},{},{})'.format(*name.params)
    raise NameParseError(f"unknown family {name.family!r}")


# Manifold names

@dataclass(frozen=True)
class TorusBundle:
    """T2 x I / M for a 2x2 integer matrix M of determinant +-1."""

    matrix: Matrix

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        if abs(a * d - b * c) != 1:
            raise ConstructionError(f"torus bundle matrix {self.matrix} is not unimodular")

    def __str__(self):
        return f"T2 x I / {_format_matrix(self.matrix)}"


@dataclass(frozen=True)
class KleinBottleBundle:
    """K2 x I / M where M = ((+-1, x), (0, +-1))."""

    matrix: Matrix

    def __post_init__(self):
        (a, _), (c, d) = self.matrix
        if c != 0 or abs(a) != 1 or abs(d) != 1:
            raise ConstructionError(f"Klein bottle bundle matrix {self.matrix} is not of the form ((+-1,x),(0,+-1))")

    def __str__(self):
        if self.normalised().matrix == ((1, 0), (0, 1)):
            return 'K2 x S1'
        return f"K2 x I / {_format_matrix(self.matrix)}"

    def normalised(self) -> 'KleinBottleBundle':
        (a, x), (_, d) = self.matrix
        return KleinBottleBundle(((a, x % 2), (0, d)))


@dataclass(frozen=True)
class SeifertFibredSpace:
    """
    A Seifert fibred space over RP2 (``base='RP2'``) or over the disc with
    reflector boundary (``base='D'``) with the given exceptional fibres.
    """

    base: str
    fibres: Tuple[Tuple[int, int], ...]

    def __str__(self):
        fibres = ' '.join(f"({p},{q})" for p, q in self.fibres)
        return f"SFS({self.base}: {fibres})"

    def normalised(self) -> 'SeifertFibredSpace':
        """
        Normalise the Seifert invariants.

        Each fibre is made to have ``p > 0``; ``q`` is reduced modulo ``p``
        with the excess folded into the obstruction term, and then replaced
        by ``min(q, p - q)``. Both bases are non-orientable (or carry a
        reflector curve), so reversing the local fibre orientation is
        allowed and the obstruction term is absorbed. Regular fibres are
        dropped and the rest sorted.
        """
        fibres = []
        for p, q in self.fibres:
            if p == 0:
                raise ConstructionError(f"fibre ({p},{q}) has p = 0")
            if p < 0:
                p, q = -p, -q
            q %= p
            q = min(q, p - q)
            if p > 1:
                fibres.append((p, q))
        return SeifertFibredSpace(self.base, tuple(sorted(fibres)))


ManifoldName = Union[TorusBundle, KleinBottleBundle, SeifertFibredSpace]

# Names from different families that describe the same manifold.
KNOWN_HOMEOMORPHISMS: Tuple[Tuple[ManifoldName, ManifoldName], ...] = (
    (TorusBundle(((1, 0), (0, -1))), KleinBottleBundle(((1, 0), (0, 1)))),
    (KleinBottleBundle(((-1, 1), (0, 1))), TorusBundle(((0, 1), (1, 0)))),
    (SeifertFibredSpace('RP2', ((2, 1), (2, 1))), KleinBottleBundle(((-1, 1), (0, -1)))),
    (SeifertFibredSpace('D', ((2, 1), (2, 1))), KleinBottleBundle(((1, 0), (0, -1)))),
)

EXCEPTIONAL_MANIFOLDS = {
    '6,1': KleinBottleBundle(((1, 0), (0, -1))),
    '6,2': KleinBottleBundle(((-1, 1), (0, -1))),
    '6,3': TorusBundle(((0, 1), (1, 0))),
}


def _format_matrix(matrix: Matrix) -> str:
    (a, b), (c, d) = matrix
    return f"(({a},{b}),({c},{d}))"


def _odd(x: int) -> int:
    return x % 2


def name_manifold(name: FamilyName) -> ManifoldName:
    """
    The manifold a family member triangulates.

    Raises:
        ConstructionError: If the parameters fall outside the hypotheses
            under which the family is identified, or the name describes a
            bounded triangulation.
    """
    if name.family == 'B':
        p, q, r, s = name.params
        if name.kind in ('T6^1', 'T6^2'):
            return TorusBundle(((p, r), (q, s)))
        if name.kind == 'T7':
            return TorusBundle(((p + q, r + s), (q, s)))
        if (p + r) % 2 == 0 or abs(p - q) != 1 or abs(r - s) != 1 or p - q + r - s != 0:
            raise ConstructionError(
                f"Klein bottle bundle parameters {p},{q}|{r},{s} need p+r odd, |p-q| = |r-s| = 1 and p-q+r-s = 0"
            )
        return KleinBottleBundle(((_odd(p) - _odd(r), _odd(r)), (0, s - r)))
    if name.family in ('H', 'K'):
        p1, q1, p2, q2 = name.params
        if p1 == 0 or p2 == 0:
            raise ConstructionError(f"plug parameters {p1},{q1}|{p2},{q2} need p1 and p2 non-zero")
        if name.kind in ('~T6^4',):
            return SeifertFibredSpace('D', ((p1, q1), (p2, q2)))
        if name.kind in ('~T5^4',):
            return SeifertFibredSpace('D', ((p1, q1), (p2, -q2)))
        return SeifertFibredSpace('RP2', ((p1, q1), (p2, p2 + q2)))
    if name.family == 'E':
        return EXCEPTIONAL_MANIFOLDS[name.kind]
    raise ConstructionError(f"{format_family_name(name)} is not a closed triangulation")


@lru_cache(maxsize=1)
def _conjugators() -> np.ndarray:
    """Every integer 2x2 matrix with entries bounded by CONJUGATOR_BOUND and determinant +-1."""
    values = np.arange(-CONJUGATOR_BOUND, CONJUGATOR_BOUND + 1)
    a, b, c, d = (grid.ravel() for grid in np.meshgrid(values, values, values, values, indexing='ij'))
    det = a * d - b * c
    keep = np.abs(det) == 1
    return np.stack([a[keep], b[keep], c[keep], d[keep]], axis=1).reshape(-1, 2, 2)


def _inverse(matrix: Matrix) -> Matrix:
    (a, b), (c, d) = matrix
    det = a * d - b * c
    return ((d * det, -b * det), (-c * det, a * det))


def _conjugate(m: Matrix, n: Matrix) -> bool:
    """True if P M = N P for some bounded unimodular P."""
    ma, na = np.array(m), np.array(n)
    if round(np.trace(ma)) != round(np.trace(na)) or round(np.linalg.det(ma)) != round(np.linalg.det(na)):
        return False
    ps = _conjugators()
    return bool(np.any(np.all(ps @ ma == na @ ps, axis=(1, 2))))


def _same(a: ManifoldName, b: ManifoldName) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, TorusBundle):
        return _conjugate(a.matrix, b.matrix) or _conjugate(a.matrix, _inverse(b.matrix))
    if isinstance(a, KleinBottleBundle):
        return a.normalised() == b.normalised()
    return a.normalised() == b.normalised()


def names_equivalent(a: ManifoldName, b: ManifoldName) -> bool:
    """
    Whether two manifold names describe the same manifold.

    Bundles are compared up to conjugation and inversion of the monodromy;
    Seifert fibred spaces after normalisation. Names from different
    variants match through ``KNOWN_HOMEOMORPHISMS``.
    """
    if _same(a, b):
        return True
    for x, y in KNOWN_HOMEOMORPHISMS:
        if (_same(a, x) and _same(b, y)) or (_same(a, y) and _same(b, x)):
            return True
    return False


def manifold_label(name: ManifoldName) -> str:
    """Canonical display string, preferring the variant used in ``KNOWN_HOMEOMORPHISMS``."""
    if isinstance(name, SeifertFibredSpace):
        name = name.normalised()
    for x, y in KNOWN_HOMEOMORPHISMS:
        if _same(name, x):
            return str(y)
    return str(name)


def try_name_manifold(text: str) -> Optional[ManifoldName]:
    """``name_manifold`` for a raw family name, or None when it names no closed manifold."""
    try:
        return name_manifold(parse_family_name(text))
    except (NameParseError, ConstructionError):
        logger.debug(f"No manifold name for {text!r}", exc_info=True)
        return None
