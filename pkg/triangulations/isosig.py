"""
Canonical labelling, isomorphism testing and isomorphism signatures.

A connected triangulation is relabelled by breadth-first search from every
choice of starting tetrahedron and starting vertex permutation. Each
relabelling is written as a sequence of integer codes, one per face:

    0                        boundary face
    1 + 24 * j + perm.index  face glued to tetrahedron j by perm

Whenever the search reaches a new tetrahedron it is given the next free label
and a vertex map that makes the gluing permutation the identity. The
lexicographically smallest code sequence is the canonical form.

Signature text: the version tag ``c1``, the tetrahedron count in two
characters, then every code in a fixed width, all in the alphabet
``A-Z a-z 0-9 + -``.
"""
from collections import deque
from typing import List, Optional, Sequence, Tuple
import logging

from .exceptions import DisconnectedError, ParseError
from .perm import Perm4
from .triangulation import Triangulation

logger = logging.getLogger(__name__)

SIGNATURE_TAG = 'c1'
ALPHABET = 'ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+-'
_DIGIT = {c: i for i, c in enumerate(ALPHABET)}


def _codes_from(tri: Triangulation, start: int, rho: Perm4, best: Optional[List[int]]) -> Optional[List[int]]:
    """
    Code sequence for one starting choice, or None as soon as it exceeds ``best``.

    Returns None as well when the search does not reach every tetrahedron.
    """
    gluings = tri.gluings
    n = tri.size
    label = [-1] * n
    vmap: List[Optional[Perm4]] = [None] * n
    order = [start]
    label[start] = 0
    vmap[start] = rho
    codes: List[int] = []
    smaller = best is None
    processed = 0
    while processed < len(order):
        t = order[processed]
        rho_t = vmap[t]
        inverse = rho_t.inverse()
        for new_face in range(4):
            entry = gluings[t][inverse(new_face)]
            if entry is None:
                code = 0
            else:
                u, perm = entry
                if label[u] < 0:
                    label[u] = len(order)
                    vmap[u] = rho_t * perm.inverse()
                    order.append(u)
                code = 1 + 24 * label[u] + (vmap[u] * perm * inverse).index
            if not smaller:
                other = best[len(codes)]
                if code > other:
                    return None
                if code < other:
                    smaller = True
            codes.append(code)
        processed += 1
    if len(order) != n:
        return None
    return codes


def _canonical_codes(tri: Triangulation) -> List[int]:
    if tri.size == 0:
        return []
    if not tri.is_connected():
        raise DisconnectedError("canonical form needs a connected triangulation")
    best: Optional[List[int]] = None
    for start in range(tri.size):
        for rho in Perm4.all():
            codes = _codes_from(tri, start, rho, best)
            if codes is not None and (best is None or codes < best):
                best = codes
    return best


def _from_codes(n: int, codes: Sequence[int]) -> Triangulation:
    table = [[None] * 4 for _ in range(n)]
    for position, code in enumerate(codes):
        t, f = divmod(position, 4)
        if code == 0:
            continue
        j, index = divmod(code - 1, 24)
        if j >= n:
            raise ParseError(f"signature refers to tetrahedron {j} of {n}")
        table[t][f] = (j, Perm4.from_index(index))
    try:
        return Triangulation(table)
    except Exception as e:
        raise ParseError(f"signature does not describe a triangulation: {e}") from None


def canonical_form(tri: Triangulation) -> Triangulation:
    """
    Return the canonical relabelling of a connected triangulation.

    Raises:
        DisconnectedError: If the triangulation is disconnected; canonicalise
            its components separately.
    """
    return _from_codes(tri.size, _canonical_codes(tri))


def _code_width(n: int) -> int:
    width = 1
    while 64 ** width <= 24 * n:
        width += 1
    return width


def _encode(value: int, width: int) -> str:
    chars = []
    for _ in range(width):
        value, digit = divmod(value, 64)
        chars.append(ALPHABET[digit])
    return ''.join(reversed(chars))


def _decode(text: str) -> int:
    value = 0
    for c in text:
        if c not in _DIGIT:
            raise ParseError(f"invalid signature character {c!r}")
        value = value * 64 + _DIGIT[c]
    return value


def signature(tri: Triangulation) -> str:
    """Isomorphism signature of a connected triangulation."""
    codes = _canonical_codes(tri)
    n = tri.size
    width = _code_width(n)
    return SIGNATURE_TAG + _encode(n, 2) + ''.join(_encode(code, width) for code in codes)


def parse_signature(text: str) -> Triangulation:
    """
    Rebuild the canonical triangulation a signature describes.

    Raises:
        ParseError: If the tag, length or codes are malformed.
    """
    text = text.strip()
    if not text.startswith(SIGNATURE_TAG):
        raise ParseError(f"unknown signature version in {text!r}")
    body = text[len(SIGNATURE_TAG):]
    if len(body) < 2:
        raise ParseError("signature too short")
    n = _decode(body[:2])
    width = _code_width(n)
    payload = body[2:]
    if len(payload) != 4 * n * width:
        raise ParseError(f"signature length does not match {n} tetrahedra")
    codes = [_decode(payload[i:i + width]) for i in range(0, len(payload), width)]
    return _from_codes(n, codes)


def component_signatures(tri: Triangulation) -> Tuple[str, ...]:
    return tuple(sorted(signature(c) for c in tri.components()))


def is_isomorphic(a: Triangulation, b: Triangulation) -> bool:
    """True iff some relabelling of tetrahedra and vertices carries ``a`` onto ``b``."""
    if a.size != b.size:
        return False
    if a.is_orientable() != b.is_orientable():
        return False
    return component_signatures(a) == component_signatures(b)


def isomorphism_to_canonical(tri: Triangulation) -> Tuple[List[int], List[Perm4]]:
    """
    The relabelling (tetrahedron map, vertex maps) carrying ``tri`` to its canonical form.

    Useful for transporting sites (edges, faces) into canonical labels.
    """
    best = _canonical_codes(tri)
    for start in range(tri.size):
        for rho in Perm4.all():
            codes = _codes_from(tri, start, rho, None)
            if codes == best:
                return _labelling(tri, start, rho)
    raise DisconnectedError("no canonical labelling found")


def _labelling(tri: Triangulation, start: int, rho: Perm4) -> Tuple[List[int], List[Perm4]]:
    n = tri.size
    label = [-1] * n
    vmap: List[Optional[Perm4]] = [None] * n
    label[start] = 0
    vmap[start] = rho
    queue = deque([start])
    count = 1
    while queue:
        t = queue.popleft()
        inverse = vmap[t].inverse()
        for new_face in range(4):
            entry = tri.gluing(t, inverse(new_face))
            if entry is not None and label[entry[0]] < 0:
                u, perm = entry
                label[u] = count
                count += 1
                vmap[u] = vmap[t] * perm.inverse()
                queue.append(u)
    return label, vmap
