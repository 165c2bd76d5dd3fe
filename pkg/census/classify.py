"""
Analysis of census candidates.

Each candidate is simplified, scanned for pillow and snapped 2-spheres,
tested for P^2-irreducibility with normal surfaces and given an invariant
vector. Survivors whose invariants differ from every manifold found with
fewer tetrahedra are minimal; they are grouped into manifold classes by
invariant equality, confirmed by a path of elementary moves. Anything the
analysis cannot settle goes to review instead of being dropped.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from triangulations.detectors import detect_pillow_2sphere, detect_snapped_2sphere
from triangulations.homology import AbelianGroup, homology_h1, homology_h1_z2
from triangulations.isosig import signature
from triangulations.moves import DEFAULT_HEIGHT, DEFAULT_MAX_STATES, move_connect, simplify
from triangulations.normal import DEFAULT_MAX_TETRAHEDRA, P2Verdict, p2_verdict
from triangulations.triangulation import Triangulation
from triangulations.turaev_viro import DEFAULT_TOLERANCE, TuraevViroValue, turaev_viro_vector

logger = logging.getLogger(__name__)

DEFAULT_LEVELS = (3, 4, 5, 6, 7)


class RecordStatus(str, Enum):
    CENSUS = "census"
    REVIEW = "review"
    DROPPED = "dropped"


@dataclass(frozen=True)
class ClassifyOptions:
    """Budgets for the analysis of one candidate."""
    height: int = DEFAULT_HEIGHT
    max_states: int = DEFAULT_MAX_STATES
    levels: Tuple[int, ...] = DEFAULT_LEVELS
    tolerance: float = DEFAULT_TOLERANCE
    normal_max_tets: int = DEFAULT_MAX_TETRAHEDRA
    seed: Optional[int] = None


@dataclass(frozen=True)
class InvariantVector:
    """H1, the Z/2 Betti number and the Turaev-Viro values of a closed triangulation."""
    homology: AbelianGroup
    homology_z2: int
    turaev_viro: Tuple[TuraevViroValue, ...]

    @classmethod
    def of(cls, tri: Triangulation, levels: Sequence[int], tolerance: float) -> 'InvariantVector':
        return cls(
            homology=homology_h1(tri),
            homology_z2=homology_h1_z2(tri),
            turaev_viro=turaev_viro_vector(tri, levels, tolerance),
        )

    def matches(self, other: 'InvariantVector') -> bool:
        if self.homology != other.homology or self.homology_z2 != other.homology_z2:
            return False
        if len(self.turaev_viro) != len(other.turaev_viro):
            return False
        return all(a.matches(b) for a, b in zip(self.turaev_viro, other.turaev_viro))

    def to_dict(self) -> dict:
        return {
            'homology': str(self.homology),
            'homology_z2': self.homology_z2,
            'turaev_viro': {str(v.r): round(v.value, 12) for v in self.turaev_viro},
        }

    @classmethod
    def from_dict(cls, data: dict, tolerance: float = DEFAULT_TOLERANCE) -> 'InvariantVector':
        values = tuple(
            TuraevViroValue(r=int(r), value=float(v), tolerance=tolerance)
            for r, v in sorted(data['turaev_viro'].items(), key=lambda item: int(item[0]))
        )
        return cls(AbelianGroup.parse(data['homology']), int(data['homology_z2']), values)


@dataclass
class CandidateRecord:
    """The outcome of analysing one candidate triangulation."""
    signature: str
    triangulation: Triangulation
    status: RecordStatus
    reason: str = ''
    invariants: Optional[InvariantVector] = None
    verdict: Optional[P2Verdict] = None
    manifold_class: Optional[int] = None
    family_names: Tuple[str, ...] = ()


@dataclass
class ManifoldClass:
    id: int
    size: int
    invariants: InvariantVector
    members: List[CandidateRecord] = field(default_factory=list)


@dataclass
class CensusResult:
    """Records and manifold classes for every tetrahedron count analysed so far."""
    records: Dict[int, List[CandidateRecord]] = field(default_factory=dict)
    classes: List[ManifoldClass] = field(default_factory=list)

    def census(self, n: int) -> List[CandidateRecord]:
        return [r for r in self.records.get(n, []) if r.status == RecordStatus.CENSUS]

    def review(self, n: int) -> List[CandidateRecord]:
        return [r for r in self.records.get(n, []) if r.status == RecordStatus.REVIEW]

    def triangulation_count(self, n: int) -> int:
        return len(self.census(n))

    def manifold_count(self, n: int) -> int:
        return len({r.manifold_class for r in self.census(n)})

    def classes_below(self, n: int) -> List[ManifoldClass]:
        return [c for c in self.classes if c.size < n]

    def classes_of(self, n: int) -> List[ManifoldClass]:
        return [c for c in self.classes if c.size == n]


def analyze_candidate(tri: Triangulation, options: ClassifyOptions) -> CandidateRecord:
    """
    Everything about one candidate that does not depend on the others.

    Safe to run in a worker process.
    """
    sig = signature(tri)
    n = tri.size
    simplified = simplify(tri, options.height, options.max_states, options.seed)
    if simplified.size < n:
        return CandidateRecord(sig, tri, RecordStatus.DROPPED, f"simplifies to {simplified.size} tetrahedra")
    if detect_pillow_2sphere(tri):
        return CandidateRecord(sig, tri, RecordStatus.DROPPED, "contains a pillow 2-sphere")
    if detect_snapped_2sphere(tri):
        return CandidateRecord(sig, tri, RecordStatus.DROPPED, "contains a snapped 2-sphere")

    verdict = P2Verdict.UNKNOWN
    if n <= options.normal_max_tets:
        verdict = p2_verdict(tri, options.normal_max_tets)
    if verdict == P2Verdict.NOT_IRREDUCIBLE:
        return CandidateRecord(sig, tri, RecordStatus.DROPPED, "not P2-irreducible", verdict=verdict)

    invariants = InvariantVector.of(tri, options.levels, options.tolerance)
    if verdict == P2Verdict.UNKNOWN:
        return CandidateRecord(sig, tri, RecordStatus.REVIEW, "P2-irreducibility undecided", invariants, verdict)
    return CandidateRecord(sig, tri, RecordStatus.CENSUS, '', invariants, verdict)


def _connected(record: CandidateRecord, manifold: ManifoldClass, options: ClassifyOptions) -> bool:
    for member in manifold.members:
        if move_connect(member.triangulation, record.triangulation, options.height, options.max_states) is not None:
            return True
    return False


def group_records(n: int, records: Sequence[CandidateRecord], prior: CensusResult, options: ClassifyOptions) -> CensusResult:
    """
    Sort analysed candidates of size ``n`` into manifold classes and add them to ``prior``.

    Records are taken in signature order so that class ids are deterministic.
    """
    earlier = prior.classes_below(n)
    current: List[ManifoldClass] = []
    next_id = max((c.id for c in prior.classes), default=0) + 1
    ordered = sorted(records, key=lambda r: r.signature)

    for record in ordered:
        if record.status == RecordStatus.DROPPED:
            continue
        collision = next((c for c in earlier if c.invariants.matches(record.invariants)), None)
        if collision is not None:
            record.status = RecordStatus.REVIEW
            record.reason = f"invariants match a manifold with {collision.size} tetrahedra"
            record.manifold_class = collision.id
            continue
        manifold = next((c for c in current if c.invariants.matches(record.invariants)), None)
        if manifold is None:
            manifold = ManifoldClass(id=next_id, size=n, invariants=record.invariants)
            next_id += 1
            current.append(manifold)
        elif not _connected(record, manifold, options):
            logger.warning(f"{record.signature} shares invariants with class {manifold.id} but no move path was found")
            record.status = RecordStatus.REVIEW
            record.reason = f"invariants match class {manifold.id} but no move path was found"
        record.manifold_class = manifold.id
        manifold.members.append(record)

    prior.records[n] = ordered
    prior.classes.extend(current)
    logger.info(
        f"n={n}: {prior.triangulation_count(n)} triangulations in {prior.manifold_count(n)} manifolds, "
        f"{len(prior.review(n))} for review"
    )
    return prior


def classify(
    candidates: Sequence[Triangulation],
    prior: CensusResult,
    options: Optional[ClassifyOptions] = None,
    known: Optional[Dict[str, List[str]]] = None,
    size: Optional[int] = None,
) -> CensusResult:
    """
    Classify the candidates of one tetrahedron count.

    Args:
        candidates: Closed non-orientable triangulations, all of one size.
        prior: Complete results for every smaller size.
        options: Analysis budgets.
        known: Signatures of named triangulations mapped to their names.
        size: Tetrahedron count, needed when there are no candidates.

    Returns:
        CensusResult: ``prior`` extended with this size.
    """
    options = options or ClassifyOptions()
    n = size if size is not None else candidates[0].size
    records = [analyze_candidate(tri, options) for tri in candidates]
    attach_family_names(records, known)
    return group_records(n, records, prior, options)


def attach_family_names(records: Sequence[CandidateRecord], known: Optional[Dict[str, List[str]]]) -> None:
    if not known:
        return
    for record in records:
        record.family_names = tuple(known.get(record.signature, ()))
