"""
The census driver.

Generation is split into work units, one per face pairing and choice of
permutation for its first face pair. Units run in a process pool; only the
parent process writes, appending one checkpoint line per finished unit, so
an interrupted run resumes where it stopped. Units are merged by sorted
signature, which makes the result independent of the number of workers.
"""
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple
import logging
import os

from triangulations.exceptions import UnsupportedSizeError
from triangulations.isosig import parse_signature
from triangulations.triangulation import Triangulation

from .classify import CandidateRecord, CensusResult, ClassifyOptions, analyze_candidate, attach_family_names, group_records
from .exceptions import CensusError
from .gluings import CensusFilter, CensusMode, GluingSearch
from .pairings import FacePairing, enumerate_face_pairings, parse_face_pairing

logger = logging.getLogger(__name__)

HARD_CAP = 8
UNITS_PER_PAIRING = 6

WorkUnit = Tuple[str, FacePairing, int]


@dataclass
class CensusConfig:
    """How a census run is carried out."""
    max_tets: int
    mode: CensusMode = CensusMode.AGGRESSIVE
    jobs: int = 1
    checkpoint_dir: Optional[Path] = None
    options: ClassifyOptions = field(default_factory=ClassifyOptions)
    non_orientable: bool = True

    def __post_init__(self):
        self.mode = CensusMode(self.mode)
        if self.max_tets < 1 or self.max_tets > HARD_CAP:
            raise UnsupportedSizeError(f"census runs take 1 to {HARD_CAP} tetrahedra, not {self.max_tets}")
        if self.jobs < 1:
            self.jobs = os.cpu_count() or 1

    @property
    def census_filter(self) -> CensusFilter:
        return CensusFilter.for_mode(self.mode, non_orientable=self.non_orientable)


class Checkpoint:
    """
    Completed work units for one tetrahedron count.

    Each line holds a unit id, a tab and the space-separated signatures the
    unit produced.
    """

    def __init__(self, path: Optional[Path]):
        self.path = path
        self.done: Dict[str, List[str]] = {}
        if path is None:
            return
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.touch(exist_ok=True)
        except OSError as e:
            raise CensusError(f"checkpoint {path} is not writable: {e}") from e
        for line in path.read_text().splitlines():
            unit, _, rest = line.partition('\t')
            if unit:
                self.done[unit] = rest.split()
        if self.done:
            logger.info(f"Resuming from {path}: {len(self.done)} units already done")

    def record(self, unit: str, signatures: Sequence[str]) -> None:
        self.done[unit] = list(signatures)
        if self.path is None:
            return
        with self.path.open('a') as handle:
            handle.write(f"{unit}\t{' '.join(signatures)}\n")
            handle.flush()


def work_units(pairings: Iterable[FacePairing]) -> List[WorkUnit]:
    return [
        (f"{pairing.to_text()}#{first}", pairing, first)
        for pairing in pairings
        for first in range(UNITS_PER_PAIRING)
    ]


def run_unit(pairing_text: str, first: int, census_filter: CensusFilter) -> List[str]:
    """Sorted signatures from one work unit. Runs in a worker process."""
    search = GluingSearch(parse_face_pairing(pairing_text), census_filter)
    for _ in search.run(first):
        pass
    return sorted(search.signatures)


def _analyze(tri_text: str, options: ClassifyOptions) -> CandidateRecord:
    return analyze_candidate(Triangulation.from_text(tri_text), options)


class CensusEngine:
    """
    Runs generation and classification for every size up to ``max_tets``.

    Args:
        config: Sizes, pruning mode, worker count and budgets.
        known: Signatures of named triangulations mapped to their names,
            attached to matching records.
    """

    def __init__(self, config: CensusConfig, known: Optional[Dict[str, List[str]]] = None,
                 progress: Optional[Callable[[str], None]] = None):
        self.config = config
        self.known = known
        self.progress = progress or (lambda message: None)

    def _checkpoint(self, n: int) -> Checkpoint:
        directory = self.config.checkpoint_dir
        if directory is None:
            return Checkpoint(None)
        return Checkpoint(Path(directory) / f"census-n{n}-{self.config.mode.value}.ckpt")

    def generate(self, n: int) -> List[Triangulation]:
        """
        Closed triangulations of size ``n`` passing the census filter.

        Each unit reports one signature per isomorphism class it reaches;
        classes reached by several units are merged here.

        Returns:
            List: Triangulations in signature order.
        """
        pairings = enumerate_face_pairings(n, HARD_CAP)
        units = work_units(pairings)
        checkpoint = self._checkpoint(n)
        pending = [u for u in units if u[0] not in checkpoint.done]
        census_filter = self.config.census_filter
        logger.info(f"n={n}: {len(pairings)} face pairings, {len(pending)} of {len(units)} units to run")

        if self.config.jobs == 1:
            for unit, pairing, first in pending:
                checkpoint.record(unit, run_unit(pairing.to_text(), first, census_filter))
        else:
            with ProcessPoolExecutor(max_workers=self.config.jobs) as pool:
                futures = {
                    pool.submit(run_unit, pairing.to_text(), first, census_filter): unit
                    for unit, pairing, first in pending
                }
                for done, future in enumerate(as_completed(futures), start=1):
                    unit = futures[future]
                    try:
                        checkpoint.record(unit, future.result())
                    except Exception as e:
                        logger.error(f"Work unit {unit} failed: {e}", exc_info=True)
                        raise CensusError(f"work unit {unit} failed: {e}") from e
                    if done % 50 == 0:
                        logger.info(f"n={n}: {done} of {len(pending)} units finished")

        signatures = sorted({sig for unit, _, _ in units for sig in checkpoint.done.get(unit, [])})
        self.progress(f"n={n}: {len(signatures)} candidate triangulations")
        return [parse_signature(sig) for sig in signatures]

    def analyze(self, candidates: Sequence[Triangulation]) -> List[CandidateRecord]:
        options = self.config.options
        if self.config.jobs == 1 or len(candidates) < 2:
            records = [analyze_candidate(tri, options) for tri in candidates]
        else:
            with ProcessPoolExecutor(max_workers=self.config.jobs) as pool:
                records = list(pool.map(_analyze, [tri.to_text() for tri in candidates], [options] * len(candidates)))
        attach_family_names(records, self.known)
        return records

    def run(self, sizes: Optional[Iterable[int]] = None) -> CensusResult:
        """
        Generate and classify every size in turn.

        Sizes must start at 1: classification at n needs the complete
        results for every smaller size.
        """
        result = CensusResult()
        for n in sizes or range(1, self.config.max_tets + 1):
            candidates = self.generate(n)
            records = self.analyze(candidates)
            group_records(n, records, result, self.config.options)
            self.progress(
                f"n={n}: {result.triangulation_count(n)} triangulations, {result.manifold_count(n)} manifolds"
            )
        return result
