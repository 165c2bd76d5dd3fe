from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional
import logging

from django.conf import settings
from django.db import transaction

from constructions import golden
from constructions.services import golden_index
from triangulations.exceptions import UnsupportedSizeError
from triangulations.moves import DEFAULT_HEIGHT, DEFAULT_MAX_STATES
from triangulations.normal import DEFAULT_MAX_TETRAHEDRA
from triangulations.services import configured_levels
from triangulations.turaev_viro import DEFAULT_TOLERANCE

from .archive import CensusArchive, write_archive
from .classify import CensusResult, ClassifyOptions, RecordStatus
from .engine import HARD_CAP, CensusConfig, CensusEngine
from .exceptions import InconsistencyError
from .gluings import CensusMode
from .models import CensusRecord, CensusRun

logger = logging.getLogger(__name__)


def configured_seed() -> Optional[int]:
    """The simplification seed, or None for signature order."""
    seed = str(getattr(settings, 'SIMPLIFY_SEED', '') or '')
    return int(seed) if seed else None


def configured_options() -> ClassifyOptions:
    """Analysis budgets from the project settings."""
    return ClassifyOptions(
        height=int(getattr(settings, 'SIMPLIFY_HEIGHT', DEFAULT_HEIGHT)),
        max_states=int(getattr(settings, 'SIMPLIFY_MAX_STATES', DEFAULT_MAX_STATES)),
        levels=configured_levels(),
        tolerance=float(getattr(settings, 'TV_TOLERANCE', DEFAULT_TOLERANCE)),
        normal_max_tets=int(getattr(settings, 'NORMAL_MAX_TETS', DEFAULT_MAX_TETRAHEDRA)),
        seed=configured_seed(),
    )


@dataclass
class CensusOutcome:
    """A finished census: the classified records and one archive per size."""
    result: CensusResult
    archives: Dict[int, CensusArchive] = field(default_factory=dict)
    paths: Dict[int, Path] = field(default_factory=dict)
    runs: List[CensusRun] = field(default_factory=list)


class CensusService:
    """
    Runs a census and keeps its results as archives and, optionally, database rows.

    Defaults for the worker count and checkpoint directory come from the
    ``CENSUS_JOBS`` and ``CENSUS_CHECKPOINT_DIR`` settings.
    """

    def __init__(self, progress: Optional[Callable[[str], None]] = None):
        self.progress = progress

    def run(
        self,
        max_tets: int,
        mode: CensusMode = CensusMode.AGGRESSIVE,
        jobs: Optional[int] = None,
        checkpoint_dir: Optional[Path] = None,
        output_dir: Optional[Path] = None,
        store: bool = False,
    ) -> CensusOutcome:
        """
        Enumerate and classify every size from 1 to ``max_tets``.

        Args:
            max_tets: Largest tetrahedron count, at most 8.
            mode: Conservative or aggressive pruning.
            jobs: Worker processes; 0 uses every core.
            checkpoint_dir: Where resumable progress is kept.
            output_dir: Where ``census-n<k>.txt`` archives are written.
            store: Also save runs and records to the database.

        Raises:
            UnsupportedSizeError: If ``max_tets`` is out of range.
            CensusError: If a checkpoint or archive cannot be written.
        """
        cap = int(getattr(settings, 'CENSUS_MAX_TETS', HARD_CAP))
        if max_tets > cap:
            raise UnsupportedSizeError(f"census runs are capped at {cap} tetrahedra by CENSUS_MAX_TETS")
        if jobs is None:
            jobs = int(getattr(settings, 'CENSUS_JOBS', 1))
        if checkpoint_dir is None and getattr(settings, 'CENSUS_CHECKPOINT_DIR', ''):
            checkpoint_dir = Path(settings.CENSUS_CHECKPOINT_DIR)
        config = CensusConfig(
            max_tets=max_tets,
            mode=mode,
            jobs=jobs,
            checkpoint_dir=checkpoint_dir,
            options=configured_options(),
        )
        logger.info(f"Starting {config.mode.value} census up to {max_tets} tetrahedra with {config.jobs} worker(s)")
        engine = CensusEngine(config, known=golden_index(), progress=self.progress)
        result = engine.run()

        outcome = CensusOutcome(result=result)
        for n in range(1, max_tets + 1):
            archive = CensusArchive.from_result(result, n, config.mode.value)
            outcome.archives[n] = archive
            if output_dir is not None:
                path = Path(output_dir) / f"census-n{n}.txt"
                Path(output_dir).mkdir(parents=True, exist_ok=True)
                write_archive(archive, path)
                outcome.paths[n] = path
            if store:
                reasons = {r.signature: r.reason for r in result.records.get(n, [])}
                outcome.runs.append(self.store(archive, config, outcome.paths.get(n), reasons))
        return outcome

    @transaction.atomic
    def store(self, archive: CensusArchive, config: CensusConfig, path: Optional[Path] = None,
              reasons: Optional[Dict[str, str]] = None) -> CensusRun:
        """Save one archive as a completed run with its records, with review reasons when known."""
        reasons = reasons or {}
        census_filter = config.census_filter
        run = CensusRun.objects.create(
            tetrahedra=archive.tetrahedra,
            mode=archive.mode,
            require_non_orientable=census_filter.require_non_orientable,
            prune_low_degree_edges=census_filter.prune_low_degree_edges,
            status=CensusRun.Status.COMPLETED,
            triangulation_count=archive.triangulation_count,
            manifold_count=archive.manifold_count,
            review_count=sum(1 for r in archive.records if r.status == RecordStatus.REVIEW),
            archive_path=str(path or ''),
        )
        CensusRecord.objects.bulk_create([
            CensusRecord(
                run=run,
                signature=record.signature,
                gluing_table=record.table,
                invariants=record.invariants,
                manifold_class=record.manifold_class,
                family_names=','.join(record.family_names),
                status=record.status.value,
                reason=reasons.get(record.signature, ''),
            )
            for record in archive.records
        ])
        logger.info(f"Stored run {run.id}: {run.triangulation_count} triangulations at n={run.tetrahedra}")
        return run


def compare_modes(conservative: CensusResult, aggressive: CensusResult, sizes) -> None:
    """
    Check that aggressive pruning lost nothing.

    Raises:
        InconsistencyError: If a size has a census triangulation that only
            the conservative run found.
    """
    for n in sizes:
        lost = {r.signature for r in conservative.census(n)} - {r.signature for r in aggressive.census(n)}
        if lost:
            raise InconsistencyError(
                f"aggressive pruning lost {len(lost)} triangulation(s) at n={n}: {', '.join(sorted(lost))}"
            )


def missing_golden(result: CensusResult, sizes) -> List[str]:
    """Golden names whose triangulation is not in the census for its size."""
    found = {sig for n in sizes for sig in (r.signature for r in result.census(n))}
    sized = set(sizes)
    missing = []
    for sig, names in golden_index().items():
        if golden.manifold_of(names[0]).tetrahedra in sized and sig not in found:
            missing.extend(names)
    if missing:
        logger.warning(f"Golden triangulations missing from the census: {', '.join(missing)}")
    return sorted(missing)
