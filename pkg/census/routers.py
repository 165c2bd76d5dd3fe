from typing import List, Optional

from ninja import Router
import logging

from .archive import read_archive
from .exceptions import CensusError
from .models import CensusRun
from .reports import archive_context, golden_context, render_report
from .schemas import (
    CensusRecordSchema,
    CensusRunDetailSchema,
    CensusRunSchema,
    ErrorResponse,
    RecordStatusEnum,
    ReportFormatEnum,
    ReportResponse,
)

logger = logging.getLogger(__name__)
router = Router(tags=["Census"])


def _record_schema(record) -> CensusRecordSchema:
    return CensusRecordSchema(
        signature=record.signature,
        gluing_table=record.gluing_table,
        status=record.status,
        reason=record.reason,
        manifold_class=record.manifold_class,
        family_names=[n for n in record.family_names.split(',') if n],
        invariants=record.invariants,
    )


def _run_fields(run: CensusRun) -> dict:
    return dict(
        id=run.id,
        tetrahedra=run.tetrahedra,
        mode=run.mode,
        status=run.status,
        require_non_orientable=run.require_non_orientable,
        prune_low_degree_edges=run.prune_low_degree_edges,
        triangulation_count=run.triangulation_count,
        manifold_count=run.manifold_count,
        review_count=run.review_count,
        archive_path=run.archive_path,
        created_at=run.created_at,
        updated_at=run.updated_at,
    )


@router.get("/runs", response=List[CensusRunSchema])
def list_runs(request, tetrahedra: Optional[int] = None, mode: Optional[str] = None):
    """Stored census runs, newest first."""
    runs = CensusRun.objects.all()
    if tetrahedra is not None:
        runs = runs.filter(tetrahedra=tetrahedra)
    if mode:
        runs = runs.filter(mode=mode)
    return [CensusRunSchema(**_run_fields(run)) for run in runs]


@router.get(
    "/runs/{run_id}",
    response={200: CensusRunDetailSchema, 404: ErrorResponse},
)
def get_run(request, run_id: int, status: Optional[RecordStatusEnum] = None):
    """A stored run with its records, optionally only those with the given status."""
    try:
        run = CensusRun.objects.get(id=run_id)
    except CensusRun.DoesNotExist:
        return 404, ErrorResponse(error="Census run not found", details=f"No run with id {run_id}")

    records = run.records.all()
    if status is not None:
        records = records.filter(status=status.value)
    return 200, CensusRunDetailSchema(
        **_run_fields(run),
        records=[_record_schema(r) for r in records],
    )


@router.get(
    "/report",
    response={200: ReportResponse, 400: ErrorResponse, 500: ErrorResponse},
)
def report(request, format: ReportFormatEnum = ReportFormatEnum.TEXT, run_id: Optional[int] = None):
    """
    The census tables.

    Without ``run_id`` the published results are rendered; with it, the
    archives of that run's mode are read for every size up to the run's.
    """
    try:
        if run_id is None:
            context = golden_context()
        else:
            run = CensusRun.objects.get(id=run_id)
            paths = (
                CensusRun.objects.filter(mode=run.mode, status=CensusRun.Status.COMPLETED, tetrahedra__lte=run.tetrahedra)
                .exclude(archive_path='')
                .values_list('tetrahedra', 'archive_path')
            )
            latest = {}
            for n, path in paths:
                latest.setdefault(n, path)
            context = archive_context([read_archive(p) for p in latest.values()])
        return 200, ReportResponse(format=format, report=render_report(context, format.value))
    except CensusRun.DoesNotExist:
        return 400, ErrorResponse(error="Census run not found", details=f"No run with id {run_id}")
    except CensusError as e:
        return 400, ErrorResponse(error="Report failed", details=str(e))
    except Exception as e:
        logger.error(f"Unexpected error rendering report: {e}", exc_info=True)
        return 500, ErrorResponse(error="Internal server error", details=str(e))
