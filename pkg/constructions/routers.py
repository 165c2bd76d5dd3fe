from typing import List

from ninja import Router
import logging

from triangulations.exceptions import ParseError, TriangulationError

from . import golden
from .schemas import ConstructionResponse, ErrorResponse, GoldenManifoldSchema
from .services import ConstructionService

logger = logging.getLogger(__name__)
router = Router(tags=["Constructions"])


@router.get("/golden", response=List[GoldenManifoldSchema])
def golden_manifolds(request):
    """The eight census manifolds on at most seven tetrahedra with their minimal triangulations."""
    return [
        GoldenManifoldSchema(label=m.label, tetrahedra=m.tetrahedra, homology=m.homology, members=list(m.members))
        for m in golden.GOLDEN_MANIFOLDS
    ]


@router.get(
    "/{name}",
    response={200: ConstructionResponse, 400: ErrorResponse, 500: ErrorResponse},
)
def construct(request, name: str):
    """
    Build a family member from its name.

    Accepts ``B[...]``, ``H[...]``, ``K[...]``, ``E[6,i]`` and ``LST(p,q,r)``
    and returns the gluing table, size, homology and manifold name.
    """
    try:
        report = ConstructionService().build(name)
    except ParseError as e:
        logger.warning(f"Rejected family name {name!r}: {e}")
        return 400, ErrorResponse(error="Invalid family name", details=str(e))
    except TriangulationError as e:
        return 400, ErrorResponse(error="Construction failed", details=str(e))
    except Exception as e:
        logger.error(f"Unexpected error building {name!r}: {e}", exc_info=True)
        return 500, ErrorResponse(error="Internal server error", details=str(e))

    tri = report.triangulation
    return 200, ConstructionResponse(
        name=str(report.name),
        size=report.size,
        gluing_table=tri.to_text() if tri is not None else None,
        signature=report.signature,
        closed=tri is not None and not tri.has_boundary(),
        orientable=tri.is_orientable() if tri is not None else None,
        homology=str(report.homology) if report.homology is not None else None,
        manifold=report.manifold_label,
        notes=report.notes,
    )
