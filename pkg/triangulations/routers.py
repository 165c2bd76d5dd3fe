from ninja import Router
import logging

from .exceptions import ParseError, TriangulationError
from .isosig import canonical_form, component_signatures
from .schemas import (
    AnalysisResponse,
    ErrorResponse,
    GluingTableRequest,
    SignatureResponse,
    TuraevViroSchema,
    ValiditySchema,
)
from .services import AnalysisReport, TriangulationAnalyzer
from .triangulation import Triangulation

logger = logging.getLogger(__name__)
router = Router(tags=["Triangulations"])


def _validity_schema(report: AnalysisReport) -> ValiditySchema:
    v = report.validity
    return ValiditySchema(
        closed=v.closed,
        orientable=v.orientable,
        connected=v.connected,
        all_vertex_links_spheres=v.all_vertex_links_spheres,
        edge_self_reversed=v.edge_self_reversed,
        closed_manifold=v.closed_manifold,
    )


def _analysis_response(report: AnalysisReport) -> AnalysisResponse:
    return AnalysisResponse(
        size=report.size,
        signatures=list(report.signatures),
        validity=_validity_schema(report),
        vertices=report.vertices,
        edges=report.edges,
        faces=report.faces,
        homology=str(report.homology) if report.homology is not None else None,
        homology_z2=report.homology_z2,
        fundamental_group=str(report.fundamental_group) if report.fundamental_group is not None else None,
        turaev_viro=[TuraevViroSchema(r=v.r, value=v.value) for v in report.turaev_viro],
        verdict=report.verdict.value if report.verdict is not None else None,
        pillow_2sphere=report.pillow,
        snapped_2sphere=report.snapped,
        notes=report.notes,
    )


@router.post(
    "/analyze",
    response={200: AnalysisResponse, 400: ErrorResponse, 500: ErrorResponse},
)
def analyze(request, payload: GluingTableRequest):
    """
    Analyze a triangulation given as a gluing table.

    Returns validity, skeleton counts, H1 with integer and Z/2 coefficients,
    a simplified fundamental group presentation, the Turaev-Viro vector and
    the normal surface verdict.
    """
    try:
        tri = Triangulation.from_text(payload.gluing_table)
    except ParseError as e:
        logger.warning(f"Rejected gluing table: {e}")
        return 400, ErrorResponse(error="Invalid gluing table", details=str(e))
    except TriangulationError as e:
        return 400, ErrorResponse(error="Invalid triangulation", details=str(e))

    try:
        report = TriangulationAnalyzer().analyze(tri, with_normal=payload.normal_surfaces)
    except TriangulationError as e:
        return 400, ErrorResponse(error="Analysis failed", details=str(e))
    except Exception as e:
        logger.error(f"Unexpected error analyzing triangulation: {e}", exc_info=True)
        return 500, ErrorResponse(error="Internal server error", details=str(e))
    return 200, _analysis_response(report)


@router.post(
    "/signature",
    response={200: SignatureResponse, 400: ErrorResponse},
)
def signature(request, payload: GluingTableRequest):
    """Isomorphism signatures of each component, and the canonical table when connected."""
    try:
        tri = Triangulation.from_text(payload.gluing_table)
        signatures = list(component_signatures(tri))
        canonical = canonical_form(tri).to_text() if tri.size and tri.is_connected() else None
    except TriangulationError as e:
        return 400, ErrorResponse(error="Invalid gluing table", details=str(e))
    return 200, SignatureResponse(size=tri.size, signatures=signatures, canonical_table=canonical)
