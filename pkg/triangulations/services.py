from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple
import logging

from django.conf import settings

from .detectors import detect_pillow_2sphere, detect_snapped_2sphere
from .homology import AbelianGroup, GroupPresentation, fundamental_group, homology_h1, homology_h1_z2
from .isosig import component_signatures
from .normal import P2Verdict, p2_verdict
from .triangulation import Triangulation, ValidityReport
from .turaev_viro import TuraevViroValue, turaev_viro_vector

logger = logging.getLogger(__name__)


def configured_levels() -> Tuple[int, ...]:
    """Turaev-Viro levels from the ``TV_LEVELS`` setting ("3,4,5,6,7")."""
    raw = getattr(settings, 'TV_LEVELS', '3,4,5,6,7')
    if isinstance(raw, str):
        return tuple(int(x) for x in raw.split(',') if x.strip())
    return tuple(raw)


@dataclass
class AnalysisReport:
    """Everything the analyze command and endpoint print for one triangulation."""
    size: int
    signatures: Tuple[str, ...]
    validity: ValidityReport
    vertices: int
    edges: int
    faces: int
    homology: Optional[AbelianGroup] = None
    homology_z2: Optional[int] = None
    fundamental_group: Optional[GroupPresentation] = None
    turaev_viro: Tuple[TuraevViroValue, ...] = ()
    verdict: Optional[P2Verdict] = None
    pillow: bool = False
    snapped: bool = False
    notes: List[str] = field(default_factory=list)


class TriangulationAnalyzer:
    """
    Computes the invariant battery for a triangulation.

    Budgets default to the project settings so that the HTTP layer and the
    management commands agree.
    """

    def __init__(
        self,
        levels: Optional[Sequence[int]] = None,
        tolerance: Optional[float] = None,
        tietze_steps: Optional[int] = None,
        normal_max_tets: Optional[int] = None,
    ):
        self.levels = tuple(levels) if levels is not None else configured_levels()
        self.tolerance = tolerance if tolerance is not None else float(getattr(settings, 'TV_TOLERANCE', 1e-9))
        self.tietze_steps = tietze_steps if tietze_steps is not None else int(getattr(settings, 'TIETZE_MAX_STEPS', 10000))
        self.normal_max_tets = normal_max_tets if normal_max_tets is not None else int(getattr(settings, 'NORMAL_MAX_TETS', 8))

    def analyze(self, tri: Triangulation, with_normal: bool = True) -> AnalysisReport:
        skeleton = tri.skeleton
        report = AnalysisReport(
            size=tri.size,
            signatures=component_signatures(tri) if tri.size else (),
            validity=tri.validity(),
            vertices=skeleton.num_vertices,
            edges=skeleton.num_edges,
            faces=skeleton.num_faces,
        )
        if not tri.is_valid():
            report.notes.append("triangulation is not valid; invariants skipped")
            logger.info(f"Skipping invariants for invalid {tri.size}-tetrahedron triangulation")
            return report

        report.homology = homology_h1(tri)
        report.homology_z2 = homology_h1_z2(tri)
        report.fundamental_group = fundamental_group(tri, self.tietze_steps)
        report.pillow = detect_pillow_2sphere(tri)
        report.snapped = detect_snapped_2sphere(tri)

        if tri.has_boundary():
            report.notes.append("has boundary; closed-census analyses skipped")
            return report
        if not report.validity.closed_manifold:
            report.notes.append("not a closed 3-manifold; Turaev-Viro and normal surfaces skipped")
            return report

        report.turaev_viro = turaev_viro_vector(tri, self.levels, self.tolerance)
        if not with_normal:
            return report
        if tri.size > self.normal_max_tets:
            report.notes.append(f"normal surfaces skipped above {self.normal_max_tets} tetrahedra")
        else:
            report.verdict = p2_verdict(tri, self.normal_max_tets)
        logger.debug(f"Analyzed {tri.size}-tetrahedron triangulation: H1={report.homology}")
        return report
