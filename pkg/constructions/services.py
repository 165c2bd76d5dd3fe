from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple
import logging

from triangulations.exceptions import TriangulationError
from triangulations.homology import AbelianGroup, homology_h1
from triangulations.isosig import signature
from triangulations.triangulation import Triangulation

from . import golden
from .families import build_family
from .lst import MobiusBand
from .naming import FamilyName, ManifoldName, manifold_label, name_manifold, parse_family_name

logger = logging.getLogger(__name__)


@dataclass
class ConstructionReport:
    """A built family member together with what the census tables say about it."""
    name: FamilyName
    triangulation: Optional[Triangulation]
    homology: Optional[AbelianGroup] = None
    manifold: Optional[ManifoldName] = None
    signature: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    @property
    def size(self) -> int:
        return self.triangulation.size if self.triangulation is not None else 0

    @property
    def manifold_label(self) -> Optional[str]:
        return manifold_label(self.manifold) if self.manifold is not None else None


class ConstructionService:
    """Builds family members by name and matches triangulations against the golden census."""

    def build(self, text: str) -> ConstructionReport:
        """
        Parse a family name and build it.

        Args:
            text: A name such as ``B[T7|1,1|1,0]`` or ``LST(3,7,-10)``.

        Returns:
            ConstructionReport: The triangulation, its homology when closed and
            the manifold the naming theorems assign to it.

        Raises:
            NameParseError: If the name is not in the grammar.
            ConstructionError: If the parameters cannot be realised.
        """
        name = parse_family_name(text)
        built = build_family(name)
        if isinstance(built, MobiusBand):
            return ConstructionReport(
                name=name,
                triangulation=None,
                notes=["degenerate layered solid torus: a Mobius band with no tetrahedra"],
            )

        report = ConstructionReport(name=name, triangulation=built, signature=signature(built))
        if built.has_boundary():
            report.notes.append("has boundary; closed-census analyses skipped")
            return report
        report.homology = homology_h1(built)
        try:
            report.manifold = name_manifold(name)
        except TriangulationError as e:
            report.notes.append(str(e))
        logger.info(f"Built {name} with {built.size} tetrahedra, homology {report.homology}")
        return report

    def identify(self, tri: Triangulation) -> Tuple[str, List[str], Optional[golden.GoldenManifold]]:
        """The signature of ``tri``, the golden names sharing it and their census manifold."""
        sig = signature(tri)
        names = golden_index().get(sig, [])
        manifold = golden.manifold_of(names[0]) if names else None
        return sig, names, manifold


@lru_cache(maxsize=1)
def golden_index() -> Dict[str, List[str]]:
    """Signature of every golden triangulation mapped to the names that build it."""
    index: Dict[str, List[str]] = {}
    for manifold in golden.GOLDEN_MANIFOLDS:
        for text in manifold.members:
            try:
                tri = build_family(parse_family_name(text))
            except TriangulationError:
                logger.error(f"Golden member {text} could not be built", exc_info=True)
                continue
            index.setdefault(signature(tri), []).append(text)
    return index
