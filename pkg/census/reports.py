"""
Census tables rendered through Jinja2 templates.

Three tables are produced: triangulation and manifold counts per size, the
number of triangulations each family contributes, and every manifold with
its minimal triangulations. They can be filled from census archives or from
the published results in ``constructions.golden``.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Sequence
import logging

from jinja2 import Template

from constructions import golden

from .archive import CensusArchive
from .exceptions import CensusError

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).resolve().parent / 'templates' / 'census'
FORMATS = {'text': 'report.txt.j2', 'markdown': 'report.md.j2'}
DEFAULT_TITLE = 'Closed non-orientable minimal P2-irreducible triangulations'


@dataclass
class SummaryRow:
    label: str
    triangulations: int
    manifolds: int


@dataclass
class FamilyRow:
    label: str
    counts: List[int]

    @property
    def total(self) -> int:
        return sum(self.counts)


@dataclass
class ManifoldRow:
    label: str
    tetrahedra: int
    homology: str
    members: List[str] = field(default_factory=list)


def _summary(counts: Dict[int, tuple]) -> List[SummaryRow]:
    """One row per size, with leading empty sizes merged into a single ``<= k`` row."""
    sizes = sorted(counts)
    empty = [n for n in sizes if counts[n] == (0, 0)]
    leading = 0
    while leading < len(sizes) and sizes[leading] in empty:
        leading += 1
    rows = []
    if leading > 1:
        rows.append(SummaryRow(f"<= {sizes[leading - 1]}", 0, 0))
    else:
        leading = 0
    for n in sizes[leading:]:
        rows.append(SummaryRow(str(n), *counts[n]))
    return rows


def _family_rows(names_by_size: Dict[int, List[str]], sizes: Sequence[int]) -> List[FamilyRow]:
    rows = []
    for key, label in golden.FAMILY_LABELS.items():
        counts = [sum(1 for name in names_by_size.get(n, []) if golden.family_of(name) == key) for n in sizes]
        rows.append(FamilyRow(label, counts))
    return rows


def _double_count_notes(duplicates: Dict[int, List[Sequence[str]]], names_by_size: Dict[int, List[str]],
                        distinct: Dict[int, int]) -> List[str]:
    notes = []
    for n, groups in sorted(duplicates.items()):
        if not groups:
            continue
        pairs = '; '.join(' and '.join(group) for group in groups)
        notes.append(
            f"The {n}-tetrahedron column sums to {len(names_by_size.get(n, []))} because {pairs} "
            f"name the same triangulation; there are {distinct[n]} distinct triangulations."
        )
    return notes


def _context(title: str, counts: Dict[int, tuple], names_by_size: Dict[int, List[str]],
             duplicates: Dict[int, List[Sequence[str]]], manifolds: List[ManifoldRow]) -> dict:
    sizes = [n for n in sorted(counts) if counts[n][0]]
    families = _family_rows(names_by_size, sizes)
    # Distinct triangulations; a family column can sum to more.
    family_totals = FamilyRow('Total', [counts[n][0] for n in sizes])
    return {
        'title': title,
        'summary': _summary(counts),
        'summary_total': SummaryRow('Total', sum(c[0] for c in counts.values()), sum(c[1] for c in counts.values())),
        'sizes': sizes,
        'families': families,
        'family_totals': family_totals,
        'family_notes': _double_count_notes(duplicates, names_by_size, {n: counts[n][0] for n in counts}),
        'manifolds': manifolds,
    }


def golden_context(title: str = DEFAULT_TITLE) -> dict:
    """Tables filled from the published census results."""
    names_by_size = golden.members_by_size()
    duplicates: Dict[int, List[Sequence[str]]] = {}
    for group in golden.ISOMORPHIC_NAMES:
        n = golden.manifold_of(group[0]).tetrahedra
        duplicates.setdefault(n, []).append(group)
    manifolds = [
        ManifoldRow(m.label, m.tetrahedra, m.homology, list(m.members))
        for m in golden.GOLDEN_MANIFOLDS
    ]
    return _context(title, dict(golden.CENSUS_COUNTS), names_by_size, duplicates, manifolds)


def archive_context(archives: Iterable[CensusArchive], sizes: Sequence[int] = (), title: str = DEFAULT_TITLE) -> dict:
    """
    Tables filled from census archives, one archive per size.

    Raises:
        CensusError: If a requested size has no archive.
    """
    by_size = {a.tetrahedra: a for a in archives}
    missing = [n for n in sizes if n not in by_size]
    if missing:
        raise CensusError(f"no archive for {', '.join(str(n) for n in missing)} tetrahedra")

    counts = {n: (a.triangulation_count, a.manifold_count) for n, a in by_size.items()}
    names_by_size: Dict[int, List[str]] = {}
    duplicates: Dict[int, List[Sequence[str]]] = {}
    manifolds: List[ManifoldRow] = []
    for n, archive in sorted(by_size.items()):
        classes: Dict[int, ManifoldRow] = {}
        for record in archive.census():
            names_by_size.setdefault(n, []).extend(record.family_names)
            if len(record.family_names) > 1:
                duplicates.setdefault(n, []).append(record.family_names)
            row = classes.get(record.manifold_class)
            if row is None:
                homology = record.invariants['homology'] if record.invariants else '?'
                row = ManifoldRow(f"class {record.manifold_class}", n, homology)
                classes[record.manifold_class] = row
            row.members.extend(record.family_names or [record.signature])
            for name in record.family_names:
                row.label = golden.manifold_of(name).label
        manifolds.extend(classes[k] for k in sorted(classes))
    return _context(title, counts, names_by_size, duplicates, manifolds)


def render_report(context: dict, fmt: str = 'text') -> str:
    """
    Render the three tables.

    Raises:
        CensusError: If the format is unknown.
    """
    if fmt not in FORMATS:
        raise CensusError(f"unknown report format {fmt!r}; choose one of {', '.join(FORMATS)}")
    template = Template((TEMPLATE_DIR / FORMATS[fmt]).read_text(), keep_trailing_newline=True)
    return template.render(**context)
