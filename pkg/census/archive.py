"""
Census archive files.

An archive is plain ASCII::

    census-archive 1
    mode aggressive
    tetrahedra 6
    records 24
    <signature> <status> <class> <names> <invariants> <table>
    ...
    sha256 <hex digest of the record lines>

Fields are tab separated. ``names`` is a comma-separated list of family
names or ``-``; ``invariants`` is compact JSON with sorted keys; ``table`` is
the canonical gluing table with its rows joined by `` / ``. Records are
sorted by signature, so writing the same census twice gives the same bytes.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple
import hashlib
import json
import logging

from triangulations.exceptions import TriangulationError
from triangulations.isosig import canonical_form, signature
from triangulations.triangulation import Triangulation

from .classify import CandidateRecord, CensusResult, InvariantVector, RecordStatus
from .exceptions import ArchiveChecksumError, CensusError

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
ROW_SEPARATOR = ' / '


@dataclass(frozen=True)
class ArchiveRecord:
    signature: str
    status: RecordStatus
    manifold_class: Optional[int]
    family_names: Tuple[str, ...]
    invariants: Optional[dict]
    table: str

    @property
    def triangulation(self) -> Triangulation:
        return Triangulation.from_text(self.table.replace(ROW_SEPARATOR, '\n'))

    def to_line(self) -> str:
        fields = [
            self.signature,
            self.status.value,
            str(self.manifold_class) if self.manifold_class is not None else '-',
            ','.join(self.family_names) or '-',
            json.dumps(self.invariants, sort_keys=True, separators=(',', ':')) if self.invariants else '-',
            self.table,
        ]
        return '\t'.join(fields)

    @classmethod
    def from_line(cls, line: str) -> 'ArchiveRecord':
        parts = line.split('\t')
        if len(parts) != 6:
            raise CensusError(f"archive record has {len(parts)} fields, expected 6")
        sig, status, manifold, names, invariants, table = parts
        return cls(
            signature=sig,
            status=RecordStatus(status),
            manifold_class=None if manifold == '-' else int(manifold),
            family_names=() if names == '-' else tuple(names.split(',')),
            invariants=None if invariants == '-' else json.loads(invariants),
            table=table,
        )

    @classmethod
    def from_candidate(cls, record: CandidateRecord) -> 'ArchiveRecord':
        table = canonical_form(record.triangulation).to_text().rstrip('\n').replace('\n', ROW_SEPARATOR)
        return cls(
            signature=record.signature,
            status=record.status,
            manifold_class=record.manifold_class,
            family_names=tuple(record.family_names),
            invariants=record.invariants.to_dict() if record.invariants is not None else None,
            table=table,
        )

    def invariant_vector(self) -> Optional[InvariantVector]:
        return InvariantVector.from_dict(self.invariants) if self.invariants else None


@dataclass
class CensusArchive:
    """The records of one tetrahedron count."""
    mode: str
    tetrahedra: int
    records: List[ArchiveRecord] = field(default_factory=list)

    @classmethod
    def from_result(cls, result: CensusResult, n: int, mode: str, include_dropped: bool = False) -> 'CensusArchive':
        records = [
            ArchiveRecord.from_candidate(r)
            for r in result.records.get(n, [])
            if include_dropped or r.status != RecordStatus.DROPPED
        ]
        return cls(mode=mode, tetrahedra=n, records=sorted(records, key=lambda r: r.signature))

    def census(self) -> List[ArchiveRecord]:
        return [r for r in self.records if r.status == RecordStatus.CENSUS]

    @property
    def triangulation_count(self) -> int:
        return len(self.census())

    @property
    def manifold_count(self) -> int:
        return len({r.manifold_class for r in self.census()})

    def dumps(self) -> str:
        body = ''.join(r.to_line() + '\n' for r in self.records)
        header = (
            f"census-archive {FORMAT_VERSION}\n"
            f"mode {self.mode}\n"
            f"tetrahedra {self.tetrahedra}\n"
            f"records {len(self.records)}\n"
        )
        digest = hashlib.sha256(body.encode('ascii')).hexdigest()
        return f"{header}{body}sha256 {digest}\n"

    @classmethod
    def loads(cls, text: str) -> 'CensusArchive':
        """
        Parse an archive.

        Raises:
            CensusError: If the header is malformed.
            ArchiveChecksumError: If the records do not match the footer.
        """
        lines = text.splitlines(keepends=True)
        if len(lines) < 5:
            raise CensusError("archive is truncated")
        header = [line.rstrip('\n').split(' ', 1) for line in lines[:4]]
        keys = [h[0] for h in header]
        if keys != ['census-archive', 'mode', 'tetrahedra', 'records'] or any(len(h) != 2 for h in header):
            raise CensusError(f"malformed archive header {keys}")
        if int(header[0][1]) != FORMAT_VERSION:
            raise CensusError(f"unsupported archive version {header[0][1]}")
        count = int(header[3][1])
        body_lines = lines[4:4 + count]
        footer = lines[4 + count:]
        if len(body_lines) != count or len(footer) != 1 or not footer[0].startswith('sha256 '):
            raise CensusError("archive record count does not match its header")
        body = ''.join(body_lines)
        expected = footer[0].split(' ', 1)[1].strip()
        actual = hashlib.sha256(body.encode('ascii')).hexdigest()
        if actual != expected:
            raise ArchiveChecksumError(f"archive checksum mismatch: expected {expected}, got {actual}")
        records = [ArchiveRecord.from_line(line.rstrip('\n')) for line in body_lines]
        return cls(mode=header[1][1], tetrahedra=int(header[2][1]), records=records)

    def verify(self) -> None:
        """
        Check that signatures are unique and that every table rebuilds its signature.

        Raises:
            CensusError: On the first record that fails.
        """
        seen = set()
        for record in self.records:
            if record.signature in seen:
                raise CensusError(f"signature {record.signature} appears twice")
            seen.add(record.signature)
            try:
                rebuilt = signature(record.triangulation)
            except TriangulationError as e:
                raise CensusError(f"record {record.signature} has an unreadable table: {e}") from e
            if rebuilt != record.signature:
                raise CensusError(f"record {record.signature} rebuilds to {rebuilt}")


def write_archive(archive: CensusArchive, path: Path) -> None:
    try:
        Path(path).write_text(archive.dumps(), encoding='ascii')
    except OSError as e:
        raise CensusError(f"cannot write archive {path}: {e}") from e
    logger.info(f"Wrote {len(archive.records)} records to {path}")


def read_archive(path: Path) -> CensusArchive:
    try:
        text = Path(path).read_text(encoding='ascii')
    except OSError as e:
        raise CensusError(f"cannot read archive {path}: {e}") from e
    return CensusArchive.loads(text)
