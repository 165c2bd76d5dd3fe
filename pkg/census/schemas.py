from typing import List, Optional
from datetime import datetime
from enum import Enum

from ninja import Schema
from pydantic import Field

from triangulations.schemas import ErrorResponse  # noqa: F401


class RecordStatusEnum(str, Enum):
    """Where a census candidate ended up"""
    CENSUS = "census"
    REVIEW = "review"
    DROPPED = "dropped"


class ReportFormatEnum(str, Enum):
    TEXT = "text"
    MARKDOWN = "markdown"


class CensusRecordSchema(Schema):
    """Schema for one stored census triangulation"""
    signature: str
    gluing_table: str = Field(..., description="Canonical gluing table, rows joined by ' / '")
    status: RecordStatusEnum
    reason: str = ''
    manifold_class: Optional[int] = None
    family_names: List[str] = []
    invariants: Optional[dict] = Field(None, description="H1, Z/2 Betti number and Turaev-Viro values")


class CensusRunSchema(Schema):
    """Schema for a stored census run"""
    id: int
    tetrahedra: int
    mode: str
    status: str
    require_non_orientable: bool
    prune_low_degree_edges: bool
    triangulation_count: int
    manifold_count: int
    review_count: int
    archive_path: str = ''
    created_at: datetime
    updated_at: datetime

    class Config:
        schema_extra = {
            "example": {
                "id": 3,
                "tetrahedra": 6,
                "mode": "aggressive",
                "status": "completed",
                "require_non_orientable": True,
                "prune_low_degree_edges": True,
                "triangulation_count": 24,
                "manifold_count": 5,
                "review_count": 0,
                "archive_path": "out/census-n6.txt",
                "created_at": "2026-10-18T09:12:00Z",
                "updated_at": "2026-10-18T10:40:00Z",
            }
        }


class CensusRunDetailSchema(CensusRunSchema):
    """Schema for a census run with its records"""
    records: List[CensusRecordSchema] = []


class ReportResponse(Schema):
    """Schema for the rendered census tables"""
    success: bool = True
    format: ReportFormatEnum
    report: str
