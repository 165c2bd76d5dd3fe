from typing import List, Optional

from ninja import Schema
from pydantic import Field

from triangulations.schemas import ErrorResponse  # noqa: F401


class ConstructionResponse(Schema):
    """Schema for a built family member"""
    success: bool = True
    name: str = Field(..., description="Canonical family name")
    size: int = Field(..., description="Number of tetrahedra")
    gluing_table: Optional[str] = Field(None, description="One line per tetrahedron; absent for the Mobius band marker")
    signature: Optional[str] = None
    closed: bool = False
    orientable: Optional[bool] = None
    homology: Optional[str] = Field(None, description="First homology, e.g. 'Z + Z_2'")
    manifold: Optional[str] = Field(None, description="Manifold named by the family's identification theorem")
    notes: List[str] = []

    class Config:
        schema_extra = {
            "example": {
                "success": True,
                "name": "B[T7|1,1|1,0]",
                "size": 7,
                "gluing_table": "...",
                "signature": "...",
                "closed": True,
                "orientable": False,
                "homology": "Z + Z_2",
                "manifold": "T2 x I / ((2,1),(1,0))",
                "notes": [],
            }
        }


class GoldenManifoldSchema(Schema):
    """Schema for one census manifold and its minimal triangulations"""
    label: str
    tetrahedra: int
    homology: str
    members: List[str]
