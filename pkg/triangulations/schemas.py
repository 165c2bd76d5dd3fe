from typing import List, Optional
from enum import Enum

from ninja import Schema
from pydantic import Field


class VerdictEnum(str, Enum):
    """P²-irreducibility verdict from vertex normal surfaces"""
    IRREDUCIBLE = "irreducible"
    NOT_IRREDUCIBLE = "not-irreducible"
    UNKNOWN = "unknown"


class ErrorResponse(Schema):
    """Schema for error response"""
    success: bool = False
    error: str
    details: Optional[str] = None


class GluingTableRequest(Schema):
    """Schema for a triangulation given as a gluing table"""
    gluing_table: str = Field(..., description="One line per tetrahedron: four entries 'u:abcd' or 'bdy'")
    normal_surfaces: bool = Field(True, description="Also run the normal surface P²-irreducibility test")

    class Config:
        schema_extra = {
            "example": {
                "gluing_table": "0:1230 0:3012 bdy bdy\n",
                "normal_surfaces": True,
            }
        }


class ValiditySchema(Schema):
    """Schema for validity flags"""
    closed: bool
    orientable: bool
    connected: bool
    all_vertex_links_spheres: bool
    edge_self_reversed: bool
    closed_manifold: bool


class TuraevViroSchema(Schema):
    """Schema for one Turaev-Viro value"""
    r: int
    value: float


class AnalysisResponse(Schema):
    """Schema for the analysis of one triangulation"""
    success: bool = True
    size: int
    signatures: List[str]
    validity: ValiditySchema
    vertices: int
    edges: int
    faces: int
    homology: Optional[str] = None
    homology_z2: Optional[int] = None
    fundamental_group: Optional[str] = None
    turaev_viro: List[TuraevViroSchema] = []
    verdict: Optional[VerdictEnum] = None
    pillow_2sphere: bool = False
    snapped_2sphere: bool = False
    notes: List[str] = []


class SignatureResponse(Schema):
    """Schema for isomorphism signature response"""
    success: bool = True
    size: int
    signatures: List[str]
    canonical_table: Optional[str] = Field(None, description="Canonical gluing table when connected")
