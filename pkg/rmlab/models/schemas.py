"""
Wire models: the JSON shapes of fields, polynomials, codes and subspaces.

Field elements always travel as their integer codes (base-p digits are the
coefficients in the modulus root, digit i = degree i).
"""
from typing import List, Literal, Optional
from pydantic import BaseModel, Field, model_validator


class FieldSpec(BaseModel):
    """Description of F_{p^{hn}} with q = p^h."""

    p: int = Field(..., ge=2, description="Prime characteristic")
    h: int = Field(default=1, ge=1, description="q = p^h")
    n: int = Field(..., ge=1, description="Extension degree of F_{q^n} over F_q")
    modulus: Optional[List[int]] = Field(
        default=None,
        description="Ascending coefficients of a monic irreducible polynomial of degree hn over F_p; "
                    "omitted means the default table entry",
    )

    @property
    def q(self) -> int:
        return self.p ** self.h

    @property
    def degree(self) -> int:
        """Degree of the whole field over the prime field."""
        return self.h * self.n

    @property
    def order(self) -> int:
        return self.p ** self.degree

    class Config:
        json_schema_extra = {
            "example": {"p": 2, "h": 1, "n": 6, "modulus": [1, 1, 0, 0, 0, 0, 1]}
        }


class LinPolyModel(BaseModel):
    """A q-polynomial sum a_i x^{q^i} as its coefficient codes."""

    coeffs: List[int] = Field(..., description="Element codes (a_0, ..., a_{n-1})")


class CodeModel(BaseModel):
    """An F_q-linear rank-metric code stored by an F_q-basis."""

    field: FieldSpec
    kind: Literal["square", "matrix"] = Field(..., description="q-polynomials or m x n matrices")
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    basis: List[List[int]] = Field(
        ...,
        description="square: coefficient lists; matrix: row-major F_q entries as element codes",
    )
    rank_scale: int = Field(default=1, ge=1, description="F_q-rank = base rank / rank_scale")

    @model_validator(mode="after")
    def _check_shapes(self) -> "CodeModel":
        width = self.n if self.kind == "square" else self.m * self.n
        for row in self.basis:
            if len(row) != width:
                raise ValueError(f"basis entry has length {len(row)}, expected {width}")
        return self

    class Config:
        json_schema_extra = {
            "example": {
                "field": {"p": 2, "h": 1, "n": 3, "modulus": [1, 1, 0, 1]},
                "kind": "square",
                "m": 3,
                "n": 3,
                "basis": [[1, 0, 0], [0, 1, 0]],
            }
        }


class SubspaceModel(BaseModel):
    """An F_q-subspace of F_{q^n}^r stored by an F_q-basis of vectors."""

    field: FieldSpec
    r: int = Field(..., ge=1)
    basis: List[List[int]] = Field(..., description="Vectors of r element codes")

    @model_validator(mode="after")
    def _check_shapes(self) -> "SubspaceModel":
        for row in self.basis:
            if len(row) != self.r:
                raise ValueError(f"vector has length {len(row)}, expected r={self.r}")
        return self


class RunConfig(BaseModel):
    """Per-run knobs: enumeration limits, workers, output format."""

    budget: int = Field(default=2 ** 24, ge=1, description="Max rank computations")
    vector_budget: int = Field(default=2 ** 24, ge=1, description="Max vectors / subspaces / group elements")
    workers: int = Field(default=1, ge=1)
    chunk_size: int = Field(default=4096, ge=1)
    format: Literal["json", "text"] = "text"

    @classmethod
    def from_settings(cls, **overrides) -> "RunConfig":
        from rmlab.config import settings

        values = {
            "budget": settings.BUDGET,
            "vector_budget": settings.VECTOR_BUDGET,
            "workers": settings.WORKERS,
            "chunk_size": settings.CHUNK_SIZE,
            "format": settings.FORMAT,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)
