"""
Report models printed by the commands.
"""
from typing import Dict, List, Optional, Union
from pydantic import BaseModel, Field, model_validator


class FieldInfo(BaseModel):
    """Summary of F_{q^n} printed by ``field info``."""

    p: int
    h: int
    n: int
    q: int
    order: int
    modulus: List[int] = Field(..., description="Ascending coefficients over F_p")
    primitive: int = Field(..., description="Integer code of a primitive element")


class PolyReport(BaseModel):
    """A q-polynomial with the F_q-linear map it defines."""

    poly: str
    coeffs: List[int] = Field(..., description="Element codes (a_0, ..., a_{n-1})")
    rank: int
    kernel_dim: int
    matrix: List[List[int]] = Field(default_factory=list, description="Columns are images of the F_q-basis")


class CodeParams(BaseModel):
    """Parameters (m, n, q; d) and F_q-dimension of a rank-metric code."""

    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    q: int = Field(..., ge=2)
    d: int = Field(..., ge=0, description="Minimum rank distance")
    dim: Union[int, float] = Field(..., ge=0, description="log_q |C|; fractional only for codes linear over a proper subfield")

    @property
    def singleton_exponent(self) -> int:
        """Exponent of the Singleton bound: |C| <= q^(max(m,n) * (min(m,n) - d + 1))."""
        return max(self.m, self.n) * (min(self.m, self.n) - self.d + 1)

    def label(self) -> str:
        return f"({self.m},{self.n},{self.q};{self.d})"

    class Config:
        json_schema_extra = {"example": {"m": 5, "n": 5, "q": 2, "d": 4, "dim": 10}}


class WeightDistribution(BaseModel):
    """Codeword counts A_0..A_min(m,n) by rank."""

    counts: List[int] = Field(..., description="counts[i] = number of codewords of rank i")

    @model_validator(mode="after")
    def _non_negative(self) -> "WeightDistribution":
        if any(c < 0 for c in self.counts):
            raise ValueError("weight counts must be non-negative")
        return self

    @property
    def total(self) -> int:
        return sum(self.counts)

    class Config:
        json_schema_extra = {"example": {"counts": [1, 0, 49, 14]}}


class IdealiserReport(BaseModel):
    left_order: int
    right_order: int
    left_is_field: bool
    right_is_field: bool


class CodeReport(BaseModel):
    """Result of ``code verify``."""

    params: CodeParams
    mrd: bool
    singleton_ok: bool = Field(..., description="|C| never exceeds the Singleton bound")
    fast_path: Optional[str] = Field(default=None, description="'left' or 'right' when F_{q^n}-linear enumeration was used")
    ranks_computed: int = Field(default=0, description="Rank computations spent")
    weights: Optional[WeightDistribution] = None


class CodeFingerprint(BaseModel):
    """Equivalence invariants; different fingerprints certify non-equivalence."""

    params: CodeParams
    weights: WeightDistribution
    idealisers: IdealiserReport


class FingerprintResponse(CodeFingerprint):
    digest: str = Field(..., description="sha256 prefix of the fingerprint")


class LinearSetSummary(BaseModel):
    """A linear set L_U with its point weights."""

    rank: int = Field(..., description="dim_{F_q} U")
    size: int = Field(..., description="|L_U|")
    points: List[List[int]] = Field(default_factory=list, description="Normalized representatives")
    weights: List[int] = Field(default_factory=list, description="Weight of each listed point")
    spectrum: Dict[int, int] = Field(default_factory=dict, description="weight -> number of points")
    scattered: bool
    max_field_of_linearity: int = Field(default=1, description="Largest l with U an F_{q^l}-space")

    @model_validator(mode="after")
    def _size_bound(self) -> "LinearSetSummary":
        if self.scattered and self.spectrum and set(self.spectrum) != {1}:
            raise ValueError("a scattered linear set has only weight-one points")
        return self


class SpectrumReport(BaseModel):
    """Weights of points (or hyperplanes) of L_U: weight -> how many."""

    over: str = Field(..., description="'points' or 'hyperplanes'")
    spectrum: Dict[int, int]


class HScatteredReport(BaseModel):
    h: int
    h_scattered: bool
    spans: bool = Field(..., description="L_U spans the ambient space")
    subgeometry: bool = Field(default=False, description="k <= r: canonical subgeometry case")
    max_weight: int = Field(..., description="Largest weight of an h-dimensional F_{q^n}-subspace")
    subspaces_checked: int = 0


class MaxScatteredReport(BaseModel):
    """Outcome of the exhaustive search for the largest scattered rank."""

    r: int
    n: int
    q: int
    max_rank: int
    witness: List[List[int]] = Field(default_factory=list, description="Basis of a scattered subspace of rank max_rank")
    refuted: Dict[int, int] = Field(default_factory=dict, description="rank -> subspaces certified non-scattered")

    @property
    def bound(self) -> int:
        return self.r * self.n // 2


class ScatteredCountReport(BaseModel):
    r: int
    n: int
    q: int
    k: int
    scattered: int = Field(..., description="Scattered k-dimensional F_q-subspaces")
    total: int = Field(..., description="All k-dimensional F_q-subspaces of F_q^{rn}")


class ClassReport(BaseModel):
    """Defining subspaces of a linear set of PG(1, q^n), up to scalars and up to semilinear maps."""

    linear_set_size: int
    matching: int = Field(..., description="Subspaces W with L_W = L_U")
    zgl_class: int
    gl_class: Optional[int] = None
    representatives: List[List[List[int]]] = Field(default_factory=list)


class CorrespondenceReport(BaseModel):
    """One direction of the subspace/code correspondence."""

    direction: str = Field(..., description="'subspace->code' or 'code->subspace'")
    input_fingerprint: str
    output_fingerprint: str
    scattered: bool
    mrd: bool
    round_trip_equal: bool = False
    params: Optional[CodeParams] = None
    detail: str = ""

    @model_validator(mode="after")
    def _round_trip_implies_verdicts(self) -> "CorrespondenceReport":
        if self.round_trip_equal and not (self.scattered and self.mrd):
            raise ValueError("a round trip can only be equal when both verdicts hold")
        return self

    @property
    def agree(self) -> bool:
        return self.scattered == self.mrd


class CriterionResult(BaseModel):
    id: str
    title: str
    passed: bool
    seconds: float
    detail: str = ""


class AcceptanceReport(BaseModel):
    suite: str
    results: List[CriterionResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


class ErrorResponse(BaseModel):
    """Error response model."""

    error: str = Field(..., description="Error message")
    detail: str = Field(default="", description="Additional error details")
