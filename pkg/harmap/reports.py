"""
Report models

Every structured result is a pydantic model so it can be dumped straight to
JSON (``model_dump(mode="json")``). Complex numbers travel as [re, im] pairs.
"""

from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, computed_field, model_validator


def cpair(z: complex) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


# ========================================
# CLASSIFIERS / SAMPLED CHECKS
# ========================================

class ClassificationReport(BaseModel):
    """Outcome of one coefficient-sum condition and the orders it implies."""
    condition_name: str
    condition_value: float = Field(description="The computed sum λ")
    threshold: float
    passed: bool
    order_starlike: Optional[float] = Field(default=None, ge=0.0, lt=1.0)
    order_convex: Optional[float] = Field(default=None, ge=0.0, lt=1.0)
    degenerate: bool = Field(default=False, description="Exact order 1 was capped below 1")
    close_to_convex: Optional[bool] = None
    truncation_order: int

    @model_validator(mode="after")
    def _orders_only_when_passed(self):
        if not self.passed and (self.order_starlike is not None or self.order_convex is not None):
            raise ValueError("orders are reported only for a passing condition")
        return self


class CheckReport(BaseModel):
    """Pass/fail record of a sampled or coefficient check."""
    name: str
    passed: bool
    value: Optional[float] = Field(default=None, description="Key computed quantity (minimum, maximum, slack)")
    threshold: Optional[float] = None
    necessary_only: bool = True
    truncation_order: Optional[int] = None
    grid: Optional[Tuple[int, int]] = None
    details: Dict[str, Any] = Field(default_factory=dict)


# ========================================
# RADIUS ANALYSIS
# ========================================

class RadiusTest(BaseModel):
    kind: Literal["convexity", "starlikeness"]
    r: float
    passed: bool
    min_derivative: float
    argmin_theta: float
    total_turning: float
    n_theta: int


class RadiusResult(BaseModel):
    kind: Literal["convexity", "starlikeness"]
    r_lo: float
    r_hi: float
    grid_theta: int
    tol: float
    reached_limit: bool = Field(default=False, description="Test still passed at the upper search limit")
    search_limit: Optional[float] = Field(default=None, description="Upper end of the search, below r_max when series truncation caps it")
    scan_radii: List[float] = Field(default_factory=list)
    scan_passed: List[bool] = Field(default_factory=list)

    @model_validator(mode="after")
    def _bracket(self):
        if self.r_hi < self.r_lo or self.r_hi - self.r_lo > self.tol * (1 + 1e-9):
            raise ValueError(f"bracket [{self.r_lo}, {self.r_hi}] wider than tol {self.tol}")
        return self

    @computed_field
    @property
    def midpoint(self) -> float:
        return 0.5 * (self.r_lo + self.r_hi)

    def contains(self, r: float) -> bool:
        return self.r_lo <= r <= self.r_hi


class TangentResidual(BaseModel):
    r: float
    u: float
    psi_lhs: float
    p_value: float
    psi_residual: float
    phi_lhs: float
    q_value: float
    phi_residual: float
    threshold: float = 1e-5

    @computed_field
    @property
    def passed(self) -> bool:
        return self.psi_residual < self.threshold and self.phi_residual < self.threshold


class SpecialRadii(BaseModel):
    r_convex: float
    r_star: float
    r_star_closed_form: float
    r_close_to_convex_star: float = Field(description="4√2 − 5, class starlikeness bound")
    r_close_to_convex_conv: float = Field(description="2 − √3, class convexity bound")


# ========================================
# VERIFICATION
# ========================================

class VerificationRecord(BaseModel):
    claim_id: str
    anchor: str = Field(description="Result group the claim reproduces, e.g. radii/convexity")
    statement: str
    computed: Union[float, str, None]
    expected: Union[float, str, None]
    tolerance: Optional[float] = None
    passed: bool


class VerificationReport(BaseModel):
    suite: str
    records: List[VerificationRecord] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @computed_field
    @property
    def failures(self) -> List[str]:
        return [r.claim_id for r in self.records if not r.passed]
