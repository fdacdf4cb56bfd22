from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class Verdict(str, Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    NOT_APPLICABLE = "not applicable"


class OracleStatus(str, Enum):
    RAN = "ran"
    SKIPPED = "oracle skipped"
    NOT_APPLICABLE = "not applicable"


class Gamma3Descriptor(BaseModel):
    order: int
    is_cyclic: bool
    equals_gprime_squared: bool = Field(..., description="γ_3 equals the subgroup of squares of G'")
    equals_omega1: Optional[bool] = Field(None, description="γ_3 equals Ω_1(G'); null when G' is nonabelian")


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class AnalysisReport(BaseModel):
    """Everything computed for one group, in a stable field order"""

    name: str
    order: int
    p: Optional[int] = None
    n: Optional[int] = Field(None, description="log_p |G'|")
    l: Optional[int] = Field(None, description="log_p exp(G')")
    cl: Optional[int] = None
    gate: str
    gprime_type: Optional[str] = None
    gamma3: Optional[Gamma3Descriptor] = None
    d_sequence: Dict[int, int] = Field(default_factory=dict)
    tU_jennings: Optional[int] = None
    tU_direct: Optional[int] = None
    tL_direct: Optional[int] = None
    unit_class: Optional[int] = None
    matches: List[str] = Field(default_factory=list)
    verdict: Verdict

    gate_reason: Optional[str] = None
    oracle: OracleStatus = OracleStatus.NOT_APPLICABLE
    literal_matches: List[str] = Field(default_factory=list)
    lemma_cases: List[str] = Field(default_factory=list)
    maximal_value: Optional[int] = Field(None, description="|G'| + 1")
    almost_maximal_value: Optional[int] = Field(None, description="|G'| - p + 2")
    lower_dims: List[int] = Field(default_factory=list)
    upper_dims: List[int] = Field(default_factory=list)
    dimension_orders: List[int] = Field(default_factory=list)
    checks: List[CheckResult] = Field(default_factory=list)
    findings: List[str] = Field(default_factory=list)

    @property
    def failed_checks(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


class StructureSummary(BaseModel):
    order: int
    nilpotent: bool
    cl: Optional[int] = None
    lower_central_orders: List[int]
    gprime_order: int
    gprime_type: str
    gprime_exponent: int
    center_order: int
    gamma3: Optional[Gamma3Descriptor] = None


class CoverageRow(BaseModel):
    condition: str
    target: str
    witnesses: List[str] = Field(default_factory=list)
    status: str = Field(..., description="'witnessed' or 'one-directional only'")


class PinMismatch(BaseModel):
    name: str
    field: str
    expected: str
    actual: str


class VerificationSummary(BaseModel):
    groups: int
    consistent: int
    inconsistent: List[str] = Field(default_factory=list)
    not_applicable: List[str] = Field(default_factory=list)
    errors: Dict[str, str] = Field(default_factory=dict)
    resource_limited: List[str] = Field(default_factory=list, description="Groups whose error was a size cap")
    pin_mismatches: List[PinMismatch] = Field(default_factory=list)
    unchecked_pins: List[str] = Field(default_factory=list, description="Pins skipped because the oracle did not run")
    coverage: List[CoverageRow] = Field(default_factory=list)
    findings: Dict[str, List[str]] = Field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not (self.inconsistent or self.errors or self.pin_mismatches)
