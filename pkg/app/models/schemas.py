from pydantic import BaseModel, Field
from typing import List, Optional, Dict, Any, Literal, Tuple
from enum import Enum
from datetime import datetime


class CheckStatus(str, Enum):
    """
    Outcome of a single verification check
    """
    PASS = "PASS"
    FAIL = "FAIL"
    SKIP = "SKIP"


class Claim(BaseModel):
    """
    One algebraic fact checked by a service operation
    """
    name: str = Field(..., description="Short identifier of the fact")
    passed: bool = Field(..., description="Whether the fact holds")
    witness: Dict[str, Any] = Field(default={}, description="Data supporting the outcome")


class ClaimReport(BaseModel):
    """
    Collection of claims produced by one operation
    """
    subject: str = Field(..., description="What was examined")
    claims: List[Claim] = Field(default=[], description="Checked facts in evaluation order")

    def add(self, name: str, passed: bool, **witness: Any) -> bool:
        self.claims.append(Claim(name=name, passed=bool(passed), witness=witness))
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    @property
    def failures(self) -> List[str]:
        return [c.name for c in self.claims if not c.passed]

    def claim(self, name: str) -> Claim:
        for c in self.claims:
            if c.name == name:
                return c
        raise KeyError(name)


class CheckRecord(BaseModel):
    """
    Single record of a verification report
    """
    id: str = Field(..., description="Stable check identifier, e.g. repkit.2alt4.regular")
    citation: str = Field(..., description="The claim being checked, in words")
    status: CheckStatus = Field(..., description="PASS, FAIL or SKIP")
    summary: str = Field(default="", description="One-line outcome")
    witness: Dict[str, Any] = Field(default={}, description="Computed values backing the status")


class VerificationReport(BaseModel):
    """
    Result of running one suite
    """
    suite: str = Field(..., description="Suite identifier")
    toolkit_version: str = Field(..., description="Version of the toolkit that produced the report")
    seed: int = Field(..., description="Seed used by randomized property checks")
    input_hashes: Dict[str, str] = Field(default={}, description="Content hashes of the data files read")
    records: List[CheckRecord] = Field(default=[], description="Check records sorted by id")
    elapsed_seconds: float = Field(default=0.0, ge=0, description="Wall-clock time of the run")

    @property
    def failures(self) -> List[CheckRecord]:
        return [r for r in self.records if r.status == CheckStatus.FAIL]

    @property
    def passed(self) -> bool:
        return not self.failures

    def counts(self) -> Dict[str, int]:
        return {status.value: sum(1 for r in self.records if r.status == status) for status in CheckStatus}


class SuiteOptions(BaseModel):
    """
    Per-run options of a suite
    """
    fixture: Optional[str] = Field(default=None, description="Restrict the suite to one named fixture")
    seed: Optional[int] = Field(default=None, description="Seed for randomized property checks")
    constants_file: Optional[str] = Field(default=None, description="Substitute constants file")
    cache_dir: Optional[str] = Field(default=None, description="Character-table cache directory")


class CliffordFixture(BaseModel):
    """
    A generator set or derived-structure claim in the Clifford fixture file
    """
    name: str = Field(..., description="Unique fixture name")
    kind: Literal["generators", "commuting", "lie", "idempotent"] = Field(default="generators")
    algebra: Literal["gamma", "abstract"] = Field(default="gamma", description="Ambient algebra")
    squares: Optional[List[int]] = Field(default=None, description="Generator squares of an abstract algebra")
    generators: List[str] = Field(default=[], description="Generator expressions")
    claimed_signature: Optional[Tuple[int, int]] = Field(default=None)
    claimed_pseudoscalar: Optional[str] = Field(default=None, description="Claimed product of the generators")
    pseudoscalar_sign: Optional[int] = Field(default=None, description="Sign relating the product to the claim")
    expected_dimension: Optional[int] = Field(default=None, description="Dimension of the generated subalgebra")
    left: List[str] = Field(default=[], description="First generator list of a commuting pair")
    right: List[str] = Field(default=[], description="Second generator list of a commuting pair")
    elements: List[str] = Field(default=[], description="Elements closed under the commutator")
    adjoin: List[str] = Field(default=[], description="Elements adjoined for the enlarged Lie closure")
    expected_lie_dimension: Optional[int] = Field(default=None)
    expected_with_adjoined: Optional[int] = Field(default=None)
    idempotent: Optional[str] = Field(default=None, description="Idempotent expression")
    triple: List[str] = Field(default=[], description="Elements expected to satisfy quaternion relations")
    expected_corner_dimension: Optional[int] = Field(default=None)
    label: str = Field(default="", description="Name of the structure, e.g. Cl(3,3)")
    claim: str = Field(default="", description="Claim in words")
    supplementary: bool = Field(default=False, description="Fixture added beyond the displayed generator lists")


class CliffordFixtureFile(BaseModel):
    version: int = 1
    fixtures: List[CliffordFixture]


class ParticleEntry(BaseModel):
    """
    Particle placed in a finite-field model
    """
    name: str = Field(..., description="Particle name, e.g. nu or d_R")
    vectors: List[str] = Field(..., description="Bit-strings by letters (GF(2)) or coordinate triples (GF(4))")
    handedness: Literal["L", "R"] = Field(..., description="Chirality tag")
    colours: List[str] = Field(default=[], description="Colour tag of each vector, quarks only")
    row: Optional[int] = Field(default=None, description="Row of the GF(4) display, 1 or 2")


class ParticleFile(BaseModel):
    model: Literal["gf2", "gf4"]
    particles: List[ParticleEntry]
    lepton_generation_scalars: Dict[str, str] = Field(
        default={}, description="Scalar by which the colour generator multiplies each lepton vector (GF(4) only)")
    left_action_18_orbit: List[str] = Field(
        default=[], description="Particles whose first vector lies in the 18-orbit of the column action (GF(4) only)")


class ConstantEntry(BaseModel):
    """
    Measured quantity from the constants file
    """
    name: str = Field(..., description="Key such as m_e or theta")
    value: str = Field(..., description="Decimal string")
    sigma: str = Field(default="0", description="Standard uncertainty, same unit")
    unit: str = Field(..., description="Unit label")
    note: str = Field(default="", description="Source or convention")


class ConstantsFile(BaseModel):
    source: str = Field(default="", description="Where the values come from")
    constants: List[ConstantEntry]


class APIResponse(BaseModel):
    """
    Generic API response wrapper
    """
    success: bool = True
    message: str = "Operation completed successfully"
    data: Optional[Any] = None
    timestamp: datetime = Field(default_factory=datetime.now)
