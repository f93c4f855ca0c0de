from fractions import Fraction
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import Field, model_validator

from app.core.config import settings
from app.models.base import FrozenModel, Rational
from app.models.instance import EdgePacking
from app.models.lp import GapRow

Algorithm = Literal["add", "delete", "round", "weighted", "tree", "exact", "auto"]
Family = Literal["gnm", "tree", "complete", "star", "path"]
BoundKind = Literal["oracle", "degree-sum", "heavy-sets"]


class GeneratorSpec(FrozenModel):
    """Everything that determines a generated instance; equal specs give equal instances."""

    family: Family
    n: int = Field(ge=0)
    m: Optional[int] = Field(default=None, ge=0)
    bound: Literal["fixed", "uniform", "fraction"] = "fixed"
    bound_value: int = Field(default=1, ge=0)
    bound_fraction: Rational = Fraction(1, 2)
    weights: Literal["none", "uniform"] = "none"
    weight_low: int = Field(default=1, ge=0)
    weight_high: int = Field(default=100, ge=0)
    seed: int = 0
    multigraph: bool = False

    @model_validator(mode="after")
    def check_ranges(self) -> "GeneratorSpec":
        if self.weight_low > self.weight_high:
            raise ValueError(f"empty weight range [{self.weight_low}, {self.weight_high}]")
        if not 0 <= self.bound_fraction <= 1:
            raise ValueError(f"bound fraction {self.bound_fraction} is outside [0, 1]")
        return self


class RunParameters(FrozenModel):
    eps: Optional[Rational] = None
    order: Optional[int] = None
    root: Optional[int] = None
    relabel_seed: Optional[int] = None


class RunReport(FrozenModel):
    """
    One solver run. `feasible` is recomputed from the packing, `ratio` is
    bound / value, and `checks` holds the solver-specific certificates.
    """

    schema_version: str = settings.REPORT_SCHEMA_VERSION
    digest: str
    solver: str
    parameters: RunParameters = RunParameters()
    n: int
    m: int
    value: Rational
    size: int
    packing: EdgePacking
    feasible: bool
    bound_kind: BoundKind
    bound: Rational
    ratio: Optional[Rational] = None
    guarantee: Optional[Rational] = None
    certified: Optional[bool] = None
    checks: Dict[str, bool] = Field(default_factory=dict)
    wall_seconds: float = 0.0

    @property
    def violations(self) -> List[str]:
        failed = [] if self.feasible else ["feasibility"]
        if self.certified is False:
            failed.append("ratio")
        failed.extend(name for name, ok in self.checks.items() if not ok)
        return failed


class SolveRequest(FrozenModel):
    instance: str
    alg: Algorithm = "auto"
    eps: Optional[Rational] = None
    order: Optional[int] = None
    root: Optional[int] = None
    relabel_seed: Optional[int] = None


class GeneratedInstance(FrozenModel):
    text: str
    digest: str


class GapRequest(FrozenModel):
    sizes: List[int] = Field(default_factory=lambda: [8, 12, 16, 24])


class BatchSpec(FrozenModel):
    """
    One seeded batch of the certification run.

    kind:
        random   mixed families, unweighted
        weighted random graphs with integer weights
        tree     random trees with random bounds
        lp2      standalone relaxation solves on random residual states
        gap      the complete-graph sweep over `sizes`
    """

    name: str
    kind: Literal["random", "weighted", "tree", "lp2", "gap"]
    count: int = Field(default=0, ge=0)
    n_min: int = Field(default=2, ge=1)
    n_max: int = Field(default=8, ge=1)
    m_max: Optional[int] = None
    solvers: Tuple[str, ...] = ()
    eps: Tuple[Rational, ...] = (Fraction(1, 100),)
    round_edge_limit: Optional[int] = None
    sizes: Tuple[int, ...] = ()


class CertifyConfig(FrozenModel):
    seed: int = 0
    workers: Optional[int] = None
    batches: Tuple[BatchSpec, ...] = ()


class Violation(FrozenModel):
    batch: str
    seed: int
    solver: str
    reason: str


class SolverSummary(FrozenModel):
    batch: str
    solver: str
    runs: int
    feasible: int
    oracle_runs: int = 0
    worst_ratio: Optional[Rational] = None
    guarantee: Optional[Rational] = None


class CertifySummary(FrozenModel):
    schema_version: str = settings.REPORT_SCHEMA_VERSION
    passed: bool
    rows: Tuple[SolverSummary, ...] = ()
    gap: Tuple[GapRow, ...] = ()
    violations: Tuple[Violation, ...] = ()
