from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Literal

WeightKind = Literal["analytic", "table", "monte_carlo"]


@dataclass(frozen=True)
class WeightEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    graph_key: str
    analytic: Fraction | None = None

    def within(self, expected: float, sigmas: float = 3.0, slack: float = 1e-9) -> bool:
        return abs(self.mean - expected) <= sigmas * self.std_error + slack

    def to_dict(self) -> dict:
        data = asdict(self)
        data["analytic"] = None if self.analytic is None else float(self.analytic)
        return data


@dataclass(frozen=True)
class WeightRecord:
    """How the weight of one graph class entered an assembled operator."""

    order: int
    graph_key: str
    count: int
    weight: Fraction
    std_error: float
    source: WeightKind

    @property
    def analytic(self) -> bool:
        return self.source == "analytic"

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "graph_key": self.graph_key,
            "count": self.count,
            "weight": str(self.weight) if self.analytic else float(self.weight),
            "std_error": self.std_error,
            "source": self.source,
        }


@dataclass
class OrderResidual:
    order: int
    max_abs: float
    exact_zero: bool
    evaluated_max_abs: float = 0.0
    tolerance: float = 0.0

    @property
    def ok(self) -> bool:
        return self.exact_zero or max(self.max_abs, self.evaluated_max_abs) <= self.tolerance


@dataclass
class AssociativityReport:
    order: int
    residuals: list[OrderResidual] = field(default_factory=list)
    obstruction: OrderResidual | None = None
    triples_checked: int = 0

    @property
    def associative(self) -> bool:
        return all(r.ok for r in self.residuals)

    @property
    def max_violation(self) -> float:
        return max((max(r.max_abs, r.evaluated_max_abs) for r in self.residuals), default=0.0)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["associative"] = self.associative
        data["max_violation"] = self.max_violation
        return data


@dataclass
class FormalityResult:
    n: int
    residual: float
    sigma: float
    exact: bool
    ok: bool
    cases: int = 0
    alternated: float = 0.0


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int = 0
    detail: str = ""


@dataclass
class SuiteResult:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)
