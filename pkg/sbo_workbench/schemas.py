"""Pydantic schemas for run configuration and verification reports.

These schemas are the only objects that cross the process boundary: the CLI
parses flags into a RunConfig and every suite answers with a SuiteReport.
"""

import json
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .constants import CHECK_ANCHORS, RANDOM_POINT_DEFAULTS, REPORT_DEFAULTS, SUITES, SUPPORTED_SIZES
from .exact_algebra import as_rational
from .parameters import InductionParams


class CheckStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"


class Mode(str, Enum):
    SYMBOLIC = "symbolic"  # exact identities over the parameter field
    NUMERIC = "numeric"    # identities re-checked at seeded rational points


class OutputFormat(str, Enum):
    JSON = "json"
    LATEX = "latex"
    TEXT = "text"


# Report schemas
class CheckResult(BaseModel):
    """One certified identity: name, anchor, status and a witness on failure."""
    check: str
    anchor: str
    status: CheckStatus
    details: Dict[str, Any] = Field(default_factory=dict)
    millis: Optional[float] = None

    model_config = ConfigDict(frozen=True)

    @classmethod
    def build(cls, check: str, anchor_key: str, passed: bool, details: Optional[Dict[str, Any]] = None) -> "CheckResult":
        return cls(
            check=check,
            anchor=CHECK_ANCHORS[anchor_key],
            status=CheckStatus.PASS if passed else CheckStatus.FAIL,
            details=details or {},
        )

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS


class SuiteReport(BaseModel):
    suite: str
    checks: List[CheckResult] = Field(default_factory=list)
    millis: Optional[float] = None

    model_config = ConfigDict(frozen=True)

    @property
    def status(self) -> CheckStatus:
        """PASS iff every check passed (an empty suite passes)."""
        if all(check.passed for check in self.checks):
            return CheckStatus.PASS
        return CheckStatus.FAIL

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS

    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json")
        data["status"] = self.status.value
        return data

    def to_json(self, indent: int = None) -> str:
        indent = REPORT_DEFAULTS["json_indent"] if indent is None else indent
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)


# Parameter schemas
class InductionParamsModel(BaseModel):
    """Serializable form of InductionParams with rational entries as strings."""
    n: int
    xi: List[int]
    lam: List[str] = Field(..., alias="lambda")
    eta: List[int]
    nu: List[str]

    model_config = ConfigDict(populate_by_name=True)

    @classmethod
    def from_params(cls, p: InductionParams) -> "InductionParamsModel":
        return cls(
            n=p.n,
            xi=list(p.xi),
            lam=[str(v) for v in p.lam],
            eta=list(p.eta),
            nu=[str(v) for v in p.nu],
        )

    def to_params(self) -> InductionParams:
        """Numeric InductionParams.

        Raises:
            ValueError: If an entry is not an exact rational or the sizes disagree
        """
        p = InductionParams.build(self.lam, self.nu, xi=self.xi, eta=self.eta)
        if p.n != self.n:
            raise ValueError(f"size mismatch: nu has length {p.n}, expected {self.n}")
        return p


class RunConfig(BaseModel):
    """Everything a construct or verify run depends on.

    ``lam``/``nu`` of None mean symbolic parameters. The seed only moves the
    random points of numeric checks; symbolic results never depend on it.
    """
    n: int = 2
    k: Optional[int] = None
    lam: Optional[List[str]] = None
    nu: Optional[List[str]] = None
    xi: Optional[List[int]] = None
    eta: Optional[List[int]] = None
    alpha: Optional[List[int]] = None
    seed: int = RANDOM_POINT_DEFAULTS["seed"]
    samples: int = RANDOM_POINT_DEFAULTS["count"]
    mode: Mode = Mode.SYMBOLIC
    output: OutputFormat = OutputFormat.JSON
    timing: bool = True

    @field_validator("n")
    @classmethod
    def validate_n(cls, v):
        if not SUPPORTED_SIZES["min_n"] <= v <= SUPPORTED_SIZES["max_n"]:
            raise ValueError(
                f"size n={v} out of supported range {SUPPORTED_SIZES['min_n']}..{SUPPORTED_SIZES['max_n']}"
            )
        return v

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, v):
        if not 0 <= v < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {v}")
        return v

    @field_validator("samples")
    @classmethod
    def validate_samples(cls, v):
        if v < 1:
            raise ValueError(f"samples must be positive, got {v}")
        return v

    @field_validator("lam", "nu")
    @classmethod
    def validate_rationals(cls, v):
        if v is not None:
            for entry in v:
                as_rational(entry)
        return v

    @field_validator("xi", "eta")
    @classmethod
    def validate_bits(cls, v):
        if v is not None and any(bit not in (0, 1) for bit in v):
            raise ValueError(f"parity vector must have entries in {{0, 1}}, got {v}")
        return v

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v):
        if v is not None and any(a < 0 for a in v):
            raise ValueError(f"alpha must be a vector of naturals, got {v}")
        return v

    @model_validator(mode="after")
    def validate_sizes(self):
        n = self.n
        if self.k is not None and not 0 <= self.k <= n:
            raise ValueError(f"index out of range: k={self.k} not in 0..{n}")
        expected = {"lam": n + 1, "nu": n, "xi": n + 1, "eta": n, "alpha": n}
        for name, length in expected.items():
            value = getattr(self, name)
            if value is not None and len(value) != length:
                raise ValueError(f"size mismatch: {name} has length {len(value)}, expected {length}")
        if (self.lam is None) != (self.nu is None):
            raise ValueError("lambda and nu must be given together")
        return self

    @property
    def is_symbolic(self) -> bool:
        return self.lam is None

    def params(self) -> InductionParams:
        """The configured parameters, symbolic when no vectors were given."""
        if self.is_symbolic:
            return InductionParams.symbolic(self.n, xi=self.xi, eta=self.eta)
        return InductionParams.build(self.lam, self.nu, xi=self.xi, eta=self.eta)


def known_suites() -> List[str]:
    return list(SUITES) + ["all"]
