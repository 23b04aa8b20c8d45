import enum
import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class CheckStatus(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"


class Witness(BaseModel):
    """A single offending input together with its normalized difference."""

    model_config = ConfigDict(frozen=True)

    input: str
    difference: str


class CheckReport(BaseModel):
    check: str
    status: CheckStatus
    expected: CheckStatus = CheckStatus.PASS
    witnesses: List[Witness] = Field(default_factory=list)
    examined: int = 0
    parameters: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def status_matches_witnesses(self):
        if (self.status is CheckStatus.FAIL) != bool(self.witnesses):
            raise ValueError("status must be 'fail' exactly when witnesses are present")
        return self

    @classmethod
    def from_witnesses(
        cls,
        check: str,
        witnesses: List[Witness],
        *,
        expected: CheckStatus = CheckStatus.PASS,
        examined: int = 0,
        parameters: Optional[Dict[str, Any]] = None,
    ) -> "CheckReport":
        return cls(
            check=check,
            status=CheckStatus.FAIL if witnesses else CheckStatus.PASS,
            expected=expected,
            witnesses=witnesses,
            examined=examined,
            parameters=parameters or {},
        )

    @property
    def ok(self) -> bool:
        """True when the outcome is the registered one (expected-fail checks must fail)."""
        return self.status == self.expected


class PresentationReport(BaseModel):
    preset: str
    valid: bool
    violations: List[str] = Field(default_factory=list)


class SuiteOptions(BaseModel):
    groups: List[str] = Field(default_factory=list)
    preset: Optional[str] = None
    corrected: bool = True
    max_degree: int = Field(default=3, ge=3)


def dump_json(payload: Any) -> str:
    """Byte-deterministic JSON for reports and lists of reports."""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    elif isinstance(payload, list):
        payload = [p.model_dump(mode="json") if isinstance(p, BaseModel) else p for p in payload]
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)
