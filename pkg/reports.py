"""
Check Results & Reports
Structured pass / fail / undecided outcomes with witnesses, rendered as
deterministic JSON or a human-readable summary
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import pandas as pd

from cyclotomic import CycNum

logger = logging.getLogger(__name__)


class Status(Enum):
    PASS = "pass"
    FAIL = "fail"
    UNDECIDED = "undecided"


@dataclass
class CheckResult:
    """Outcome of one named check"""
    name: str
    status: Status = Status.PASS
    witnesses: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    mandatory: bool = True
    elapsed: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    def fail(self, witness: str, max_witnesses: int = 20):
        """Record a failing witness; the first failure flips the status"""
        self.status = Status.FAIL
        if len(self.witnesses) < max_witnesses:
            self.witnesses.append(witness)

    def undecided(self, witness: str):
        if self.status is Status.PASS:
            self.status = Status.UNDECIDED
        self.witnesses.append(witness)

    def merge(self, other: "CheckResult"):
        """Fold another result's witnesses into this one"""
        if other.status is Status.FAIL:
            for w in other.witnesses:
                self.fail(f"{other.name}: {w}")
        elif other.status is Status.UNDECIDED:
            for w in other.witnesses:
                self.undecided(f"{other.name}: {w}")

    def to_dict(self, include_timings: bool = False) -> Dict:
        data = {
            'name': self.name,
            'status': self.status.value,
            'mandatory': self.mandatory,
            'witnesses': list(self.witnesses),
            'details': _jsonable(self.details),
        }
        if include_timings and self.elapsed is not None:
            data['elapsed'] = round(self.elapsed, 6)
        return data


def _jsonable(value):
    if isinstance(value, CycNum):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


@dataclass
class Report:
    """All checks run against one dataset"""
    dataset: str
    checks: List[CheckResult] = field(default_factory=list)
    sections: Dict[str, Any] = field(default_factory=dict)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        level = logging.INFO if check.status is Status.PASS else logging.WARNING
        logger.log(level, f"{self.dataset}: {check.name} -> {check.status.value}")
        return check

    def check(self, name: str) -> Optional[CheckResult]:
        return next((c for c in self.checks if c.name == name), None)

    @property
    def verdict(self) -> Status:
        """FAIL if any mandatory check failed, else UNDECIDED if any was undecided"""
        mandatory = [c for c in self.checks if c.mandatory]
        if any(c.status is Status.FAIL for c in mandatory):
            return Status.FAIL
        if any(c.status is Status.UNDECIDED for c in mandatory):
            return Status.UNDECIDED
        return Status.PASS

    def exit_code(self) -> int:
        return 0 if self.verdict is Status.PASS else 1

    def to_dict(self, include_timings: bool = False) -> Dict:
        return {
            'dataset': self.dataset,
            'verdict': self.verdict.value,
            'checks': [c.to_dict(include_timings) for c in self.checks],
            'sections': _jsonable(self.sections),
        }

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings), indent=2, sort_keys=True,
                          ensure_ascii=False)

    def to_frame(self) -> pd.DataFrame:
        rows = [{'check': c.name, 'status': c.status.value,
                 'mandatory': c.mandatory, 'witnesses': len(c.witnesses)}
                for c in self.checks]
        return pd.DataFrame(rows, columns=['check', 'status', 'mandatory', 'witnesses'])

    def render(self) -> str:
        lines = [f"📋 Dataset: {self.dataset}", "=" * 50]
        if self.checks:
            lines.append(self.to_frame().to_string(index=False))
        for c in self.checks:
            mark = '❌' if c.status is Status.FAIL else '⚠️'
            for w in c.witnesses:
                lines.append(f"   {mark} {c.name}: {w}")
        lines.append("=" * 50)
        icon = {'pass': '✅', 'fail': '❌', 'undecided': '⚠️'}[self.verdict.value]
        lines.append(f"{icon} Verdict: {self.verdict.value.upper()}")
        return "\n".join(lines)
