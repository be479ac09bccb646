"""Small verdict records shared by the check routines and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

PASS = "pass"
FAIL = "fail"
INSUFFICIENT = "insufficient"


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, float):
        return None if value == float("inf") else value
    return value


@dataclass
class CheckReport:
    name: str
    status: str
    certified: int = 0
    untested: int = 0
    window: dict = field(default_factory=dict)
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)
    minimal_window: dict | None = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        out = {
            "check": self.name,
            "status": self.status,
            "certified": self.certified,
            "untested": self.untested,
            "window": _jsonable(self.window),
        }
        if self.counterexample is not None:
            out["counterexample"] = _jsonable(self.counterexample)
        if self.details:
            out["details"] = _jsonable(self.details)
        if self.minimal_window is not None:
            out["minimal_window"] = _jsonable(self.minimal_window)
        return out


def verdict(name: str, failures: list, certified: int, untested: int = 0, **kw) -> CheckReport:
    if failures:
        status = FAIL
    elif certified == 0:
        status = INSUFFICIENT
    else:
        status = PASS
    first = failures[0] if failures else None
    return CheckReport(name, status, certified, untested, counterexample=first, **kw)
