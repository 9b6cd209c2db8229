"""Structured outcomes of identity checks."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .qlaurent import QLaurent


def render_side(value) -> dict | str:
    """Canonical rendering: QLaurent as sparse {"exponent": coefficient}, else str."""
    if isinstance(value, QLaurent):
        return value.to_sparse()
    if isinstance(value, dict):
        return {str(k): str(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    return str(value)


@dataclass(frozen=True)
class VerificationReport:
    """One identity check: both sides in canonical form, pass/fail, provenance."""

    instance: str
    check: str
    lhs: dict | str
    rhs: dict | str
    passed: bool
    witness: str | None = None

    def to_json_dict(self) -> dict:
        doc = {
            "instance": self.instance,
            "check": self.check,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "pass": self.passed,
        }
        if self.witness is not None:
            doc["witness"] = self.witness
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def text_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  witness: {self.witness}" if self.witness else ""
        return f"[{status}] {self.instance} :: {self.check}  lhs={self.lhs} rhs={self.rhs}{extra}"


def make_report(instance: str, check: str, lhs, rhs, passed: bool, witness=None) -> VerificationReport:
    return VerificationReport(
        instance=instance,
        check=check,
        lhs=render_side(lhs),
        rhs=render_side(rhs),
        passed=passed,
        witness=None if witness is None else str(witness),
    )
