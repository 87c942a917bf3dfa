"""Machine-readable verification reports.

Reports are deterministic for a fixed (config, seed): checks are sorted by
id, floats are rendered to 17 significant digits, exact rationals as "p/q"
strings, and wall-clock timings are omitted unless explicitly requested (a
report with timings is not byte-reproducible).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__


def render_float(x: float) -> str:
    return f"{x:.17g}"


def render_exact(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


@dataclass
class Check:
    """One verification record; ``pass`` decides the process exit status."""

    id: str
    kind: str  # residual | rank | quadrature | value
    passed: bool
    instances: int | None = None
    expected: object = None
    actual: object = None
    status: str | None = None
    max_abs_float: float | None = None
    tolerance: float | None = None
    detail: object = None
    elapsed_ms: float | None = None

    def to_json(self, with_timings: bool) -> dict:
        rec = {"id": self.id, "kind": self.kind, "pass": self.passed}
        if self.instances is not None:
            rec["instances"] = self.instances
        if self.status is not None:
            rec["status"] = self.status
        if self.expected is not None:
            rec["expected"] = self.expected
        if self.actual is not None:
            rec["actual"] = self.actual
        if self.max_abs_float is not None:
            rec["max_abs_float"] = render_float(self.max_abs_float)
        if self.tolerance is not None:
            rec["tolerance"] = render_float(self.tolerance)
        if self.detail is not None:
            rec["detail"] = self.detail
        rec["elapsed_ms"] = (
            round(self.elapsed_ms, 3) if (with_timings and self.elapsed_ms is not None) else None
        )
        return rec


def residual_check(check_id, zero: bool, instances: int, elapsed_ms=None) -> Check:
    return Check(
        id=check_id,
        kind="residual",
        passed=zero,
        instances=instances,
        status="exact-zero" if zero else "nonzero-residual",
        elapsed_ms=elapsed_ms,
    )


def rank_check(check_id, expected: int, actual: int, elapsed_ms=None) -> Check:
    return Check(
        id=check_id,
        kind="rank",
        passed=expected == actual,
        expected=expected,
        actual=actual,
        elapsed_ms=elapsed_ms,
    )


def value_check(check_id, expected, actual, elapsed_ms=None, detail=None) -> Check:
    return Check(
        id=check_id,
        kind="value",
        passed=expected == actual,
        expected=str(expected),
        actual=str(actual),
        detail=detail,
        elapsed_ms=elapsed_ms,
    )


def quadrature_check(check_id, max_abs: float, tolerance: float, elapsed_ms=None, detail=None) -> Check:
    return Check(
        id=check_id,
        kind="quadrature",
        passed=max_abs <= tolerance,
        status="max-abs-float",
        max_abs_float=max_abs,
        tolerance=tolerance,
        detail=detail,
        elapsed_ms=elapsed_ms,
    )


@dataclass
class Report:
    command: str
    config: dict
    checks: list = field(default_factory=list)

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_json(self, with_timings: bool = False) -> dict:
        ordered = sorted(self.checks, key=lambda c: c.id)
        return {
            "version": __version__,
            "command": self.command,
            "config": self.config,
            "checks": [c.to_json(with_timings) for c in ordered],
            "summary": {
                "pass": sum(1 for c in self.checks if c.passed),
                "fail": sum(1 for c in self.checks if not c.passed),
            },
        }

    def render(self, with_timings: bool = False) -> str:
        return json.dumps(self.to_json(with_timings), indent=2, sort_keys=True) + "\n"

    def exit_code(self) -> int:
        return 0 if not self.failures else 1
