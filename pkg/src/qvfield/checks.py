"""Check results shared by every verification layer."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

PASS, FAIL, ERROR = "pass", "fail", "error"

TEXT_TERMS = 8


@dataclass
class CheckResult:
    id: str
    paper_anchor: str = ""
    status: str = PASS
    witness: dict[str, Any] | None = None
    elapsed_ms: float = 0.0
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict[str, Any]:
        w = None
        if self.witness is not None:
            w = {k: v for k, v in self.witness.items() if k != "terms"}
        return {
            "id": self.id,
            "paper_anchor": self.paper_anchor,
            "status": self.status,
            "witness": w,
            "detail": self.detail,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }

    def to_text(self) -> str:
        line = f"[{self.status.upper():5}] {self.id}"
        if self.detail:
            line += f"  ({self.detail})"
        if self.witness:
            idx = self.witness.get("index")
            terms = self.witness.get("terms") or [self.witness.get("residual", "")]
            shown = " + ".join(terms[:TEXT_TERMS])
            if len(terms) > TEXT_TERMS:
                shown += f" + ... ({len(terms) - TEXT_TERMS} more terms)"
            line += f"\n        witness {idx}: {shown}"
            if "message" in self.witness:
                line += f"\n        {self.witness['message']}"
        return line


def _terms_of(value: Any) -> list[str]:
    if hasattr(value, "term_strings"):
        return value.term_strings()
    return [str(value)]


def is_zero(value: Any) -> bool:
    if isinstance(value, int):
        return value == 0
    return value.is_zero()


def residual_check(
    check_id: str,
    anchor: str,
    residuals: Mapping[Any, Any] | Iterable[tuple[Any, Any]],
    detail: str = "",
) -> CheckResult:
    """Pass iff every residual is zero; otherwise report the first nonzero one."""
    items = residuals.items() if isinstance(residuals, Mapping) else residuals
    count = 0
    for index, value in items:
        count += 1
        if not is_zero(value):
            terms = _terms_of(value)
            return CheckResult(
                check_id,
                anchor,
                FAIL,
                witness={"index": _jsonable(index), "residual": " + ".join(terms), "terms": terms},
                detail=detail,
            )
    return CheckResult(check_id, anchor, PASS, detail=detail or f"{count} entries zero")


def _jsonable(index: Any) -> Any:
    if isinstance(index, tuple):
        return [_jsonable(i) for i in index]
    if isinstance(index, (int, str)) or index is None:
        return index
    return str(index)


@dataclass
class Tally:
    """Accumulates sub-check results into one CheckResult."""

    check_id: str
    anchor: str
    parts: list[CheckResult] = field(default_factory=list)

    def add(self, result: CheckResult) -> None:
        self.parts.append(result)

    def result(self) -> CheckResult:
        for p in self.parts:
            if not p.passed:
                w = dict(p.witness or {})
                w.setdefault("message", f"sub-check {p.id} failed")
                return CheckResult(self.check_id, self.anchor, p.status, witness=w, detail=p.id)
        names = ", ".join(p.id for p in self.parts)
        return CheckResult(self.check_id, self.anchor, PASS, detail=names)
