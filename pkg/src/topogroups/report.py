"""Report datatypes shared by the verifiers and the suite runner."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ValidationFailure:
    """A single violated law together with a concrete witness."""

    kind: str
    witness: tuple
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a report-based verifier; failures carry witnesses."""

    passed: bool
    failures: tuple[ValidationFailure, ...] = ()
    notes: tuple[str, ...] = ()

    def first_failure(self) -> ValidationFailure | None:
        return self.failures[0] if self.failures else None


# Field order is the serialization order; reruns must be byte-identical,
# so elapsed_ms is emitted as null unless timings are explicitly requested.
CHECK_FIELDS = ("check", "group", "toposys", "status", "witness", "elapsed_ms")

PASS = "pass"
FAIL = "fail"
FINDING = "finding"


@dataclass(frozen=True)
class CheckReport:
    """One suite check on one (group, topo-system) cell."""

    check: str
    group: str
    toposys: str
    status: str
    witness: str | None = None
    elapsed_ms: float | None = None

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "check": self.check,
            "group": self.group,
            "toposys": self.toposys,
            "status": self.status,
            "witness": self.witness,
            "elapsed_ms": round(self.elapsed_ms, 3) if timings and self.elapsed_ms is not None else None,
        }
        return out

    def text_line(self, timings: bool = False) -> str:
        head = f"{self.status.upper():7s} {self.check} group={self.group}"
        if self.toposys:
            head += f" sys={self.toposys}"
        if self.witness:
            head += f" witness={self.witness}"
        if timings and self.elapsed_ms is not None:
            head += f" ({self.elapsed_ms:.1f} ms)"
        return head
