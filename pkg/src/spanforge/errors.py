"""Exception hierarchy shared by every module."""

from __future__ import annotations

from dataclasses import dataclass, field


class SpanforgeError(Exception):
    """Base class; ``exit_code`` is what the CLI returns when it escapes."""

    exit_code = 2


@dataclass(frozen=True)
class Issue:
    kind: str
    message: str
    where: str = ""
    witness: tuple = ()

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "message": self.message}
        if self.where:
            out["where"] = self.where
        if self.witness:
            out["witness"] = list(self.witness)
        return out


@dataclass
class ValidationReport:
    issues: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def kinds(self) -> set[str]:
        return {i.kind for i in self.issues}

    def add(self, kind, message, where="", witness=()):
        self.issues.append(Issue(kind, message, where, tuple(witness)))

    def to_dict(self) -> dict:
        return {"valid": self.ok, "issues": [i.to_dict() for i in self.issues]}


class ValidationError(SpanforgeError):
    def __init__(self, report: ValidationReport, what: str = "category"):
        self.report = report
        first = report.issues[0] if report.issues else None
        msg = f"invalid {what}"
        if first is not None:
            msg += f": {first.kind}: {first.message}"
            if first.where:
                msg += f" (at {first.where})"
            if len(report.issues) > 1:
                msg += f" [+{len(report.issues) - 1} more]"
        super().__init__(msg)


class NotComposable(SpanforgeError):
    pass


class NotIso(SpanforgeError):
    exit_code = 1


class DanglingReference(SpanforgeError):
    pass


class FeetMismatch(SpanforgeError):
    pass


class NotPaired(SpanforgeError):
    pass


class BudgetExceeded(SpanforgeError):
    exit_code = 3


class NoFPullback(SpanforgeError):
    exit_code = 1


class NotSpanTight(SpanforgeError):
    exit_code = 1

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class PreconditionFailed(SpanforgeError):
    exit_code = 1

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class CapExceeded(SpanforgeError):
    pass


class NotAPartialOrder(SpanforgeError):
    pass


class NotAGroup(SpanforgeError):
    pass


class HomSetTooLarge(SpanforgeError):
    pass


class ApexExceedsCap(SpanforgeError):
    pass
