"""Suite configuration and violation reports."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class SuiteConfig:
    """What to sample and which checks to run.

    ``tol=None`` keeps each check's own tolerance; a number overrides all of them.
    ``ensemble=None`` lets each check use its natural ensemble (pure-state
    claims always sample pure states).
    """

    n: int = 3
    d: int = 2
    samples: int = 100
    seed: int = 0
    tol: float | None = None
    properties: tuple[str, ...] | None = None
    ensemble: str | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.tol is not None and self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.n < 1 or self.d < 2:
            raise ValueError("need n >= 1 parties of dimension d >= 2")
        if self.properties is not None:
            object.__setattr__(self, "properties", tuple(self.properties))

    def as_dict(self) -> dict:
        out = asdict(self)
        if out["properties"] is not None:
            out["properties"] = list(out["properties"])
        return out


@dataclass
class CheckResult:
    """Outcome of one property or conjecture over all its trials.

    ``kind`` is ``"identity"`` (residual is an absolute gap, fails above tol),
    ``"inequality"`` (residual is a signed slack, fails below -tol) or
    ``"finding"`` (conjecture scans: residual below -tol counts as a violation
    but is never a failure of the build).
    """

    name: str
    kind: str
    tol: float
    trials: int = 0
    failures: int = 0
    worst_residual: float | None = None
    witnesses: list = field(default_factory=list)
    control: bool = False
    notes: dict = field(default_factory=dict)

    def is_violation(self, residual: float) -> bool:
        if self.kind == "identity":
            return residual > self.tol
        return residual < -self.tol

    def record(self, residual: float, witness: dict) -> None:
        self.trials += 1
        if self.worst_residual is None:
            self.worst_residual = residual
        elif self.kind == "identity":
            self.worst_residual = max(self.worst_residual, residual)
        else:
            self.worst_residual = min(self.worst_residual, residual)
        if self.is_violation(residual):
            self.failures += 1
            self.witnesses.append(witness)

    @property
    def rate(self) -> float:
        return 1.0 - self.failures / self.trials if self.trials else 1.0

    def as_dict(self) -> dict:
        out = {
            "name": self.name,
            "kind": self.kind,
            "tolerance": self.tol,
            "trials": self.trials,
            "failures": self.failures,
            "satisfaction_rate": self.rate,
            "worst_residual": self.worst_residual,
            "witnesses": self.witnesses,
        }
        if self.control:
            out["control"] = True
        if self.notes:
            out["notes"] = self.notes
        return out


@dataclass
class ViolationReport:
    suite: str
    config: SuiteConfig
    results: list[CheckResult] = field(default_factory=list)

    @property
    def total_failures(self) -> int:
        return sum(r.failures for r in self.results)

    def result(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config.as_dict(),
            "total_failures": self.total_failures,
            "results": [r.as_dict() for r in self.results],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        cfg = self.config
        word = "failures" if self.suite == "properties" else "violations"
        lines = [f"{self.suite}: n={cfg.n} d={cfg.d} samples={cfg.samples} seed={cfg.seed}"]
        for r in self.results:
            worst = "n/a" if r.worst_residual is None else f"{r.worst_residual:.3e}"
            tag = " [control]" if r.control else ""
            lines.append(
                f"  {r.name:<40} trials={r.trials:<5} {word}={r.failures:<5} worst={worst}{tag}"
            )
        lines.append(f"{self.total_failures} {word}")
        return "\n".join(lines)
