"""Validation and report data models."""

from pydantic import BaseModel, Field

from ..constants import OUTPUT_FORMATS


class Violation(BaseModel):
    """One failed check, with the cell, morphism or generator that witnesses it."""

    kind: str
    message: str
    witness: str | None = None

    def __str__(self) -> str:
        if self.witness is None:
            return f"{self.kind}: {self.message}"
        return f"{self.kind} at {self.witness}: {self.message}"


class ValidationReport(BaseModel):
    """Outcome of an exhaustive validation pass; empty iff the subject is valid."""

    subject: str
    violations: list[Violation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


# --- Reports ---


class ReportEntry(BaseModel):
    """A single ``key: value`` result line."""

    key: str
    value: str


class Report(BaseModel):
    """Deterministic, line-oriented result of a command."""

    command: str
    instance: str
    results: list[ReportEntry] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)
    exit_code: int = 0

    def add(self, key: str, value: object) -> None:
        self.results.append(ReportEntry(key=key, value=str(value)))

    def warn(self, message: str) -> None:
        if message not in self.warnings:
            self.warnings.append(message)

    def render(self, output_format: str = "text") -> str:
        if output_format not in OUTPUT_FORMATS:
            raise ValueError(f"unknown output format {output_format!r}")
        sep = ": " if output_format == "text" else "="
        lines = [f"command{sep}{self.command}", f"instance{sep}{self.instance}"]
        lines.extend(f"{entry.key}{sep}{entry.value}" for entry in self.results)
        lines.extend(f"warning{sep}{message}" for message in self.warnings)
        lines.append(f"exit{sep}{self.exit_code}")
        return "\n".join(lines) + "\n"
