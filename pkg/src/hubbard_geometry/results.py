"""Small result records shared by the exact and numeric verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field

from .ratpoly import RatPoly


@dataclass(frozen=True)
class ExactIdentity:
    """Outcome of an ideal-membership check.

    ``remainder`` is the normal form of the (denominator-cleared) identity;
    ``multipliers`` lists every factor that was multiplied in to clear
    denominators, each of which was confirmed to be nonzero modulo the
    same relations.
    """

    name: str
    remainder: RatPoly
    relations: tuple[str, ...] = ()
    multipliers: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return self.remainder.is_zero()

    def summary(self) -> str:
        if self.holds:
            return "remainder 0"
        return f"remainder with {len(self.remainder)} terms, total degree {self.remainder.degree()}"


@dataclass
class NumericSummary:
    """Worst residual over a batch of samples."""

    name: str
    worst: float = 0.0
    count: int = 0
    skipped: int = 0
    notes: list[str] = field(default_factory=list)

    def add(self, residual) -> None:
        r = float(abs(residual))
        if r > self.worst or r != r:
            self.worst = r
        self.count += 1
