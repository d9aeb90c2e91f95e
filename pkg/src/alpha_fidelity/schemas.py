"""Dataclasses describing computation results."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .qmath import BlochVector

PURE_PURITY = 1.0 - 1e-6


@dataclass(slots=True)
class OptimResult:
    value: float
    argmin_1: BlochVector
    argmin_2: BlochVector
    evaluations: int
    converged: bool
    best_start: int = 0

    @property
    def argmin_pure(self) -> bool:
        """Both minimizing states are pure to within 1e-6 in purity."""

        return (
            self.argmin_1.purity > PURE_PURITY and self.argmin_2.purity > PURE_PURITY
        )


@dataclass(slots=True)
class DimensionBound:
    epsilon: float
    min_dim: int
    thresholds: List[Tuple[float, int]] = field(default_factory=list)


@dataclass(slots=True)
class ExclusionVerdict:
    omega_hypothesis: float
    alphas: List[float]
    lhs_curve: List[float]
    rhs_curve: List[float]
    violating_alphas: List[float] = field(default_factory=list)

    @property
    def compatible(self) -> bool:
        return not self.violating_alphas


@dataclass(slots=True)
class TemperatureBounds:
    lower: float
    upper: Optional[float]
    upper_valid: bool
    probe: Optional[BlochVector] = None
    t_star: Optional[float] = None
    best_alpha: Optional[float] = None


@dataclass(slots=True)
class ThermalizedProbe:
    temperature: float
    excited_population: float
    bounds: TemperatureBounds

    def limit_fidelity(self, alpha: float) -> float:
        """Long-time F_α between ground and thermalized probe, (1−p)^{1−α}."""

        return (1.0 - self.excited_population) ** (1.0 - float(alpha))


@dataclass(slots=True)
class RevivalVerdict:
    revival: bool
    minimum_time: Optional[float] = None
    minimum_level: Optional[float] = None
    crossing_time: Optional[float] = None


@dataclass(slots=True)
class Table:
    """Column-oriented figure data emitted by the CLI."""

    name: str
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)


__all__ = [
    "DimensionBound",
    "ExclusionVerdict",
    "OptimResult",
    "RevivalVerdict",
    "Table",
    "TemperatureBounds",
    "ThermalizedProbe",
]
