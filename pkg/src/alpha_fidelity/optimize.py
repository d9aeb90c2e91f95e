"""Derivative-free minimization over Bloch balls, time-grid infima and root finding."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy import optimize as sp_optimize
from scipy.stats import qmc

from .config import TOLERANCES, Settings
from .errors import BracketError, InfeasibleError, ParameterError
from .qmath import BlochVector
from .schemas import OptimResult

logger = logging.getLogger(__name__)

INITIAL_STEP = 0.1
POLISH_STEP = 1e-2
POLISH_ROUNDS = 4
POLISH_ITER_FACTOR = 2
POLISH_TIGHTENING = 1e-2
CANONICAL_AXES = (
    (1.0, 0.0, 0.0),
    (-1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, -1.0, 0.0),
    (0.0, 0.0, 1.0),
    (0.0, 0.0, -1.0),
)

BallObjective = Callable[[np.ndarray], float]


@dataclass(frozen=True, slots=True)
class OptimizerConfig:
    starts: int = 32
    max_iters: int = 400
    xtol: float = 1e-9
    ftol: float = 1e-10
    seed: int = 0
    include_canonical_starts: bool = True

    def __post_init__(self) -> None:
        if self.starts < 1:
            raise ParameterError(f"starts must be at least 1, got {self.starts}")
        if self.max_iters < 1:
            raise ParameterError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.xtol <= 0 or self.ftol <= 0:
            raise ParameterError("optimizer tolerances must be positive")

    @classmethod
    def from_settings(cls, settings: Optional[Settings] = None) -> "OptimizerConfig":
        settings = settings or Settings.load()
        return cls(
            starts=settings.starts,
            max_iters=settings.max_iters,
            xtol=settings.xtol,
            ftol=settings.ftol,
            seed=settings.seed,
            include_canonical_starts=settings.canonical_starts,
        )


@dataclass(frozen=True, slots=True)
class TimeGrid:
    t_max: float
    points: int
    refine_iters: int = 40

    def __post_init__(self) -> None:
        if not (self.t_max > 0 and math.isfinite(self.t_max)):
            raise ParameterError(f"t_max must be positive, got {self.t_max}")
        if self.points < 2:
            raise ParameterError(f"a time grid needs at least 2 points, got {self.points}")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.points)


# ------------------------------------------------------------------
# Bloch-ball minimization
# ------------------------------------------------------------------


def project_to_balls(x: np.ndarray) -> np.ndarray:
    """Radially clip each consecutive Bloch triple into the closed unit ball."""

    blocks = np.asarray(x, dtype=float).reshape(-1, 3)
    norms = np.linalg.norm(blocks, axis=1)
    scale = np.where(norms > 1.0, 1.0 / np.where(norms > 1.0, norms, 1.0), 1.0)
    return (blocks * scale[:, None]).reshape(-1)


def ball_points(unit_samples: np.ndarray) -> np.ndarray:
    """Map uniform samples in [0,1)^3 to the unit ball (cube-root radius)."""

    u = np.asarray(unit_samples, dtype=float).reshape(-1, 3)
    radius = np.cbrt(u[:, 0])
    cos_theta = 1.0 - 2.0 * u[:, 1]
    sin_theta = np.sqrt(np.clip(1.0 - cos_theta**2, 0.0, None))
    phi = 2.0 * math.pi * u[:, 2]
    return np.column_stack(
        (radius * sin_theta * np.cos(phi), radius * sin_theta * np.sin(phi), radius * cos_theta)
    )


def canonical_starts(k: int) -> List[np.ndarray]:
    """Pure axis states (paired with themselves when k=2) and the mixed point."""

    starts = [np.array(axis * k, dtype=float) for axis in CANONICAL_AXES]
    starts.append(np.zeros(3 * k))
    return starts


def quasi_random_starts(k: int, count: int, seed: int) -> List[np.ndarray]:
    sampler = qmc.Halton(d=3 * k, scramble=True, seed=seed)
    samples = sampler.random(count)
    return [ball_points(row).reshape(-1) for row in samples]


def _initial_simplex(x0: np.ndarray, step: float = INITIAL_STEP) -> np.ndarray:
    dim = x0.size
    simplex = np.tile(x0, (dim + 1, 1))
    for i in range(dim):
        simplex[i + 1, i] += step if x0[i] <= 0 else -step
    return simplex


def _nelder_mead(
    objective: BallObjective,
    x0: np.ndarray,
    *,
    step: float,
    max_iters: int,
    xtol: float,
    ftol: float,
) -> sp_optimize.OptimizeResult:
    return sp_optimize.minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": max_iters,
            "xatol": xtol,
            "fatol": ftol,
            "initial_simplex": _initial_simplex(x0, step),
            "adaptive": x0.size > 3,
        },
    )


def _polish(
    objective: BallObjective, value: float, x_best: np.ndarray, cfg: OptimizerConfig
) -> Tuple[float, np.ndarray, bool]:
    """Restart from the incumbent on a small simplex until it stops improving."""

    converged = False
    threshold = cfg.ftol * POLISH_TIGHTENING
    for round_index in range(POLISH_ROUNDS):
        result = _nelder_mead(
            objective,
            x_best,
            step=POLISH_STEP,
            max_iters=POLISH_ITER_FACTOR * cfg.max_iters,
            xtol=cfg.xtol * POLISH_TIGHTENING,
            ftol=threshold,
        )
        candidate = float(result.fun)
        gain = value - candidate if math.isfinite(candidate) else 0.0
        if gain > 0.0:
            value, x_best = candidate, project_to_balls(result.x)
        converged = bool(result.success)
        logger.debug("polish round %d -> %.15g (gain %.3g)", round_index, value, gain)
        if gain <= threshold:
            break
    return value, x_best, converged


def minimize_ball(f: BallObjective, k: int, cfg: Optional[OptimizerConfig] = None) -> OptimResult:
    """Multi-start projected Nelder-Mead over k concatenated Bloch vectors.

    ``f`` receives a projected point of length 3k; non-finite values mark the
    point infeasible.
    """

    if k not in (1, 2):
        raise ParameterError(f"k must be 1 or 2, got {k}")
    cfg = cfg or OptimizerConfig()
    evaluations = 0

    def objective(x: np.ndarray) -> float:
        nonlocal evaluations
        evaluations += 1
        value = f(project_to_balls(x))
        return float(value) if math.isfinite(value) else math.inf

    starts: List[np.ndarray] = []
    if cfg.include_canonical_starts:
        starts.extend(canonical_starts(k))
    starts.extend(quasi_random_starts(k, cfg.starts, cfg.seed))

    best: Optional[Tuple[float, np.ndarray, int]] = None
    for index, x0 in enumerate(starts):
        if not math.isfinite(objective(x0)):
            logger.debug("start %d infeasible, skipped", index)
            continue
        result = _nelder_mead(
            objective,
            x0,
            step=INITIAL_STEP,
            max_iters=cfg.max_iters,
            xtol=cfg.xtol,
            ftol=cfg.ftol,
        )
        value = float(result.fun)
        logger.debug("start %d -> %.12g (success=%s)", index, value, result.success)
        if math.isfinite(value) and (best is None or value < best[0]):
            best = (value, project_to_balls(result.x), index)

    if best is None:
        raise InfeasibleError(
            "No start produced a finite objective value", {"starts": len(starts)}
        )
    value, x_best, index = best
    value, x_best, converged = _polish(objective, value, x_best, cfg)
    if not converged:
        logger.warning("best start %d did not converge (value %.6g)", index, value)
    blocks = x_best.reshape(-1, 3)
    first = BlochVector.from_array(blocks[0])
    second = BlochVector.from_array(blocks[-1])
    return OptimResult(
        value=value,
        argmin_1=first,
        argmin_2=second,
        evaluations=evaluations,
        converged=converged,
        best_start=index,
    )


# ------------------------------------------------------------------
# Scalar helpers
# ------------------------------------------------------------------


def infimum_over_time(g: Callable[[float], float], grid: TimeGrid) -> Tuple[float, float]:
    """Coarse scan on the grid, then bounded refinement around the best sample."""

    times = grid.times
    values = np.array([g(float(t)) for t in times])
    i = int(np.argmin(values))
    t_best, v_best = float(times[i]), float(values[i])
    lo = float(times[max(i - 1, 0)])
    hi = float(times[min(i + 1, times.size - 1)])
    if grid.refine_iters > 0 and hi > lo:
        refined = sp_optimize.minimize_scalar(
            g,
            bounds=(lo, hi),
            method="bounded",
            options={"maxiter": grid.refine_iters, "xatol": 1e-12},
        )
        if float(refined.fun) < v_best:
            t_best, v_best = float(refined.x), float(refined.fun)
    return t_best, v_best


def find_root(
    h: Callable[[float], float], lo: float, hi: float, tol: float = TOLERANCES.root
) -> float:
    """Bisection root of a sign-changing scalar function."""

    h_lo, h_hi = h(lo), h(hi)
    if h_lo == 0.0:
        return float(lo)
    if h_hi == 0.0:
        return float(hi)
    if h_lo * h_hi > 0.0:
        raise BracketError(
            f"No sign change on [{lo}, {hi}]", {"h_lo": h_lo, "h_hi": h_hi}
        )
    return float(sp_optimize.bisect(h, lo, hi, xtol=tol, maxiter=500))


__all__ = [
    "OptimizerConfig",
    "TimeGrid",
    "ball_points",
    "canonical_starts",
    "find_root",
    "infimum_over_time",
    "minimize_ball",
    "project_to_balls",
    "quasi_random_starts",
]
