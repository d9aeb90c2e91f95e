"""Applications of the channel alpha-fidelity bound.

Programming dimension bounds, environmental-frequency exclusion, thermometry
and Loschmidt-echo bounds. Temperatures come out in the units of the
probed frequency ω, so ω = 1 gives k_B T / ħω directly.
"""

from __future__ import annotations

import functools
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .channels import (
    DynamicalMap,
    QubitChannel,
    channel_alpha_fidelity,
    minimal_gate_fidelity,
    pauli_unitary,
)
from .config import TOLERANCES
from .errors import (
    CrossoverNotFound,
    EmptyIntervalError,
    IdenticalUnitariesError,
    ParameterError,
)
from .fidelity import Alpha, AlphaLike, alpha_fidelity_qubit, kl_divergence
from .models import (
    IsingChain,
    OscillatorBath,
    dephasing_pair_alpha_fidelity,
    log_partition,
    loschmidt_ground,
    thermal_excited_population,
)
from .optimize import OptimizerConfig, TimeGrid, find_root, infimum_over_time, minimize_ball
from .qmath import BlochLike, BlochVector, bloch_to_density, to_bloch
from .schemas import (
    DimensionBound,
    ExclusionVerdict,
    RevivalVerdict,
    TemperatureBounds,
    ThermalizedProbe,
)

logger = logging.getLogger(__name__)

DEFAULT_ALPHA_GRID: Tuple[float, ...] = tuple(round(0.05 * i, 2) for i in range(1, 20))
# frequency exclusion scans α up to 0.80 only
EXCLUSION_ALPHA_GRID: Tuple[float, ...] = tuple(round(0.05 * i, 2) for i in range(1, 17))
PLUS_STATE = BlochVector(1.0, 0.0, 0.0)
PROBE_REFINE_CONFIG = OptimizerConfig(starts=8, max_iters=200)


# ------------------------------------------------------------------
# Approximate programming
# ------------------------------------------------------------------


def prog_overlap_bound(epsilon: float, inf_unitary_fid: float) -> float:
    """g(ε) = (2−ε)ε / √(1 − inf_ρ F_{1/2}(U_j ρ U_j†, U_k ρ U_k†))."""

    if not 0.0 <= epsilon <= 1.0:
        raise ParameterError(f"epsilon must lie in [0, 1], got {epsilon}")
    if not 0.0 <= inf_unitary_fid <= 1.0 + TOLERANCES.bloch:
        raise ParameterError(f"unitary fidelity must lie in [0, 1], got {inf_unitary_fid}")
    if inf_unitary_fid >= 1.0 - TOLERANCES.singular:
        raise IdenticalUnitariesError(
            "Unitaries act identically on every state", {"fidelity": inf_unitary_fid}
        )
    return (2.0 - epsilon) * epsilon / math.sqrt(1.0 - inf_unitary_fid)


def programming_thresholds(n_programs: int) -> List[Tuple[float, int]]:
    """Cut points ε_d solving (2−ε)ε = 1/(d−1) for d = 2..n_programs."""

    if n_programs < 2:
        raise ParameterError(f"need at least two programs, got {n_programs}")
    return [
        (1.0 - math.sqrt(1.0 - 1.0 / (d - 1)), d) for d in range(2, n_programs + 1)
    ]


def min_processor_dimension(
    n_programs: int, pairwise_g: np.ndarray, epsilon: float = math.nan
) -> DimensionBound:
    """Dimension lower bound from the largest linearly independent program set."""

    if n_programs < 2:
        raise ParameterError(f"need at least two programs, got {n_programs}")
    g = np.asarray(pairwise_g, dtype=float)
    if g.shape != (n_programs, n_programs):
        raise ParameterError(f"pairwise_g must be {n_programs}x{n_programs}, got {g.shape}")
    off_diagonal = g[~np.eye(n_programs, dtype=bool)]
    if np.any(off_diagonal < 0.0) or np.any(off_diagonal > 1.0 + TOLERANCES.bloch):
        raise ParameterError("overlap bounds must lie in [0, 1]")
    with np.errstate(divide="ignore"):
        ceiling = float(np.max(np.where(off_diagonal > 0.0, 1.0 / off_diagonal + 1.0, math.inf)))
    if math.isinf(ceiling):
        min_dim = n_programs
    else:
        largest = math.ceil(ceiling - TOLERANCES.root) - 1
        min_dim = n_programs if n_programs <= largest else max(largest, 1)
    return DimensionBound(
        epsilon=epsilon, min_dim=min_dim, thresholds=programming_thresholds(n_programs)
    )


def pauli_unitary_overlaps(cfg: Optional[OptimizerConfig] = None) -> np.ndarray:
    """inf_ρ F_{1/2}(σ_jρσ_j, σ_kρσ_k) for the four Pauli conjugations."""

    overlaps = np.ones((4, 4))
    for j in range(4):
        for k in range(j + 1, 4):
            value = minimal_gate_fidelity(pauli_unitary(j), pauli_unitary(k), 0.5, cfg).value
            overlaps[j, k] = overlaps[k, j] = value
    return overlaps


def pauli_dimension_bound(
    epsilon: float,
    overlaps: Optional[np.ndarray] = None,
    cfg: Optional[OptimizerConfig] = None,
) -> DimensionBound:
    """Processor dimension needed for the four noisy Pauli unitaries at noise ε."""

    overlaps = pauli_unitary_overlaps(cfg) if overlaps is None else np.asarray(overlaps)
    g = np.zeros((4, 4))
    for j in range(4):
        for k in range(4):
            if j != k:
                g[j, k] = prog_overlap_bound(epsilon, float(overlaps[j, k]))
    return min_processor_dimension(4, np.clip(g, 0.0, 1.0), epsilon)


def hillery_reference_thresholds() -> Tuple[Tuple[float, int], Tuple[float, int]]:
    """Earlier literature cuts (ε, d) for d = 4 and d = 3."""

    return (
        (1.0 / (3.0 * (13.0 + 2.0 * math.sqrt(42.0))), 4),
        (1.0 / (2.0 * (9.0 + 4.0 * math.sqrt(5.0))), 3),
    )


# ------------------------------------------------------------------
# Ruling out environment Hamiltonians
# ------------------------------------------------------------------


def _finite_beta(beta: float) -> float:
    if not (beta > 0 and math.isfinite(beta)):
        raise ParameterError(f"beta must be positive and finite, got {beta}")
    return float(beta)


def exclusion_lhs(bath: OscillatorBath, beta1: float, beta2: float, alpha: AlphaLike) -> float:
    """ln Z(αβ₁+(1−α)β₂) − α ln Z(β₁) − (1−α) ln Z(β₂); never positive."""

    a = Alpha.coerce(alpha).value
    b1, b2 = _finite_beta(beta1), _finite_beta(beta2)
    if b1 == b2:
        return 0.0
    value = (
        log_partition(bath, a * b1 + (1.0 - a) * b2)
        - a * log_partition(bath, b1)
        - (1.0 - a) * log_partition(bath, b2)
    )
    return min(value, 0.0)


def _pair_fidelity(first: QubitChannel, second: QubitChannel, a: float, cfg) -> float:
    gamma1, gamma2 = first.dephasing_factor(), second.dephasing_factor()
    if gamma1 is not None and gamma2 is not None:
        return dephasing_pair_alpha_fidelity(gamma1, gamma2, a)
    return channel_alpha_fidelity(first, second, a, cfg).value


def exclusion_rhs(
    map1: DynamicalMap,
    map2: DynamicalMap,
    alpha: AlphaLike,
    grid: TimeGrid,
    cfg: Optional[OptimizerConfig] = None,
) -> float:
    """inf_t ln F_α of the induced channels.

    The channel order flips at α = ½: F_α(E₁, E₂) on [½, 1), F_α(E₂, E₁) below.
    """

    a = Alpha.coerce(alpha).value
    if map1 is map2:
        return 0.0
    first, second = (map2, map1) if a < 0.5 else (map1, map2)
    t_best, value = infimum_over_time(lambda t: _pair_fidelity(first(t), second(t), a, cfg), grid)
    logger.debug("rhs alpha=%.3f: inf at t=%.6g, F=%.12g", a, t_best, value)
    return math.log(value) if value > 0.0 else -math.inf


def exclusion_verdict(
    bath: OscillatorBath,
    beta1: float,
    beta2: float,
    rhs_curve: Sequence[float],
    alpha_grid: Sequence[float] = EXCLUSION_ALPHA_GRID,
) -> ExclusionVerdict:
    if len(rhs_curve) != len(alpha_grid):
        raise ParameterError("rhs_curve and alpha_grid must have the same length")
    lhs = [exclusion_lhs(bath, beta1, beta2, a) for a in alpha_grid]
    violating = [
        float(a)
        for a, left, right in zip(alpha_grid, lhs, rhs_curve)
        if left - right > TOLERANCES.violation
    ]
    return ExclusionVerdict(
        omega_hypothesis=float(bath.omegas[0]),
        alphas=[float(a) for a in alpha_grid],
        lhs_curve=lhs,
        rhs_curve=[float(v) for v in rhs_curve],
        violating_alphas=violating,
    )


def frequency_crossover(
    map1: DynamicalMap,
    map2: DynamicalMap,
    beta1: float,
    beta2: float,
    omega_scan: Sequence[float],
    alpha_grid: Sequence[float] = EXCLUSION_ALPHA_GRID,
    grid: Optional[TimeGrid] = None,
    cfg: Optional[OptimizerConfig] = None,
    rhs_curve: Optional[Sequence[float]] = None,
) -> float:
    """Smallest hypothesized single-mode frequency the induced maps rule out."""

    if grid is None:
        period = map1.period or map2.period
        if period is None:
            raise ParameterError("a time grid is required for non-periodic maps")
        grid = TimeGrid(period, 256)
    if rhs_curve is None:
        rhs_curve = [exclusion_rhs(map1, map2, a, grid, cfg) for a in alpha_grid]
    rhs = np.asarray(rhs_curve, dtype=float)

    def excess(omega: float) -> float:
        bath = OscillatorBath.single_mode(omega)
        lhs = np.array([exclusion_lhs(bath, beta1, beta2, a) for a in alpha_grid])
        return float(np.max(lhs - rhs))

    scan = [float(w) for w in omega_scan]
    previous: Optional[float] = None
    for omega in scan:
        if excess(omega) > TOLERANCES.violation:
            if previous is None:
                raise CrossoverNotFound(
                    "First scanned frequency already violates; widen the scan downwards",
                    {"omega": omega},
                )
            crossover = find_root(lambda w: excess(w) - TOLERANCES.violation, previous, omega)
            logger.info("frequency crossover at omega'=%.6g", crossover)
            return crossover
        previous = omega
    raise CrossoverNotFound(
        "No violating frequency in the scanned range",
        {"scan": [scan[0], scan[-1]] if scan else []},
    )


# ------------------------------------------------------------------
# Thermometry
# ------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def limiting_temperature() -> float:
    """Largest k_B T/ħω for which −ln Z(β) ≥ 0 (≈ 1.037)."""

    beta_star = find_root(lambda b: 0.5 * b + math.log(-math.expm1(-b)), 0.5, 2.0)
    return 1.0 / beta_star


def _bounds_from_product(q: float) -> Tuple[float, Optional[float]]:
    """Temperature interval from 1 − e^{−ħω/k_BT} ≤ q."""

    if q >= 1.0 - TOLERANCES.singular:
        return 0.0, None
    return -1.0 / math.log1p(-q), -0.5 / math.log(q)


def kl_thermometry_bounds(kl_sup: float) -> Tuple[float, Optional[float]]:
    """(lower, upper) from sup S₁(E₀(ρ) ‖ E_T(ρ)); upper is None for S = 0."""

    if kl_sup < 0:
        raise ParameterError(f"divergence must be non-negative, got {kl_sup}")
    if kl_sup <= TOLERANCES.singular:
        return 0.0, None
    if math.isinf(kl_sup):
        raise ParameterError("divergence must be finite")
    return -1.0 / math.log(-math.expm1(-kl_sup)), 0.5 / kl_sup


def _kl_at(first: QubitChannel, second: QubitChannel, rho: BlochLike) -> float:
    return kl_divergence(
        bloch_to_density(first.apply(rho)), bloch_to_density(second.apply(rho))
    )


def thermometry_bounds(
    map0: DynamicalMap,
    map_t: DynamicalMap,
    omega: float = 1.0,
    alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
    grid: Optional[TimeGrid] = None,
    cfg: Optional[OptimizerConfig] = None,
    probe: BlochLike = PLUS_STATE,
    refine_probe: bool = True,
) -> TemperatureBounds:
    """Temperature bounds from the maps induced at T = 0 and at the unknown T.

    Every α form and the Kullback-Leibler form are evaluated on the probe
    state; the tightest lower and upper values are kept. With ``refine_probe``
    the KL form is further maximized over input states at its best time.
    """

    if grid is None:
        raise ParameterError("thermometry needs an explicit time grid")
    rho = to_bloch(probe)
    lower, upper = 0.0, math.inf
    best_alpha: Optional[float] = None

    for alpha in alpha_grid:
        a = Alpha.coerce(alpha).value
        exponent = 1.0 / (1.0 - a)
        if a >= 0.5:
            fidelity_at = lambda t, a=a: alpha_fidelity_qubit(map0(t).apply(rho), map_t(t).apply(rho), a)  # noqa: E731
        else:
            # F_α(ξ₀, ξ_T) = F_{1−α}(ξ_T, ξ₀) for the pure vacuum
            fidelity_at = lambda t, a=a: alpha_fidelity_qubit(map_t(t).apply(rho), map0(t).apply(rho), 1.0 - a)  # noqa: E731
        _, fid = infimum_over_time(fidelity_at, grid)
        q = fid**exponent if fid > 0.0 else 0.0
        if q <= 0.0:
            continue
        lo, hi = _bounds_from_product(q)
        if lo > lower:
            lower, best_alpha = lo, a
        if hi is not None:
            upper = min(upper, hi)

    t_star, neg_kl = infimum_over_time(lambda t: -_kl_at(map0(t), map_t(t), rho), grid)
    kl_sup = -neg_kl
    best_probe = rho
    if refine_probe and math.isfinite(kl_sup) and kl_sup > 0.0:
        first, second = map0(t_star), map_t(t_star)
        result = minimize_ball(
            lambda x: -_kl_at(first, second, x), 1, cfg or PROBE_REFINE_CONFIG
        )
        if -result.value > kl_sup:
            kl_sup, best_probe = -result.value, result.argmin_1
            logger.debug("probe refined to %s (S1=%.6g)", best_probe, kl_sup)
    if math.isfinite(kl_sup):
        lo, hi = kl_thermometry_bounds(kl_sup)
        if lo > lower:
            lower, best_alpha = lo, 1.0
        if hi is not None:
            upper = min(upper, hi)

    lower *= omega
    if math.isinf(upper):
        # the maps agree on the probe at every sampled time
        return TemperatureBounds(
            lower=lower,
            upper=None,
            upper_valid=False,
            probe=best_probe,
            t_star=t_star,
            best_alpha=best_alpha,
        )
    upper_value = upper * omega
    return TemperatureBounds(
        lower=lower,
        upper=upper_value,
        upper_valid=upper_value / omega <= limiting_temperature(),
        probe=best_probe,
        t_star=t_star,
        best_alpha=best_alpha,
    )


def thermalized_probe_bounds(temperature: float, omega: float = 1.0) -> ThermalizedProbe:
    """Closed-form bounds when the probe fully thermalizes with the oscillator."""

    if not temperature > 0:
        raise ParameterError(f"temperature must be positive, got {temperature}")
    p = thermal_excited_population(omega, temperature)
    bounds = TemperatureBounds(
        lower=-omega / math.log(p),
        upper=-0.5 * omega / math.log1p(-p),
        upper_valid=temperature / omega <= limiting_temperature(),
    )
    return ThermalizedProbe(temperature=temperature, excited_population=p, bounds=bounds)


# ------------------------------------------------------------------
# Loschmidt echo
# ------------------------------------------------------------------


def loschmidt_bounds_from_fidelity(fid: float, l_ref: float) -> Tuple[float, float]:
    """Interval of echoes L compatible with F_{1/2}(φ₀, φ) ≥ fid and reference L_ref."""

    if fid > 1.0 + TOLERANCES.bloch:
        raise EmptyIntervalError(f"fidelity {fid} exceeds 1; no compatible echo")
    if fid < 0.0:
        raise ParameterError(f"fidelity must be non-negative, got {fid}")
    if not -TOLERANCES.bloch <= l_ref <= 1.0 + TOLERANCES.bloch:
        raise ParameterError(f"L_ref must lie in [0, 1], got {l_ref}")
    l_ref = min(max(l_ref, 0.0), 1.0)
    if fid >= 1.0:
        return l_ref, l_ref
    x = math.sqrt(l_ref)

    def h(y: float) -> float:
        return 0.5 * math.sqrt(max((1.0 - x) * (1.0 - y), 0.0)) + 0.5 * math.sqrt((1.0 + x) * (1.0 + y))

    y_lo = 0.0 if h(0.0) >= fid else find_root(lambda y: h(y) - fid, 0.0, x)
    y_hi = 1.0 if h(1.0) >= fid else find_root(lambda y: h(y) - fid, x, 1.0)
    return y_lo**2, y_hi**2


def loschmidt_bound_curves(
    chain: IsingChain, fid: float, times: Sequence[float]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(ground echo, lower bound, upper bound) sampled on ``times``."""

    reference = np.asarray(loschmidt_ground(chain, np.asarray(times, dtype=float)))
    bounds = np.array([loschmidt_bounds_from_fidelity(fid, float(l)) for l in reference])
    return reference, bounds[:, 0], bounds[:, 1]


def detect_revival(
    times: Sequence[float],
    upper: Sequence[float],
    lower: Sequence[float],
    margin: float = TOLERANCES.crossing,
) -> RevivalVerdict:
    """Revival when the lower curve rises above the first local minimum of the upper curve.

    A lower curve that exceeds the level by no more than ``margin`` only touches it.
    """

    t = np.asarray(times, dtype=float)
    up = np.asarray(upper, dtype=float)
    low = np.asarray(lower, dtype=float)
    if not (t.shape == up.shape == low.shape):
        raise ParameterError("times, upper and lower must share one grid")
    flat = TOLERANCES.flatness
    for i in range(1, up.size - 1):
        if up[i - 1] - up[i] > flat and up[i + 1] - up[i] > flat:
            level = float(up[i])
            later = np.nonzero(low[i + 1 :] > level + margin)[0]
            if later.size:
                return RevivalVerdict(
                    revival=True,
                    minimum_time=float(t[i]),
                    minimum_level=level,
                    crossing_time=float(t[i + 1 + later[0]]),
                )
            return RevivalVerdict(revival=False, minimum_time=float(t[i]), minimum_level=level)
    return RevivalVerdict(revival=False)


# ------------------------------------------------------------------
# Main inequality
# ------------------------------------------------------------------


def main_inequality_slack(
    rho1: BlochLike,
    rho2: BlochLike,
    env_fidelity: float,
    first: QubitChannel,
    second: QubitChannel,
    alpha: AlphaLike,
) -> float:
    """F_α(E₁(ρ₁), E₂(ρ₂)) − F_α(ρ₁, ρ₂)·F_α(ξ₁, ξ₂)."""

    a = Alpha.coerce(alpha).value
    lhs = alpha_fidelity_qubit(rho1, rho2, a) * env_fidelity
    return alpha_fidelity_qubit(first.apply(rho1), second.apply(rho2), a) - lhs


__all__ = [
    "DEFAULT_ALPHA_GRID",
    "EXCLUSION_ALPHA_GRID",
    "PLUS_STATE",
    "detect_revival",
    "exclusion_lhs",
    "exclusion_rhs",
    "exclusion_verdict",
    "frequency_crossover",
    "hillery_reference_thresholds",
    "kl_thermometry_bounds",
    "limiting_temperature",
    "loschmidt_bound_curves",
    "loschmidt_bounds_from_fidelity",
    "main_inequality_slack",
    "min_processor_dimension",
    "pauli_dimension_bound",
    "pauli_unitary_overlaps",
    "prog_overlap_bound",
    "programming_thresholds",
    "thermalized_probe_bounds",
    "thermometry_bounds",
]
