"""Command registry turning library computations into figure tables."""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import channels
from .config import Settings
from .errors import ParameterError
from .fidelity import alpha_fidelity_qubit, tilde_fidelity
from .models import IsingChain, OscillatorBath, dephasing_map, jc_map
from .optimize import OptimizerConfig, TimeGrid
from .protocols import (
    DEFAULT_ALPHA_GRID,
    EXCLUSION_ALPHA_GRID,
    detect_revival,
    exclusion_rhs,
    exclusion_verdict,
    frequency_crossover,
    hillery_reference_thresholds,
    limiting_temperature,
    loschmidt_bound_curves,
    pauli_dimension_bound,
    pauli_unitary_overlaps,
    programming_thresholds,
    thermometry_bounds,
)
from .qmath import BlochVector, bloch_to_density
from .schemas import Table

logger = logging.getLogger(__name__)


COMMAND_DESCRIPTIONS = {
    "state-fid": "Alpha-fidelity (or its tilde variant) of two qubit states.",
    "chan-fid": "Channel alpha-fidelity of two qubit channels by multi-start search.",
    "fig2": "Processor dimension staircase for the noisy Pauli unitaries.",
    "fig3": "Frequency exclusion curves and the compatible/incompatible crossover.",
    "fig4": "Temperature bounds from Jaynes-Cummings induced dynamics.",
    "fig5": "Loschmidt-echo bounds for a transverse-field Ising ring and revival check.",
}


# ------------------------------------------------------------------
# Argument parsing helpers
# ------------------------------------------------------------------


def parse_grid(text: str) -> np.ndarray:
    """``lo:hi:n`` → n uniform points, both ends included."""

    parts = text.split(":")
    if len(parts) != 3:
        raise ParameterError(f"Grid must look like lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ParameterError(f"Malformed grid {text!r}: {exc}") from exc
    if n < 1 or hi < lo:
        raise ParameterError(f"Grid needs n >= 1 and lo <= hi, got {text!r}")
    return np.linspace(lo, hi, n)


def parse_floats(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise ParameterError(f"Expected comma-separated numbers, got {text!r}") from exc


def parse_bloch(text: str) -> BlochVector:
    values = parse_floats(text)
    if len(values) != 3:
        raise ParameterError(f"A Bloch vector needs three components, got {text!r}")
    return BlochVector(*values)


def _spec_numbers(name: str, args: List[str], count: int) -> List[float]:
    if len(args) != count:
        raise ParameterError(f"Channel {name!r} takes {count} argument(s), got {len(args)}")
    try:
        return [float(a) for a in args]
    except ValueError as exc:
        raise ParameterError(f"Malformed arguments for channel {name!r}") from exc


def parse_channel(spec: str) -> channels.QubitChannel:
    """Build a channel from ``name[:arg[:arg]]`` (see README for the grammar)."""

    name, *args = spec.strip().split(":")
    if name == "identity" and not args:
        return channels.identity()
    if name == "sigma2_projection" and not args:
        return channels.sigma2_projection()
    if name == "dephasing":
        (gamma,) = _spec_numbers(name, args, 1)
        return channels.dephasing(gamma)
    if name == "noisy_unitary":
        index, epsilon = _spec_numbers(name, args, 2)
        if index != int(index):
            raise ParameterError(f"Pauli index must be an integer, got {args[0]!r}")
        return channels.noisy_unitary(int(index), epsilon)
    if name == "pauli_mix" and len(args) == 1:
        probs = parse_floats(args[0])
        if len(probs) != 4:
            raise ParameterError("pauli_mix takes four probabilities")
        return channels.pauli_mix(*probs)
    if name == "const" and len(args) == 1:
        return channels.constant(parse_bloch(args[0]))
    if name == "unitary" and len(args) == 2:
        (angle,) = _spec_numbers(name, args[1:], 1)
        return channels.unitary(args[0], angle)
    raise ParameterError(f"Unknown channel spec {spec!r}")


# ------------------------------------------------------------------
# Table builders
# ------------------------------------------------------------------


class FigureBuilder:
    """Evaluates registered commands with shared settings and optimizer config."""

    def __init__(
        self, settings: Optional[Settings] = None, cfg: Optional[OptimizerConfig] = None
    ) -> None:
        self.settings = settings or Settings.load()
        self.cfg = cfg or OptimizerConfig.from_settings(self.settings)

    def _time_grid(self, t_max: float, points: Optional[int] = None) -> TimeGrid:
        points = self.settings.time_points if points is None else points
        return TimeGrid(t_max, points, self.settings.refine_iters)

    def state_fid(self, rho1: str, rho2: str, alpha: float, tilde: bool = False) -> Table:
        v1, v2 = parse_bloch(rho1), parse_bloch(rho2)
        if tilde:
            value = tilde_fidelity(bloch_to_density(v1), bloch_to_density(v2), alpha)
        else:
            value = alpha_fidelity_qubit(v1, v2, alpha)
        return Table(
            name="state-fid",
            columns=["alpha", "kind", "fidelity"],
            rows=[[float(alpha), "tilde" if tilde else "sandwiched", value]],
            config={"rho1": rho1, "rho2": rho2, "alpha": alpha, "tilde": tilde},
        )

    def chan_fid(self, chan1: str, chan2: str, alpha: float) -> Table:
        result = channels.channel_alpha_fidelity(
            parse_channel(chan1), parse_channel(chan2), alpha, self.cfg
        )
        a1, a2 = result.argmin_1, result.argmin_2
        return Table(
            name="chan-fid",
            columns=[
                "value", "x1", "y1", "z1", "x2", "y2", "z2",
                "purity_1", "purity_2", "argmin_pure", "converged", "evaluations",
            ],
            rows=[[
                result.value, a1.x, a1.y, a1.z, a2.x, a2.y, a2.z,
                a1.purity, a2.purity, result.argmin_pure, result.converged, result.evaluations,
            ]],
            config={"chan1": chan1, "chan2": chan2, "alpha": alpha, "optimizer": self.cfg},
            summary={"result": result},
        )

    def fig2(self, eps_grid: str = "0:0.5:101") -> Table:
        overlaps = pauli_unitary_overlaps(self.cfg)
        reference = hillery_reference_thresholds()
        rows = []
        for eps in parse_grid(eps_grid):
            ours = pauli_dimension_bound(float(eps), overlaps).min_dim
            ref_dim = 2
            for cut, dim in reversed(reference):
                if eps < cut:
                    ref_dim = dim
            rows.append([float(eps), ours, ref_dim])
        cuts = {f"eps_{d}": cut for cut, d in programming_thresholds(4) if d > 2}
        cuts.update({f"reference_{d}": cut for cut, d in reference})
        return Table(
            name="fig2",
            columns=["epsilon", "min_dim_ours", "min_dim_reference"],
            rows=rows,
            config={"eps_grid": eps_grid},
            summary=cuts,
        )

    def fig3(
        self,
        T1: float = 0.25,
        T2: float = 0.75,
        g: float = 1.0,
        omega: float = 1.0,
        omega_scan: str = "2:5:31",
        alpha_grid: Optional[Sequence[float]] = None,
        hypotheses: Sequence[float] = (3.0, 3.1, 3.25),
    ) -> Table:
        if not (T1 > 0 and T2 > 0):
            raise ParameterError("both temperatures must be positive")
        alphas = list(alpha_grid or EXCLUSION_ALPHA_GRID)
        bath = OscillatorBath.single_mode(omega, g)
        map1, map2 = dephasing_map(bath, T1), dephasing_map(bath, T2)
        beta1, beta2 = 1.0 / T1, 1.0 / T2
        grid = self._time_grid(2.0 * math.pi / omega)
        rhs = [exclusion_rhs(map1, map2, a, grid, self.cfg) for a in alphas]
        verdicts = [
            exclusion_verdict(bath.scaled(h * omega), beta1, beta2, rhs, alphas)
            for h in hypotheses
        ]
        crossover = frequency_crossover(
            map1, map2, beta1, beta2,
            [w * omega for w in parse_grid(omega_scan)],
            alphas, grid, self.cfg, rhs_curve=rhs,
        )
        rows = [
            [a, *[v.lhs_curve[i] for v in verdicts], rhs[i]] for i, a in enumerate(alphas)
        ]
        return Table(
            name="fig3",
            columns=["alpha", *[f"lhs_omega={h:g}" for h in hypotheses], "rhs"],
            rows=rows,
            config={
                "T1": T1, "T2": T2, "g": g, "omega": omega,
                "omega_scan": omega_scan, "alpha_grid": alphas, "hypotheses": list(hypotheses),
            },
            summary={
                "crossover": crossover / omega,
                "compatible": {f"{h:g}": v.compatible for h, v in zip(hypotheses, verdicts)},
            },
        )

    def fig4(
        self,
        T_grid: str = "0:1.5:21",
        g: float = 1.0,
        omega: float = 1.0,
        ntrunc: Optional[int] = None,
        t_max: float = 10.0,
        t_points: Optional[int] = None,
    ) -> Table:
        n_trunc = self.settings.jc_truncation if ntrunc is None else ntrunc
        if n_trunc < 1:
            raise ParameterError(f"ntrunc must be at least 1, got {n_trunc}")
        grid = self._time_grid(t_max, t_points)
        map0 = jc_map(g, omega, 0.0, n_trunc)
        rows = []
        for ratio in parse_grid(T_grid):
            temperature = float(ratio) * omega
            map_t = map0 if temperature == 0 else jc_map(g, omega, temperature, n_trunc)
            bounds = thermometry_bounds(map0, map_t, omega, DEFAULT_ALPHA_GRID, grid, self.cfg)
            upper = bounds.upper / omega if bounds.upper is not None and bounds.upper_valid else None
            rows.append([float(ratio), bounds.lower / omega, upper, bounds.upper_valid])
            logger.info("T/omega=%.4g: lower=%.4g upper=%s", ratio, bounds.lower / omega, upper)
        return Table(
            name="fig4",
            columns=["kT_over_omega", "lower", "upper", "upper_valid"],
            rows=rows,
            config={
                "T_grid": T_grid, "g": g, "omega": omega, "ntrunc": n_trunc,
                "t_max": t_max, "t_points": grid.points,
            },
            summary={"limiting_temperature": limiting_temperature()},
        )

    def fig5(
        self,
        lam: float = 0.01,
        F: float = 0.98,
        J: float = 1.0,
        delta: float = 0.1,
        N: int = 4000,
        t_grid: str = "0:3:601",
    ) -> Table:
        chain = IsingChain(coupling=J, field=lam, delta=delta, spins=N)
        times = parse_grid(t_grid)
        reference, lower, upper = loschmidt_bound_curves(chain, F, times)
        verdict = detect_revival(times, upper, lower)
        rows = [list(map(float, row)) for row in zip(times, reference, lower, upper)]
        return Table(
            name="fig5",
            columns=["t", "L_ground", "L_lo", "L_hi"],
            rows=rows,
            config={"lambda": lam, "F": F, "J": J, "delta": delta, "N": N, "t_grid": t_grid},
            summary={"revival": verdict},
        )

    def call_command(self, name: str, arguments: Dict[str, object]) -> Table:
        """Dispatch a registered command name to its builder."""

        if name not in COMMAND_DESCRIPTIONS:
            raise ParameterError(f"Unknown command: {name}")
        method: Callable[..., Table] = getattr(self, name.replace("-", "_"))
        return method(**arguments)


__all__ = [
    "COMMAND_DESCRIPTIONS",
    "FigureBuilder",
    "parse_bloch",
    "parse_channel",
    "parse_floats",
    "parse_grid",
]
