"""Exactly solvable environment models producing dynamical maps.

Three families are provided, all in units with ħ = k_B = 1:

* a qubit dephasing against a bath of displaced oscillators,
* the resonant Jaynes-Cummings coupling to a single thermal mode,
* a qubit coupled to a transverse-field Ising ring through the field strength.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg as sp_linalg
from scipy.special import expit

from .channels import DynamicalMap, QubitChannel, dephasing
from .config import TOLERANCES
from .errors import ParameterError, SizeError
from .fidelity import Alpha, AlphaLike

logger = logging.getLogger(__name__)

MAX_EXACT_SPINS = 10

ArrayLike = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True, slots=True)
class OscillatorBath:
    """Independent modes (ω_k, g_k) with H_E = Σ ω_k(b†b + ½)."""

    modes: Tuple[Tuple[float, complex], ...]

    def __post_init__(self) -> None:
        modes = tuple((float(w), complex(g)) for w, g in self.modes)
        if not modes:
            raise ParameterError("A bath needs at least one mode")
        if any(not (w > 0 and math.isfinite(w)) for w, _ in modes):
            raise ParameterError("Mode frequencies must be positive")
        object.__setattr__(self, "modes", modes)

    @classmethod
    def single_mode(cls, omega: float, coupling: complex = 1.0) -> "OscillatorBath":
        return cls(((omega, coupling),))

    @property
    def omegas(self) -> np.ndarray:
        return np.array([w for w, _ in self.modes])

    @property
    def coupling_strengths(self) -> np.ndarray:
        return np.array([abs(g) for _, g in self.modes])

    def scaled(self, omega: float) -> "OscillatorBath":
        """Single-mode hypothesis bath at frequency ``omega`` with the same couplings."""

        return OscillatorBath(tuple((omega, g) for _, g in self.modes))


@dataclass(frozen=True, slots=True)
class ThermalState:
    beta: float

    def __post_init__(self) -> None:
        if not (self.beta > 0):
            raise ParameterError(f"beta must be positive or infinite, got {self.beta}")

    @classmethod
    def from_temperature(cls, temperature: float) -> "ThermalState":
        if temperature < 0:
            raise ParameterError(f"temperature must be non-negative, got {temperature}")
        return cls(math.inf if temperature == 0 else 1.0 / temperature)

    @property
    def temperature(self) -> float:
        return 0.0 if math.isinf(self.beta) else 1.0 / self.beta


def _coth_half(omega: np.ndarray, temperature: float) -> np.ndarray:
    if temperature < 0:
        raise ParameterError(f"temperature must be non-negative, got {temperature}")
    if temperature == 0:
        return np.ones_like(omega)
    return 1.0 / np.tanh(omega / (2.0 * temperature))


# ------------------------------------------------------------------
# Dephasing model
# ------------------------------------------------------------------


def dephasing_gamma(bath: OscillatorBath, temperature: float, t: float) -> float:
    """Decoherence factor Γ(t) of the oscillator-bath dephasing model."""

    if t < 0:
        raise ParameterError(f"time must be non-negative, got {t}")
    omega = bath.omegas
    weights = 4.0 * bath.coupling_strengths**2 / omega**2
    exponent = np.sum(weights * _coth_half(omega, temperature) * (1.0 - np.cos(omega * t)))
    return float(np.exp(-exponent))


def dephasing_map(bath: OscillatorBath, temperature: float) -> DynamicalMap:
    period = 2.0 * math.pi / bath.omegas[0] if len(bath.modes) == 1 else None
    return DynamicalMap(
        evaluator=lambda t: dephasing(dephasing_gamma(bath, temperature, t)),
        label=f"dephasing(T={temperature:g})",
        period=period,
    )


def dephasing_pair_alpha_fidelity(gamma1: float, gamma2: float, alpha: AlphaLike) -> float:
    """Closed-form F_α between two dephasing channels of factors Γ₁, Γ₂."""

    a = Alpha.coerce(alpha).value
    for gamma in (gamma1, gamma2):
        if not -TOLERANCES.bloch <= gamma <= 1.0 + TOLERANCES.bloch:
            raise ParameterError(f"Γ must lie in [0, 1], got {gamma}")
    g1 = min(max(gamma1, 0.0), 1.0)
    g2 = min(max(gamma2, 0.0), 1.0)
    value = (
        (0.5 * (1.0 + g2)) ** (1.0 - a) * (0.5 * (1.0 + g1)) ** a
        + (0.5 * (1.0 - g2)) ** (1.0 - a) * (0.5 * (1.0 - g1)) ** a
    )
    return min(value, 1.0)


# ------------------------------------------------------------------
# Thermal oscillator quantities
# ------------------------------------------------------------------


def _vacuum_log_terms(omega: np.ndarray, beta: float) -> float:
    """Σ −ln(1 − e^{−βω}); zero at β = ∞."""

    if math.isinf(beta):
        return 0.0
    return float(-np.sum(np.log(-np.expm1(-beta * omega))))


def log_partition(bath: OscillatorBath, beta: float) -> float:
    if not beta > 0:
        raise ParameterError(f"beta must be positive, got {beta}")
    omega = bath.omegas
    if math.isinf(beta):
        return -math.inf
    return float(-beta * np.sum(omega) / 2.0) + _vacuum_log_terms(omega, beta)


def thermal_renyi_divergence(
    bath: OscillatorBath, beta1: float, beta2: float, alpha: AlphaLike
) -> float:
    """S_α(ξ(β₁) ‖ ξ(β₂)) for Gibbs states of the bath (β = ∞ is the ground state)."""

    a = Alpha.coerce(alpha).value
    for beta in (beta1, beta2):
        if not beta > 0:
            raise ParameterError(f"beta must be positive or infinite, got {beta}")
    if beta1 == beta2:
        return 0.0
    omega = bath.omegas
    if math.isinf(beta1):
        return _vacuum_log_terms(omega, beta2)
    if math.isinf(beta2):
        return a / (a - 1.0) * -_vacuum_log_terms(omega, beta1)
    # the zero-point energy terms cancel in the combination
    mixed = a * beta1 + (1.0 - a) * beta2
    combination = (
        _vacuum_log_terms(omega, mixed)
        - a * _vacuum_log_terms(omega, beta1)
        - (1.0 - a) * _vacuum_log_terms(omega, beta2)
    )
    return max(combination / (a - 1.0), 0.0)


def thermal_excited_population(omega: float, temperature: float) -> float:
    """Two-level Gibbs excited population p(T) = 1/(1 + e^{ω/T})."""

    if temperature < 0:
        raise ParameterError(f"temperature must be non-negative, got {temperature}")
    if temperature == 0:
        return 0.0
    return float(expit(-omega / temperature))


def truncated_thermal_weights(omega: float, temperature: float, n_trunc: int) -> np.ndarray:
    """Normalized populations of n = 0..n_trunc for a thermal oscillator."""

    if n_trunc < 1:
        raise ParameterError(f"n_trunc must be at least 1, got {n_trunc}")
    if not omega > 0:
        raise ParameterError(f"omega must be positive, got {omega}")
    if temperature < 0:
        raise ParameterError(f"temperature must be non-negative, got {temperature}")
    weights = np.zeros(n_trunc + 1)
    if temperature == 0:
        weights[0] = 1.0
        return weights
    weights = np.exp(-omega * np.arange(n_trunc + 1) / temperature)
    return weights / weights.sum()


# ------------------------------------------------------------------
# Jaynes-Cummings model
# ------------------------------------------------------------------


@dataclass(slots=True)
class JCCoefficients:
    a: float
    b: float
    c: complex
    tail_bound: float


def jc_coefficients(
    coupling: complex, omega: float, temperature: float, t: float, n_trunc: int = 10
) -> JCCoefficients:
    """Thermal averages of the resonant JC propagator entries, truncated at n_trunc."""

    weights = truncated_thermal_weights(omega, temperature, n_trunc)
    n = np.arange(n_trunc + 1)
    phase = abs(coupling) * t
    cos_n = np.cos(phase * np.sqrt(n))
    cos_n1 = np.cos(phase * np.sqrt(n + 1))
    a = float(np.sum(weights * cos_n**2))
    b = float(np.sum(weights * cos_n1**2))
    c = complex(np.sum(weights * cos_n1 * cos_n))
    if temperature == 0:
        tail = 0.0
    else:
        x = math.exp(-omega / temperature)
        tail = x ** (n_trunc + 1) / (1.0 - x)
    return JCCoefficients(a=a, b=b, c=c, tail_bound=tail)


def jc_channel(coefficients: JCCoefficients) -> QubitChannel:
    c = coefficients.c
    linear = np.array(
        [
            [c.real, c.imag, 0.0],
            [-c.imag, c.real, 0.0],
            [0.0, 0.0, coefficients.a + coefficients.b - 1.0],
        ]
    )
    return QubitChannel(linear, np.array([0.0, 0.0, coefficients.a - coefficients.b]))


def jc_map(coupling: complex, omega: float, temperature: float, n_trunc: int = 10) -> DynamicalMap:
    return DynamicalMap(
        evaluator=lambda t: jc_channel(jc_coefficients(coupling, omega, temperature, t, n_trunc)),
        label=f"jaynes-cummings(T={temperature:g}, n_trunc={n_trunc})",
    )


# ------------------------------------------------------------------
# Transverse-field Ising ring
# ------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class IsingChain:
    """H(λ,δ) = −J Σ_j (σ₃σ₃ + λσ₁ + δ|e⟩⟨e|σ₁) on a periodic ring of N spins."""

    coupling: float
    field: float
    delta: float
    spins: int

    def __post_init__(self) -> None:
        if self.spins < 4 or self.spins % 2:
            raise ParameterError(f"N must be even and at least 4, got {self.spins}")
        if not self.coupling > 0:
            raise ParameterError(f"J must be positive, got {self.coupling}")


@dataclass(slots=True)
class IsingSpectrum:
    momenta: np.ndarray
    energies: np.ndarray
    angles: np.ndarray


def ising_spectrum(chain: IsingChain, field: float) -> IsingSpectrum:
    """Quasiparticle energies and Bogoliubov angles on the even-parity momenta."""

    k = (2.0 * np.arange(1, chain.spins // 2 + 1) - 1.0) * math.pi / chain.spins
    energies = 2.0 * chain.coupling * np.sqrt(field**2 - 2.0 * field * np.cos(k) + 1.0)
    # 2θ_k in [0, π) since sin k > 0 on these momenta
    angles = 0.5 * np.arctan2(np.sin(k), field - np.cos(k))
    return IsingSpectrum(momenta=k, energies=energies, angles=angles)


def loschmidt_ground(chain: IsingChain, t: ArrayLike) -> Union[float, np.ndarray]:
    """Ground-state echo Π_k (1 − sin²(2α_k) sin²(ε_k t)); scalar in, scalar out."""

    times = np.atleast_1d(np.asarray(t, dtype=float))
    unperturbed = ising_spectrum(chain, chain.field)
    perturbed = ising_spectrum(chain, chain.field + chain.delta)
    weights = np.sin(2.0 * (perturbed.angles - unperturbed.angles)) ** 2
    factors = 1.0 - weights[None, :] * np.sin(perturbed.energies[None, :] * times[:, None]) ** 2
    echo = np.clip(np.prod(factors, axis=1), 0.0, 1.0)
    return float(echo[0]) if np.ndim(t) == 0 else echo


def _dense_hamiltonian(chain: IsingChain, field: float) -> np.ndarray:
    n = chain.spins
    dim = 1 << n
    index = np.arange(dim)
    bits = (index[:, None] >> np.arange(n)[None, :]) & 1
    spins = 1 - 2 * bits
    bonds = np.sum(spins * np.roll(spins, -1, axis=1), axis=1)
    hamiltonian = np.diag(-chain.coupling * bonds.astype(float))
    for j in range(n):
        hamiltonian[index, index ^ (1 << j)] += -chain.coupling * field
    return hamiltonian


def _check_exact_size(chain: IsingChain) -> None:
    if chain.spins > MAX_EXACT_SPINS:
        raise SizeError(
            f"Dense oracle supports N <= {MAX_EXACT_SPINS}, got {chain.spins}"
        )


def ising_ground_state(chain: IsingChain, field: Optional[float] = None) -> np.ndarray:
    """Ground vector of H(field) in the sector where Π_j σ₁ = +1."""

    _check_exact_size(chain)
    field = chain.field if field is None else field
    hamiltonian = _dense_hamiltonian(chain, field)
    dim = hamiltonian.shape[0]
    index = np.arange(dim)
    flip = np.zeros((dim, dim))
    flip[index, index ^ (dim - 1)] = 1.0
    penalty = 4.0 * chain.coupling * chain.spins * (1.0 + abs(field)) + 1.0
    _, vectors = sp_linalg.eigh(hamiltonian + 0.5 * penalty * (np.eye(dim) - flip))
    return vectors[:, 0].astype(complex)


class ExactEcho:
    """Dense-diagonalization echo amplitudes for a fixed environment state."""

    def __init__(self, chain: IsingChain, state: Optional[Sequence[complex]] = None) -> None:
        _check_exact_size(chain)
        self.chain = chain
        dim = 1 << chain.spins
        if state is None:
            phi = ising_ground_state(chain)
        else:
            phi = np.asarray(state, dtype=complex).reshape(-1)
            if phi.size != dim:
                raise ParameterError(f"state must have length {dim}, got {phi.size}")
            phi = phi / np.linalg.norm(phi)
        self.state = phi
        self._energies = []
        self._vectors = []
        self._coefficients = []
        for field in (chain.field, chain.field + chain.delta):
            energies, vectors = sp_linalg.eigh(_dense_hamiltonian(chain, field))
            self._energies.append(energies)
            self._vectors.append(vectors)
            self._coefficients.append(vectors.conj().T @ phi)

    def amplitude(self, t: ArrayLike) -> Union[complex, np.ndarray]:
        """⟨φ|e^{iH(λ,0)t} e^{−iH(λ+δ,0)t}|φ⟩."""

        times = np.atleast_1d(np.asarray(t, dtype=float))
        evolved = [
            vectors @ (np.exp(-1j * energies[:, None] * times[None, :]) * coeffs[:, None])
            for energies, vectors, coeffs in zip(self._energies, self._vectors, self._coefficients)
        ]
        values = np.sum(evolved[0].conj() * evolved[1], axis=0)
        return complex(values[0]) if np.ndim(t) == 0 else values

    def echo(self, t: ArrayLike) -> Union[float, np.ndarray]:
        values = np.clip(np.abs(self.amplitude(t)) ** 2, 0.0, 1.0)
        return float(values) if np.ndim(t) == 0 else values


def loschmidt_amplitude_small(
    chain: IsingChain, state: Optional[Sequence[complex]], t: ArrayLike
) -> Union[complex, np.ndarray]:
    return ExactEcho(chain, state).amplitude(t)


def loschmidt_exact_small(
    chain: IsingChain, state: Optional[Sequence[complex]], t: ArrayLike
) -> Union[float, np.ndarray]:
    return ExactEcho(chain, state).echo(t)


def ising_dephasing_map(
    chain: IsingChain,
    state: Optional[Sequence[complex]] = None,
    keep_phase: bool = False,
) -> DynamicalMap:
    """Pure dephasing induced on the qubit by the ring prepared in ``state``.

    The ground state uses the quasiparticle product; any other state, or
    ``keep_phase=True``, goes through the dense oracle. With ``keep_phase``
    the complex decoherence factor is kept, giving the exact induced channel.
    """

    if state is None and not keep_phase:
        return DynamicalMap(
            evaluator=lambda t: dephasing(math.sqrt(loschmidt_ground(chain, t))),
            label=f"ising-ground(lambda={chain.field:g})",
        )
    oracle = ExactEcho(chain, state)
    if keep_phase:
        evaluator = lambda t: dephasing(np.conj(oracle.amplitude(t)))  # noqa: E731
    else:
        evaluator = lambda t: dephasing(math.sqrt(oracle.echo(t)))  # noqa: E731
    return DynamicalMap(evaluator=evaluator, label=f"ising-exact(lambda={chain.field:g})")


__all__ = [
    "ExactEcho",
    "IsingChain",
    "IsingSpectrum",
    "JCCoefficients",
    "OscillatorBath",
    "ThermalState",
    "dephasing_gamma",
    "dephasing_map",
    "dephasing_pair_alpha_fidelity",
    "ising_dephasing_map",
    "ising_ground_state",
    "ising_spectrum",
    "jc_channel",
    "jc_coefficients",
    "jc_map",
    "log_partition",
    "loschmidt_amplitude_small",
    "loschmidt_exact_small",
    "loschmidt_ground",
    "thermal_excited_population",
    "thermal_renyi_divergence",
    "truncated_thermal_weights",
]
