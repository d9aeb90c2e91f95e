"""State-level alpha-fidelities and Rényi / Kullback-Leibler divergences."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .config import TOLERANCES
from .errors import ContractViolation, DimensionError, ParameterError
from .qmath import (
    BlochLike,
    StateLike,
    bloch_to_density,
    hermitian_eig,
    psd_log,
    psd_power,
    to_bloch,
    to_density,
)

# Divergences are plain floats; math.inf marks orthogonal supports.
DivergenceValue = float


@dataclass(frozen=True, slots=True)
class Alpha:
    value: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.value) and 0.0 < self.value < 1.0):
            raise ParameterError(f"alpha must lie in (0, 1), got {self.value!r}")

    @classmethod
    def coerce(cls, value: "AlphaLike") -> "Alpha":
        if isinstance(value, Alpha):
            return value
        return cls(float(value))

    @property
    def dpi_valid(self) -> bool:
        """True on the data-processing range α ≥ ½."""

        return self.value >= 0.5

    def __float__(self) -> float:
        return self.value


AlphaLike = Union[Alpha, float]


def _clamp_unit(value: float) -> float:
    return min(max(value, 0.0), 1.0)


def _same_dimension(rho1: StateLike, rho2: StateLike):
    s1, s2 = to_density(rho1), to_density(rho2)
    if s1.dim != s2.dim:
        raise DimensionError(f"Dimension mismatch: {s1.dim} vs {s2.dim}")
    return s1, s2


# ------------------------------------------------------------------
# Qubit closed form
# ------------------------------------------------------------------


def qubit_fidelity_kernel(v1: Sequence[float], v2: Sequence[float], a: float) -> float:
    """Closed-form F_α for two Bloch vectors given as plain triples.

    Uses λ₋ = D/λ₊ so the result stays accurate when ρ₂ is pure; optimizer
    objectives call this directly. State and sandwich eigenvalues at or below
    ``TOLERANCES.clip`` count as zero, as on the general spectral path.
    """

    clip = TOLERANCES.clip
    x1, y1, z1 = float(v1[0]), float(v1[1]), float(v1[2])
    x2, y2, z2 = float(v2[0]), float(v2[1]), float(v2[2])
    r1 = min(math.sqrt(x1 * x1 + y1 * y1 + z1 * z1), 1.0)
    r2 = min(math.sqrt(x2 * x2 + y2 * y2 + z2 * z2), 1.0)
    dot = x1 * x2 + y1 * y2 + z1 * z2
    q = (1.0 - a) / a

    plus = 0.5 * (1.0 + r2)
    minus = 0.5 * (1.0 - r2)
    if minus <= clip:
        minus = 0.0
    a_plus = plus**q + minus**q
    if r2 == 0.0:
        a_minus_over_r = 2.0 * q * 0.5**q
    elif r2 < 0.5:
        # difference of powers without cancellation near the centre of the ball
        a_minus_over_r = 0.5**q * (1.0 - r2) ** q * math.expm1(2.0 * q * math.atanh(r2)) / r2
    else:
        a_minus_over_r = (plus**q - minus**q) / r2

    # a rounding residue in 1 − r₁² must not survive into λ₋ᵅ for small α
    one_minus_r1_sq = 0.0 if 0.5 * (1.0 - r1) <= clip else (1.0 - r1) * (1.0 + r1)
    trace = 0.5 * a_plus + 0.5 * a_minus_over_r * dot
    det = (plus * minus) ** q * 0.25 * one_minus_r1_sq
    lam_plus = 0.5 * (trace + math.sqrt(max(trace * trace - 4.0 * det, 0.0)))
    if lam_plus <= 0.0:
        return 0.0
    lam_minus = det / lam_plus
    if lam_minus <= clip:
        lam_minus = 0.0
    return _clamp_unit(lam_plus**a + lam_minus**a)


def alpha_fidelity_qubit(rho1: BlochLike, rho2: BlochLike, alpha: AlphaLike) -> float:
    """F_α of two qubit states in Bloch form."""

    a = Alpha.coerce(alpha).value
    v1, v2 = to_bloch(rho1), to_bloch(rho2)
    if v2.norm > 1.0 - TOLERANCES.pure_delegation:
        return alpha_fidelity_general(bloch_to_density(v1), bloch_to_density(v2), a)
    return qubit_fidelity_kernel((v1.x, v1.y, v1.z), (v2.x, v2.y, v2.z), a)


# ------------------------------------------------------------------
# General spectral forms
# ------------------------------------------------------------------


def alpha_fidelity_general(rho1: StateLike, rho2: StateLike, alpha: AlphaLike) -> float:
    """tr[(ρ₂^{(1−α)/2α} ρ₁ ρ₂^{(1−α)/2α})^α] for states of equal dimension."""

    a = Alpha.coerce(alpha).value
    s1, s2 = _same_dimension(rho1, rho2)
    half_power = psd_power(s2.mat, (1.0 - a) / (2.0 * a))
    sandwich = half_power @ s1.mat @ half_power
    sandwich = 0.5 * (sandwich + sandwich.conj().T)
    eigenvalues, _ = hermitian_eig(sandwich)
    # round-off in the sandwich of a singular state leaves eigenvalues near 1e-17
    eigenvalues = np.where(eigenvalues > TOLERANCES.clip, eigenvalues, 0.0)
    return _clamp_unit(float(np.sum(eigenvalues**a)))


def tilde_fidelity(rho1: StateLike, rho2: StateLike, alpha: AlphaLike) -> float:
    """tr[ρ₁^α ρ₂^{1−α}]."""

    a = Alpha.coerce(alpha).value
    s1, s2 = _same_dimension(rho1, rho2)
    value = complex(np.trace(psd_power(s1.mat, a) @ psd_power(s2.mat, 1.0 - a)))
    if abs(value.imag) > TOLERANCES.hermitian:
        raise ContractViolation(f"Trace has imaginary part {value.imag:.3e}")
    return _clamp_unit(value.real)


def pure_state_fidelity(phi: Sequence[complex], psi: Sequence[complex], alpha: AlphaLike) -> float:
    a = Alpha.coerce(alpha).value
    u = np.asarray(phi, dtype=complex).reshape(-1)
    w = np.asarray(psi, dtype=complex).reshape(-1)
    if u.shape != w.shape:
        raise DimensionError(f"Dimension mismatch: {u.size} vs {w.size}")
    overlap = abs(np.vdot(u, w)) / (np.linalg.norm(u) * np.linalg.norm(w))
    return _clamp_unit(float(overlap) ** (2.0 * a))


def _divergence_from_fidelity(fid: float, a: float) -> DivergenceValue:
    if fid < TOLERANCES.orthogonal:
        return math.inf
    return max(math.log(fid) / (a - 1.0), 0.0)


def renyi_divergence(rho1: StateLike, rho2: StateLike, alpha: AlphaLike) -> DivergenceValue:
    a = Alpha.coerce(alpha).value
    return _divergence_from_fidelity(alpha_fidelity_general(rho1, rho2, a), a)


def tilde_renyi_divergence(rho1: StateLike, rho2: StateLike, alpha: AlphaLike) -> DivergenceValue:
    a = Alpha.coerce(alpha).value
    return _divergence_from_fidelity(tilde_fidelity(rho1, rho2, a), a)


def environment_fidelity(divergence: DivergenceValue, alpha: AlphaLike) -> float:
    """Invert S_α = ln F_α/(α−1); an infinite divergence gives 0."""

    a = Alpha.coerce(alpha).value
    if math.isinf(divergence):
        return 0.0
    return _clamp_unit(math.exp((a - 1.0) * divergence))


def kl_divergence(rho1: StateLike, rho2: StateLike) -> DivergenceValue:
    """tr[ρ₁(ln ρ₁ − ln ρ₂)] on supports; +∞ when supp ρ₁ ⊄ supp ρ₂."""

    s1, s2 = _same_dimension(rho1, rho2)
    w2, v2 = hermitian_eig(s2.mat)
    weights = np.real(np.einsum("ij,jk,ki->i", v2.conj().T, s1.mat, v2))
    outside = w2 < TOLERANCES.kl_eigen
    if np.any(weights[outside] > TOLERANCES.kl_weight):
        return math.inf
    inside = ~outside
    cross = float(np.sum(weights[inside] * np.log(w2[inside])))
    entropy_term = float(np.real(np.trace(s1.mat @ psd_log(s1.mat))))
    return max(entropy_term - cross, 0.0)


def super_fidelity(rho1: StateLike, rho2: StateLike) -> float:
    """tr(ρ₁ρ₂) + √((1−tr ρ₁²)(1−tr ρ₂²)) for qubits."""

    s1, s2 = _same_dimension(rho1, rho2)
    if s1.dim != 2:
        raise DimensionError(f"Super-fidelity is defined here for qubits, got {s1.dim}")
    overlap = float(np.real(np.trace(s1.mat @ s2.mat)))
    mixedness = max((1.0 - s1.purity) * (1.0 - s2.purity), 0.0)
    return overlap + math.sqrt(mixedness)


__all__ = [
    "Alpha",
    "AlphaLike",
    "DivergenceValue",
    "alpha_fidelity_general",
    "alpha_fidelity_qubit",
    "environment_fidelity",
    "kl_divergence",
    "pure_state_fidelity",
    "qubit_fidelity_kernel",
    "renyi_divergence",
    "super_fidelity",
    "tilde_fidelity",
    "tilde_renyi_divergence",
]
