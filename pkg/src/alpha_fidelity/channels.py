"""Qubit channels as affine Bloch maps and the channel alpha-fidelity."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.transform import Rotation

from .config import TOLERANCES
from .errors import ContractViolation, ParameterError, SingularConstructionError
from .fidelity import Alpha, AlphaLike, alpha_fidelity_general, alpha_fidelity_qubit, qubit_fidelity_kernel
from .optimize import OptimizerConfig, minimize_ball
from .qmath import (
    PAULIS,
    BlochLike,
    BlochVector,
    DensityMatrix,
    StateLike,
    density_to_bloch,
    hermitian_eig,
    to_bloch,
    to_density,
)
from .schemas import OptimResult

logger = logging.getLogger(__name__)

AXES = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}
PAULI_SIGNS = (
    (1.0, 1.0, 1.0),
    (1.0, -1.0, -1.0),
    (-1.0, 1.0, -1.0),
    (-1.0, -1.0, 1.0),
)
_PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / math.sqrt(2.0)
MAXIMALLY_ENTANGLED = np.outer(_PHI_PLUS, _PHI_PLUS.conj())
_PAULI_PAIRS = [np.kron(PAULIS[m], PAULIS[n]) for m in range(4) for n in range(4)]


@dataclass(frozen=True, slots=True, eq=False)
class QubitChannel:
    """Affine Bloch map ρ ↦ Mρ + c."""

    linear: np.ndarray
    shift: np.ndarray

    def __post_init__(self) -> None:
        linear = np.array(self.linear, dtype=float)
        shift = np.array(self.shift, dtype=float).reshape(-1)
        if linear.shape != (3, 3) or shift.shape != (3,):
            raise ParameterError(
                f"Channel needs a 3x3 matrix and a 3-vector, got {linear.shape} and {shift.shape}"
            )
        linear.setflags(write=False)
        shift.setflags(write=False)
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "shift", shift)

    def apply_array(self, v: np.ndarray) -> np.ndarray:
        return self.linear @ v + self.shift

    def apply(self, rho: BlochLike) -> BlochVector:
        out = self.apply_array(to_bloch(rho).as_array())
        norm = float(np.linalg.norm(out))
        if norm > 1.0:
            out = out / norm
        return BlochVector.from_array(out)

    @property
    def transfer_matrix(self) -> np.ndarray:
        """4x4 Pauli transfer matrix [[1, 0], [c, M]]."""

        r = np.zeros((4, 4))
        r[0, 0] = 1.0
        r[1:, 0] = self.shift
        r[1:, 1:] = self.linear
        return r

    def dephasing_factor(self) -> Optional[float]:
        """Γ when this is a real dephasing map diag(Γ, Γ, 1), else None."""

        tol = TOLERANCES.state
        expected = np.diag([self.linear[0, 0], self.linear[0, 0], 1.0])
        if np.max(np.abs(self.shift)) > tol or np.max(np.abs(self.linear - expected)) > tol:
            return None
        gamma = float(self.linear[0, 0])
        return gamma if gamma >= 0.0 else None

    def allclose(self, other: "QubitChannel", tol: float = 1e-10) -> bool:
        return bool(
            np.allclose(self.linear, other.linear, atol=tol, rtol=0.0)
            and np.allclose(self.shift, other.shift, atol=tol, rtol=0.0)
        )


@dataclass(frozen=True, slots=True)
class DynamicalMap:
    """Time-parametrized channel family t ↦ E^{(t)}."""

    evaluator: Callable[[float], QubitChannel]
    label: str
    period: Optional[float] = None

    def __call__(self, t: float) -> QubitChannel:
        if t < 0:
            raise ParameterError(f"time must be non-negative, got {t}")
        return self.evaluator(float(t))


def apply(channel: QubitChannel, rho: BlochLike) -> BlochVector:
    return channel.apply(rho)


def compose(outer: QubitChannel, inner: QubitChannel) -> QubitChannel:
    """outer ∘ inner."""

    return QubitChannel(
        outer.linear @ inner.linear, outer.linear @ inner.shift + outer.shift
    )


# ------------------------------------------------------------------
# Constructors
# ------------------------------------------------------------------


def identity() -> QubitChannel:
    return QubitChannel(np.eye(3), np.zeros(3))


def unitary(axis: Union[str, Sequence[float]], angle: float) -> QubitChannel:
    """Conjugation by exp(−i·angle/2·n·σ): a Bloch rotation about ``axis``."""

    if isinstance(axis, str):
        if axis not in AXES:
            raise ParameterError(f"Unknown axis {axis!r}; use x, y or z")
        direction = np.array(AXES[axis])
    else:
        direction = np.asarray(axis, dtype=float).reshape(-1)
        norm = float(np.linalg.norm(direction))
        if direction.shape != (3,) or norm == 0.0:
            raise ParameterError("Rotation axis must be a non-zero 3-vector")
        direction = direction / norm
    rotation = Rotation.from_rotvec(float(angle) * direction).as_matrix()
    return QubitChannel(rotation, np.zeros(3))


def unitary_channel(u: np.ndarray) -> QubitChannel:
    """Affine form of ρ ↦ UρU† for a 2x2 unitary."""

    u = _check_unitary(u)
    linear = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            linear[i, j] = 0.5 * np.real(np.trace(PAULIS[i + 1] @ u @ PAULIS[j + 1] @ u.conj().T))
    return QubitChannel(linear, np.zeros(3))


def dephasing(gamma: Union[float, complex]) -> QubitChannel:
    """Coherence contraction ρ₀₁ ↦ Γρ₀₁ (complex Γ adds a z-rotation)."""

    g = complex(gamma)
    if abs(g) > 1.0 + TOLERANCES.bloch:
        raise ParameterError(f"|Γ| must not exceed 1, got {abs(g):.6g}")
    linear = np.array([[g.real, g.imag, 0.0], [-g.imag, g.real, 0.0], [0.0, 0.0, 1.0]])
    return QubitChannel(linear, np.zeros(3))


def pauli_mix(p0: float, p1: float, p2: float, p3: float) -> QubitChannel:
    """ρ ↦ Σᵢ pᵢ σᵢρσᵢ."""

    probs = np.array([p0, p1, p2, p3], dtype=float)
    if np.any(probs < -TOLERANCES.bloch) or abs(probs.sum() - 1.0) > TOLERANCES.cptp:
        raise ParameterError(f"Pauli probabilities must form a distribution, got {probs.tolist()}")
    signs = np.array(PAULI_SIGNS)
    return QubitChannel(np.diag(signs.T @ probs), np.zeros(3))


def noisy_unitary(index: int, epsilon: float) -> QubitChannel:
    """ρ ↦ (1−ε)σᵢρσᵢ + ε·I/2."""

    if index not in range(4):
        raise ParameterError(f"Pauli index must be 0..3, got {index}")
    if not 0.0 <= epsilon <= 1.0:
        raise ParameterError(f"epsilon must lie in [0, 1], got {epsilon}")
    return QubitChannel((1.0 - epsilon) * np.diag(PAULI_SIGNS[index]), np.zeros(3))


def pauli_unitary(index: int) -> QubitChannel:
    return noisy_unitary(index, 0.0)


def sigma2_projection() -> QubitChannel:
    """ρ ↦ ½(I + m₂σ₂)."""

    linear = np.zeros((3, 3))
    linear[1, 1] = 1.0
    return QubitChannel(linear, np.zeros(3))


def constant(state: BlochLike) -> QubitChannel:
    """Preparation channel with fixed output ``state``."""

    return QubitChannel(np.zeros((3, 3)), to_bloch(state).as_array())


# ------------------------------------------------------------------
# Operator action and Choi matrices
# ------------------------------------------------------------------


def apply_operator(channel: QubitChannel, operator: np.ndarray) -> np.ndarray:
    """Linear extension of the channel to an arbitrary 2x2 operator."""

    x = np.array([np.trace(operator @ p) for p in PAULIS])
    y = channel.transfer_matrix @ x
    return 0.5 * sum(coeff * p for coeff, p in zip(y, PAULIS))


def apply_product(first: QubitChannel, second: QubitChannel, operator: np.ndarray) -> np.ndarray:
    """(first ⊗ second) applied to a 4x4 operator through the Pauli basis."""

    y = np.array([np.trace(operator @ p) for p in _PAULI_PAIRS]).reshape(4, 4)
    z = first.transfer_matrix @ y @ second.transfer_matrix.T
    return 0.25 * sum(coeff * p for coeff, p in zip(z.reshape(-1), _PAULI_PAIRS))


def choi_matrix(channel: QubitChannel) -> np.ndarray:
    mat = apply_product(channel, identity(), MAXIMALLY_ENTANGLED)
    return 0.5 * (mat + mat.conj().T)


def choi(channel: QubitChannel) -> DensityMatrix:
    return DensityMatrix(choi_matrix(channel))


def is_cptp(channel: QubitChannel) -> Tuple[bool, float]:
    """Complete positivity check of the Choi matrix; returns (flag, min eigenvalue)."""

    eigenvalues, _ = hermitian_eig(choi_matrix(channel))
    smallest = float(eigenvalues[-1])
    return smallest >= -TOLERANCES.cptp, smallest


def process_fidelity(first: QubitChannel, second: QubitChannel) -> float:
    return alpha_fidelity_general(choi(first), choi(second), 0.5)


# ------------------------------------------------------------------
# Channel fidelities
# ------------------------------------------------------------------


def state_fidelity_quotient(
    first: QubitChannel,
    second: QubitChannel,
    rho1: BlochLike,
    rho2: BlochLike,
    alpha: AlphaLike,
) -> Optional[float]:
    """F_α(E₁(ρ₁), E₂(ρ₂)) / F_α(ρ₁, ρ₂); None for (near-)orthogonal inputs."""

    a = Alpha.coerce(alpha).value
    denominator = alpha_fidelity_qubit(rho1, rho2, a)
    if denominator < TOLERANCES.quotient_guard:
        return None
    return alpha_fidelity_qubit(first.apply(rho1), second.apply(rho2), a) / denominator


def single_state_fidelity(
    first: QubitChannel, second: QubitChannel, rho: BlochLike, alpha: AlphaLike
) -> float:
    """F_α(E₁(ρ), E₂(ρ)); an upper bound on the minimal gate fidelity."""

    return alpha_fidelity_qubit(first.apply(rho), second.apply(rho), alpha)


def _quotient_objective(
    first: QubitChannel,
    second: QubitChannel,
    a: float,
    kernel: Callable[[Sequence[float], Sequence[float], float], float],
) -> Callable[[np.ndarray], float]:
    guard = TOLERANCES.quotient_guard

    def objective(x: np.ndarray) -> float:
        v1, v2 = x[:3], x[3:]
        denominator = kernel(v1, v2, a)
        if denominator < guard:
            return math.inf
        return kernel(first.apply_array(v1), second.apply_array(v2), a) / denominator

    return objective


def _clamped(result: OptimResult) -> OptimResult:
    result.value = min(max(result.value, 0.0), 1.0)
    return result


def channel_alpha_fidelity(
    first: QubitChannel,
    second: QubitChannel,
    alpha: AlphaLike,
    cfg: Optional[OptimizerConfig] = None,
) -> OptimResult:
    """Infimum over non-orthogonal input pairs of the output/input F_α quotient."""

    a = Alpha.coerce(alpha).value
    objective = _quotient_objective(first, second, a, qubit_fidelity_kernel)
    result = _clamped(minimize_ball(objective, 2, cfg))
    logger.debug("channel fidelity %.12g after %d evaluations", result.value, result.evaluations)
    return result


def tilde_qubit_kernel(v1: Sequence[float], v2: Sequence[float], a: float) -> float:
    """tr[ρ₁^α ρ₂^{1−α}] for Bloch triples."""

    def power_parts(v: Sequence[float], p: float) -> Tuple[float, float, np.ndarray]:
        vec = np.asarray(v, dtype=float)
        r = min(float(np.linalg.norm(vec)), 1.0)
        plus, minus = (0.5 * (1.0 + r)) ** p, (0.5 * (1.0 - r)) ** p
        direction = vec / r if r > 0.0 else np.zeros(3)
        return plus + minus, plus - minus, direction

    s1, d1, n1 = power_parts(v1, a)
    s2, d2, n2 = power_parts(v2, 1.0 - a)
    value = 0.5 * (s1 * s2 + d1 * d2 * float(n1 @ n2))
    return min(max(value, 0.0), 1.0)


def tilde_channel_fidelity(
    first: QubitChannel,
    second: QubitChannel,
    alpha: AlphaLike,
    cfg: Optional[OptimizerConfig] = None,
) -> OptimResult:
    """Channel fidelity built on tr[ρ₁^α ρ₂^{1−α}] instead of the sandwiched form."""

    a = Alpha.coerce(alpha).value
    objective = _quotient_objective(first, second, a, tilde_qubit_kernel)
    return _clamped(minimize_ball(objective, 2, cfg))


def minimal_gate_fidelity(
    first: QubitChannel,
    second: QubitChannel,
    alpha: AlphaLike,
    cfg: Optional[OptimizerConfig] = None,
) -> OptimResult:
    """inf over single inputs ρ of F_α(E₁(ρ), E₂(ρ))."""

    a = Alpha.coerce(alpha).value

    def objective(x: np.ndarray) -> float:
        return qubit_fidelity_kernel(first.apply_array(x), second.apply_array(x), a)

    return _clamped(minimize_ball(objective, 1, cfg))


def product_restriction_bound(
    first: QubitChannel,
    second: QubitChannel,
    third: QubitChannel,
    fourth: QubitChannel,
    rho1: StateLike,
    rho2: StateLike,
    alpha: AlphaLike,
) -> Optional[float]:
    """Quotient of (first⊗third, second⊗fourth) at one pair of two-qubit inputs.

    Any such value bounds F_α(first⊗third, second⊗fourth) from above.
    """

    a = Alpha.coerce(alpha).value
    s1, s2 = to_density(rho1), to_density(rho2)
    denominator = alpha_fidelity_general(s1, s2, a)
    if denominator < TOLERANCES.quotient_guard:
        return None
    out1 = apply_product(first, third, s1.mat)
    out2 = apply_product(second, fourth, s2.mat)
    numerator = alpha_fidelity_general(
        DensityMatrix(0.5 * (out1 + out1.conj().T)),
        DensityMatrix(0.5 * (out2 + out2.conj().T)),
        a,
    )
    return numerator / denominator


# ------------------------------------------------------------------
# Programmable-processor constructions
# ------------------------------------------------------------------


def _check_unitary(u: np.ndarray) -> np.ndarray:
    mat = np.asarray(u, dtype=complex)
    if mat.shape != (2, 2):
        raise ContractViolation(f"Expected a 2x2 unitary, got shape {mat.shape}")
    if np.max(np.abs(mat.conj().T @ mat - np.eye(2))) > TOLERANCES.hermitian:
        raise ContractViolation("Matrix is not unitary")
    return mat


def orthogonalizing_state(u: np.ndarray, phi1: Sequence[complex]) -> np.ndarray:
    """Unit φ₂ with ⟨φ₁|Uφ₂⟩ = 0 and ⟨φ₁|φ₂⟩ ≠ 0."""

    mat = _check_unitary(u)
    phi = np.asarray(phi1, dtype=complex).reshape(-1)
    phi = phi / np.linalg.norm(phi)
    overlap = np.vdot(phi, mat @ phi)
    if abs(overlap) >= 1.0 - TOLERANCES.singular:
        raise SingularConstructionError(
            f"|<φ1|Uφ1>| = {abs(overlap):.12f} leaves no orthogonalizing state",
            {"overlap": abs(overlap)},
        )
    s = math.sqrt(1.0 - abs(overlap) ** 2)
    back = mat.conj().T @ phi
    transverse = back - np.vdot(phi, back) * phi
    phi2 = s * phi - (overlap / s) * transverse
    return phi2 / np.linalg.norm(phi2)


def swap_processor_check(
    xi1: StateLike,
    xi2: StateLike,
    alpha: AlphaLike,
    cfg: Optional[OptimizerConfig] = None,
) -> Tuple[float, float]:
    """(F_α(ξ₁, ξ₂), channel fidelity of the two preparation channels)."""

    lhs = alpha_fidelity_general(xi1, xi2, alpha)
    prep1 = constant(density_to_bloch(xi1))
    prep2 = constant(density_to_bloch(xi2))
    rhs = channel_alpha_fidelity(prep1, prep2, alpha, cfg).value
    return lhs, rhs


__all__ = [
    "DynamicalMap",
    "MAXIMALLY_ENTANGLED",
    "QubitChannel",
    "apply",
    "apply_operator",
    "apply_product",
    "channel_alpha_fidelity",
    "choi",
    "choi_matrix",
    "compose",
    "constant",
    "dephasing",
    "identity",
    "is_cptp",
    "minimal_gate_fidelity",
    "noisy_unitary",
    "orthogonalizing_state",
    "pauli_mix",
    "pauli_unitary",
    "process_fidelity",
    "product_restriction_bound",
    "sigma2_projection",
    "single_state_fidelity",
    "state_fidelity_quotient",
    "swap_processor_check",
    "tilde_channel_fidelity",
    "tilde_qubit_kernel",
    "unitary",
    "unitary_channel",
]
