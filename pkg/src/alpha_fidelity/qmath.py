"""Small dense complex linear algebra and Bloch-vector conversions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from .config import TOLERANCES
from .errors import ContractViolation, DimensionError, InvalidStateError, NotPSDError

MAX_DIM = 16
MAX_SWEEPS = 50

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z)


def as_matrix(values: object) -> np.ndarray:
    """Return ``values`` as a square complex matrix of supported dimension."""

    mat = np.array(values, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"Expected a square matrix, got shape {mat.shape}")
    if not 1 <= mat.shape[0] <= MAX_DIM:
        raise DimensionError(f"Matrix dimension {mat.shape[0]} outside 1..{MAX_DIM}")
    return mat


def _check_hermitian(mat: np.ndarray, tol: float) -> None:
    deviation = float(np.max(np.abs(mat - mat.conj().T)))
    if deviation > tol:
        raise ContractViolation(
            f"Matrix is not Hermitian (deviation {deviation:.3e})",
            {"deviation": deviation},
        )


@dataclass(frozen=True, slots=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        norm_sq = self.x * self.x + self.y * self.y + self.z * self.z
        if not math.isfinite(norm_sq) or norm_sq > 1.0 + TOLERANCES.bloch:
            raise InvalidStateError(
                f"Bloch vector norm {math.sqrt(norm_sq):.6g} exceeds 1",
                {"norm": math.sqrt(norm_sq)},
            )

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "BlochVector":
        arr = np.asarray(values, dtype=float).reshape(-1)
        if arr.shape != (3,):
            raise DimensionError(f"Bloch vector needs 3 components, got {arr.size}")
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @property
    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    @property
    def purity(self) -> float:
        return 0.5 * (1.0 + self.x * self.x + self.y * self.y + self.z * self.z)


BlochLike = Union[BlochVector, Sequence[float], np.ndarray]


def to_bloch(value: BlochLike) -> BlochVector:
    if isinstance(value, BlochVector):
        return value
    return BlochVector.from_array(value)


@dataclass(frozen=True, slots=True)
class DensityMatrix:
    """Hermitian PSD unit-trace matrix; the stored array is read-only."""

    mat: np.ndarray

    def __post_init__(self) -> None:
        mat = as_matrix(self.mat)
        _check_hermitian(mat, TOLERANCES.state)
        trace = complex(np.trace(mat))
        if abs(trace - 1.0) > TOLERANCES.state:
            raise InvalidStateError(f"Trace {trace.real:.12g} differs from 1")
        smallest = float(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))[0])
        if smallest < -TOLERANCES.psd:
            raise InvalidStateError(
                f"Density matrix has negative eigenvalue {smallest:.3e}",
                {"min_eigenvalue": smallest},
            )
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return int(self.mat.shape[0])

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))

    @classmethod
    def pure(cls, vector: Sequence[complex]) -> "DensityMatrix":
        psi = np.asarray(vector, dtype=complex).reshape(-1)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise InvalidStateError("Zero vector is not a state")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        return DensityMatrix(np.kron(self.mat, other.mat))


StateLike = Union[DensityMatrix, np.ndarray]


def to_density(value: StateLike) -> DensityMatrix:
    if isinstance(value, DensityMatrix):
        return value
    return DensityMatrix(value)


# ------------------------------------------------------------------
# Bloch conversions
# ------------------------------------------------------------------


def bloch_to_density(v: BlochLike) -> DensityMatrix:
    """Return ½(I + xσ₁ + yσ₂ + zσ₃)."""

    vec = to_bloch(v)
    mat = 0.5 * (IDENTITY2 + vec.x * SIGMA_X + vec.y * SIGMA_Y + vec.z * SIGMA_Z)
    return DensityMatrix(mat)


def density_to_bloch(rho: StateLike) -> BlochVector:
    state = to_density(rho)
    if state.dim != 2:
        raise DimensionError(f"Bloch form needs a qubit, got dimension {state.dim}")
    mat = state.mat
    # tr(ρσ) read off the entries directly keeps the round trip exact
    x = 2.0 * float(mat[0, 1].real)
    y = -2.0 * float(mat[0, 1].imag)
    z = float((mat[0, 0] - mat[1, 1]).real)
    norm_sq = x * x + y * y + z * z
    if norm_sq > 1.0:
        scale = 1.0 / math.sqrt(norm_sq)
        x, y, z = x * scale, y * scale, z * scale
    return BlochVector(x, y, z)


# ------------------------------------------------------------------
# Hermitian eigendecomposition
# ------------------------------------------------------------------


def hermitian_eig(
    values: object, tol: float = TOLERANCES.hermitian
) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi eigendecomposition.

    Returns eigenvalues in descending order and the matching eigenvectors as
    the columns of a unitary matrix.
    """

    a = as_matrix(values)
    _check_hermitian(a, tol)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(float(np.linalg.norm(a)), 1e-300)
    off_diagonal = ~np.eye(n, dtype=bool)

    for _ in range(MAX_SWEEPS):
        off = float(np.linalg.norm(a[off_diagonal]))
        if off <= 1e-15 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # phase-adjusted real rotation zeroing a[p, q]
                rot = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot

    eigenvalues = np.real(np.diag(a)).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def psd_function(
    values: object, func: Callable[[np.ndarray], np.ndarray]
) -> np.ndarray:
    """Apply ``func`` to the positive spectrum; zero eigenvalues map to zero."""

    w, vecs = hermitian_eig(values)
    if w[-1] < -TOLERANCES.psd:
        raise NotPSDError(
            f"Matrix has eigenvalue {w[-1]:.3e} below -{TOLERANCES.psd:g}",
            {"min_eigenvalue": float(w[-1])},
        )
    support = w > TOLERANCES.clip
    mapped = np.zeros_like(w)
    mapped[support] = func(w[support])
    return (vecs * mapped) @ vecs.conj().T


def psd_power(values: object, p: float) -> np.ndarray:
    """Spectral power on the support (0ᵖ = 0 for every p)."""

    return psd_function(values, lambda w: np.power(w, p))


def psd_log(values: object) -> np.ndarray:
    return psd_function(values, np.log)


def random_bloch(rng: np.random.Generator, pure: bool = False) -> BlochVector:
    """Uniform sample from the Bloch ball (or sphere when ``pure``)."""

    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    radius = 1.0 if pure else rng.random() ** (1.0 / 3.0)
    return BlochVector.from_array(radius * direction)


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> DensityMatrix:
    """Random full-rank (or given-rank) state from a Ginibre matrix."""

    cols = rank or dim
    g = rng.normal(size=(dim, cols)) + 1j * rng.normal(size=(dim, cols))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def random_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


__all__ = [
    "BlochLike",
    "BlochVector",
    "DensityMatrix",
    "IDENTITY2",
    "MAX_DIM",
    "PAULIS",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "StateLike",
    "as_matrix",
    "bloch_to_density",
    "density_to_bloch",
    "hermitian_eig",
    "psd_function",
    "psd_log",
    "psd_power",
    "random_bloch",
    "random_density",
    "random_unitary",
    "to_bloch",
    "to_density",
]
