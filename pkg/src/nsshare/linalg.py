"""Dense complex matrix algebra for one-to-three qubit operators.

Everything in this project lives in dimension 2, 4 or 8, so all operators are
plain dense complex128 arrays.  Qubit effects are parameterized on the Bloch
sphere, which gives closed forms for their matrices and matrix square roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITIAN_ATOL = 1e-12


def _frozen(values) -> np.ndarray:
    arr = np.asarray(values, dtype=complex).copy()
    arr.setflags(write=False)
    return arr


IDENTITY_2 = _frozen(np.eye(2))
PAULI_X = _frozen([[0, 1], [1, 0]])
PAULI_Y = _frozen([[0, -1j], [1j, 0]])
PAULI_Z = _frozen([[1, 0], [0, -1]])


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with an explicit shape check."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch for matrix product: {a.shape} x {b.shape}")
    return a @ b


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a, dtype=complex).conj().T


def trace(a: np.ndarray) -> complex:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"trace requires a square matrix, got shape {a.shape}")
    return complex(np.trace(a))


def kron(a: np.ndarray, b: np.ndarray, *rest: np.ndarray) -> np.ndarray:
    """Kronecker product of two or more matrices, left to right."""
    out = np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    for m in rest:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def is_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def bloch_operator(direction) -> np.ndarray:
    """n . sigma for a real 3-vector n."""
    if len(direction) != 3:
        raise ValueError(f"Bloch direction must be a real 3-vector, got {direction!r}")
    nx, ny, nz = (float(v) for v in direction)
    return np.array([[nz, nx - 1j * ny], [nx + 1j * ny, -nz]])


@dataclass(frozen=True)
class BlochEffect:
    """Two-outcome POVM element (I + sharpness * direction . sigma) / 2.

    direction must be a unit vector; sharpness in [0, 1] (1 = projective).
    """

    direction: tuple[float, float, float]
    sharpness: float

    def __post_init__(self):
        if len(self.direction) != 3:
            raise ValueError("effect direction must be a real 3-vector")
        nx, ny, nz = (float(v) for v in self.direction)
        norm = math.sqrt(nx * nx + ny * ny + nz * nz)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"effect direction must be unit length, |n| = {norm!r}")
        if not 0.0 <= self.sharpness <= 1.0:
            raise ValueError(f"sharpness must lie in [0, 1], got {self.sharpness!r}")
        object.__setattr__(self, "direction", (nx, ny, nz))
        object.__setattr__(self, "sharpness", float(self.sharpness))

    def complement(self) -> "BlochEffect":
        """The opposite outcome's effect: I minus this one."""
        d = self.direction
        return BlochEffect((-d[0], -d[1], -d[2]), self.sharpness)


def effect_matrix(effect: BlochEffect) -> np.ndarray:
    """(I + gamma n.sigma) / 2; eigenvalues (1 +- gamma) / 2."""
    return (IDENTITY_2 + effect.sharpness * bloch_operator(effect.direction)) / 2


def effect_sqrt(effect: BlochEffect) -> np.ndarray:
    """Principal square root of effect_matrix(effect), in closed form.

    With eigenvalues (1 +- gamma)/2 on the +-n eigenspaces, the root is
    a*I + b*(n.sigma) with a = (sqrt((1+g)/2) + sqrt((1-g)/2)) / 2 and
    b = (sqrt((1+g)/2) - sqrt((1-g)/2)) / 2.
    """
    g = effect.sharpness
    hi = math.sqrt((1 + g) / 2)
    lo = math.sqrt((1 - g) / 2)
    a = (hi + lo) / 2
    b = (hi - lo) / 2
    return a * IDENTITY_2 + b * bloch_operator(effect.direction)
