"""Spectral Green operators and a one-dimensional box-operator model.

An OperatorMatrix wraps a symmetric matrix with its eigendecomposition; the
Green operator inverts it through the eigenbasis, and box_operator_1d builds
the discrete id - (1/a^2) D^2 used as the weight in the s-graded inner
product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SingularOperatorError, ValidationError

SYMMETRY_TOL = 1e-12
SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class OperatorMatrix:
    """Symmetric matrix with a cached eigendecomposition."""

    entries: np.ndarray
    eigenvalues: np.ndarray = field(init=False, repr=False)
    eigenvectors: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError("operator must be a square matrix")
        scale = 1.0 + np.abs(m).max()
        if np.max(np.abs(m - m.T)) > SYMMETRY_TOL * scale:
            raise ValidationError("operator is not symmetric")
        m = (m + m.T) / 2.0
        w, v = np.linalg.eigh(m)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    def apply(self, psi: np.ndarray) -> np.ndarray:
        return self.entries @ np.asarray(psi, dtype=float)

    def is_invertible(self, tol: float = SINGULAR_TOL) -> bool:
        return bool(np.min(np.abs(self.eigenvalues)) > tol)


def green_apply(op: OperatorMatrix, psi: np.ndarray,
                project: bool = False) -> np.ndarray:
    """Solution sigma with op(sigma) = psi, via the eigenbasis.

    With project=True, components along near-null eigenvectors are dropped and
    the remaining modes inverted (the projected solution for a singular
    operator); otherwise a singular operator raises, naming the offending
    eigenvector.
    """
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (op.dimension,):
        raise ValidationError("vector length does not match the operator")
    w, v = op.eigenvalues, op.eigenvectors
    small = np.abs(w) <= SINGULAR_TOL
    if small.any() and not project:
        k = int(np.argmin(np.abs(w)))
        raise SingularOperatorError(
            f"operator is singular (eigenvalue {w[k]:.3e})",
            eigenvalue=float(w[k]), eigenvector=v[:, k].copy())
    coeff = v.T @ psi
    inv = np.where(small, 0.0, coeff / np.where(small, 1.0, w))
    return v @ inv


def green_kernel(op: OperatorMatrix) -> np.ndarray:
    """Dense kernel sum_i eta_i eta_i^T / lambda_i; applying it as a matrix
    agrees with green_apply."""
    if not op.is_invertible():
        k = int(np.argmin(np.abs(op.eigenvalues)))
        raise SingularOperatorError(
            f"operator is singular (eigenvalue {op.eigenvalues[k]:.3e})",
            eigenvalue=float(op.eigenvalues[k]),
            eigenvector=op.eigenvectors[:, k].copy())
    w, v = op.eigenvalues, op.eigenvectors
    return (v / w) @ v.T


def box_operator_1d(samples: int, speed: float,
                    periodic: bool = True) -> OperatorMatrix:
    """Matrix of id - (1/a^2) D^2 on a uniform grid of the unit interval.

    D^2 is the standard second difference (periodic wrap or Neumann mirror);
    the result is symmetric positive-definite with smallest eigenvalue >= 1.
    Periodic eigenvalues are 1 + (2/(a h))^2 sin^2(pi k / S) with h = 1/S.
    """
    if samples < 4:
        raise ValidationError("need at least 4 samples")
    if speed <= 0:
        raise ValidationError("speed must be positive")
    s = int(samples)
    h = 1.0 / s
    d2 = np.zeros((s, s))
    idx = np.arange(s)
    d2[idx, idx] = -2.0
    if periodic:
        d2[idx, (idx + 1) % s] += 1.0
        d2[idx, (idx - 1) % s] += 1.0
    else:
        d2[idx[:-1], idx[:-1] + 1] += 1.0
        d2[idx[1:], idx[1:] - 1] += 1.0
        # Neumann mirror: boundary rows see their own value reflected
        d2[0, 0] += 1.0
        d2[-1, -1] += 1.0
    d2 /= h * h
    return OperatorMatrix(np.eye(s) - d2 / speed ** 2)


def ls2_inner(u: np.ndarray, v: np.ndarray, op: OperatorMatrix,
              s: float) -> float:
    """Graded inner product <u, L^s v> through eigenvalue powers.

    Integer s works for any symmetric L; fractional s requires a positive
    spectrum.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (op.dimension,) or v.shape != (op.dimension,):
        raise ValidationError("vector length does not match the operator")
    if s < 0:
        raise ValidationError("grading exponent must be >= 0")
    w = op.eigenvalues
    if float(s) != int(s) and np.any(w <= 0):
        raise ValidationError("fractional power of a non-positive spectrum")
    powers = w ** float(s) if float(s) != int(s) else w ** int(s)
    cu = op.eigenvectors.T @ u
    cv = op.eigenvectors.T @ v
    return float(np.sum(cu * powers * cv))
