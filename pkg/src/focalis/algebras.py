"""Matrix Lie algebra bases, structure constants and the Killing inner product."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List

import numpy as np

from .errors import ValidationError

_PAULI = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def _su_basis(n: int) -> List[np.ndarray]:
    """Anti-Hermitian traceless basis of su(n)."""
    if n == 2:
        return [0.5j * s for s in _PAULI]
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[i, j], m[j, i] = 1.0, -1.0
            out.append(m)
            m = np.zeros((n, n), dtype=complex)
            m[i, j], m[j, i] = 1j, 1j
            out.append(m)
    for k in range(n - 1):
        d = np.zeros(n)
        d[: k + 1] = 1.0
        d[k + 1] = -(k + 1)
        out.append(1j * np.diag(d / np.linalg.norm(d)))
    return out


def _so_basis(n: int) -> List[np.ndarray]:
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n))
            m[i, j], m[j, i] = 1.0, -1.0
            out.append(m)
    return out


@dataclass(frozen=True)
class LieAlgebraBasis:
    name: str
    basis: tuple                 # matrices spanning the algebra
    structure: np.ndarray        # c[i, j, k]: [e_i, e_j] = sum_k c_ijk e_k
    gram: np.ndarray             # inner products from the (-1)-Killing form

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix_size(self) -> int:
        return self.basis[0].shape[0]

    def inner(self, x: np.ndarray, y: np.ndarray) -> float:
        """(-1)-multiple of the Killing form, evaluated on matrices."""
        cx, cy = self.coefficients(x), self.coefficients(y)
        return float(cx @ self.gram @ cy)

    def coefficients(self, x: np.ndarray) -> np.ndarray:
        """Expansion coefficients of a matrix in this basis (least squares)."""
        cols = np.stack([b.ravel() for b in self.basis], axis=1)
        coef, *_ = np.linalg.lstsq(cols, x.ravel(), rcond=None)
        return coef.real

    def from_coefficients(self, c: np.ndarray) -> np.ndarray:
        return sum(ci * b for ci, b in zip(c, self.basis))

    def orthonormal_basis(self) -> List[np.ndarray]:
        """Basis orthonormal with respect to the (-1)-Killing inner product."""
        li = np.linalg.inv(np.linalg.cholesky(self.gram))
        return [sum(li[i, j] * self.basis[j] for j in range(self.dim))
                for i in range(self.dim)]


def _structure_constants(basis) -> np.ndarray:
    n = len(basis)
    cols = np.stack([b.ravel() for b in basis], axis=1)
    pinv = np.linalg.pinv(cols)
    c = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            coef = pinv @ bracket(basis[i], basis[j]).ravel()
            c[i, j] = coef.real
    return c


def _killing_gram(basis) -> np.ndarray:
    """gram[i, j] = -tr(ad e_i ad e_j) computed from the adjoint matrices."""
    n = len(basis)
    cols = np.stack([b.ravel() for b in basis], axis=1)
    pinv = np.linalg.pinv(cols)
    ad = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            ad[i, :, j] = (pinv @ bracket(basis[i], basis[j]).ravel()).real
    gram = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            gram[i, j] = -np.trace(ad[i] @ ad[j])
    return gram


def _verify(alg: LieAlgebraBasis, tol: float = 1e-12):
    n = alg.dim
    c = alg.structure
    for i in range(n):
        for j in range(n):
            rec = alg.from_coefficients(c[i, j])
            if np.max(np.abs(rec - bracket(alg.basis[i], alg.basis[j]))) > tol:
                raise ValidationError("structure constants do not reproduce brackets")
    if np.max(np.abs(c + np.swapaxes(c, 0, 1))) > tol:
        raise ValidationError("structure constants not antisymmetric")
    # Jacobi identity on basis triples
    for i in range(n):
        for j in range(n):
            for k in range(n):
                s = (bracket(alg.basis[i], bracket(alg.basis[j], alg.basis[k]))
                     + bracket(alg.basis[j], bracket(alg.basis[k], alg.basis[i]))
                     + bracket(alg.basis[k], bracket(alg.basis[i], alg.basis[j])))
                if np.max(np.abs(s)) > tol:
                    raise ValidationError("Jacobi identity violated")
    # ad-invariance of the inner product on basis triples
    for i in range(n):
        for j in range(n):
            for k in range(n):
                r = (alg.inner(bracket(alg.basis[i], alg.basis[j]), alg.basis[k])
                     + alg.inner(alg.basis[j], bracket(alg.basis[i], alg.basis[k])))
                if abs(r) > 1e-9 * (1.0 + np.abs(alg.gram).max()):
                    raise ValidationError("inner product not ad-invariant")


def load_algebra(name: str) -> LieAlgebraBasis:
    """Construct a supported algebra (su2, su3, so3, soN) with verified data."""
    name = name.lower().strip()
    m = re.fullmatch(r"(su|so)_?(\d+)", name)
    if not m:
        raise ValidationError(f"unsupported algebra '{name}'")
    family, n = m.group(1), int(m.group(2))
    if n < 2 or (family == "so" and n < 3):
        raise ValidationError(f"unsupported algebra '{name}'")
    basis = _su_basis(n) if family == "su" else _so_basis(n)
    gram = _killing_gram(basis)
    alg = LieAlgebraBasis(name=f"{family}{n}", basis=tuple(basis),
                          structure=_structure_constants(basis), gram=gram)
    _verify(alg)
    return alg
