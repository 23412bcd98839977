"""Polarity check for two-sided symmetric-subgroup actions on a compact group.

For the action (k1, k2) . g = k1 g k2^{-1} of K x K, with K the fixed-point
subgroup of an involution theta, the candidate section is Sigma = exp(a) for a
maximal abelian subspace a of the (-1)-eigenspace p.  The check samples points
of Sigma and verifies that every orbit-tangent direction is orthogonal to the
section's tangent space there, and that the section is flat (a is abelian).
"""

from __future__ import annotations

import numpy as np

from .algebras import LieAlgebraBasis, bracket, load_algebra
from .errors import ValidationError
from .roots import restricted_root_decomposition
from .transport import _expm_antiherm


def _hs_inner(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.real(np.sum(np.conj(x) * y)))


def _fixed_subalgebra(alg: LieAlgebraBasis, data) -> list:
    """Basis of the (+1)-eigenspace of theta, complementary to p in the onb."""
    onb = list(data.onb)
    from .roots import involution

    th = involution(data.theta_name, alg.matrix_size)
    mats = []
    for m in onb:
        k_part = (m + th(m)) / 2.0
        if np.max(np.abs(k_part)) > 1e-12:
            mats.append(k_part)
    cols = np.stack([m.ravel() for m in mats], axis=1)
    q, r = np.linalg.qr(cols)
    keep = np.abs(np.diag(r)) > 1e-10
    q = q[:, keep]
    n = alg.matrix_size
    return [q[:, j].reshape(n, n) for j in range(q.shape[1])]


def section_orthogonality_check(algebra, theta: str, n_samples: int = 25,
                                seed: int = 0) -> dict:
    """Orthogonality of orbit directions to the section along Sigma = exp(a).

    At g = exp(H), the two-sided orbit through g has tangent directions
    (X - Ad(g) Y) g for X, Y in k; the section tangent is a g.  Reports the
    worst inner product over sampled g and bases, plus the flatness residual
    max |[a_i, a_j]| and the space dimensions.
    """
    alg = algebra if isinstance(algebra, LieAlgebraBasis) else load_algebra(algebra)
    data = restricted_root_decomposition(alg, theta, seed=seed + 7)
    a_mats = list(data.a_basis)
    k_mats = _fixed_subalgebra(alg, data)
    if not k_mats:
        raise ValidationError("fixed subalgebra is trivial")

    flat = max(np.max(np.abs(bracket(a, b))) for a in a_mats for b in a_mats)

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        c = rng.normal(size=len(a_mats))
        H = sum(ci * ai for ci, ai in zip(c, a_mats))
        H = np.asarray(H, dtype=complex)
        g = _expm_antiherm(H[None])[0]
        ginv = np.conj(g.T)
        for X in k_mats:
            for Y in k_mats:
                # right-trivialized orbit direction at g
                orbit = X - g @ Y @ ginv
                for A in a_mats:
                    worst = max(worst, abs(_hs_inner(orbit, A)))
    norm = max(np.linalg.norm(a) for a in a_mats)
    return {
        "algebra": alg.name,
        "involution": theta,
        "section_dim": len(a_mats),
        "subgroup_dim": len(k_mats),
        "n_samples": n_samples,
        "max_orthogonality_residual": worst / norm,
        "flatness_residual": flat,
        "passed": bool(worst / norm < 1e-8 and flat < 1e-10),
    }
