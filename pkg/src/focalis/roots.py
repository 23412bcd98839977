"""Restricted-root decomposition of a symmetric pair and its bracket pattern.

Given an involutive automorphism theta of a compact matrix Lie algebra, the
(-1)-eigenspace p carries a maximal abelian subspace a.  The simultaneous
eigenspaces of ad(H)^2 over generic H in a split the algebra into the
centralizer g_0 and root spaces g_lambda; signed root vectors (values of
lambda on the a-basis, defined up to a global sign) are recovered from the
skew action of ad(H_i) on each eigenspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from .algebras import LieAlgebraBasis, bracket, load_algebra
from .errors import ValidationError

CLUSTER_TOL = 1e-8
RESIDUAL_TOL = 1e-9


def involution(name: str, matrix_size: int) -> Callable[[np.ndarray], np.ndarray]:
    """Named involutions: 'conj' (complex conjugation) or 'ad_diag' /
    'ad_diag_p' (conjugation by diag(1,...,1,-1,...) with p leading +1s)."""
    name = name.lower().strip()
    if name == "conj":
        return np.conj
    if name.startswith("ad_diag"):
        p = matrix_size - 1
        if "_" in name[len("ad_diag"):]:
            p = int(name.rsplit("_", 1)[1])
        d = np.ones(matrix_size)
        d[p:] = -1.0
        dm = np.diag(d)
        return lambda x: dm @ x @ dm
    raise ValidationError(f"unsupported involution '{name}'")


@dataclass(frozen=True)
class RestrictedRootData:
    algebra: LieAlgebraBasis
    theta_name: str
    onb: tuple                    # orthonormal basis of the algebra (matrices)
    a_basis: tuple                # maximal abelian subspace basis (matrices)
    roots: tuple                  # signed root vectors on the a-basis, len l
    space_bases: tuple            # coefficient bases (dim, n_a) per root, g_0 first
    # space_bases[0] is g_0; space_bases[i] corresponds to roots[i-1]

    @property
    def n0(self) -> int:
        return self.space_bases[0].shape[1]

    @property
    def multiplicities(self) -> tuple:
        return tuple(b.shape[1] for b in self.space_bases[1:])

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def dimension_identity(self) -> bool:
        return self.n0 + sum(self.multiplicities) == self.dim


def _pairing(a: np.ndarray, b: np.ndarray) -> float:
    """Real Hilbert-Schmidt pairing used to expand in an orthonormal basis."""
    return float(np.real(np.sum(np.conj(a) * b)))


def _gram_coeffs(onb):
    """Return an expansion function valid for any onb (HS-orthogonal or not)."""
    n = len(onb)
    g = np.array([[_pairing(onb[i], onb[j]) for j in range(n)] for i in range(n)])
    ginv = np.linalg.inv(g)

    def coeffs(x):
        raw = np.array([_pairing(onb[k], x) for k in range(n)])
        return ginv @ raw

    return coeffs


def restricted_root_decomposition(algebra, theta: str,
                                  seed: int = 7) -> RestrictedRootData:
    """Split the algebra into g_0 and the restricted root spaces.

    theta is a named involution; a is found as the centralizer in p of a
    generic element of p, then verified to be maximal abelian.
    """
    alg = algebra if isinstance(algebra, LieAlgebraBasis) else load_algebra(algebra)
    th = involution(theta, alg.matrix_size)
    # involutivity / automorphism checks on the basis
    for b in alg.basis:
        if np.max(np.abs(th(th(b)) - b)) > 1e-10:
            raise ValidationError("theta is not involutive")
    for b1 in alg.basis:
        for b2 in alg.basis:
            if np.max(np.abs(th(bracket(b1, b2)) - bracket(th(b1), th(b2)))) > 1e-10:
                raise ValidationError("theta is not an automorphism")

    onb = alg.orthonormal_basis()
    n = alg.dim
    coeffs = _gram_coeffs(onb)

    def to_mat(c):
        return sum(ci * m for ci, m in zip(c, onb))

    # p = (-1)-eigenspace of theta in coefficient space
    tmat = np.stack([coeffs(th(m)) for m in onb], axis=1)
    w, v = np.linalg.eigh((tmat + tmat.T) / 2.0)
    p_c = v[:, w < 0.0]
    if p_c.shape[1] == 0:
        raise ValidationError("theta has no (-1)-eigenspace; the pair is trivial")
    rng = np.random.default_rng(seed)
    h_gen = p_c @ rng.normal(size=p_c.shape[1])
    Hg = to_mat(h_gen)
    # a = centralizer of the generic element inside p
    adH = np.stack([coeffs(bracket(Hg, to_mat(p_c[:, j]))) for j in range(p_c.shape[1])],
                   axis=1)
    _, s, vt = np.linalg.svd(adH)
    rank = int(np.sum(s > 1e-10 * (s[0] if len(s) else 1.0)))
    a_c = p_c @ vt[rank:].T
    a_mats = [to_mat(a_c[:, j]) for j in range(a_c.shape[1])]
    # abelian + maximality checks
    for i in range(len(a_mats)):
        for j in range(len(a_mats)):
            if np.max(np.abs(bracket(a_mats[i], a_mats[j]))) > 1e-10:
                raise ValidationError("candidate a is not abelian")
    # maximal: no direction of p outside a commutes with all of a
    if a_c.shape[1] < p_c.shape[1]:
        comp = p_c @ vt[:rank].T
        for j in range(comp.shape[1]):
            if all(np.max(np.abs(bracket(A, to_mat(comp[:, j])))) < 1e-10 for A in a_mats):
                raise ValidationError("candidate a is not maximal abelian")

    ad_a = [np.stack([coeffs(bracket(A, m)) for m in onb], axis=1) for A in a_mats]
    weights = np.random.default_rng(seed + 1).normal(size=len(a_mats))
    Ag = sum(wi * Ai for wi, Ai in zip(weights, ad_a))
    Ag = (Ag - Ag.T) / 2.0
    m2 = -(Ag @ Ag)
    w2, v2 = np.linalg.eigh((m2 + m2.T) / 2.0)
    order = np.argsort(w2)
    w2, v2 = w2[order], v2[:, order]
    clusters = []
    i = 0
    while i < n:
        j = i
        while j + 1 < n and abs(w2[j + 1] - w2[i]) < CLUSTER_TOL * (1.0 + abs(w2[i])):
            j += 1
        clusters.append((max(w2[i], 0.0), v2[:, i: j + 1]))
        i = j + 1
    g0 = None
    roots, bases = [], []
    for c2, vc in clusters:
        if np.sqrt(c2) < 1e-7:
            g0 = vc if g0 is None else np.hstack([g0, vc])
            continue
        c = np.sqrt(c2)
        v1 = vc[:, 0]
        wv = (Ag @ v1) / c
        lam = np.array([wv @ (Ai @ v1) for Ai in ad_a])
        # sign normalization: first nonzero component positive
        nz = np.flatnonzero(np.abs(lam) > 1e-9)
        if len(nz) and lam[nz[0]] < 0:
            lam = -lam
        roots.append(lam)
        bases.append(vc)
    if g0 is None:
        g0 = np.zeros((n, 0))
    # eigenspace verification: ad(H)^2 acts as -lambda(H)^2 on each space
    for lam, vc in zip(roots, bases):
        for Ai, li in zip(ad_a, lam):
            res = np.max(np.abs(Ai @ Ai @ vc + li ** 2 * vc))
            if res > 1e-9 * (1.0 + li ** 2):
                raise ValidationError("root space fails the ad(H)^2 eigen test")
    order = np.argsort([np.linalg.norm(l) for l in roots])
    roots = [roots[k] for k in order]
    bases = [bases[k] for k in order]
    return RestrictedRootData(
        algebra=alg, theta_name=theta, onb=tuple(onb), a_basis=tuple(a_mats),
        roots=tuple(roots), space_bases=tuple([g0] + bases))


def _root_close(a: np.ndarray, b: np.ndarray, tol: float = 1e-7) -> bool:
    return bool(np.linalg.norm(a - b) < tol or np.linalg.norm(a + b) < tol)


def verify_bracket_pattern(data: RestrictedRootData) -> dict:
    """Project brackets of root-space basis vectors onto the complement of the
    predicted target space and report residuals.

    Allowed targets: [g_0, g_0] in g_0; [g_0, g_lam] in g_lam; and
    [g_lam, g_mu] in g_{lam+mu} + g_{|lam-mu|} (a summand drops whenever
    lam+mu resp. lam-mu is not a restricted root; lam = mu adds g_0).
    Also reports, per pair, the residual of the printed sum-only target.
    """
    onb = list(data.onb)
    coeffs = _gram_coeffs(onb)

    def to_mat(c):
        return sum(ci * m for ci, m in zip(c, onb))

    spaces = [(None, data.space_bases[0])] + [
        (lam, b) for lam, b in zip(data.roots, data.space_bases[1:])]
    zero = np.zeros(len(data.a_basis))
    report = {"pairs": [], "max_residual": 0.0, "max_residual_sum_only": 0.0,
              "passed": True}
    for ia, (la, va) in enumerate(spaces):
        for ib, (lb, vb) in enumerate(spaces):
            if ib < ia:
                continue
            ra = zero if la is None else la
            rb = zero if lb is None else lb
            targets, targets_sum = [], []
            for lc, vc in spaces:
                rc = zero if lc is None else lc
                in_sum = _root_close(rc, ra + rb) or _root_close(rc, ra - rb)
                if _root_close(rc, ra + rb):
                    targets_sum.append(vc)
                if in_sum:
                    targets.append(vc)
            proj = np.hstack(targets) if targets else np.zeros((data.dim, 0))
            proj_sum = np.hstack(targets_sum) if targets_sum else np.zeros((data.dim, 0))
            worst, worst_sum = 0.0, 0.0
            for i in range(va.shape[1]):
                for j in range(vb.shape[1]):
                    z = coeffs(bracket(to_mat(va[:, i]), to_mat(vb[:, j])))
                    r = np.linalg.norm(z - proj @ (proj.T @ z))
                    rs = np.linalg.norm(z - proj_sum @ (proj_sum.T @ z))
                    worst, worst_sum = max(worst, r), max(worst_sum, rs)
            report["pairs"].append({
                "root_a": None if la is None else la.tolist(),
                "root_b": None if lb is None else lb.tolist(),
                "residual": worst,
                "residual_sum_only": worst_sum,
            })
            report["max_residual"] = max(report["max_residual"], worst)
            report["max_residual_sum_only"] = max(report["max_residual_sum_only"],
                                                  worst_sum)
    report["passed"] = report["max_residual"] < RESIDUAL_TOL
    report["dimension_identity"] = data.dimension_identity()
    return report
