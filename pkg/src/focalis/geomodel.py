"""Truncated product-of-spheres submanifold with explicit curvature data.

The ambient space is a truncation of a separable Hilbert space with
orthonormal coordinates split into "even" slots (carrying K sphere blocks:
block k uses m_k even slots constrained to a sphere of radius r_k) and "odd"
slots (a flat factor).  The submanifold fixes, in each of the first k1
blocks, the block's last even coordinate at the height h_j = sqrt(r_j^2 -
rprime_j^2), so the block slice is a sphere of radius rprime_j, and freezes
the first k2 odd coordinates at 0.

On the slice tangent space of block j both the normal Jacobi operator and
the shape operator act as scalars:

    R(., xi)xi  =  |xi_j|^2 / r_j^2 * id
    A_xi        =  sqrt(1/rprime_j^2 - 1/r_j^2) * <xi, nu_j> * id

where xi_j is the block component of the normal vector xi and nu_j is the
block's unit normal oriented toward positive height.  Everything else (free
blocks, free odd slots) is flat and uncurved, so the two operators commute
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ValidationError
from .focal import EigenGrid
from .spectral import SpectralData


@dataclass(frozen=True)
class SphereProductConfig:
    blocks: tuple                  # ((m_k, r_k), ...), m_k >= 2, r_k > 0
    k1: int                        # number of height-constrained blocks
    rprime: tuple                  # slice radii, 0 < rprime_j < r_j, len k1
    k2: int                        # number of frozen odd slots
    ambient_dim: int               # truncation dimension N

    def __post_init__(self):
        if self.k1 > len(self.blocks):
            raise ValidationError("k1 exceeds the number of blocks")
        if len(self.rprime) != self.k1:
            raise ValidationError("rprime must have k1 entries")
        for m, r in self.blocks:
            if m < 2 or r <= 0:
                raise ValidationError(f"bad block (m={m}, r={r})")
        for (m, r), rp in zip(self.blocks[: self.k1], self.rprime):
            if not (0.0 < rp < r):
                raise ValidationError(f"need 0 < rprime={rp} < r={r}")
        even_needed = sum(m for m, _ in self.blocks)
        even_slots = self.ambient_dim // 2
        odd_slots = self.ambient_dim - even_slots
        if even_needed > even_slots:
            raise ValidationError(
                f"ambient_dim={self.ambient_dim} has {even_slots} even slots, "
                f"blocks need {even_needed}")
        if self.k2 > odd_slots:
            raise ValidationError("k2 exceeds the number of odd slots")

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def heights(self) -> np.ndarray:
        return np.array([np.sqrt(r * r - rp * rp)
                         for (_, r), rp in zip(self.blocks, self.rprime)])

    def block_even_indices(self, k: int) -> np.ndarray:
        """Ambient (0-based) indices of block k's even coordinates."""
        start = sum(m for m, _ in self.blocks[:k])
        m = self.blocks[k][0]
        # even coordinate i (1-based) sits at ambient index 2i - 1
        return np.array([2 * i - 1 for i in range(start + 1, start + m + 1)])

    def odd_indices(self) -> np.ndarray:
        n_odd = self.ambient_dim - self.ambient_dim // 2
        return np.array([2 * j - 2 for j in range(1, n_odd + 1)])

    def frozen_odd_indices(self) -> np.ndarray:
        return self.odd_indices()[: self.k2]

    def free_odd_indices(self) -> np.ndarray:
        return self.odd_indices()[self.k2:]

    def free_even_indices(self) -> np.ndarray:
        """Even slots beyond the block truncation (always zero here)."""
        used = sum(m for m, _ in self.blocks)
        even_slots = self.ambient_dim // 2
        return np.array([2 * i - 1 for i in range(used + 1, even_slots + 1)], dtype=int)


def default_config() -> SphereProductConfig:
    """Desk-scale default: 4 blocks, ambient dimension 64."""
    return SphereProductConfig(
        blocks=((4, 1.0), (4, 0.8), (3, 0.6), (3, 0.5)),
        k1=4,
        rprime=(0.8, 0.6, 0.45, 0.35),
        k2=2,
        ambient_dim=64,
    )


@dataclass
class ModelSubmanifold:
    config: SphereProductConfig
    points: np.ndarray              # (n_points, N)
    tangent_bases: List[np.ndarray]  # per point, (N, d) orthonormal columns
    normal_bases: List[np.ndarray]   # per point, (N, c) orthonormal columns

    @property
    def tangent_dim(self) -> int:
        return self.tangent_bases[0].shape[1]

    @property
    def normal_dim(self) -> int:
        return self.normal_bases[0].shape[1]


def _sample_point(cfg: SphereProductConfig, rng: np.random.Generator) -> np.ndarray:
    x = np.zeros(cfg.ambient_dim)
    heights = cfg.heights()
    for k, (m, r) in enumerate(cfg.blocks):
        idx = cfg.block_even_indices(k)
        if k < cfg.k1:
            v = rng.normal(size=m - 1)
            v *= cfg.rprime[k] / np.linalg.norm(v)
            x[idx[:-1]] = v
            x[idx[-1]] = heights[k]
        else:
            v = rng.normal(size=m)
            v *= r / np.linalg.norm(v)
            x[idx] = v
    free_odd = cfg.free_odd_indices()
    x[free_odd] = 0.3 * rng.normal(size=len(free_odd))
    return x


def _frames_at(cfg: SphereProductConfig, x: np.ndarray):
    """Tangent/normal orthonormal frames of M inside the ambient product manifold.

    The ambient manifold's own tangent space excludes each block's radial
    direction and the unused even slots; within it, M's normals are the
    projected height directions (constrained blocks) and the frozen odd
    slots.
    """
    N = cfg.ambient_dim
    m_normals = []            # normal to M inside the ambient manifold
    for k in range(cfg.k1):
        idx = cfg.block_even_indices(k)
        radial = np.zeros(N)
        radial[idx] = x[idx] / np.linalg.norm(x[idx])
        e_h = np.zeros(N)
        e_h[idx[-1]] = 1.0
        nu = e_h - (e_h @ radial) * radial
        m_normals.append(nu / np.linalg.norm(nu))
    for j in cfg.frozen_odd_indices():
        e = np.zeros(N)
        e[j] = 1.0
        m_normals.append(e)
    normal_basis = np.stack(m_normals, axis=1) if m_normals else np.zeros((N, 0))
    # tangent of M, assembled blockwise (small complete QRs per block)
    tangent_cols = []
    for k in range(cfg.n_blocks):
        idx = cfg.block_even_indices(k)
        m = len(idx)
        radial = x[idx] / np.linalg.norm(x[idx])
        if k < cfg.k1:
            killed = np.stack([radial, np.eye(m)[-1]], axis=1)
        else:
            killed = radial[:, None]
        q, _ = np.linalg.qr(killed, mode="complete")
        local = q[:, killed.shape[1]:]      # block-local tangent directions
        for a in range(local.shape[1]):
            col = np.zeros(N)
            col[idx] = local[:, a]
            tangent_cols.append(col)
    for j in cfg.free_odd_indices():
        col = np.zeros(N)
        col[j] = 1.0
        tangent_cols.append(col)
    tangent_basis = np.stack(tangent_cols, axis=1) if tangent_cols else np.zeros((N, 0))
    return tangent_basis, normal_basis


def build_model(config: SphereProductConfig, n_points: int,
                seed: int) -> ModelSubmanifold:
    """Seeded random sample of the submanifold with per-point frames."""
    rng = np.random.default_rng(seed)
    pts, tans, nors = [], [], []
    for _ in range(n_points):
        x = _sample_point(config, rng)
        t, n = _frames_at(config, x)
        pts.append(x)
        tans.append(t)
        nors.append(n)
    return ModelSubmanifold(config, np.stack(pts), tans, nors)


def constraint_residual(cfg: SphereProductConfig, x: np.ndarray) -> float:
    """Max violation of the defining constraints at an ambient point."""
    res = 0.0
    heights = cfg.heights()
    for k, (m, r) in enumerate(cfg.blocks):
        idx = cfg.block_even_indices(k)
        res = max(res, abs(np.linalg.norm(x[idx]) - r))
        if k < cfg.k1:
            res = max(res, abs(x[idx[-1]] - heights[k]))
    for j in cfg.frozen_odd_indices():
        res = max(res, abs(x[j]))
    for i in cfg.free_even_indices():
        res = max(res, abs(x[i]))
    return res


def random_normal_vector(model: ModelSubmanifold, point_index: int,
                         rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    basis = model.normal_bases[point_index]
    return basis @ (scale * rng.normal(size=basis.shape[1]))


def _check_normal(model: ModelSubmanifold, point_index: int, xi: np.ndarray,
                  tol: float = 1e-9):
    t = model.tangent_bases[point_index]
    n = model.normal_bases[point_index]
    in_span = n @ (n.T @ xi)
    if np.linalg.norm(xi - in_span) > tol * (1.0 + np.linalg.norm(xi)):
        raise ValidationError("xi is not a normal vector at this point")
    if np.linalg.norm(t.T @ xi) > tol * (1.0 + np.linalg.norm(xi)):
        raise ValidationError("xi has a tangential component")


def _block_normal_components(model: ModelSubmanifold, point_index: int,
                             xi: np.ndarray) -> np.ndarray:
    """Signed components <xi, nu_j> for the k1 constrained blocks."""
    cfg = model.config
    x = model.points[point_index]
    comps = np.zeros(cfg.k1)
    for j in range(cfg.k1):
        idx = cfg.block_even_indices(j)
        radial = np.zeros(cfg.ambient_dim)
        radial[idx] = x[idx] / np.linalg.norm(x[idx])
        e_h = np.zeros(cfg.ambient_dim)
        e_h[idx[-1]] = 1.0
        nu = e_h - (e_h @ radial) * radial
        nu /= np.linalg.norm(nu)
        comps[j] = xi @ nu
    return comps


def _block_tangent_dims(model: ModelSubmanifold, point_index: int) -> np.ndarray:
    """dim of (block even span intersect T_x M) per constrained block, by rank."""
    cfg = model.config
    t = model.tangent_bases[point_index]
    dims = np.zeros(cfg.k1, dtype=int)
    for j in range(cfg.k1):
        idx = cfg.block_even_indices(j)
        sub = t[idx, :]
        dims[j] = np.linalg.matrix_rank(sub, tol=1e-9)
    return dims


def shape_eigendata(model: ModelSubmanifold, point_index: int,
                    xi: np.ndarray) -> List[Tuple[float, float, int]]:
    """Per-block (lam_r, lam_a, mult) closed-form eigendata for a normal xi."""
    cfg = model.config
    _check_normal(model, point_index, xi)
    comps = _block_normal_components(model, point_index, xi)
    dims = _block_tangent_dims(model, point_index)
    rows = []
    flat_mult = model.tangent_bases[point_index].shape[1] - int(dims.sum())
    for j in range(cfg.k1):
        m, r = cfg.blocks[j]
        rp = cfg.rprime[j]
        lam_r = comps[j] ** 2 / r ** 2
        lam_a = np.sqrt(1.0 / rp ** 2 - 1.0 / r ** 2) * comps[j]
        if dims[j] > 0:
            rows.append((float(lam_r), float(lam_a), int(dims[j])))
    if flat_mult > 0:
        rows.append((0.0, 0.0, flat_mult))
    return rows


def normal_jacobi_operator(model: ModelSubmanifold, point_index: int,
                           xi: np.ndarray) -> SpectralData:
    """Spectrum of R(., xi)xi restricted to the tangent space (block closed form)."""
    rows = shape_eigendata(model, point_index, xi)
    eig = np.repeat([lr for lr, _, _ in rows], [m for _, _, m in rows])
    return SpectralData.from_eigenvalues(eig)


def shape_operator(model: ModelSubmanifold, point_index: int,
                   xi: np.ndarray) -> SpectralData:
    """Spectrum of the shape operator A_xi (block closed form, finite rank)."""
    rows = shape_eigendata(model, point_index, xi)
    eig = np.repeat([la for _, la, _ in rows], [m for _, _, m in rows])
    return SpectralData.from_eigenvalues(eig)


def eigen_grid_of(model: ModelSubmanifold, point_index: int,
                  xi: np.ndarray) -> EigenGrid:
    """Joint eigendata feeding the focal-radius machinery."""
    rows = shape_eigendata(model, point_index, xi)
    label = f"x{point_index}"
    return EigenGrid(tuple(rows), label=label)


def ambient_curvature(cfg: SphereProductConfig, w: np.ndarray,
                      v: np.ndarray) -> np.ndarray:
    """Blockwise round-sphere curvature R(w, v)v of the ambient product."""
    out = np.zeros_like(w)
    for k, (m, r) in enumerate(cfg.blocks):
        idx = cfg.block_even_indices(k)
        wk, vk = w[idx], v[idx]
        out[idx] = ((vk @ vk) * wk - (wk @ vk) * vk) / r ** 2
    return out


def dense_operators(model: ModelSubmanifold, point_index: int,
                    xi: np.ndarray):
    """Dense matrices of the normal Jacobi and shape operators on T_x M.

    Independent of the block eigenvalue formulas: the Jacobi operator comes
    from applying the full constant-curvature tensor to the tangent frame,
    the shape operator from the quadric-constraint Hessians (the normal is
    written in the constraint gradients of M inside flat space; linear
    constraints contribute no Hessian).
    """
    cfg = model.config
    x = model.points[point_index]
    t = model.tangent_bases[point_index]
    _check_normal(model, point_index, xi)
    d = t.shape[1]
    jac = np.empty((d, d))
    for a in range(d):
        jac[:, a] = t.T @ ambient_curvature(cfg, t[:, a], xi)
    # gradients of the flat-space constraints spanning the flat-space normals
    grads, hess_blocks = [], []
    for k in range(cfg.n_blocks):
        idx = cfg.block_even_indices(k)
        g = np.zeros(cfg.ambient_dim)
        g[idx] = 2.0 * x[idx]
        grads.append(g)
        hess_blocks.append(idx)           # Hessian = 2 * identity on the block
        if k < cfg.k1:
            e = np.zeros(cfg.ambient_dim)
            e[idx[-1]] = 1.0
            grads.append(e)
            hess_blocks.append(None)      # linear constraint
    for j in cfg.frozen_odd_indices():
        e = np.zeros(cfg.ambient_dim)
        e[j] = 1.0
        grads.append(e)
        hess_blocks.append(None)
    for i in cfg.free_even_indices():
        e = np.zeros(cfg.ambient_dim)
        e[i] = 1.0
        grads.append(e)
        hess_blocks.append(None)
    gmat = np.stack(grads, axis=1)
    coef, *_ = np.linalg.lstsq(gmat, xi, rcond=None)
    shape = np.zeros((d, d))
    for c, idx in zip(coef, hess_blocks):
        if idx is None or c == 0.0:
            continue
        sub = t[idx, :]
        shape += -c * 2.0 * (sub.T @ sub)
    return jac, shape


def curvature_adapted_check(model: ModelSubmanifold, n_trials: int,
                            seed: int) -> dict:
    """Max commutator norm of the dense operator pair over random (point, xi)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_trials):
        pi = int(rng.integers(len(model.points)))
        xi = random_normal_vector(model, pi, rng)
        jac, shape = dense_operators(model, pi, xi)
        comm = jac @ shape - shape @ jac
        worst = max(worst, float(np.linalg.norm(comm)))
    return {"trials": n_trials, "max_commutator_norm": worst,
            "passed": worst < 1e-9}


def trace_closed_form(model: ModelSubmanifold, point_index: int,
                      xi: np.ndarray) -> dict:
    """Shape-operator trace from actual block dimensions, plus the printed
    (m_j - 1)-weighted variant, flagging any mismatch."""
    cfg = model.config
    comps = _block_normal_components(model, point_index, xi)
    dims = _block_tangent_dims(model, point_index)
    tr_actual, tr_printed = 0.0, 0.0
    for j in range(cfg.k1):
        m, r = cfg.blocks[j]
        rp = cfg.rprime[j]
        coeff = np.sqrt(1.0 / rp ** 2 - 1.0 / r ** 2) * comps[j]
        tr_actual += coeff * dims[j]
        tr_printed += coeff * (m - 1)
    return {
        "trace_from_block_dims": float(tr_actual),
        "trace_printed_weights": float(tr_printed),
        "weights_match": bool(np.all(dims == np.array([m - 1 for m, _ in cfg.blocks[: cfg.k1]]))),
        "block_dims": dims.tolist(),
    }
