"""Focal radii, Jacobi amplitudes and parallel shape operators.

On a joint eigenspace of the normal Jacobi operator (eigenvalue lam_r) and
the shape operator (eigenvalue lam_a), the scalar amplitude of a strongly
tangential Jacobi field along the normal geodesic is

    Y(s) = C(s) - lam_a * S(s),

where C, S solve Y'' = -lam_r Y with (C, C')(0) = (1, 0), (S, S')(0) = (0, 1)
(trig / hyperbolic / linear depending on the sign of lam_r).  Focal radii are
the zeros of Y; the parallel submanifold at distance r has shape eigenvalue
-Y'(r)/Y(r) on the same eigenspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from . import spectral
from .errors import OracleUndefinedError, ValidationError
from .spectral import DIVERGENT, SpectralData, TraceValue

FOCAL_TOL = 1e-9          # |Y(r)| < tol*(1+|Y'(r)|) triggers the Focal sentinel
MERGE_TOL = 1e-9          # radii closer than this merge, multiplicities summed
SPEC_ABS_TOL = 1e-9       # multiset comparison tolerances
SPEC_REL_TOL = 1e-12
_LINEAR_BRANCH = 1e-300   # |lam_r| below this is treated as exactly zero


class Focal:
    """Sentinel: the queried radius is a focal radius (end-point map degenerates)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Focal"


FOCAL = Focal()


@dataclass(frozen=True)
class Window:
    """Search interval [lo, hi] with 0 < lo < hi; negative=True searches [-hi, -lo]."""

    lo: float
    hi: float
    negative: bool = False

    def __post_init__(self):
        if not (0.0 < self.lo < self.hi):
            raise ValidationError(f"degenerate window [{self.lo}, {self.hi}]")

    def contains(self, r: float) -> bool:
        return self.lo <= abs(r) <= self.hi and (r < 0) == self.negative


@dataclass(frozen=True)
class EigenGrid:
    """Joint (lam_r, lam_a, mult) eigendata of the curvature-adapted pair."""

    pairs: tuple
    label: Optional[str] = None

    def __post_init__(self):
        merged = {}
        for lr, la, m in self.pairs:
            if int(m) < 1:
                raise ValidationError("pair multiplicity must be >= 1")
            key = (float(lr), float(la))
            merged[key] = merged.get(key, 0) + int(m)
        object.__setattr__(
            self, "pairs",
            tuple((lr, la, m) for (lr, la), m in sorted(merged.items()))
        )

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, _, m in self.pairs)

    def shape_spectrum(self) -> SpectralData:
        eig = np.repeat([la for _, la, _ in self.pairs],
                        [m for _, _, m in self.pairs])
        return SpectralData.from_eigenvalues(eig)

    def jacobi_spectrum(self) -> SpectralData:
        eig = np.repeat([lr for lr, _, _ in self.pairs],
                        [m for _, _, m in self.pairs])
        return SpectralData.from_eigenvalues(eig)


@dataclass(frozen=True)
class FocalRadiusSet:
    """Sorted focal radii with multiplicities inside a window."""

    entries: tuple        # ((radius, mult), ...) strictly increasing radii
    window: Window

    def __post_init__(self):
        radii = [r for r, _ in self.entries]
        if any(radii[i + 1] - radii[i] <= MERGE_TOL for i in range(len(radii) - 1)):
            raise ValidationError("focal radii not separated; merge before constructing")
        for r, m in self.entries:
            if not self.window.contains(r):
                raise ValidationError(f"radius {r} outside window")
            if m < 1:
                raise ValidationError("radius multiplicity must be >= 1")

    @property
    def radii(self):
        return np.array([r for r, _ in self.entries])

    @property
    def multiplicities(self):
        return np.array([m for _, m in self.entries], dtype=int)


def _cos_branch(lam_r: float, s: float) -> float:
    if lam_r > _LINEAR_BRANCH:
        return math.cos(s * math.sqrt(lam_r))
    if lam_r < -_LINEAR_BRANCH:
        return math.cosh(s * math.sqrt(-lam_r))
    return 1.0


def _sinc_branch(lam_r: float, s: float) -> float:
    """sin(s sqrt(lam_r))/sqrt(lam_r), hyperbolic for lam_r < 0, s at 0."""
    if lam_r > _LINEAR_BRANCH:
        q = math.sqrt(lam_r)
        return math.sin(s * q) / q
    if lam_r < -_LINEAR_BRANCH:
        q = math.sqrt(-lam_r)
        return math.sinh(s * q) / q
    return s


def jacobi_amplitude(lam_r: float, lam_a: float, s: float) -> float:
    """Scalar Jacobi amplitude Y(s) = C(s) - lam_a S(s) on the eigenspace."""
    return _cos_branch(lam_r, s) - lam_a * _sinc_branch(lam_r, s)


def jacobi_amplitude_deriv(lam_r: float, lam_a: float, s: float) -> float:
    """Y'(s) = -lam_r S(s) - lam_a C(s)."""
    return -lam_r * _sinc_branch(lam_r, s) - lam_a * _cos_branch(lam_r, s)


def focal_radii_pair(lam_r: float, lam_a: float, window: Window) -> List[float]:
    """All zeros of the Jacobi amplitude for (lam_r, lam_a) inside the window.

    Closed forms: arctan branch family for lam_r > 0 (period pi/sqrt(lam_r)),
    the single arctanh root for lam_r < 0 when |lam_a| > sqrt(-lam_r), and
    1/lam_a in the flat case.  Negative radii are searched via the sign
    symmetry Y(-s; lam_r, lam_a) = Y(s; lam_r, -lam_a).
    """
    if window.negative:
        mirror = Window(window.lo, window.hi)
        return sorted(-r for r in focal_radii_pair(lam_r, -lam_a, mirror))
    out: List[float] = []
    if lam_r > _LINEAR_BRANCH:
        q = math.sqrt(lam_r)
        base = math.atan2(q, lam_a) / q  # atan2 handles lam_a <= 0 (root in (0, pi))
        period = math.pi / q
        k0 = math.floor((window.lo - base) / period)
        k = int(k0)
        while True:
            r = base + k * period
            if r > window.hi + MERGE_TOL:
                break
            if r >= window.lo - MERGE_TOL:
                out.append(r)
            k += 1
    elif lam_r < -_LINEAR_BRANCH:
        q = math.sqrt(-lam_r)
        if lam_a > q:  # root of cosh - lam_a sinh/q at positive s
            r = math.atanh(q / lam_a) / q
            if window.lo - MERGE_TOL <= r <= window.hi + MERGE_TOL:
                out.append(r)
    else:
        if lam_a != 0.0:
            r = 1.0 / lam_a
            if window.lo - MERGE_TOL <= r <= window.hi + MERGE_TOL:
                out.append(r)
    return out


def _merge_radii(radii_mults, tol: float = MERGE_TOL):
    merged = []
    for r, m in sorted(radii_mults):
        if merged and abs(r - merged[-1][0]) <= tol:
            merged[-1][1] += m
        else:
            merged.append([r, m])
    return [(r, m) for r, m in merged]


def focal_set(grid: EigenGrid, window: Window) -> FocalRadiusSet:
    """Union of per-pair focal radii, multiplicities summed on coincidence."""
    collected = []
    for lam_r, lam_a, mult in grid.pairs:
        for r in focal_radii_pair(lam_r, lam_a, window):
            collected.append((r, mult))
    return FocalRadiusSet(tuple(_merge_radii(collected)), window)


def proper_fredholm_witness(grid: EigenGrid, window: Window,
                            eps_list: Sequence[float] = (0.1, 0.5, 1.0)) -> dict:
    """Truncation surrogate of the proper-Fredholm property.

    Reports the (finite) focal count in the window, the max multiplicity and
    the minimal gap between consecutive radii on [eps, hi] for each tested
    eps.  Accumulation away from 0 cannot occur for a finite grid; the report
    documents that.
    """
    fset = focal_set(grid, window)
    radii = fset.radii
    report = {
        "count": int(len(radii)),
        "max_multiplicity": int(fset.multiplicities.max()) if len(radii) else 0,
        "min_gaps": {},
        "accumulation_flag": False,
    }
    for eps in eps_list:
        sub = radii[np.abs(radii) >= eps]
        if len(sub) >= 2:
            gap = float(np.min(np.diff(np.sort(sub))))
        else:
            gap = float("inf")
        report["min_gaps"][eps] = gap
        if gap < 10 * MERGE_TOL:
            report["accumulation_flag"] = True
    return report


def parallel_shape_eigenvalue(lam_r: float, lam_a: float,
                              r: float) -> Union[float, Focal]:
    """Shape eigenvalue -Y'(r)/Y(r) of the parallel submanifold at distance r."""
    y = jacobi_amplitude(lam_r, lam_a, r)
    yp = jacobi_amplitude_deriv(lam_r, lam_a, r)
    if abs(y) < FOCAL_TOL * (1.0 + abs(yp)):
        return FOCAL
    return -yp / y


def riccati_oracle(lam_r: float, lam_a: float, r: float, steps: int = 1000) -> float:
    """Independent oracle: RK4 on Y'' = -lam_r Y, Y(0)=1, Y'(0)=-lam_a.

    Returns -Y'(r)/Y(r); raises if r sits within tolerance of a focal radius.
    """
    if steps < 10:
        raise ValidationError("riccati_oracle needs steps >= 10")
    h = r / steps
    y, yp = 1.0, -lam_a

    def f(state):
        return np.array([state[1], -lam_r * state[0]])

    state = np.array([y, yp])
    for _ in range(steps):
        k1 = f(state)
        k2 = f(state + 0.5 * h * k1)
        k3 = f(state + 0.5 * h * k2)
        k4 = f(state + h * k3)
        state = state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    y, yp = state
    if abs(y) < FOCAL_TOL * (1.0 + abs(yp)):
        raise OracleUndefinedError(f"r={r} is (numerically) a focal radius")
    return -yp / y


def transformed_grid(grid: EigenGrid, r: float) -> Union[EigenGrid, Focal]:
    """EigenGrid of the parallel submanifold at distance r (Focal on collision)."""
    pairs = []
    for lam_r, lam_a, mult in grid.pairs:
        lam = parallel_shape_eigenvalue(lam_r, lam_a, r)
        if lam is FOCAL:
            return FOCAL
        pairs.append((lam_r, lam, mult))
    return EigenGrid(tuple(pairs), label=grid.label)


def parallel_reg_mean_curvature(grid: EigenGrid, r: float) -> Union[TraceValue, Focal]:
    """Paired trace of the parallel submanifold's shape spectrum at distance r."""
    tg = transformed_grid(grid, r)
    if tg is FOCAL:
        return FOCAL
    return spectral.reg_trace(tg.shape_spectrum())


def _multisets_close(a: np.ndarray, b: np.ndarray,
                     abs_tol: float = SPEC_ABS_TOL, rel_tol: float = SPEC_REL_TOL) -> bool:
    if len(a) != len(b):
        return False
    a, b = np.sort(a), np.sort(b)
    return bool(np.all(np.abs(a - b) <= abs_tol + rel_tol * np.maximum(np.abs(a), np.abs(b))))


def _expanded_spectrum(values, mults):
    return np.repeat(np.asarray(values, dtype=float), np.asarray(mults, dtype=int))


def weakly_isoparametric_check(grids: Sequence[EigenGrid]) -> bool:
    """Orthogonal equivalence across base points: equal spectra with multiplicity."""
    if not grids:
        raise ValidationError("need at least one grid")
    ref = grids[0]
    ref_a = _expanded_spectrum([la for _, la, _ in ref.pairs], [m for _, _, m in ref.pairs])
    ref_r = _expanded_spectrum([lr for lr, _, _ in ref.pairs], [m for _, _, m in ref.pairs])
    for g in grids[1:]:
        ga = _expanded_spectrum([la for _, la, _ in g.pairs], [m for _, _, m in g.pairs])
        gr = _expanded_spectrum([lr for lr, _, _ in g.pairs], [m for _, _, m in g.pairs])
        if not (_multisets_close(ref_a, ga) and _multisets_close(ref_r, gr)):
            return False
    return True


def isoparametric_check(grids: Sequence[EigenGrid], radii: Sequence[float],
                        tol: float = 1e-8) -> dict:
    """Constancy of the parallel regularized mean curvature over base points.

    Returns a report with per-(grid, r) values, the max spread per radius,
    focal collisions, and the overall verdict.
    """
    if not grids:
        raise ValidationError("need at least one grid")
    report = {"radii": {}, "focal_collisions": [], "regularizable": True, "passed": True}
    for g in grids:
        if not spectral.is_regularizable(g.shape_spectrum()):
            report["regularizable"] = False
            report["passed"] = False
    for r in radii:
        values = []
        for idx, g in enumerate(grids):
            v = parallel_reg_mean_curvature(g, r)
            if v is FOCAL:
                report["focal_collisions"].append((g.label or idx, r))
                report["passed"] = False
                continue
            if v is DIVERGENT:
                report["regularizable"] = False
                report["passed"] = False
                continue
            values.append(float(v))
        spread = float(np.max(values) - np.min(values)) if values else float("nan")
        report["radii"][r] = {"values": values, "spread": spread}
        if not values or spread > tol:
            report["passed"] = False
    return report


def equifocal_check(grids: Sequence[EigenGrid], window: Window,
                    tol: float = 1e-8) -> bool:
    """Focal radii and multiplicities independent of the base point."""
    if not grids:
        raise ValidationError("need at least one grid")
    ref = focal_set(grids[0], window)
    for g in grids[1:]:
        fs = focal_set(g, window)
        if len(fs.entries) != len(ref.entries):
            return False
        if not np.all(fs.multiplicities == ref.multiplicities):
            return False
        if np.any(np.abs(fs.radii - ref.radii) > tol):
            return False
    return True
