"""Signed spectra of compact self-adjoint operators and their traces.

A spectrum is stored as two non-increasing lists of positive reals (the
positive eigenvalues and the magnitudes of the negative ones), each entry
carrying an integer multiplicity, plus an optional geometric tail model
describing the eigenvalues beyond the stored truncation.  The paired trace
sums lambda_i^+ - lambda_i^- index-wise over the multiplicity-expanded
sequences; the power-sum trace evaluates the signed power sums on a grid of
exponents decreasing to 1 and extrapolates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import ConfigError, ValidationError

CAUCHY_WINDOW = 0.10       # fraction of trailing partial sums examined
CAUCHY_THRESHOLD = 1e-6
RATIO_MAX = 0.95           # increment ratio above which we refuse to extrapolate
FINITE_RANK_MAX = 64       # at most this many stored entries reads as finite rank


class Divergent:
    """Sentinel returned when a trace fails its convergence test."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Divergent"


DIVERGENT = Divergent()

TraceValue = Union[float, Divergent]


@dataclass(frozen=True)
class TailModel:
    """Geometric decay bound C * ratio**i for eigenvalues beyond the truncation."""

    ratio: float
    scale: float

    def __post_init__(self):
        if not (0.0 < self.ratio < 1.0):
            raise ValidationError(f"tail ratio must lie in (0,1), got {self.ratio}")
        if self.scale < 0.0:
            raise ValidationError(f"tail scale must be >= 0, got {self.scale}")

    def bound(self, index: int) -> float:
        return self.scale * self.ratio ** index

    def remainder(self, start_index: int, power: float = 1.0) -> float:
        """Bound on sum_{i >= start_index} (C q^i)**power."""
        qp = self.ratio ** power
        return (self.scale ** power) * qp ** start_index / (1.0 - qp)


def _as_branch(values, mults, name):
    values = np.asarray(values, dtype=float)
    mults = np.asarray(mults, dtype=np.int64)
    if values.ndim != 1 or mults.shape != values.shape:
        raise ValidationError(f"{name}: values/mults must be 1-d of equal length")
    keep = values != 0.0
    values, mults = values[keep], mults[keep]
    if np.any(values <= 0.0):
        raise ValidationError(f"{name}: entries must be positive magnitudes")
    if np.any(mults < 1):
        raise ValidationError(f"{name}: multiplicities must be >= 1")
    if np.any(np.diff(values) > 0.0):
        raise ValidationError(f"{name}: values must be sorted non-increasing")
    return values, mults


@dataclass(frozen=True)
class SpectralData:
    """Signed eigenvalue multiset of a compact self-adjoint operator."""

    positives: np.ndarray = field(default_factory=lambda: np.empty(0))
    pos_mults: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    negatives: np.ndarray = field(default_factory=lambda: np.empty(0))
    neg_mults: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    tail: Optional[TailModel] = None

    def __post_init__(self):
        pv, pm = _as_branch(self.positives, self.pos_mults, "positives")
        nv, nm = _as_branch(self.negatives, self.neg_mults, "negatives")
        object.__setattr__(self, "positives", pv)
        object.__setattr__(self, "pos_mults", pm)
        object.__setattr__(self, "negatives", nv)
        object.__setattr__(self, "neg_mults", nm)
        if self.tail is not None:
            for vals, mults in ((pv, pm), (nv, nm)):
                if len(vals) == 0:
                    continue
                idx = np.cumsum(mults) - 1  # expanded index of each entry's last copy
                if np.any(vals < self.tail.scale * self.tail.ratio ** idx):
                    raise ValidationError(
                        "stored eigenvalue below the declared tail bound"
                    )

    @classmethod
    def from_eigenvalues(cls, eigenvalues, tail: Optional[TailModel] = None,
                         merge_tol: float = 0.0) -> "SpectralData":
        """Build from a plain list of signed eigenvalues (zeros dropped)."""
        ev = np.asarray(eigenvalues, dtype=float).ravel()
        pos = np.sort(ev[ev > merge_tol])[::-1] if merge_tol else np.sort(ev[ev > 0])[::-1]
        neg = np.sort(-ev[ev < -merge_tol])[::-1] if merge_tol else np.sort(-ev[ev < 0])[::-1]
        return cls(pos, np.ones(len(pos), dtype=np.int64),
                   neg, np.ones(len(neg), dtype=np.int64), tail)

    @classmethod
    def from_entries(cls, positives, negatives, tail=None) -> "SpectralData":
        """Build from [(value, mult), ...] pairs for each sign branch."""
        pv = np.array([v for v, _ in positives], dtype=float)
        pm = np.array([m for _, m in positives], dtype=np.int64)
        nv = np.array([v for v, _ in negatives], dtype=float)
        nm = np.array([m for _, m in negatives], dtype=np.int64)
        return cls(pv, pm, nv, nm, tail)

    def negated(self) -> "SpectralData":
        return SpectralData(self.negatives, self.neg_mults,
                            self.positives, self.pos_mults, self.tail)

    def expanded(self):
        """Multiplicity-expanded (positives, negatives) arrays."""
        return (np.repeat(self.positives, self.pos_mults),
                np.repeat(self.negatives, self.neg_mults))

    @property
    def rank(self) -> int:
        return int(self.pos_mults.sum() + self.neg_mults.sum())


@dataclass(frozen=True)
class ZetaConfig:
    """Exponent grid s_k decreasing to 1 and the extrapolation order."""

    exponents: tuple = tuple(1.0 + 2.0 ** -k for k in range(1, 13))
    order: int = 12
    tolerance: float = 1e-6

    def __post_init__(self):
        s = np.asarray(self.exponents, dtype=float)
        if len(s) < 2 or np.any(np.diff(s) >= 0.0) or np.any(s <= 1.0):
            raise ConfigError("exponent grid must be strictly decreasing to 1")
        if self.order < 1:
            raise ConfigError("extrapolation order must be >= 1")


@dataclass(frozen=True)
class TraceInfo:
    value: float
    error: float
    converged: bool
    method: str

    def as_trace(self) -> TraceValue:
        return self.value if self.converged else DIVERGENT


def _limit_of_partial_sums(s: np.ndarray, tail_remainder: Optional[float]) -> TraceInfo:
    """Decide convergence of a partial-sum sequence and estimate its limit.

    Primary test: Cauchy window over the trailing 10%.  If that fails, the
    trailing increments S_N - S_{N/2}, S_{N/2} - S_{N/4} are compared; a
    stable ratio < RATIO_MAX certifies power/geometric decay and the limit is
    extrapolated from it.  A declared tail model always certifies the
    truncation remainder.
    """
    n = len(s)
    if n == 0:
        return TraceInfo(0.0, 0.0, True, "empty")
    last = float(s[-1])
    tail_err = float(tail_remainder) if tail_remainder is not None else 0.0
    w = max(1, int(np.ceil(n * CAUCHY_WINDOW)))
    window = s[n - w:]
    spread = float(np.max(window) - np.min(window)) if w > 1 else 0.0
    if spread < CAUCHY_THRESHOLD:
        return TraceInfo(last, spread + tail_err, True, "cauchy")
    if n >= 4:
        d1 = float(s[-1] - s[n // 2 - 1])
        d2 = float(s[n // 2 - 1] - s[n // 4 - 1])
        if d2 != 0.0:
            rho = d1 / d2
            if 0.0 < abs(rho) < RATIO_MAX:
                corr = d1 * rho / (1.0 - rho)
                return TraceInfo(last + corr, abs(corr) * abs(rho) + tail_err,
                                 True, "ratio-extrapolation")
    if tail_remainder is not None:
        # the declared tail shifts the burden to the caller
        return TraceInfo(last, spread + tail_err, True, "tail-certified")
    return TraceInfo(last, np.inf, False, "cauchy-failed")


def _paired_partial_sums(spec: SpectralData, power: float = 1.0) -> np.ndarray:
    pos, neg = spec.expanded()
    n = max(len(pos), len(neg))
    if n == 0:
        return np.empty(0)
    terms = np.zeros(n)
    terms[: len(pos)] += pos ** power
    terms[: len(neg)] -= neg ** power
    return np.cumsum(terms)


def _checkpoints(sums: np.ndarray, *mult_arrays) -> np.ndarray:
    """Partial sums sampled at entry boundaries of either branch.

    High-multiplicity entries make the expanded sums staircase through large
    jumps that say nothing about the continuation; the convergence diagnostics
    look at one sample per stored entry instead.
    """
    n = len(sums)
    if n == 0:
        return sums
    idx = set()
    for mults in mult_arrays:
        if len(mults):
            idx.update(np.minimum(np.cumsum(mults) - 1, n - 1).tolist())
    idx.add(n - 1)
    return sums[np.array(sorted(idx), dtype=int)]


def _is_finite_rank(spec: SpectralData) -> bool:
    """A short entry list without a tail model is the complete spectrum.

    Asymptotic convergence diagnostics are meaningless on a few dozen
    samples, and the trace of a finite-rank operator is its plain sum; long
    stored sequences are treated as truncations of an unknown continuation.
    """
    n_entries = len(spec.positives) + len(spec.negatives)
    return spec.tail is None and n_entries <= FINITE_RANK_MAX


def reg_trace_info(spec: SpectralData) -> TraceInfo:
    sums = _paired_partial_sums(spec)
    if _is_finite_rank(spec):
        value = float(sums[-1]) if len(sums) else 0.0
        return TraceInfo(value, 0.0, True, "finite-rank")
    sums = _checkpoints(sums, spec.pos_mults, spec.neg_mults)
    rem = None
    if spec.tail is not None:
        rem = 2.0 * spec.tail.remainder(spec.rank)
    return _limit_of_partial_sums(sums, rem)


def reg_trace(spec: SpectralData) -> TraceValue:
    """Paired trace sum(lambda_i^+ - lambda_i^-), or Divergent."""
    return reg_trace_info(spec).as_trace()


def trace_square_info(spec: SpectralData) -> TraceInfo:
    if _is_finite_rank(spec):
        pos, neg = spec.expanded()
        value = float(np.sum(pos ** 2) + np.sum(neg ** 2))
        return TraceInfo(value, 0.0, True, "finite-rank")
    values = np.concatenate([spec.positives, spec.negatives])
    mults = np.concatenate([spec.pos_mults, spec.neg_mults])
    order = np.argsort(values)[::-1]
    values, mults = values[order], mults[order]
    sums = np.cumsum(np.repeat(values, mults) ** 2)
    sums = _checkpoints(sums, mults)
    rem = None
    if spec.tail is not None:
        rem = 2.0 * spec.tail.remainder(spec.rank, power=2.0)
    return _limit_of_partial_sums(sums, rem)


def trace_square(spec: SpectralData) -> TraceValue:
    """Trace of the square: sum of all eigenvalues squared, or Divergent."""
    return trace_square_info(spec).as_trace()


def _neville_to_zero(x: np.ndarray, y: np.ndarray) -> float:
    """Neville polynomial tableau evaluated at 0."""
    p = y.astype(float).copy()
    for m in range(1, len(x)):
        for i in range(len(x) - m):
            p[i] = (x[i] * p[i + 1] - x[i + m] * p[i]) / (x[i] - x[i + m])
    return float(p[0])


def zeta_trace_info(spec: SpectralData, cfg: ZetaConfig = ZetaConfig()) -> TraceInfo:
    pos, neg = spec.expanded()
    if len(pos) == 0 and len(neg) == 0:
        return TraceInfo(0.0, 0.0, True, "empty")
    s_grid = np.asarray(cfg.exponents, dtype=float)
    x = s_grid - 1.0
    vals = np.empty(len(s_grid))
    for k, s in enumerate(s_grid):
        v = float(np.sum(pos ** s) - np.sum(neg ** s))
        vals[k] = v
    # each power sum's truncation remainder (tail model, evaluated at s ~ 1)
    tail_err = 0.0
    if spec.tail is not None:
        tail_err = 2.0 * spec.tail.remainder(spec.rank, power=float(s_grid[-1]))
    order = min(cfg.order, len(s_grid) - 1)
    xs, ys = x[-(order + 1):], vals[-(order + 1):]
    # diagonal Neville increments give a self-estimate of the extrapolation error
    estimates = [float(ys[-1])]
    for m in range(2, len(xs) + 1):
        estimates.append(_neville_to_zero(xs[-m:], ys[-m:]))
    value = estimates[-1]
    err = abs(estimates[-1] - estimates[-2]) + tail_err
    if not np.isfinite(value) or err > cfg.tolerance * (1.0 + abs(value)):
        return TraceInfo(value, err, False, "extrapolation-failed")
    return TraceInfo(value, err, True, "neville")


def zeta_trace(spec: SpectralData, cfg: ZetaConfig = ZetaConfig()) -> TraceValue:
    """Limit as s -> 1+ of the signed power sums, or Divergent."""
    return zeta_trace_info(spec, cfg).as_trace()


def is_regularizable(spec: SpectralData) -> bool:
    """True iff the paired trace and the trace of the square both converge."""
    return reg_trace_info(spec).converged and trace_square_info(spec).converged
