"""The 0-1 test for chaos (correlation and regression variants)."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import signal

from .timeseries import TimeSeries, as_array

C_LOW, C_HIGH = 0.1 * np.pi, 0.9 * np.pi


class Mode(str, Enum):
    CORRELATION = "correlation"
    REGRESSION = "regression"


@dataclass(frozen=True)
class PQTrajectory:
    p: np.ndarray
    q: np.ndarray
    c: float

    @property
    def points(self) -> np.ndarray:
        return np.column_stack((self.p, self.q))


@dataclass(frozen=True)
class ZeroOneResult:
    score: float
    per_c_scores: np.ndarray
    mode: Mode
    n_cut: int
    cs: np.ndarray = field(repr=False, default=None)


def significant_fmax(series: TimeSeries, threshold: float = 0.01) -> float:
    """Largest frequency whose periodogram power exceeds ``threshold * peak``."""
    x = as_array(series)
    f, pxx = signal.periodogram(x - x.mean(), fs=series.fs, window="hann")
    f, pxx = f[1:], pxx[1:]
    peak = pxx.max() if pxx.size else 0.0
    if not peak > 0:
        raise ValueError("no significant frequency: the spectrum is flat zero")
    return float(f[np.nonzero(pxx > threshold * peak)[0][-1]])


def subsample_fmax(series: TimeSeries, multiplier: float = 3.0,
                   threshold: float = 0.01, min_length: int = 100) -> TimeSeries:
    """Decimate so the sampling rate lands near ``multiplier * f_max``.

    Oversampled data make the 0-1 test report periodicity for chaotic signals,
    so the series is thinned to an integer step ``q`` with ``fs / q`` as
    close as possible to ``multiplier * f_max``. Series already at or below
    that rate are returned unchanged.
    """
    if not 2 <= multiplier <= 4:
        raise ValueError("multiplier must lie in [2, 4]")
    fmax = significant_fmax(series, threshold)
    target = multiplier * fmax
    if series.fs <= target:
        out = series
    else:
        q = max(1, int(round(series.fs / target)))
        out = TimeSeries(series.samples[::q], series.dt * q, series.t0)
    if len(out) < min_length:
        raise ValueError(f"only {len(out)} samples survive subsampling (< {min_length})")
    return out


def pq_project(series, c: float) -> PQTrajectory:
    if not 0 < c < np.pi:
        raise ValueError("c must lie in (0, pi)")
    phi = as_array(series)
    if phi.size == 0:
        raise ValueError("empty series")
    jc = np.arange(1, phi.size + 1) * c
    return PQTrajectory(np.cumsum(phi * np.cos(jc)), np.cumsum(phi * np.sin(jc)), c)


def oscillatory_term(mean: float, c: float, n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    return mean ** 2 * (1.0 - np.cos(n * c)) / (1.0 - np.cos(c))


def modified_msd(series, c: float) -> np.ndarray:
    """D_c(n) for n = 1..n_cut, with n_cut = N // 10.

    Every lag averages over the same ``N - n_cut`` starting points.
    """
    phi = as_array(series)
    N = phi.size
    n_cut = N // 10
    if n_cut < 1:
        raise ValueError("modified_msd needs at least 10 samples")
    pq = pq_project(phi, c)
    p, q = pq.p, pq.q
    m = N - n_cut
    M = np.empty(n_cut)
    for n in range(1, n_cut + 1):
        dp = p[n:n + m] - p[:m]
        dq = q[n:n + m] - q[:m]
        M[n - 1] = np.mean(dp * dp + dq * dq)
    return M - oscillatory_term(phi.mean(), c, np.arange(1, n_cut + 1))


def lad_fit(x, y, n_iter: int = 50, tol: float = 1e-10):
    """Least-absolute-deviation line ``y ~ slope * x + intercept`` (IRLS)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    A = np.column_stack((x, np.ones_like(x)))
    beta = np.linalg.lstsq(A, y, rcond=None)[0]
    for _ in range(n_iter):
        r = np.abs(y - A @ beta)
        w = 1.0 / np.maximum(r, 1e-12)
        sw = np.sqrt(w)
        new = np.linalg.lstsq(A * sw[:, None], y * sw, rcond=None)[0]
        done = np.max(np.abs(new - beta)) < tol
        beta = new
        if done:
            break
    return float(beta[0]), float(beta[1])


def kc_from_dc(dc, mode: Mode = Mode.CORRELATION) -> float:
    """Growth-rate statistic K_c of a modified mean-square displacement.

    A constant ``dc`` is bounded motion and scores 0 in either mode.
    """
    dc = np.asarray(dc, dtype=float)
    if dc.size < 2:
        raise ValueError("need at least two displacement values")
    mode = Mode(mode)
    if np.ptp(dc) == 0:
        return 0.0
    n = np.arange(1, dc.size + 1, dtype=float)
    if mode is Mode.CORRELATION:
        xn, xd = n - n.mean(), dc - dc.mean()
        den = np.sqrt(np.sum(xn * xn) * np.sum(xd * xd))
        if not (den > 0 and np.isfinite(den)):
            return 0.0
        return float(np.clip(np.sum(xn * xd) / den, -1.0, 1.0))
    shifted = np.maximum(dc - dc.min(), 1e-12)
    slope, _ = lad_fit(np.log(n), np.log(shifted))
    return slope


def draw_cs(n_c: int, seed=None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(C_LOW, C_HIGH, n_c)


def zero_one_score(series, n_c: int = 100, seed=None,
                   mode: Mode = Mode.CORRELATION) -> ZeroOneResult:
    """Median K_c over ``n_c`` random frequencies; ~0 periodic, ~1 chaotic.

    ``series`` should already be subsampled (see :func:`subsample_fmax`).
    """
    phi = as_array(series)
    if phi.size < 100:
        raise ValueError("the 0-1 test needs at least 100 samples")
    if n_c < 1:
        raise ValueError("n_c must be positive")
    mode = Mode(mode)
    cs = draw_cs(n_c, seed)
    ks = np.array([kc_from_dc(modified_msd(phi, c), mode) for c in cs])
    return ZeroOneResult(float(np.median(ks)), ks, mode, phi.size // 10, cs)
