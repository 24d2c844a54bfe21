"""Colored (1/f^alpha) Gaussian noise and SNR-controlled contamination."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .timeseries import TimeSeries, as_array

# alpha -> name, with S(f) ~ 1/f**alpha
NOISE_COLORS = {2: "red", 1: "pink", 0: "white", -1: "blue", -2: "violet"}
PALETTE = (-2, -1, 0, 1, 2)


def color_name(alpha: float) -> str:
    return NOISE_COLORS.get(alpha, f"alpha={alpha:g}")


@dataclass(frozen=True)
class NoiseSpec:
    alpha: float
    length: int
    seed: int | None = None

    def __post_init__(self):
        if not -2 <= self.alpha <= 2:
            raise ValueError(f"alpha={self.alpha} outside the supported [-2, 2]")
        if self.length < 2:
            raise ValueError("noise length must be at least 2")


@dataclass(frozen=True)
class ContaminatedSeries:
    series: TimeSeries
    snr_db: float
    epsilon: float


def gen_colored(spec: NoiseSpec, dt: float = 1.0) -> TimeSeries:
    """Gaussian noise whose power spectral density falls off as ``1/f**alpha``.

    White deviates are shaped in the Fourier domain: every positive-frequency
    bin is multiplied by ``f**(-alpha/2)`` and the DC bin is zeroed, so the
    output has zero mean. The result is scaled to unit standard deviation.
    """
    rng = np.random.default_rng(spec.seed)
    white = rng.standard_normal(spec.length)
    spectrum = np.fft.rfft(white)
    f = np.fft.rfftfreq(spec.length)
    scale = np.zeros_like(f)
    scale[1:] = f[1:] ** (-spec.alpha / 2.0)
    x = np.fft.irfft(spectrum * scale, n=spec.length)
    x -= x.mean()
    x /= np.sqrt(np.mean(x * x))
    return TimeSeries(x, dt)


def rms(series) -> float:
    x = as_array(series)
    if x.size == 0:
        raise ValueError("rms of an empty series")
    return float(np.sqrt(np.mean(x * x)))


def snr_db(signal_, noise) -> float:
    """``20 log10(rms(signal) / rms(noise))``."""
    return 20.0 * math.log10(rms(signal_) / rms(noise))


def contaminate(signal_: TimeSeries, noise, snr: float) -> ContaminatedSeries:
    """Add ``epsilon * noise`` to ``signal_`` so the result sits at ``snr`` dB.

    ``snr = inf`` returns the signal untouched with ``epsilon = 0``.
    """
    x = as_array(signal_)
    xi = as_array(noise)
    if x.shape != xi.shape:
        raise ValueError(f"length mismatch: signal {x.size}, noise {xi.size}")
    rs, rn = rms(x), rms(xi)
    if rs == 0 or rn == 0:
        raise ValueError("signal and noise must both have non-zero rms")
    dt = signal_.dt if isinstance(signal_, TimeSeries) else 1.0
    t0 = signal_.t0 if isinstance(signal_, TimeSeries) else 0.0
    if math.isinf(snr) and snr > 0:
        return ContaminatedSeries(TimeSeries(x.copy(), dt, t0), snr, 0.0)
    eps = rs / (rn * 10.0 ** (snr / 20.0))
    return ContaminatedSeries(TimeSeries(x + eps * xi, dt, t0), snr, eps)


def psd_slope(series) -> float:
    """Log-log slope of the periodogram over ``[f_nyq/100, f_nyq/2]``."""
    x = as_array(series)
    if x.size < 256:
        raise ValueError("psd_slope needs at least 256 samples")
    fs = series.fs if isinstance(series, TimeSeries) else 1.0
    f, pxx = signal.periodogram(x, fs=fs, detrend=False)
    nyq = fs / 2.0
    band = (f >= nyq / 100.0) & (f <= nyq / 2.0) & (pxx > 0)
    slope, _ = np.polyfit(np.log10(f[band]), np.log10(pxx[band]), 1)
    return float(slope)
