"""Pulsed phase sampling, unwrapping, sinc interpolation and error budgets.

The measurement scheme concentrates the probe into short pulses every T,
reads each pulse with an ideal phase measurement whose residual noise has
variance (4/27)|z_A|^3 / (N T)^2, reconstructs the waveform between samples
with a truncated Whittaker-Shannon sum, and (in periodic mode) tracks the
measured phase across the 2*pi ambiguity by unwrapping neighboring samples.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.signal import fftconvolve

from ._quad import integrate
from .errors import InsufficientRecordError, RegimeViolationError
from .specfun import constants, modulo_2pi
from .spectrum import PowerLawSpectrum, spectral_density
from .bounds import ProbeConfig
from .gp import WaveformTrace

__all__ = [
    "Mode",
    "MeasurementRecord",
    "ErrorBudget",
    "optimal_pulse_period",
    "measurement_noise_std",
    "simulate_measurements",
    "unwrap_estimates",
    "interpolate",
    "mse_summary",
    "aliasing_error_closed_form",
    "predicted_total_error",
    "achievable_coefficient",
    "wrap_error_bound",
    "yovits_jackson_error",
]

TWO_PI = 2.0 * math.pi


class Mode(enum.Enum):
    PLAIN = "plain"        # unbounded readout Y_n = X(nT) + noise
    PERIODIC = "periodic"  # readout reduced to (-pi, pi], then unwrapped


@dataclass(frozen=True)
class MeasurementRecord:
    """Pulse readouts at times n*period, n = 0..len-1.

    In periodic mode ``raw`` lies in (-pi, pi] and ``unwrapped`` is its
    neighbor-tracked reconstruction (consecutive differences within pi,
    offsets from ``raw`` exact multiples of 2*pi).  In plain mode the readout
    is unbounded and ``unwrapped`` is ``raw`` itself.
    """

    period: float
    raw: np.ndarray
    unwrapped: np.ndarray
    noise_std: float
    mode: Mode = Mode.PERIODIC

    def __post_init__(self):
        if not self.period > 0.0:
            raise ValueError(f"period must be positive, got {self.period}")
        if self.raw.shape != self.unwrapped.shape or self.raw.ndim != 1:
            raise ValueError("raw and unwrapped must be 1-d arrays of equal length")
        if self.noise_std < 0.0:
            raise ValueError("noise_std must be nonnegative")
        if self.mode is Mode.PERIODIC and len(self.raw):
            if np.min(self.raw) <= -math.pi or np.max(self.raw) > math.pi:
                raise ValueError("periodic raw values must lie in (-pi, pi]")
            if self.unwrapped[0] != self.raw[0]:
                raise ValueError("unwrapped sequence must start at raw[0]")
            if len(self.raw) > 1 and np.max(np.abs(np.diff(self.unwrapped))) > math.pi + 1e-12:
                raise ValueError("unwrapped neighbor differences must not exceed pi")
            offsets = (self.unwrapped - self.raw) / TWO_PI
            if np.max(np.abs(offsets - np.round(offsets))) > 1e-9:
                raise ValueError("unwrapped must differ from raw by multiples of 2*pi")

    def __len__(self) -> int:
        return len(self.raw)


@dataclass(frozen=True)
class ErrorBudget:
    """Decomposed time-averaged squared errors, all in squared radians.

    aliasing     : reconstruction error of the noiseless sampled waveform
    noise        : excess of the noisy total over the aliasing part
    wrap         : contribution of 2*pi tracking slips (periodic mode)
    total_plain  : mean squared deviation of the interpolant
    total_modulo : mean squared deviation reduced to (-pi, pi]
    ci_halfwidth : 95% half-width on the headline total (modulo in periodic
                   mode, plain otherwise); zero for a single record
    """

    aliasing: float
    noise: float
    wrap: float
    total_plain: float
    total_modulo: float
    ci_halfwidth: float

    def __post_init__(self):
        for name in ("aliasing", "noise", "wrap", "total_plain",
                     "total_modulo", "ci_halfwidth"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
        if self.total_modulo > self.total_plain + 1e-12:
            raise ValueError("modulo error cannot exceed plain error")

    def as_dict(self) -> dict:
        return {
            "aliasing": self.aliasing,
            "noise": self.noise,
            "wrap": self.wrap,
            "total_plain": self.total_plain,
            "total_modulo": self.total_modulo,
            "ci_halfwidth": self.ci_halfwidth,
        }


def optimal_pulse_period(p: float, kappa: float, flux: float) -> float:
    """Pulse period minimizing aliasing plus measurement noise.

    T = ((4/27) |z_A|^3 pi^p / (flux^2 kappa^(p-1)))^(1/(p+1)); the exact
    minimizer of :func:`predicted_total_error` in T.  Callers relying on the
    small-gamma regime should check gamma * T against pi (the reports emitted
    by the simulation driver include the ratio).
    """
    if not (flux > 0.0 and kappa > 0.0 and p > 1.0):
        raise ValueError("require p > 1, kappa > 0, flux > 0")
    za3 = constants().airy_root_cubed
    return ((4.0 / 27.0) * za3 * math.pi ** p
            / (flux ** 2 * kappa ** (p - 1.0))) ** (1.0 / (p + 1.0))


def measurement_noise_std(flux: float, period: float) -> float:
    """Per-pulse phase noise sqrt((4/27)|z_A|^3) / (flux * period)."""
    if not flux * period > 0.0:
        raise ValueError("flux * period must be positive")
    return math.sqrt((4.0 / 27.0) * constants().airy_root_cubed) / (flux * period)


def unwrap_estimates(raw: np.ndarray) -> np.ndarray:
    """Track phase across samples by keeping neighbor differences in (-pi, pi].

    Starting from the first raw value, each successive estimate adds the
    wrapped difference of consecutive raw readouts, so the output differs
    from the input by multiples of 2*pi and never jumps by more than pi.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.size == 0:
        return raw.copy()
    steps = modulo_2pi(np.diff(raw))
    out = np.empty_like(raw)
    out[0] = raw[0]
    out[1:] = raw[0] + np.cumsum(steps)
    return out


def _pulse_stride(trace: WaveformTrace, period: float) -> int:
    """Trace samples per pulse period; error if pulse times miss the grid."""
    stride = int(round(period / trace.dt))
    if stride < 1 or abs(stride * trace.dt - period) > 1e-9 * period:
        raise ValueError(
            f"trace step {trace.dt} does not divide the pulse period {period}")
    if abs(trace.t0) > 1e-9 * trace.dt:
        raise ValueError("trace must start at t = 0, the pulse clock origin")
    return stride


def simulate_measurements(trace: WaveformTrace, probe: ProbeConfig,
                          rng: np.random.Generator, mode: Mode,
                          noise_std: float | None = None) -> MeasurementRecord:
    """Read out the waveform at the pulse times with Gaussian phase noise.

    The noise model is Gaussian with the closed-form standard deviation of
    the ideal per-pulse phase measurement (only the first two conditional
    moments are pinned down by that analysis; Gaussianity is the modeling
    choice here, wrapped into (-pi, pi] in periodic mode).  Pass
    ``noise_std=0.0`` for a noiseless reference readout.
    """
    stride = _pulse_stride(trace, probe.pulse_period)
    samples = trace.values[::stride]
    if noise_std is None:
        noise_std = measurement_noise_std(probe.flux, probe.pulse_period)
    xi = noise_std * rng.standard_normal(len(samples)) if noise_std else 0.0
    if mode is Mode.PERIODIC:
        raw = modulo_2pi(samples + xi)
        unwrapped = unwrap_estimates(raw)
    else:
        raw = samples + xi if noise_std else samples.copy()
        unwrapped = raw
    return MeasurementRecord(period=probe.pulse_period, raw=raw,
                             unwrapped=unwrapped, noise_std=noise_std, mode=mode)


def _sinc_kernel(frac: float, truncation: int) -> np.ndarray:
    """Weights sinc(pi*(frac - j)) for j = -M..M (np.sinc absorbs the pi)."""
    j = np.arange(-truncation, truncation + 1)
    return np.sinc(frac - j)


def interpolate(record: MeasurementRecord, t, truncation: int):
    """Truncated Whittaker-Shannon interpolation of the unwrapped samples.

    Sums the 2*truncation + 1 samples nearest t/period (ties at half a period
    resolve toward the earlier sample); at a sample time the sample value
    itself is returned regardless of the truncation.  Raises when the window
    would run past either end of the record.
    """
    if truncation < 1:
        raise ValueError("truncation must be at least 1")
    scalar = np.isscalar(t)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    ratio = t / record.period
    nearest = np.ceil(ratio - 0.5).astype(int)  # round half down
    if np.any(nearest - truncation < 0) or np.any(nearest + truncation >= len(record)):
        raise InsufficientRecordError(
            "interpolation window extends beyond the record; "
            f"need {truncation} samples on each side")
    frac = ratio - nearest
    out = np.empty(len(t))
    values = record.unwrapped
    exact = np.abs(frac) <= 1e-12 * np.maximum(1.0, np.abs(ratio))
    out[exact] = values[nearest[exact]]
    for i in np.nonzero(~exact)[0]:
        window = values[nearest[i] - truncation: nearest[i] + truncation + 1]
        out[i] = window @ _sinc_kernel(frac[i], truncation)
    return float(out[0]) if scalar else out


def _interpolate_uniform(samples: np.ndarray, per_period: int, truncation: int,
                         lo: int, hi: int) -> np.ndarray:
    """Interpolate at all fine points k/per_period for pulse index in [lo, hi].

    Fine points share only ``per_period`` distinct fractional offsets, so one
    correlation per offset kernel covers the whole record.  Window centering
    matches :func:`interpolate` (nearest pulse, half-period ties toward the
    earlier sample).  Returns values at fine indices lo*per_period ..
    hi*per_period inclusive; callers guarantee lo/hi leave the margins.
    """
    out = np.empty((hi - lo) * per_period + 1)
    for f in range(per_period):
        offset = f / per_period
        center = math.ceil(offset - 0.5)           # 0 for offset <= 1/2, else 1
        kernel = _sinc_kernel(offset - center, truncation)
        # c[i] = sum_m samples[i + m] * kernel[m] -> estimate centered at i + M
        c = fftconvolve(samples, kernel[::-1], mode="valid")
        base = lo + center - truncation
        if f == 0:
            out[0::per_period] = c[base: base + hi - lo + 1]
        else:
            out[f::per_period] = c[base: base + hi - lo]
    return out


def mse_summary(record: MeasurementRecord, truth: WaveformTrace,
                truncation: int, mode: Mode,
                noiseless: MeasurementRecord | None = None) -> ErrorBudget:
    """Time-averaged squared reconstruction error against the true waveform.

    Averages over every truth grid point whose interpolation window fits
    inside the record (a margin of ``truncation`` pulses is dropped at each
    end).  When the paired noiseless readout of the same waveform is given,
    the budget is decomposed: aliasing from the noiseless pass, noise as the
    plain-total excess over it, and, in periodic mode, the wrap term from the
    reconstructed 2*pi slip profile.
    """
    stride = _pulse_stride(truth, record.period)
    n_pulses = len(record)
    lo, hi = truncation, n_pulses - 1 - truncation
    if hi <= lo:
        raise InsufficientRecordError(
            f"record of {n_pulses} pulses leaves no interior for truncation "
            f"{truncation}")
    if hi * stride >= truth.n:
        raise InsufficientRecordError("truth trace does not cover the record interior")
    truth_interior = truth.values[lo * stride: hi * stride + 1]

    def totals(rec: MeasurementRecord):
        est = _interpolate_uniform(rec.unwrapped, stride, truncation, lo, hi)
        d = est - truth_interior
        plain = float(np.mean(d * d))
        wrapped = modulo_2pi(d)
        return plain, float(np.mean(wrapped * wrapped))

    total_plain, total_modulo = totals(record)
    aliasing = noise = wrap = 0.0
    if noiseless is not None:
        aliasing = totals(noiseless)[0]
        noise = max(total_plain - aliasing, 0.0)
        if mode is Mode.PERIODIC:
            truth_pulses = truth.values[::stride][:n_pulses]
            xi = modulo_2pi(record.raw - modulo_2pi(truth_pulses))
            slips = np.round((record.unwrapped - truth_pulses - xi) / TWO_PI)
            slip_profile = _interpolate_uniform(slips, stride, truncation, lo, hi)
            w = modulo_2pi(TWO_PI * slip_profile)
            wrap = float(np.mean(w * w))
    return ErrorBudget(aliasing=aliasing, noise=noise, wrap=wrap,
                       total_plain=total_plain, total_modulo=total_modulo,
                       ci_halfwidth=0.0)


class AliasingError(NamedTuple):
    exact: float   # (2/pi) * integral of S over [pi/T, inf)
    approx: float  # power-law tail approximation 2 (kappa T)^(p-1) / (pi^p (p-1))


def aliasing_error_closed_form(spec: PowerLawSpectrum, period: float) -> AliasingError:
    """Time-averaged aliasing error of ideal sampling at period T.

    Returns the exact spectral tail integral above the sampling band edge
    pi/T together with its gamma-free power-law approximation; the latter is
    only meaningful when gamma*T is small, so gamma*T >= pi/10 is rejected.
    """
    if not period > 0.0:
        raise ValueError(f"period must be positive, got {period}")
    if spec.gamma * period >= math.pi / 10.0:
        raise RegimeViolationError(
            f"gamma * T = {spec.gamma * period:.3g} too large for the "
            "power-law aliasing formula")
    edge = math.pi / period
    exact = (2.0 / math.pi) * integrate(
        lambda w: spectral_density(spec, w), edge, np.inf,
        rtol=1e-10, tag="aliasing tail")
    approx = 2.0 * (spec.kappa * period) ** (spec.p - 1.0) \
        / (math.pi ** spec.p * (spec.p - 1.0))
    return AliasingError(exact=exact, approx=approx)


def predicted_total_error(p: float, kappa: float, flux: float,
                          period: float) -> float:
    """Closed-form aliasing plus measurement error for the pulsed scheme."""
    if not (p > 1.0 and kappa > 0.0 and flux > 0.0 and period > 0.0):
        raise ValueError("require p > 1 and positive kappa, flux, period")
    za3 = constants().airy_root_cubed
    aliasing = 2.0 * (kappa * period) ** (p - 1.0) / (math.pi ** p * (p - 1.0))
    noise = (4.0 / 27.0) * za3 / (flux * period) ** 2
    return aliasing + noise


def achievable_coefficient(p: float) -> float:
    """Dimensionless constant c_A of the achievable error at the optimal period.

    c_A = (p+1)/(p-1) * (4 |z_A|^3 / 27)^((p-1)/(p+1)) * pi^(-2p/(p+1)),
    so the scheme attains c_A (kappa/flux)^(2(p-1)/(p+1)).
    """
    if not p > 1.0:
        raise ValueError(f"p must exceed 1, got {p}")
    za3 = constants().airy_root_cubed
    return (p + 1.0) / (p - 1.0) * (4.0 * za3 / 27.0) ** ((p - 1.0) / (p + 1.0)) \
        * math.pi ** (-2.0 * p / (p + 1.0))


class WrapBound(NamedTuple):
    p_err: float     # per-step probability bound on a 2*pi tracking slip
    wrap_mse: float  # induced bound on the time-averaged wrap error


def wrap_error_bound(flux: float, period: float) -> WrapBound:
    """Markov bound on the slip probability and the wrap error it induces.

    p_err <= (8/pi^2) (4/27)|z_A|^3/(flux*period)^2 from the variance of the
    difference of consecutive measurement noises; the worst-case (half-period)
    wrap error is that probability times the lattice constant 1 - 1/pi.
    """
    if not flux * period > 0.0:
        raise ValueError("flux * period must be positive")
    za3 = constants().airy_root_cubed
    p_err = (8.0 / math.pi ** 2) * (4.0 / 27.0) * za3 / (flux * period) ** 2
    return WrapBound(p_err=p_err, wrap_mse=p_err * (1.0 - 1.0 / math.pi))


def yovits_jackson_error(spec: PowerLawSpectrum, R: float) -> float:
    """Steady-state causal tracking error for observation noise level R.

    (R/pi) * integral of log(1 + S(w)/R) over w >= 0, evaluated by adaptive
    quadrature to relative tolerance 1e-7.
    """
    if not R > 0.0:
        raise ValueError(f"R must be positive, got {R}")

    def integrand(w):
        return math.log1p(spectral_density(spec, w) / R)

    val = integrate(integrand, 0.0, np.inf, rtol=1e-9, tag="causal error")
    return R / math.pi * val
