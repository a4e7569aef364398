"""Sampling stationary Gaussian phase waveforms by spectral synthesis.

A realization is a finite random superposition of harmonics on a midpoint
frequency grid,

    X(t) = sum_j sqrt(S(w_j) dw / pi) * (A_j cos(w_j t) + B_j sin(w_j t)),

with independent standard-normal A_j, B_j.  The process is Gaussian, zero
mean and stationary by construction; its covariance is the midpoint-rule
discretization of the target spectrum, so the only bias is the quadrature
error plus the spectral mass beyond the cutoff.

Streams are counter-based (Philox) and keyed by (seed, stream index), so
traces can be generated in any order, or in parallel, with identical results.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import IO, NamedTuple, Sequence

import numpy as np
from scipy.fft import next_fast_len

from .spectrum import PowerLawSpectrum, spectral_density

__all__ = [
    "SynthesisConfig",
    "WaveformTrace",
    "trace_stream",
    "sample_waveform",
    "sample_waveform_fft",
    "empirical_autocovariance",
    "trace_to_csv",
]


@dataclass(frozen=True)
class SynthesisConfig:
    """Frequency discretization and RNG key for spectral synthesis.

    omega_max : cutoff angular frequency of the synthesized spectrum
    n_modes   : number of midpoint panels on (0, omega_max]
    seed      : 64-bit stream key; per-trace streams are (seed, trace index)
    """

    omega_max: float
    n_modes: int
    seed: int

    def __post_init__(self):
        if not self.omega_max > 0.0:
            raise ValueError(f"omega_max must be positive, got {self.omega_max}")
        if self.n_modes < 2:
            raise ValueError(f"n_modes must be at least 2, got {self.n_modes}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class WaveformTrace:
    """A phase waveform sampled on the uniform grid t0 + j*dt, j = 0..n-1.

    cutoff_ok is cleared when the synthesis cutoff was below the recommended
    20 * max(gamma, fundamental of the record) coverage.
    """

    t0: float
    dt: float
    values: np.ndarray
    cutoff_ok: bool = True

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("trace values must be finite")

    @property
    def n(self) -> int:
        return len(self.values)

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)


def trace_stream(seed: int, index: int) -> np.random.Generator:
    """Counter-based generator for stream ``index`` of experiment ``seed``."""
    key = np.array([seed, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _mode_grid(spec: PowerLawSpectrum, cfg: SynthesisConfig):
    dw = cfg.omega_max / cfg.n_modes
    omega = (np.arange(1, cfg.n_modes + 1) - 0.5) * dw
    amplitude = np.sqrt(spectral_density(spec, omega) * dw / math.pi)
    return omega, amplitude


def _draw_coefficients(cfg: SynthesisConfig, rng: np.random.Generator | None):
    if rng is None:
        rng = trace_stream(cfg.seed, 0)
    a = rng.standard_normal(cfg.n_modes)
    b = rng.standard_normal(cfg.n_modes)
    return a, b


def _cutoff_ok(spec: PowerLawSpectrum, cfg: SynthesisConfig, dt: float, n: int) -> bool:
    return cfg.omega_max >= 20.0 * max(spec.gamma, math.pi / (n * dt))


def sample_waveform(spec: PowerLawSpectrum, grid: tuple[float, float, int],
                    cfg: SynthesisConfig,
                    rng: np.random.Generator | None = None) -> WaveformTrace:
    """Draw one waveform realization on the given (t0, dt, n) grid.

    Direct evaluation of the harmonic superposition; cost is O(n * n_modes),
    so this path is intended for verification-scale grids.  The Monte Carlo
    driver uses :func:`sample_waveform_fft` (identical distribution, identical
    draws for the same stream) on commensurate grids.
    """
    t0, dt, n = grid
    if n < 1 or not dt > 0.0:
        raise ValueError(f"invalid grid (t0={t0}, dt={dt}, n={n})")
    omega, amplitude = _mode_grid(spec, cfg)
    a, b = _draw_coefficients(cfg, rng)
    t = t0 + dt * np.arange(n)
    values = np.empty(n)
    block = max(1, int(2e6) // cfg.n_modes)  # bound the phase-matrix size
    for start in range(0, n, block):
        phases = np.outer(t[start:start + block], omega)
        values[start:start + block] = (np.cos(phases) @ (amplitude * a)
                                       + np.sin(phases) @ (amplitude * b))
    return WaveformTrace(t0=t0, dt=dt, values=values,
                         cutoff_ok=_cutoff_ok(spec, cfg, dt, n))


class FftSynthesisPlan(NamedTuple):
    """Commensurate uniform grids for FFT-based synthesis.

    The mode spacing is locked to dw = 2*pi/(L*dt) with L >= oversample * n,
    so every harmonic completes an integer number of half-cycles over L grid
    steps and the superposition collapses to one length-L FFT.  The synthesis
    period 2*L*dt then exceeds ``oversample`` times the record length.
    """

    n: int
    dt: float
    fft_len: int
    n_modes: int

    @property
    def delta_omega(self) -> float:
        return 2.0 * math.pi / (self.fft_len * self.dt)

    @property
    def omega_max(self) -> float:
        return self.n_modes * self.delta_omega


def plan_fft_synthesis(n: int, dt: float, omega_max_target: float,
                       oversample: int = 8) -> FftSynthesisPlan:
    """Choose FFT length and mode count for a record of n samples at step dt."""
    if n < 1 or not dt > 0.0:
        raise ValueError(f"invalid grid (dt={dt}, n={n})")
    fft_len = next_fast_len(max(oversample * n, 16))
    dw = 2.0 * math.pi / (fft_len * dt)
    n_modes = max(2, int(round(omega_max_target / dw)))
    return FftSynthesisPlan(n=n, dt=dt, fft_len=fft_len, n_modes=n_modes)


def sample_waveform_fft(spec: PowerLawSpectrum, plan: FftSynthesisPlan,
                        seed: int, index: int) -> WaveformTrace:
    """Draw one realization on the plan's grid (t0 = 0) via a folded FFT.

    Mathematically identical to :func:`sample_waveform` with the plan's mode
    grid and the stream (seed, index): harmonics at w_j = (j - 1/2) dw are
    mapped to FFT bins j mod L and the half-bin offset is applied as a
    per-sample phase twist afterwards.
    """
    cfg = SynthesisConfig(omega_max=plan.omega_max, n_modes=plan.n_modes, seed=seed)
    omega, amplitude = _mode_grid(spec, cfg)
    a, b = _draw_coefficients(cfg, trace_stream(seed, index))
    coeff = amplitude * (a - 1j * b)  # X(t) = Re sum_j coeff_j e^{i w_j t}

    L = plan.fft_len
    padded = np.zeros((plan.n_modes // L + 2) * L, dtype=complex)
    padded[1:plan.n_modes + 1] = coeff              # coefficient of mode index j
    folded = padded.reshape(-1, L).sum(axis=0)      # accumulate j mod L
    harmonic_sum = L * np.fft.ifft(folded)
    k = np.arange(plan.n)
    values = np.real(np.exp(-1j * math.pi * k / L) * harmonic_sum[:plan.n])
    return WaveformTrace(t0=0.0, dt=plan.dt, values=values,
                         cutoff_ok=_cutoff_ok(spec, cfg, plan.dt, plan.n))


def empirical_autocovariance(traces: Sequence[WaveformTrace],
                             lag_steps: int) -> tuple[float, float]:
    """Across-ensemble autocovariance at a grid lag, with jackknife error.

    Each trace contributes its average lagged product (the process has zero
    mean by construction); the estimate is the ensemble mean of those and the
    standard error is the leave-one-out jackknife.
    """
    if not traces:
        raise ValueError("need at least one trace")
    lag = abs(int(lag_steps))
    n = traces[0].n
    dt, t0 = traces[0].dt, traces[0].t0
    if lag >= n:
        raise ValueError(f"lag {lag} outside grid of {n} samples")
    per_trace = []
    for tr in traces:
        if tr.n != n or tr.dt != dt or tr.t0 != t0:
            raise ValueError("traces do not share a common grid")
        x = tr.values
        per_trace.append(float(np.mean(x[: n - lag] * x[lag:])) if lag
                         else float(np.mean(x * x)))
    m = np.asarray(per_trace)
    estimate = float(np.mean(m))
    if len(m) < 2:
        return estimate, 0.0
    loo = (np.sum(m) - m) / (len(m) - 1)
    se = math.sqrt((len(m) - 1) / len(m) * float(np.sum((loo - np.mean(loo)) ** 2)))
    return estimate, se


def trace_to_csv(trace: WaveformTrace, stream: IO[str]) -> None:
    """Write a trace as CSV with columns t, x."""
    writer = csv.writer(stream)
    writer.writerow(["t", "x"])
    for t, x in zip(trace.times(), trace.values):
        writer.writerow([repr(float(t)), repr(float(x))])
