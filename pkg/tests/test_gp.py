"""Waveform synthesis: determinism, statistics against the OU oracle, bias."""
import io
import math

import numpy as np
import pytest

from wavebound.gp import (
    SynthesisConfig,
    WaveformTrace,
    empirical_autocovariance,
    plan_fft_synthesis,
    sample_waveform,
    sample_waveform_fft,
    trace_stream,
    trace_to_csv,
)
from wavebound.spectrum import PowerLawSpectrum, spectral_density

OU = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=0.5)


def small_cfg(seed=1):
    return SynthesisConfig(omega_max=200.0, n_modes=4000, seed=seed)


class TestValidation:
    def test_config_rejects_bad_values(self):
        with pytest.raises(ValueError):
            SynthesisConfig(omega_max=0.0, n_modes=10, seed=0)
        with pytest.raises(ValueError):
            SynthesisConfig(omega_max=1.0, n_modes=1, seed=0)

    def test_invalid_grid(self):
        with pytest.raises(ValueError):
            sample_waveform(OU, (0.0, 0.1, 0), small_cfg())
        with pytest.raises(ValueError):
            sample_waveform(OU, (0.0, -0.1, 4), small_cfg())

    def test_trace_validation(self):
        with pytest.raises(ValueError):
            WaveformTrace(t0=0.0, dt=0.1, values=np.array([1.0, math.nan]))


class TestDeterminism:
    def test_bit_for_bit(self):
        grid = (0.0, 0.05, 64)
        a = sample_waveform(OU, grid, small_cfg(seed=7))
        b = sample_waveform(OU, grid, small_cfg(seed=7))
        assert np.array_equal(a.values, b.values)

    def test_seed_changes_trace(self):
        grid = (0.0, 0.05, 64)
        a = sample_waveform(OU, grid, small_cfg(seed=7))
        b = sample_waveform(OU, grid, small_cfg(seed=8))
        assert not np.array_equal(a.values, b.values)

    def test_stream_independent_of_order(self):
        s5 = trace_stream(42, 5).standard_normal(4)
        trace_stream(42, 99).standard_normal(4)
        again = trace_stream(42, 5).standard_normal(4)
        assert np.array_equal(s5, again)


class TestFftPathAgreesWithDirectSum:
    def test_identical_draws_identical_values(self):
        n, dt = 48, 0.05
        plan = plan_fft_synthesis(n, dt, omega_max_target=150.0)
        fft_trace = sample_waveform_fft(OU, plan, seed=3, index=11)
        cfg = SynthesisConfig(omega_max=plan.omega_max, n_modes=plan.n_modes, seed=3)
        direct = sample_waveform(OU, (0.0, dt, n), cfg, rng=trace_stream(3, 11))
        assert np.max(np.abs(fft_trace.values - direct.values)) < 1e-12

    def test_plan_locks_commensurate_grid(self):
        plan = plan_fft_synthesis(100, 0.01, omega_max_target=500.0)
        assert plan.fft_len >= 8 * 100
        assert plan.delta_omega == pytest.approx(
            2.0 * math.pi / (plan.fft_len * 0.01), rel=1e-15)


@pytest.fixture(scope="module")
def traces():
    grid = (0.0, 0.05, 64)
    cfg = SynthesisConfig(omega_max=200.0, n_modes=1500, seed=20)
    return [sample_waveform(OU, grid, cfg, rng=trace_stream(cfg.seed, i))
            for i in range(2000)]


class TestEnsembleStatistics:
    def test_zero_mean(self, traces):
        at_t = np.array([tr.values[10] for tr in traces])
        se = at_t.std(ddof=1) / math.sqrt(len(at_t))
        assert abs(at_t.mean()) < 4.0 * se

    def test_variance_matches_ou(self, traces):
        # target kappa/(2 gamma) = 1, minus the tail mass beyond omega_max
        at_t = np.array([tr.values[20] for tr in traces])
        tail = (1.0 / math.pi) * (2.0 / 200.0)  # int_200^inf dw/w^2, kappa=1
        target = 1.0 - tail
        var = at_t.var(ddof=1)
        se = var * math.sqrt(2.0 / (len(at_t) - 1))
        assert abs(var - target) < 4.0 * se + tail

    def test_lag_covariance_matches_ou(self, traces):
        est, se = empirical_autocovariance(traces, 20)  # lag 20*0.05 = 1.0
        target = math.exp(-0.5)
        assert abs(est - target) < 4.0 * se + 0.01

    def test_stationarity_across_grid(self, traces):
        lag = 10
        prods_a = np.array([tr.values[5] * tr.values[5 + lag] for tr in traces])
        prods_b = np.array([tr.values[40] * tr.values[40 + lag] for tr in traces])
        se = math.hypot(prods_a.std(ddof=1), prods_b.std(ddof=1)) \
            / math.sqrt(len(traces))
        assert abs(prods_a.mean() - prods_b.mean()) < 4.0 * se

    def test_gaussian_moments(self, traces):
        tiny = SynthesisConfig(omega_max=200.0, n_modes=400, seed=21)
        x = np.array([tr.values[30] for tr in traces])
        more = [sample_waveform(OU, (0.0, 0.05, 4), tiny,
                                rng=trace_stream(21, i)).values[2]
                for i in range(8000)]
        x = np.concatenate([x, more])
        z = (x - x.mean()) / x.std(ddof=1)
        skew = float(np.mean(z ** 3))
        kurt = float(np.mean(z ** 4) - 3.0)
        assert abs(skew) < 0.1
        assert abs(kurt) < 0.2


class TestSpectralBias:
    def test_lag0_deficit_equals_tail_integral(self):
        # deterministic: the synthesized variance is the midpoint-rule sum
        spec = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=0.5)
        cfg = SynthesisConfig(omega_max=50.0, n_modes=20000, seed=0)
        dw = cfg.omega_max / cfg.n_modes
        w = (np.arange(1, cfg.n_modes + 1) - 0.5) * dw
        discrete_var = float(np.sum(spectral_density(spec, w)) * dw / math.pi)
        full_var = spec.kappa / (2.0 * spec.gamma)
        deficit = full_var - discrete_var
        # tail of the Lorentzian: (1/pi) int_50^inf = (1/pi)(pi/2 - atan(100))/0.5...
        tail = (1.0 / math.pi) * (1.0 / spec.gamma) * (
            math.pi / 2.0 - math.atan(cfg.omega_max / spec.gamma))
        assert deficit == pytest.approx(tail, rel=0.1)


class TestEmpiricalAutocovariance:
    def test_zero_traces_rejected(self):
        with pytest.raises(ValueError):
            empirical_autocovariance([], 0)

    def test_constant_zero(self):
        traces = [WaveformTrace(t0=0.0, dt=1.0, values=np.zeros(16))
                  for _ in range(5)]
        assert empirical_autocovariance(traces, 0) == (0.0, 0.0)

    def test_lag_sign_symmetry(self):
        traces = [sample_waveform(OU, (0.0, 0.05, 32), small_cfg(seed=33),
                                  rng=trace_stream(33, i)) for i in range(8)]
        assert empirical_autocovariance(traces, 4) == \
            empirical_autocovariance(traces, -4)

    def test_lag0_dominates(self):
        traces = [sample_waveform(OU, (0.0, 0.05, 64), small_cfg(seed=34),
                                  rng=trace_stream(34, i)) for i in range(400)]
        v0, se0 = empirical_autocovariance(traces, 0)
        vk, sek = empirical_autocovariance(traces, 12)
        assert v0 >= vk - 3.0 * math.hypot(se0, sek)

    def test_grid_mismatch(self):
        a = WaveformTrace(t0=0.0, dt=1.0, values=np.zeros(8))
        b = WaveformTrace(t0=0.0, dt=0.5, values=np.zeros(8))
        with pytest.raises(ValueError):
            empirical_autocovariance([a, b], 0)

    def test_lag_outside_grid(self):
        a = WaveformTrace(t0=0.0, dt=1.0, values=np.zeros(8))
        with pytest.raises(ValueError):
            empirical_autocovariance([a], 9)


def test_trace_csv_roundtrip():
    trace = WaveformTrace(t0=1.0, dt=0.5, values=np.array([0.25, -1.5, 3.0]))
    buf = io.StringIO()
    trace_to_csv(trace, buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "t,x"
    assert len(lines) == 4
    t, x = lines[2].split(",")
    assert float(t) == 1.5
    assert float(x) == -1.5


def test_cutoff_warning_flag():
    # omega_max below 20*gamma trips the metadata flag
    low = SynthesisConfig(omega_max=5.0, n_modes=100, seed=0)
    tr = sample_waveform(OU, (0.0, 0.1, 32), low)
    assert not tr.cutoff_ok
    high = SynthesisConfig(omega_max=500.0, n_modes=100, seed=0)
    tr = sample_waveform(OU, (0.0, 0.1, 32), high)
    assert tr.cutoff_ok
