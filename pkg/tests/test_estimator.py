"""Measurement, unwrapping, interpolation and the closed-form error budget."""
import math

import numpy as np
import pytest
import scipy.special as sps

from wavebound.bounds import ProbeConfig, scaling_exponent
from wavebound.errors import InsufficientRecordError, RegimeViolationError
from wavebound.estimator import (
    MeasurementRecord,
    Mode,
    achievable_coefficient,
    aliasing_error_closed_form,
    interpolate,
    measurement_noise_std,
    mse_summary,
    optimal_pulse_period,
    predicted_total_error,
    simulate_measurements,
    unwrap_estimates,
    wrap_error_bound,
    yovits_jackson_error,
)
from wavebound.gp import WaveformTrace, trace_stream
from wavebound.specfun import modulo_2pi
from wavebound.spectrum import PowerLawSpectrum, autocovariance

ZA3 = float(-sps.ai_zeros(1)[0][0]) ** 3  # independent Airy-root oracle
TWO_PI = 2.0 * math.pi


def record_from(values, period=1.0, mode=Mode.PLAIN, noise_std=0.0):
    values = np.asarray(values, dtype=float)
    return MeasurementRecord(period=period, raw=values, unwrapped=values,
                             noise_std=noise_std, mode=mode)


class TestOptimalPulsePeriod:
    def test_reference_value(self):
        expected = ((4.0 / 27.0) * ZA3 * math.pi ** 2 / 1e4) ** (1.0 / 3.0)
        assert optimal_pulse_period(2.0, 1.0, 100.0) == \
            pytest.approx(expected, rel=1e-10)
        assert expected == pytest.approx(0.1232, abs=2e-4)

    def test_flux_scaling(self):
        t1 = optimal_pulse_period(2.0, 1.0, 100.0)
        t2 = optimal_pulse_period(2.0, 1.0, 800.0)
        assert t2 == pytest.approx(t1 / 4.0, rel=1e-12)

    def test_minimizes_predicted_error(self):
        p, kappa, flux = 2.5, 1.2, 500.0
        topt = optimal_pulse_period(p, kappa, flux)
        grid = topt * np.linspace(0.5, 2.0, 2001)
        vals = [predicted_total_error(p, kappa, flux, T) for T in grid]
        scan_min = grid[int(np.argmin(vals))]
        assert scan_min == pytest.approx(topt, rel=1e-3)


class TestMeasurementNoiseStd:
    def test_reference_value(self):
        assert measurement_noise_std(10.0, 1.0) == \
            pytest.approx(math.sqrt(ZA3 * 4.0 / 27.0) / 10.0, rel=1e-10)
        assert measurement_noise_std(10.0, 1.0) == pytest.approx(0.13761, abs=1e-5)

    def test_inverse_scaling(self):
        assert measurement_noise_std(20.0, 1.0) == \
            pytest.approx(measurement_noise_std(10.0, 1.0) / 2.0, rel=1e-12)

    def test_vanishes_at_large_flux(self):
        assert measurement_noise_std(1e12, 1.0) < 1e-11


class TestUnwrapEstimates:
    def test_reference_sequence(self):
        out = unwrap_estimates(np.array([0.1, 3.0, -3.0]))
        assert out == pytest.approx([0.1, 3.0, -3.0 + TWO_PI], rel=1e-12)

    def test_constant_unchanged(self):
        raw = np.full(5, 1.2)
        assert np.array_equal(unwrap_estimates(raw), raw)

    def test_boundary_difference_pi(self):
        out = unwrap_estimates(np.array([0.0, math.pi, math.pi]))
        assert out == pytest.approx([0.0, math.pi, math.pi], abs=1e-12)

    def test_idempotent_on_compliant_sequences(self):
        rng = np.random.Generator(np.random.Philox(key=[5, 0]))
        raw = np.cumsum(0.5 * rng.standard_normal(200))
        once = unwrap_estimates(modulo_2pi(raw))
        twice = unwrap_estimates(modulo_2pi(once))
        # a compliant sequence reduced to (-pi, pi] unwraps back to itself
        assert np.max(np.abs(np.diff(once))) <= math.pi
        assert twice == pytest.approx(once, abs=1e-9)

    def test_record_invariants(self):
        rng = np.random.Generator(np.random.Philox(key=[6, 0]))
        raw = modulo_2pi(np.cumsum(0.4 * rng.standard_normal(100)))
        rec = MeasurementRecord(period=1.0, raw=raw,
                                unwrapped=unwrap_estimates(raw),
                                noise_std=0.0, mode=Mode.PERIODIC)
        offsets = (rec.unwrapped - rec.raw) / TWO_PI
        assert np.max(np.abs(offsets - np.round(offsets))) < 1e-9


class TestSimulateMeasurements:
    def test_noiseless_periodic_wraps_exactly(self):
        t = np.arange(40) * 0.5
        trace = WaveformTrace(t0=0.0, dt=0.5, values=4.0 * np.sin(0.3 * t))
        probe = ProbeConfig(flux=1.0, pulse_period=0.5)
        rec = simulate_measurements(trace, probe, trace_stream(0, 1),
                                    Mode.PERIODIC, noise_std=0.0)
        assert np.array_equal(rec.raw, modulo_2pi(trace.values))

    def test_deterministic_under_seed(self):
        trace = WaveformTrace(t0=0.0, dt=0.5, values=np.zeros(64))
        probe = ProbeConfig(flux=10.0, pulse_period=0.5)
        a = simulate_measurements(trace, probe, trace_stream(9, 3), Mode.PLAIN)
        b = simulate_measurements(trace, probe, trace_stream(9, 3), Mode.PLAIN)
        assert np.array_equal(a.raw, b.raw)

    def test_noise_variance_matches_model(self):
        n = 10_000
        trace = WaveformTrace(t0=0.0, dt=1.0, values=np.zeros(n))
        probe = ProbeConfig(flux=20.0, pulse_period=1.0)
        rec = simulate_measurements(trace, probe, trace_stream(11, 0), Mode.PLAIN)
        resid = rec.raw - trace.values
        sig2 = measurement_noise_std(20.0, 1.0) ** 2
        se = sig2 * math.sqrt(2.0 / (n - 1))
        assert abs(resid.var(ddof=1) - sig2) < 4.0 * se

    def test_grid_alignment_error(self):
        trace = WaveformTrace(t0=0.0, dt=0.3, values=np.zeros(10))
        probe = ProbeConfig(flux=1.0, pulse_period=1.0)
        with pytest.raises(ValueError):
            simulate_measurements(trace, probe, trace_stream(0, 0), Mode.PLAIN)

    def test_misaligned_origin_error(self):
        trace = WaveformTrace(t0=0.25, dt=0.5, values=np.zeros(10))
        probe = ProbeConfig(flux=1.0, pulse_period=0.5)
        with pytest.raises(ValueError):
            simulate_measurements(trace, probe, trace_stream(0, 0), Mode.PLAIN)


class TestInterpolate:
    def test_exact_at_sample_times(self):
        rng = np.random.Generator(np.random.Philox(key=[1, 2]))
        rec = record_from(rng.standard_normal(32))
        assert interpolate(rec, 7.0, truncation=3) == rec.unwrapped[7]
        assert interpolate(rec, 20.0, truncation=11) == rec.unwrapped[20]

    def test_constant_reconstruction(self):
        c = 2.5
        rec = record_from(np.full(4201, c))
        got = interpolate(rec, 2100.5, truncation=2000)
        assert got == pytest.approx(c, abs=c * 1e-3)

    def test_linear_phase_midpoint(self):
        # bandlimited slope alpha*n*T reconstructs to alpha*t
        alpha, M = 0.37, 1500
        n = np.arange(2 * M + 101)
        rec = record_from(alpha * n * 1.0)
        t = (M + 50) + 0.5
        assert interpolate(rec, t, truncation=M) == \
            pytest.approx(alpha * t, abs=2e-3)

    def test_out_of_support(self):
        rec = record_from(np.zeros(10))
        with pytest.raises(InsufficientRecordError):
            interpolate(rec, 1.0, truncation=4)
        with pytest.raises(InsufficientRecordError):
            interpolate(rec, 8.7, truncation=4)

    def test_array_argument(self):
        rec = record_from(np.arange(16.0))
        out = interpolate(rec, np.array([5.0, 6.0]), truncation=4)
        assert out == pytest.approx([5.0, 6.0], abs=1e-12)


class TestMseSummary:
    def _bandlimited_trace(self, n_pulses, per=4, period=1.0, seed=0):
        # strictly sub-Nyquist content so sampling at the period is lossless
        rng = np.random.Generator(np.random.Philox(key=[seed, 0]))
        t = np.arange(n_pulses * per) * (period / per)
        freqs = np.array([0.11, 0.43, 0.79]) * (math.pi / period)
        amps = 0.5 * rng.standard_normal(3)
        phases = TWO_PI * rng.random(3)
        x = sum(a * np.cos(f * t + ph) for a, f, ph in zip(amps, freqs, phases))
        return WaveformTrace(t0=0.0, dt=period / per, values=x)

    def test_bandlimited_noiseless_error_is_truncation_level(self):
        trace = self._bandlimited_trace(n_pulses=400)
        probe = ProbeConfig(flux=1.0, pulse_period=1.0)
        rec = simulate_measurements(trace, probe, trace_stream(0, 0),
                                    Mode.PLAIN, noise_std=0.0)
        budget = mse_summary(rec, trace, truncation=150, mode=Mode.PLAIN)
        assert budget.total_plain < 1e-5

    def test_modulo_never_exceeds_pi_squared(self):
        rng = np.random.Generator(np.random.Philox(key=[3, 1]))
        trace = WaveformTrace(t0=0.0, dt=0.25,
                              values=np.cumsum(rng.standard_normal(800)) * 0.4)
        probe = ProbeConfig(flux=0.5, pulse_period=1.0)
        rec = simulate_measurements(trace, probe, trace_stream(3, 2), Mode.PERIODIC)
        budget = mse_summary(rec, trace, truncation=40, mode=Mode.PERIODIC)
        assert budget.total_modulo <= math.pi ** 2
        assert budget.total_modulo <= budget.total_plain + 1e-12

    def test_decomposition_adds_up(self):
        trace = self._bandlimited_trace(n_pulses=300, seed=9)
        probe = ProbeConfig(flux=5.0, pulse_period=1.0)
        noisy = simulate_measurements(trace, probe, trace_stream(9, 1), Mode.PLAIN)
        clean = simulate_measurements(trace, probe, trace_stream(9, 2),
                                      Mode.PLAIN, noise_std=0.0)
        budget = mse_summary(noisy, trace, truncation=60, mode=Mode.PLAIN,
                             noiseless=clean)
        assert budget.aliasing + budget.noise == \
            pytest.approx(budget.total_plain, rel=1e-12)

    def test_insufficient_support(self):
        trace = self._bandlimited_trace(n_pulses=20)
        probe = ProbeConfig(flux=1.0, pulse_period=1.0)
        rec = simulate_measurements(trace, probe, trace_stream(0, 0),
                                    Mode.PLAIN, noise_std=0.0)
        with pytest.raises(InsufficientRecordError):
            mse_summary(rec, trace, truncation=10, mode=Mode.PLAIN)


class TestAliasingClosedForm:
    def test_p2_reference(self):
        spec = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=1e-2)
        exact, approx = aliasing_error_closed_form(spec, 0.1)
        assert approx == pytest.approx(2.0 * 0.1 / math.pi ** 2, rel=1e-12)
        assert exact == pytest.approx(approx, rel=1e-2)

    def test_scaling_with_period(self):
        spec = PowerLawSpectrum(p=3.0, kappa=1.0, gamma=1e-4)
        _, a1 = aliasing_error_closed_form(spec, 0.05)
        _, a2 = aliasing_error_closed_form(spec, 0.1)
        assert a2 / a1 == pytest.approx(4.0, rel=1e-12)

    def test_regime_error(self):
        spec = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=10.0)
        with pytest.raises(RegimeViolationError):
            aliasing_error_closed_form(spec, 0.1)


class TestPredictedTotalError:
    def test_equals_achievable_at_optimum(self):
        for p in (1.5, 2.0, 3.0, 4.0):
            kappa, flux = 0.9, 2e3
            topt = optimal_pulse_period(p, kappa, flux)
            total = predicted_total_error(p, kappa, flux, topt)
            target = achievable_coefficient(p) * (kappa / flux) ** scaling_exponent(p)
            assert total == pytest.approx(target, rel=1e-10)

    def test_term_monotonicity(self):
        p, kappa, flux = 2.0, 1.0, 100.0
        za3 = ZA3
        for T in (0.05, 0.1, 0.2):
            aliasing = 2.0 * (kappa * T) / (math.pi ** 2)
            noise = (4.0 / 27.0) * za3 / (flux * T) ** 2
            assert predicted_total_error(p, kappa, flux, T) == \
                pytest.approx(aliasing + noise, rel=1e-9)
        grid = np.linspace(0.01, 1.0, 50)
        alias_terms = 2.0 * grid / math.pi ** 2
        noise_terms = (4.0 / 27.0) * za3 / (flux * grid) ** 2
        assert np.all(np.diff(alias_terms) > 0.0)
        assert np.all(np.diff(noise_terms) < 0.0)

    def test_infinite_flux_leaves_aliasing(self):
        p, kappa, T = 2.0, 1.0, 0.1
        assert predicted_total_error(p, kappa, 1e15, T) == \
            pytest.approx(2.0 * kappa * T / math.pi ** 2, rel=1e-9)


class TestAchievableCoefficient:
    def test_p2_value(self):
        expected = 3.0 * (4.0 * ZA3 / 27.0) ** (1.0 / 3.0) * math.pi ** (-4.0 / 3.0)
        assert achievable_coefficient(2.0) == pytest.approx(expected, rel=1e-10)
        assert expected == pytest.approx(0.807, abs=5e-4)

    def test_diverges_toward_p_one(self):
        assert achievable_coefficient(1.001) > 100.0

    def test_domain(self):
        with pytest.raises(ValueError):
            achievable_coefficient(1.0)


class TestWrapErrorBound:
    def test_reference_value(self):
        p_err, wrap = wrap_error_bound(1.0, 100.0)
        assert p_err == pytest.approx((8.0 / math.pi ** 2) * (4.0 / 27.0) * ZA3 / 1e4,
                                      rel=1e-10)
        assert wrap / p_err == pytest.approx(1.0 - 1.0 / math.pi, rel=1e-14)

    def test_vanishes_at_large_flux(self):
        assert wrap_error_bound(1e9, 1.0).p_err < 1e-15

    def test_empirical_slip_rate_below_bound(self):
        # low flux so slips from waveform jumps actually occur
        from wavebound.gp import plan_fft_synthesis, sample_waveform_fft
        p, kappa, gamma, flux = 2.0, 1.0, 0.01, 5.0
        T = optimal_pulse_period(p, kappa, flux)
        spec = PowerLawSpectrum(p=p, kappa=kappa, gamma=gamma)
        probe = ProbeConfig(flux=flux, pulse_period=T)
        n_pulses = 1200
        plan = plan_fft_synthesis(n_pulses, T, 64.0 * math.pi / T)
        slips = steps = 0
        for i in range(20):
            trace = sample_waveform_fft(spec, plan, seed=77, index=2 * i)
            rec = simulate_measurements(trace, probe, trace_stream(77, 2 * i + 1),
                                        Mode.PERIODIC)
            xi = modulo_2pi(rec.raw - modulo_2pi(trace.values))
            k = np.round((rec.unwrapped - trace.values - xi) / TWO_PI)
            slips += int(np.sum(np.abs(np.diff(k)) > 0.5))
            steps += n_pulses - 1
        assert slips > 0  # the regime is chosen to make slips observable
        assert slips / steps <= wrap_error_bound(flux, T).p_err


class TestYovitsJackson:
    def test_large_noise_floor_limit(self):
        spec = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=0.2)
        var = autocovariance(spec, 0.0)
        from wavebound.spectrum import spectral_density
        high = yovits_jackson_error(spec, 1e6 * spectral_density(spec, 0.0))
        assert high == pytest.approx(var, rel=1e-3)

    def test_small_noise_floor_limit(self):
        spec = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=0.2)
        from wavebound.spectrum import spectral_density
        var = autocovariance(spec, 0.0)
        low = yovits_jackson_error(spec, 1e-9 * spectral_density(spec, 0.0))
        assert low < 1e-3 * var

    def test_monotone_in_noise_level(self):
        spec = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=0.2)
        vals = [yovits_jackson_error(spec, r) for r in np.logspace(-2, 2, 9)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_rejects_nonpositive_R(self):
        spec = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=0.2)
        with pytest.raises(ValueError):
            yovits_jackson_error(spec, 0.0)


class TestMeasurementRecordValidation:
    def test_periodic_range_enforced(self):
        with pytest.raises(ValueError):
            MeasurementRecord(period=1.0, raw=np.array([4.0]),
                              unwrapped=np.array([4.0]), noise_std=0.0,
                              mode=Mode.PERIODIC)

    def test_unwrap_offsets_enforced(self):
        raw = np.array([0.1, 0.2])
        with pytest.raises(ValueError):
            MeasurementRecord(period=1.0, raw=raw,
                              unwrapped=raw + 1.0,  # not a 2*pi multiple
                              noise_std=0.0, mode=Mode.PERIODIC)

    def test_plain_mode_unbounded(self):
        raw = np.array([10.0, -20.0])
        rec = MeasurementRecord(period=1.0, raw=raw, unwrapped=raw,
                                noise_std=0.0, mode=Mode.PLAIN)
        assert len(rec) == 2
