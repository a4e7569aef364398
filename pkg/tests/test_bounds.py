"""Bound pipeline: branch values, oracle agreement, scaling constants."""
import math

import numpy as np
import pytest

from wavebound.bounds import (
    Branch,
    ProbeConfig,
    characteristic_times,
    coherent_fidelity,
    fidelity_lower_bound,
    gaussian_min_overlap,
    optimal_probe_scale,
    scaling_coefficient,
    scaling_exponent,
    waveform_lower_bound,
    z_bound,
    z_bound_periodic,
    z_numeric_oracle,
)
from wavebound.errors import RegimeViolationError
from wavebound.specfun import constants, erfc, triangle
from wavebound.spectrum import PowerLawSpectrum

SQRT_PI = math.sqrt(math.pi)


class TestCharacteristicTimes:
    def test_reference_point(self):
        # p=2, kappa=1, T=1, flux=1: tau0 = sqrt(60/pi), tauF = 1/(4 pi lambda)
        spec = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=1e-9)
        tau0, tauF = characteristic_times(spec, ProbeConfig(flux=1.0, pulse_period=1.0))
        assert tau0 == pytest.approx(math.sqrt(60.0 / math.pi), rel=1e-12)
        assert tauF == pytest.approx(
            1.0 / (4.0 * math.pi * constants().lambda_slope), rel=1e-12)

    def test_tau0_power_law_in_period(self):
        spec = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=1e-9)
        t1, _ = characteristic_times(spec, ProbeConfig(flux=1.0, pulse_period=1.0))
        t2, _ = characteristic_times(spec, ProbeConfig(flux=1.0, pulse_period=2.0))
        assert t2 / t1 == pytest.approx(math.sqrt(2.0), rel=1e-12)

    def test_tauF_halves_when_flux_doubles(self):
        spec = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=1e-9)
        _, f1 = characteristic_times(spec, ProbeConfig(flux=1.0, pulse_period=1.0))
        _, f2 = characteristic_times(spec, ProbeConfig(flux=2.0, pulse_period=1.0))
        assert f2 == pytest.approx(f1 / 2.0, rel=1e-12)


class TestFidelityLowerBound:
    def test_endpoints(self):
        assert fidelity_lower_bound(0.0, 1.0) == 1.0
        assert fidelity_lower_bound(1.0, 1.0) == 0.0
        assert fidelity_lower_bound(0.5, 1.0) == 0.5


class TestCoherentFidelity:
    def test_zero_shift(self):
        assert coherent_fidelity([1.0, 2.0], [1.0, -1.0], 0.0) == 1.0

    def test_single_mode_pi(self):
        assert coherent_fidelity([1.0], [1.0], math.pi) == \
            pytest.approx(math.exp(-4.0), rel=1e-12)

    def test_dominates_triangle_bound(self):
        lam = constants().lambda_slope
        for nbar in np.logspace(-1.0, 2.0, 12):
            tauF = 1.0 / (2.0 * lam * nbar)
            for tau in np.linspace(0.0, 3.0 * tauF, 50):
                assert coherent_fidelity([nbar], [1.0], float(tau)) >= \
                    triangle(tau / tauF) - 1e-12

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            coherent_fidelity([1.0, 2.0], [1.0], 0.1)

    def test_negative_photons_rejected(self):
        with pytest.raises(ValueError):
            coherent_fidelity([-1.0], [1.0], 0.1)


class TestGaussianMinOverlap:
    def test_zero_shift(self):
        assert gaussian_min_overlap(0.0, 1.0) == 1.0

    def test_unit_ratio(self):
        assert gaussian_min_overlap(1.0, 1.0) == pytest.approx(erfc(1.0), rel=1e-15)

    def test_dominates_triangle(self):
        for tau in np.linspace(0.0, 5.0, 200):
            assert gaussian_min_overlap(float(tau), 1.0) >= \
                triangle(2.0 * tau / SQRT_PI) - 1e-12


class TestZBound:
    def test_branch_boundary_value(self):
        value, branch = z_bound(2.0, SQRT_PI)
        assert value == pytest.approx(11.0 * math.pi / 420.0, rel=1e-14)
        assert branch is Branch.NOISE_LIMITED

    def test_both_branch_expressions_agree_at_boundary(self):
        for tau0 in (0.01, 1.0, 50.0):
            tauF = SQRT_PI * tau0 / 2.0
            noise = tauF ** 2 * (1.0 / 20.0 - tauF / (21.0 * SQRT_PI * tau0))
            prior = (math.pi * tau0 ** 2 / 4.0) * (1.0 / 12.0 - 2.0 / 35.0)
            assert noise == pytest.approx(prior, rel=1e-12)
            assert noise == pytest.approx(11.0 * tauF ** 2 / 420.0, rel=1e-12)

    def test_small_tauF_limit(self):
        value, _ = z_bound(1e6, 1.0)
        assert value == pytest.approx(1.0 / 20.0, rel=1e-6)

    def test_vanishing_tauF(self):
        value, _ = z_bound(1.0, 1e-12)
        assert value == pytest.approx(0.0, abs=1e-24)

    def test_matches_oracle_on_grid(self):
        for tau0 in np.logspace(-2, 2, 6):
            for tauF in np.logspace(-2, 2, 6):
                closed, _ = z_bound(tau0, tauF)
                oracle = z_numeric_oracle(tau0, tauF, math.inf)
                assert closed == pytest.approx(oracle, rel=1e-8)

    def test_monotone(self):
        grid = np.logspace(-1, 1, 40)
        vals = [z_bound(1.0, tf)[0] for tf in grid]
        assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))
        vals = [z_bound(t0, 1.0)[0] for t0 in grid]
        assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


class TestZBoundPeriodic:
    def test_equals_plain_when_small(self):
        assert z_bound_periodic(0.5, 0.3) == z_bound(0.5, 0.3)

    def test_third_branch_matches_oracle(self):
        value, branch = z_bound_periodic(100.0, 100.0)
        assert branch is Branch.PI_CAPPED
        assert value == pytest.approx(
            z_numeric_oracle(100.0, 100.0, math.pi), rel=1e-9)

    def test_matches_capped_oracle_on_grid(self):
        for tau0 in np.logspace(-2, 2, 6):
            for tauF in np.logspace(-2, 2, 6):
                closed, _ = z_bound_periodic(tau0, tauF)
                oracle = z_numeric_oracle(tau0, tauF, math.pi)
                assert closed == pytest.approx(oracle, rel=1e-8)

    def test_cap_boundary_continuity(self):
        # tauF = pi with wide prior support: capped and plain branches touch
        from wavebound.bounds import _z_noise_limited, _z_pi_capped, _z_prior_limited
        for tau0 in (4.0, 20.0, 300.0):
            a = _z_noise_limited(tau0, math.pi)
            b = _z_pi_capped(tau0, math.pi)
            assert a == pytest.approx(b, rel=1e-10)
        tau0_edge = 2.0 * SQRT_PI
        for tauF in (3.5, 30.0):
            a = _z_prior_limited(tau0_edge, tauF)
            b = _z_pi_capped(tau0_edge, tauF)
            assert a == pytest.approx(b, rel=1e-10)


class TestZNumericOracle:
    def test_boundary_case(self):
        assert z_numeric_oracle(2.0, SQRT_PI, math.inf) == \
            pytest.approx(11.0 * math.pi / 420.0, rel=1e-9)

    def test_prior_limited_case(self):
        closed, branch = z_bound(1.0, 10.0)
        assert branch is Branch.PRIOR_LIMITED
        assert z_numeric_oracle(1.0, 10.0, math.inf) == \
            pytest.approx(closed, rel=1e-9)


class TestScalingConstants:
    def test_exponent_p2(self):
        assert scaling_exponent(2.0) == pytest.approx(2.0 / 3.0, rel=1e-15)

    def test_cz_p2_value(self):
        lam = constants().lambda_slope
        expected = (11.0 / 420.0) * 15.0 ** (2.0 / 3.0) \
            * (4.0 * math.pi * lam) ** (-2.0 / 3.0)
        assert scaling_coefficient(2.0) == pytest.approx(expected, rel=1e-12)
        assert scaling_coefficient(2.0) == pytest.approx(0.0365, abs=5e-5)


class TestWaveformLowerBound:
    def test_p2_reference_values(self):
        spec = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=1e-4)
        rep = waveform_lower_bound(spec, 1.0)
        assert rep.scaling_bound == pytest.approx(scaling_coefficient(2.0), rel=1e-12)
        rep100 = waveform_lower_bound(spec, 100.0)
        assert rep100.scaling_bound == pytest.approx(
            scaling_coefficient(2.0) * 100.0 ** (-2.0 / 3.0), rel=1e-12)

    def test_balance_relation_at_t_star(self):
        for p, flux in ((1.5, 1e3), (2.0, 1e4), (3.0, 1e5)):
            spec = PowerLawSpectrum(p=p, kappa=0.8, gamma=1e-4)
            rep = waveform_lower_bound(spec, flux)
            assert rep.tauF == pytest.approx(SQRT_PI * rep.tau0 / 2.0, rel=1e-10)
            assert rep.z_value == pytest.approx(rep.scaling_bound, rel=1e-10)
            assert rep.t_star == pytest.approx(optimal_probe_scale(spec, flux),
                                               rel=1e-15)

    def test_below_achievable_coefficient(self):
        from wavebound.estimator import achievable_coefficient
        for p in (1.2, 1.5, 2.0, 3.0, 4.0, 6.0):
            assert scaling_coefficient(p) < achievable_coefficient(p)

    def test_regime_violation_raises(self):
        spec = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=10.0)
        with pytest.raises(RegimeViolationError):
            waveform_lower_bound(spec, 10.0)

    def test_rejects_bad_flux(self):
        spec = PowerLawSpectrum(p=2.0, kappa=1.0, gamma=0.01)
        with pytest.raises(ValueError):
            waveform_lower_bound(spec, 0.0)


class TestProbeConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            ProbeConfig(flux=0.0, pulse_period=1.0)
        with pytest.raises(ValueError):
            ProbeConfig(flux=1.0, pulse_period=-1.0)
