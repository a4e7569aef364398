"""Lower-bound pipeline for waveform phase estimation.

Combines the prior-overlap term (erfc of a shifted Gaussian) with the quantum
fidelity term (triangle in the shift) into the piecewise bound Z, its
periodic-distortion variant Z_pi capped at pi, and the final power-law
scaling bound with coefficient c_Z.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._quad import integrate
from .errors import RegimeViolationError
from .specfun import constants, erfc, triangle
from .spectrum import PowerLawSpectrum, inverse_quadratic_form

__all__ = [
    "ProbeConfig",
    "Branch",
    "BoundReport",
    "characteristic_times",
    "fidelity_lower_bound",
    "coherent_fidelity",
    "gaussian_min_overlap",
    "z_bound",
    "z_bound_periodic",
    "z_numeric_oracle",
    "scaling_exponent",
    "scaling_coefficient",
    "optimal_probe_scale",
    "waveform_lower_bound",
]

SQRT_PI = math.sqrt(math.pi)

# Safety margin on the "gamma * T small" regime check: the closed-form bound
# drops the gamma-dependent term of the quadratic form, which is only honest
# well inside the inequality, not merely on the right side of it.
_REGIME_MARGIN = 0.5


@dataclass(frozen=True)
class ProbeConfig:
    """Measurement resources: mean photon flux and pulse repetition period."""

    flux: float
    pulse_period: float

    def __post_init__(self):
        if not (self.flux > 0.0 and math.isfinite(self.flux)):
            raise ValueError(f"flux must be positive, got {self.flux}")
        if not (self.pulse_period > 0.0 and math.isfinite(self.pulse_period)):
            raise ValueError(f"pulse_period must be positive, got {self.pulse_period}")


class Branch(enum.Enum):
    """Which piece of the piecewise bound is active."""

    NOISE_LIMITED = "noise_limited"    # fidelity triangle ends first
    PRIOR_LIMITED = "prior_limited"    # prior-overlap triangle ends first
    PI_CAPPED = "pi_capped"            # periodic cap at pi is the binding limit


@dataclass(frozen=True)
class BoundReport:
    """Characteristic times, bound value and scaling law at the optimal probe scale."""

    tau0: float
    tauF: float
    branch: Branch
    z_value: float
    scaling_bound: float
    t_star: float

    def __post_init__(self):
        if min(self.tau0, self.tauF) <= 0.0 or min(self.z_value, self.scaling_bound) < 0.0:
            raise ValueError("inconsistent bound report")


def characteristic_times(spec: PowerLawSpectrum, probe: ProbeConfig) -> tuple[float, float]:
    """Shift scales where the overlap and fidelity bounds hit zero.

    tau0 = sqrt(8/Q) with Q the leading quadratic-form term (the gamma term is
    dropped; callers must check the small-gamma*T regime separately), and
    tauF = 1/(4 pi lambda T N) for the squared-sinc probe weight, which puts
    total weighted photon number 2 pi T N under the fidelity bound.
    """
    q = inverse_quadratic_form(spec, probe.pulse_period).leading
    tau0 = math.sqrt(8.0 / q)
    tauF = 1.0 / (4.0 * math.pi * constants().lambda_slope
                  * probe.pulse_period * probe.flux)
    return tau0, tauF


def fidelity_lower_bound(tau: float, tauF: float) -> float:
    """Fidelity of states differing by shift tau: at least triangle(tau/tauF)."""
    if tau < 0.0 or tauF <= 0.0:
        raise ValueError("tau must be >= 0 and tauF > 0")
    return triangle(tau / tauF)


def coherent_fidelity(mean_photons: Sequence[float], v: Sequence[float],
                      tau: float) -> float:
    """Exact fidelity between shifted product coherent states: test oracle.

    For per-mode mean photon numbers n_j and shift direction v, the fidelity
    is ``exp(-2 sum_j n_j (1 - cos(tau v_j)))`` — the squared magnitude of the
    coherent-state characteristic function of the photon-number vector.
    """
    n = np.asarray(mean_photons, dtype=float)
    v = np.asarray(v, dtype=float)
    if n.shape != v.shape:
        raise ValueError(f"length mismatch: {n.shape} vs {v.shape}")
    if np.any(n < 0.0):
        raise ValueError("mean photon numbers must be nonnegative")
    return float(np.exp(-2.0 * np.sum(n * (1.0 - np.cos(tau * v)))))


def gaussian_min_overlap(tau: float, tau0: float) -> float:
    """Integrated min of a Gaussian prior and its tau-shifted copy: erfc(tau/tau0)."""
    if tau < 0.0 or tau0 <= 0.0:
        raise ValueError("tau must be >= 0 and tau0 > 0")
    return erfc(tau / tau0)


def _z_noise_limited(tau0: float, tauF: float) -> float:
    return tauF * tauF * (1.0 / 20.0 - tauF / (21.0 * SQRT_PI * tau0))


def _z_prior_limited(tau0: float, tauF: float) -> float:
    return (math.pi * tau0 * tau0 / 4.0) * (
        1.0 / 12.0 - (2.0 / 35.0) * math.sqrt(SQRT_PI * tau0 / (2.0 * tauF)))


def _z_pi_capped(tau0: float, tauF: float) -> float:
    return math.pi ** 2 * (0.25 - SQRT_PI / (3.0 * tau0)
                           - SQRT_PI / (5.0 * math.sqrt(tauF))
                           + 2.0 * math.pi / (7.0 * tau0 * math.sqrt(tauF)))


def z_bound(tau0: float, tauF: float) -> tuple[float, Branch]:
    """Piecewise closed form of the shift integral over (0, inf).

    Z = (1/2) * integral of tau * triangle(2 tau/(sqrt(pi) tau0))
        * triangle(sqrt(tau/tauF)) dtau.  The branch is picked by which
    triangle support ends first, at tauF vs sqrt(pi) tau0 / 2.
    """
    if tau0 <= 0.0 or tauF <= 0.0:
        raise ValueError("tau0 and tauF must be positive")
    if tauF <= SQRT_PI * tau0 / 2.0:
        return _z_noise_limited(tau0, tauF), Branch.NOISE_LIMITED
    return _z_prior_limited(tau0, tauF), Branch.PRIOR_LIMITED


def z_bound_periodic(tau0: float, tauF: float) -> tuple[float, Branch]:
    """Three-branch variant of ``z_bound`` with the shift integral capped at pi.

    Coincides exactly with ``z_bound`` whenever either triangle support ends
    at or below pi; otherwise the cap itself terminates the integral.
    """
    if tau0 <= 0.0 or tauF <= 0.0:
        raise ValueError("tau0 and tauF must be positive")
    if min(SQRT_PI * tau0 / 2.0, tauF) <= math.pi:
        return z_bound(tau0, tauF)
    return _z_pi_capped(tau0, tauF), Branch.PI_CAPPED


def z_numeric_oracle(tau0: float, tauF: float, tau_max: float) -> float:
    """Brute-force quadrature of the shift integral, cut off at tau_max.

    Independent oracle for ``z_bound`` (tau_max = inf) and
    ``z_bound_periodic`` (tau_max = pi); relative tolerance 1e-9.
    """
    if tau0 <= 0.0 or tauF <= 0.0 or tau_max <= 0.0:
        raise ValueError("tau0, tauF and tau_max must be positive")
    support = SQRT_PI * tau0 / 2.0
    upper = min(support, tauF, tau_max)

    def integrand(tau):
        return 0.5 * tau * triangle(2.0 * tau / (SQRT_PI * tau0)) \
            * triangle(math.sqrt(tau / tauF))

    return integrate(integrand, 0.0, upper, rtol=1e-11, tag="Z oracle")


def scaling_exponent(p: float) -> float:
    """Exponent 2(p-1)/(p+1) of the flux in the scaling law."""
    return 2.0 * (p - 1.0) / (p + 1.0)


def scaling_coefficient(p: float) -> float:
    """Dimensionless constant c_Z of the lower bound c_Z (kappa/N)^(2(p-1)/(p+1))."""
    if not p > 1.0:
        raise ValueError(f"p must exceed 1, got {p}")
    p3 = (p + 1.0) * (p + 2.0) * (p + 3.0)
    lam = constants().lambda_slope
    return (11.0 / 420.0) * (p3 / 4.0) ** (2.0 / (p + 1.0)) \
        * (1.0 / (4.0 * math.pi * lam)) ** scaling_exponent(p)


def optimal_probe_scale(spec: PowerLawSpectrum, flux: float) -> float:
    """Probe time scale T that balances the two triangles (tauF = sqrt(pi) tau0 / 2)."""
    lam = constants().lambda_slope
    return (1.0 / (4.0 * math.pi ** 2 * lam ** 2 * spec.p3
                   * spec.kappa ** (spec.p - 1.0) * flux ** 2)) ** (1.0 / (spec.p + 1.0))


def waveform_lower_bound(spec: PowerLawSpectrum, flux: float) -> BoundReport:
    """Time-averaged mean-square-error lower bound at the optimal probe scale.

    Evaluates the characteristic times at the balancing scale t_star, checks
    that gamma * t_star is small enough for the dropped quadratic-form term
    (raising RegimeViolationError otherwise), and reports the bound
    c_Z (kappa/flux)^(2(p-1)/(p+1)) together with the Z value it came from.
    """
    if not (flux > 0.0 and math.isfinite(flux)):
        raise ValueError(f"flux must be positive, got {flux}")
    t_star = optimal_probe_scale(spec, flux)
    threshold = _REGIME_MARGIN * (6.0 / spec.p3) ** (1.0 / spec.p)
    if spec.gamma * t_star >= threshold:
        raise RegimeViolationError(
            f"gamma * t_star = {spec.gamma * t_star:.4g} is not small against "
            f"{(6.0 / spec.p3) ** (1.0 / spec.p):.4g}; the gamma-free bound "
            "does not apply"
        )
    tau0, tauF = characteristic_times(spec, ProbeConfig(flux=flux, pulse_period=t_star))
    z_value, branch = z_bound(tau0, tauF)
    bound = scaling_coefficient(spec.p) * (spec.kappa / flux) ** scaling_exponent(spec.p)
    return BoundReport(tau0=tau0, tauF=tauF, branch=branch, z_value=z_value,
                       scaling_bound=bound, t_star=t_star)
