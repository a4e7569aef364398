"""Power-law prior spectra: covariances, quadratic forms and increment bounds.

The prior phase process is stationary, zero-mean and Gaussian with spectral
density ``S(w) = kappa^(p-1) / (|w|^p + gamma^p)``.  Quadrature is the general
engine here; the closed forms the other modules rely on are validated against
it by the verification suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._quad import decade_points, integrate, integrate_oscillatory

__all__ = [
    "PowerLawSpectrum",
    "TailSpectrumBound",
    "QuadraticForm",
    "spectral_density",
    "autocovariance",
    "inverse_quadratic_form",
    "tail_quadratic_form_bound",
    "increment_variance",
    "increment_variance_bound",
]

_EULER_GAMMA = 0.57721566490153286


@dataclass(frozen=True)
class PowerLawSpectrum:
    """Parameters of the prior spectral density kappa^(p-1)/(|w|^p + gamma^p).

    p     : spectral exponent, > 1 (finite prior variance)
    kappa : amplitude scale, units 1/time
    gamma : low-frequency cutoff, units 1/time; must be positive so the
            density stays bounded at w = 0
    """

    p: float
    kappa: float
    gamma: float

    def __post_init__(self):
        if not (self.p > 1.0 and math.isfinite(self.p)):
            raise ValueError(f"spectral exponent p must exceed 1, got {self.p}")
        if not (self.kappa > 0.0 and math.isfinite(self.kappa)):
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if not (self.gamma > 0.0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive, got {self.gamma}")

    @property
    def p3(self) -> float:
        """The cubic (p+1)(p+2)(p+3) appearing in the quadratic-form slope."""
        return (self.p + 1.0) * (self.p + 2.0) * (self.p + 3.0)

    def density_at_zero(self) -> float:
        return self.kappa ** (self.p - 1.0) / self.gamma ** self.p


@dataclass(frozen=True)
class TailSpectrumBound:
    """Profile bounding a spectrum below: G/kappa under kappa*w0, power law above."""

    p: float
    kappa: float
    w0: float
    G: float

    def __post_init__(self):
        if not self.p > 1.0:
            raise ValueError(f"spectral exponent p must exceed 1, got {self.p}")
        if self.kappa <= 0.0 or self.w0 <= 0.0 or self.G <= 0.0:
            raise ValueError("kappa, w0 and G must all be positive")


def spectral_density(spec: PowerLawSpectrum, omega) -> float:
    """Prior spectral density at angular frequency omega (even in omega)."""
    return spec.kappa ** (spec.p - 1.0) / (np.abs(omega) ** spec.p + spec.gamma ** spec.p)


def autocovariance(spec: PowerLawSpectrum, tau: float) -> float:
    """Prior autocovariance (1/pi) * integral of S(w) cos(w tau) over w >= 0.

    Relative tolerance 1e-8 on the scale of the prior variance.  For tau = 0
    this is the prior variance itself.
    """
    tau = abs(float(tau))
    if tau == 0.0:
        return integrate(lambda w: spectral_density(spec, w) / math.pi,
                         0.0, np.inf, rtol=1e-10, tag="autocovariance")
    scale = autocovariance(spec, 0.0)
    return integrate_oscillatory(lambda w: spectral_density(spec, w) / math.pi,
                                 0.0, tau, atol=1e-10 * scale,
                                 tag="autocovariance")


class QuadraticForm(NamedTuple):
    """Leading and full closed forms of the prior quadratic form for the
    squared-sinc probe weight, plus the cubic p3 = (p+1)(p+2)(p+3)."""

    leading: float
    full: float
    p3: float


def inverse_quadratic_form(spec: PowerLawSpectrum, T: float) -> QuadraticForm:
    """Closed form of the inverse-covariance quadratic form at probe scale T.

    With the triangular transform weight of bandwidth 1/T the quadratic form
    evaluates to ``8 pi / (p3 kappa^(p-1) T^(p-1)) + 4 pi gamma^p T / (3 kappa^(p-1))``;
    the first (leading) term is all that survives when gamma*T is small.
    """
    if not T > 0.0:
        raise ValueError(f"T must be positive, got {T}")
    kp = spec.kappa ** (spec.p - 1.0)
    leading = 8.0 * math.pi / (spec.p3 * kp * T ** (spec.p - 1.0))
    full = leading + 4.0 * math.pi * spec.gamma ** spec.p * T / (3.0 * kp)
    return QuadraticForm(leading=leading, full=full, p3=spec.p3)


def quadratic_form_numeric(spec: PowerLawSpectrum, T: float) -> float:
    """Brute-force quadrature of the quadratic form: oracle for the closed form.

    2 pi T^2 * integral over |w| <= 1/T of (1 - |w| T)^2 / S(w).
    """
    if not T > 0.0:
        raise ValueError(f"T must be positive, got {T}")

    def integrand(w):
        return (1.0 - w * T) ** 2 / spectral_density(spec, w)

    val = integrate(integrand, 0.0, 1.0 / T, rtol=1e-10,
                    points=decade_points(spec.gamma / 10.0, 1.0 / T),
                    tag="quadratic form")
    return 4.0 * math.pi * T * T * val


def tail_quadratic_form_bound(tb: TailSpectrumBound, T: float) -> float:
    """Upper bound on the quadratic form for any spectrum above the tail profile.

    4 pi T^2 kappa^2 w0 / G + 8 pi / (p3 kappa^(p-1) T^(p-1)); valid only while
    the crossover kappa*w0 lies inside the band |w| <= 1/T.
    """
    if not T > 0.0:
        raise ValueError(f"T must be positive, got {T}")
    if tb.kappa * tb.w0 > 1.0 / T:
        raise ValueError(
            f"crossover kappa*w0 = {tb.kappa * tb.w0:.3g} exceeds band edge 1/T = {1.0 / T:.3g}"
        )
    p3 = (tb.p + 1.0) * (tb.p + 2.0) * (tb.p + 3.0)
    return (4.0 * math.pi * T * T * tb.kappa ** 2 * tb.w0 / tb.G
            + 8.0 * math.pi / (p3 * tb.kappa ** (tb.p - 1.0) * T ** (tb.p - 1.0)))


def increment_variance(spec: PowerLawSpectrum, delta: float) -> float:
    """Mean-square increment E[(X(t) - X(t+delta))^2] by quadrature.

    Evaluates (2/pi) * integral of S(w) (1 - cos(w delta)) over w >= 0, split
    at the first cosine zero pi/delta: the head uses 2 sin^2(w delta / 2)
    (nonnegative, no cancellation), the tail a plain and an oscillatory piece.
    Relative tolerance 1e-7.
    """
    if delta < 0.0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    if delta == 0.0:
        return 0.0
    B = math.pi / delta

    def head(w):
        s = math.sin(0.5 * w * delta)
        return spectral_density(spec, w) * 2.0 * s * s

    i_head = integrate(head, 0.0, B, rtol=1e-9,
                       points=decade_points(min(spec.gamma, B) / 10.0, B),
                       tag="increment variance head")
    i_tail = integrate(lambda w: spectral_density(spec, w), B, np.inf,
                       rtol=1e-9, tag="increment variance tail")
    i_osc = integrate_oscillatory(lambda w: spectral_density(spec, w), B, delta,
                                  atol=1e-11 * (i_head + i_tail),
                                  tag="increment variance oscillatory tail")
    return (2.0 / math.pi) * (i_head + i_tail - i_osc)


def _cos_bound_coefficient(p: float) -> float:
    """Coefficient -1/(Gamma(p) cos(pi p / 2)) of (kappa delta)^(p-1).

    Equal, by the reflection formula, to -2*Gamma(1-p)*sin(pi p/2)/pi wherever
    the latter is finite; this form has no pole at p = 2 (where it equals 1)
    or p = 4.
    """
    return -1.0 / (math.gamma(p) * math.cos(0.5 * math.pi * p))


def increment_variance_bound(spec: PowerLawSpectrum, delta: float) -> float:
    """Piecewise closed-form upper bound on the mean-square increment.

    1 < p < 3 : C(p) (kappa delta)^(p-1) with C(p) = -1/(Gamma(p) cos(pi p/2)),
                from bounding the density by kappa^(p-1)/|w|^p (C(2) = 1).
    p = 3     : (kappa delta)^2/pi * [log(1/(gamma delta)) + 11/6 - EulerGamma
                + (gamma delta)^2/4], from the flat-top bounding density;
                requires gamma*delta < 1.
    3 < p < 5 : p (kappa delta)^2 (gamma/kappa)^(3-p) / (3 pi (p-3))
                + C(p) (kappa delta)^(p-1)
                + (kappa delta)^4 (gamma/kappa)^(5-p) / (12 pi (5-p)),
                requires gamma*delta < 1; the last term is the explicit
                remainder of the cosine expansion (for p >= 5 that expansion
                needs more subtracted terms, so such p are rejected).
    """
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    p = spec.p
    kd = spec.kappa * delta
    if p < 3.0:
        return _cos_bound_coefficient(p) * kd ** (p - 1.0)
    gd = spec.gamma * delta
    if gd >= 1.0:
        raise ValueError(
            f"bound valid only for gamma*delta < 1 when p >= 3 (got {gd:.3g})"
        )
    if p == 3.0:
        bracket = math.log(1.0 / gd) + 11.0 / 6.0 - _EULER_GAMMA + 0.25 * gd * gd
        return kd * kd / math.pi * bracket
    if p >= 5.0:
        raise ValueError(f"bound not available for p >= 5, got {p}")
    ratio = spec.gamma / spec.kappa
    low = kd * kd * ratio ** (3.0 - p) * p / (3.0 * math.pi * (p - 3.0))
    mid = _cos_bound_coefficient(p) * kd ** (p - 1.0)
    slack = kd ** 4 * ratio ** (5.0 - p) / (12.0 * math.pi * (5.0 - p))
    return low + mid + slack
