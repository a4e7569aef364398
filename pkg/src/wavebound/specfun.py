"""Special functions and the two transcendental constants used everywhere else.

Everything here is a pure function of its arguments.  The two constants (the
cosine-bound slope and the magnitude of the first negative Airy root) are
solved for once at first use and cached; no decimal literals are hard-coded.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BoundConstants",
    "triangle",
    "sinc",
    "modulo_2pi",
    "erfc",
    "digamma",
    "solve_lambda",
    "airy_root_magnitude",
    "constants",
]

TWO_PI = 2.0 * math.pi

# Bernoulli-number coefficients B_{2n}/(2n) of the asymptotic digamma series.
_DIGAMMA_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def triangle(z: float) -> float:
    """Triangle function max(1 - |z|, 0)."""
    return max(1.0 - abs(z), 0.0)


def sinc(x):
    """sin(x)/x with the removable singularity at 0 filled in.

    Below |x| = 1e-4 a four-term Taylor series is used; straight division
    there would lose digits to cancellation in sin(x).  Accepts scalars or
    ndarrays.
    """
    scalar = np.isscalar(x)
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    with np.errstate(all="ignore"):
        x2 = np.where(small, x * x, 0.0)
        series = 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
        direct = np.sin(x) / np.where(small, 1.0, x)
    out = np.where(small, series, direct)
    return float(out) if scalar else out


def modulo_2pi(eps):
    """Reduce an angle (or array of angles) to the half-open interval (-pi, pi].

    Computed as ``eps + 2*pi*floor(1/2 - eps/(2*pi))``, which maps -pi to +pi.
    """
    scalar = np.isscalar(eps)
    eps = np.asarray(eps, dtype=float)
    out = eps + TWO_PI * np.floor(0.5 - eps / TWO_PI)
    return float(out) if scalar else out


def erfc(z: float) -> float:
    """Complementary error function (2/sqrt(pi)) * integral of exp(-t^2) from z."""
    return math.erfc(z)


def digamma(x: float) -> float:
    """Digamma function psi(x) = Gamma'(x)/Gamma(x) for x > 0.

    Upward recurrence psi(x+1) = psi(x) + 1/x shifts the argument above 10,
    where the asymptotic series ln x - 1/(2x) - sum B_2n/(2n x^2n) is accurate
    to well below 1e-12.
    """
    if not (x > 0.0):
        raise ValueError(f"digamma requires x > 0, got {x}")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    power = inv2
    for coeff in _DIGAMMA_ASYMPTOTIC:
        tail += coeff * power
        power *= inv2
    return acc + math.log(x) - 0.5 / x - tail


def solve_lambda() -> float:
    """Slope of the tightest global linear lower bound on cosine.

    Returns the root in (0, 1) of ``l*(pi - arcsin l) = 1 + sqrt(1 - l^2)``,
    which makes the line 1 - l*|theta| tangent to cos(theta) from below.
    Bisection to an interval of width 1e-14.
    """

    def f(l: float) -> float:
        return l * (math.pi - math.asin(l)) - 1.0 - math.sqrt(1.0 - l * l)

    lo, hi = 1e-9, 1.0 - 1e-12
    if not (f(lo) < 0.0 < f(hi)):
        raise RuntimeError("cosine-slope bracketing failed")
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _airy_ai(x: float) -> float:
    """Airy function Ai(x) from its convergent Maclaurin series.

    Ai(x) = c1*f(x) - c2*g(x) with f, g the standard pair of series solutions;
    converges rapidly for the |x| <= 3 range needed for the first root.
    """
    c1 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
    c2 = 3.0 ** (-1.0 / 3.0) / math.gamma(1.0 / 3.0)
    x3 = x ** 3
    f_term, f_sum = 1.0, 1.0
    g_term, g_sum = x, x
    k = 0
    while max(abs(f_term), abs(g_term)) > 1e-18:
        f_term *= x3 / ((3 * k + 2) * (3 * k + 3))
        g_term *= x3 / ((3 * k + 3) * (3 * k + 4))
        f_sum += f_term
        g_sum += g_term
        k += 1
        if k > 200:  # |x| <= 3 converges in ~20 terms
            raise RuntimeError("Airy series did not converge")
    return c1 * f_sum - c2 * g_sum


def airy_root_magnitude() -> float:
    """|z_A|: magnitude of the first negative root of the Airy function Ai.

    Bisection on the series evaluation over (-3, -2), to an interval of 1e-12.
    """
    lo, hi = -3.0, -2.0
    if not (_airy_ai(lo) < 0.0 < _airy_ai(hi)):
        raise RuntimeError("Airy root bracketing failed")
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if _airy_ai(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return -0.5 * (lo + hi)


@dataclass(frozen=True)
class BoundConstants:
    """The two solved constants shared by the bound and estimator formulas.

    lambda_slope : slope of the linear cosine lower bound, in (0, 1)
    airy_root_mag: |z_A|, magnitude of the first negative Airy-function root
    """

    lambda_slope: float
    airy_root_mag: float

    def __post_init__(self):
        l = self.lambda_slope
        residual = abs(l * (math.pi - math.asin(l)) - 1.0 - math.sqrt(1.0 - l * l))
        if not (0.0 < l < 1.0) or residual > 1e-12:
            raise ValueError(f"inconsistent cosine slope {l} (residual {residual:.3g})")
        if not (2.3 < self.airy_root_mag < 2.4):
            raise ValueError(f"Airy root magnitude {self.airy_root_mag} out of range")

    @property
    def airy_root_cubed(self) -> float:
        return self.airy_root_mag ** 3


@functools.lru_cache(maxsize=1)
def constants() -> BoundConstants:
    """Solve and cache the package-wide constants."""
    return BoundConstants(lambda_slope=solve_lambda(),
                          airy_root_mag=airy_root_magnitude())
