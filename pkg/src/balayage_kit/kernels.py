"""Closed-form kernel evaluation.

Harmonic measure of intervals, genus-q Poisson kernels, genus-q harmonic
charges of boundary segments (upper half-plane, general angle, slit plane),
the Weierstrass-Hadamard kernel, and the pointwise/interval bound checks.

Everything here is a finite formula; no quadrature. Branch conventions,
stated once and enforced below: slit-plane arguments use arg z in (0, 2pi)
so that w = sqrt(z) has arg w in (0, pi); the power map of an angle uses
the branch positive on the ray alpha.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, GeometryError, RegimeError, SingularityError

__all__ = [
    "AngleSpec",
    "KernelEval",
    "BoundReport",
    "harmonic_measure_interval",
    "poisson_kernel",
    "harmonic_charge_interval",
    "harmonic_charge_slitplane",
    "harmonic_charge_angle",
    "hadamard_kernel",
    "sqrt_slit",
    "angle_reduce",
    "sandwich_bounds",
    "kernel_bounds_check",
    "interval_bounds_check",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AngleSpec:
    """Open angle from ray alpha to ray beta, aperture in (0, 2pi]."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        aperture = self.beta - self.alpha
        if not 0.0 < aperture <= _TWO_PI * (1.0 + 1e-12):
            raise GeometryError(
                f"aperture beta - alpha = {aperture} outside (0, 2pi]")

    @property
    def aperture(self) -> float:
        return self.beta - self.alpha

    @property
    def exponent(self) -> float:
        """Power-map exponent pi/(beta - alpha) sending the angle to C^up."""
        return math.pi / self.aperture


@dataclass(frozen=True)
class KernelEval:
    """Evaluation context tag: genus plus the domain the kernel lives on."""

    genus: int
    context: str  # "half-plane" | "angle" | "slit-plane"

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise ValueError("genus must be a nonnegative integer")
        if self.context not in ("half-plane", "angle", "slit-plane"):
            raise ValueError(f"unknown context {self.context!r}")


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    bound: float
    passed: bool
    regime: str


def harmonic_measure_interval(z: complex, t1: float, t2: float) -> float:
    """Harmonic measure omega(z, [t1, t2]) of the upper half-plane.

    For Im z > 0 this is the interval's subtended angle divided by pi;
    for real z it is the indicator of z in [t1, t2]. Infinite endpoints
    are allowed (the angle to -inf is 0, to +inf is pi).
    """
    if not t1 < t2:
        raise ValueError("need t1 < t2")
    z = complex(z)
    if z.imag < 0:
        raise ValueError("z must lie in the closed upper half-plane")
    if z.imag == 0:
        return 1.0 if t1 <= z.real <= t2 else 0.0
    th1 = 0.0 if math.isinf(t1) else cmath.phase(z - t1)
    th2 = math.pi if math.isinf(t2) else cmath.phase(z - t2)
    return (th2 - th1) / math.pi


def poisson_kernel(q: int, t, z: complex):
    """Genus-q Poisson kernel (1/pi) Im(t^q / (z^q (t - z))).

    q = 0 is the classical kernel y/(pi((t-x)^2 + y^2)). For real z the
    value is 0 (the kernel extends by zero off the pole). t may be a
    numpy array; the pole t = z and (for q >= 1) z = 0 raise.
    """
    if q < 0:
        raise ValueError("genus must be nonnegative")
    z = complex(z)
    if z.imag < 0:
        raise ValueError("z must lie in the closed upper half-plane")
    if q >= 1 and z == 0:
        raise SingularityError("poisson_kernel: z = 0 with genus >= 1")
    t_arr = np.asarray(t, dtype=float)
    if z.imag == 0.0 and np.any(t_arr == z.real):
        raise SingularityError(f"poisson_kernel: pole at t = z = {z.real}")
    # (t/z)^q instead of t^q/z^q keeps intermediate magnitudes tame.
    val = np.imag((t_arr / z) ** q / (t_arr - z)) / math.pi
    if np.ndim(t) == 0:
        return float(val)
    return val


def harmonic_charge_interval(q: int, z: complex, t1: float, t2: float) -> float:
    """Genus-q harmonic charge Omega^[q](z, [t1, t2]), closed form.

    omega(z, [t1, t2]) + (1/pi) sum_{k=1..q} Im(z^-k) (t2^k - t1^k)/k.
    Integrates poisson_kernel(q, ., z) over [t1, t2] without quadrature.
    Real z gives the indicator of z in [t1, t2]; a degenerate interval
    gives 0. Infinite endpoints are admitted only for q = 0.
    """
    if q < 0:
        raise ValueError("genus must be nonnegative")
    z = complex(z)
    if z.imag < 0:
        raise ValueError("z must lie in the closed upper half-plane")
    if q >= 1 and z == 0:
        raise SingularityError("harmonic_charge_interval: z = 0 with genus >= 1")
    if t1 == t2:
        return 0.0
    if not t1 < t2:
        raise ValueError("need t1 <= t2")
    if (math.isinf(t1) or math.isinf(t2)) and q >= 1:
        raise ValueError("infinite endpoints require genus 0")
    if z.imag == 0:
        return 1.0 if t1 <= z.real <= t2 else 0.0
    val = harmonic_measure_interval(z, t1, t2)
    if q:
        zinv = 1.0 / z
        zk = complex(1.0)
        for k in range(1, q + 1):
            zk *= zinv
            val += zk.imag * (t2 ** k - t1 ** k) / (k * math.pi)
    return val


def _charge_interval_upper(q: int, w: np.ndarray, t1: float, t2: float) -> np.ndarray:
    """Vectorized Omega^[q](w, [t1, t2]) for strictly upper atoms w.

    No input validation; the scalar route is the reference in tests.
    """
    val = (np.angle(w - t2) - np.angle(w - t1)) / math.pi
    if q:
        zinv = 1.0 / w
        zk = np.ones_like(w)
        for k in range(1, q + 1):
            zk = zk * zinv
            val = val + zk.imag * (t2 ** k - t1 ** k) / (k * math.pi)
    return val


def sqrt_slit(z: complex) -> complex:
    """sqrt on the slit plane: arg z in (0, 2pi) maps to arg w in (0, pi)."""
    z = complex(z)
    if z == 0 or (z.imag == 0.0 and z.real >= 0.0):
        raise BranchError(f"z = {z} lies on the branch cut R+ (or at 0)")
    theta = math.atan2(z.imag, z.real) % _TWO_PI
    return math.sqrt(abs(z)) * cmath.exp(0.5j * theta)


def harmonic_charge_slitplane(q: int, z: complex, x: float) -> float:
    """Omega^[q] of [0, x] for the plane slit along R+.

    Substituting w = sqrt(z) (branch of sqrt_slit) turns the slit-plane
    charge into the half-plane charge of the symmetric interval
    [-sqrt(x), sqrt(x)]; even-k correction terms cancel there.
    """
    if x < 0:
        raise ValueError("need x >= 0")
    w = sqrt_slit(z)
    if x == 0.0:
        return 0.0
    rx = math.sqrt(x)
    return harmonic_charge_interval(q, w, -rx, rx)


def angle_reduce(z: complex, angle: AngleSpec) -> complex:
    """Power map z -> (z e^{-i alpha})^{pi/(beta-alpha)} into C^up.

    Uses the branch positive on the ray alpha; raises GeometryError for
    z outside the open angle (boundary rays included).
    """
    z = complex(z)
    if z == 0:
        raise GeometryError("origin is not inside any open angle")
    phi = (cmath.phase(z) - angle.alpha) % _TWO_PI
    if not 0.0 < phi < angle.aperture:
        raise GeometryError(
            f"z = {z} (offset argument {phi}) outside the open angle "
            f"({angle.alpha}, {angle.beta})")
    e = angle.exponent
    return cmath.exp(e * (math.log(abs(z)) + 1j * phi))


def harmonic_charge_angle(q: int, z: complex, side: str, t1: float, t2: float,
                          angle: AngleSpec) -> float:
    """Omega^[q] of a segment on a boundary ray of the angle (alpha, beta).

    The segment is {t e^{i alpha} : t in [t1, t2]} for side "alpha" or the
    analogous one for side "beta". The angle is reduced to the upper
    half-plane by angle_reduce; side alpha lands on R+, side beta on R-.
    """
    if side not in ("alpha", "beta"):
        raise ValueError("side must be 'alpha' or 'beta'")
    if not 0.0 <= t1 < t2:
        raise ValueError("need 0 <= t1 < t2")
    w = angle_reduce(z, angle)
    e = angle.exponent
    tau1, tau2 = t1 ** e, t2 ** e
    if side == "alpha":
        return harmonic_charge_interval(q, w, tau1, tau2)
    return harmonic_charge_interval(q, w, -tau2, -tau1)


def hadamard_kernel(q: int, zeta: complex, z: complex) -> float:
    """Weierstrass-Hadamard kernel K_q(zeta, z).

    log|1 - z/zeta| + sum_{k=1..q} Re((z/zeta)^k)/k. With this summand the
    kernel decays like O(|zeta|^{-q-1}) for fixed z, which the
    reproduction identity and tail truncation rely on.
    """
    if q < 0:
        raise ValueError("genus must be nonnegative")
    zeta = complex(zeta)
    z = complex(z)
    if zeta == 0:
        raise SingularityError("hadamard_kernel: zeta = 0")
    if zeta == z:
        raise SingularityError("hadamard_kernel: logarithmic pole at zeta = z")
    w = z / zeta
    if abs(w) <= 0.5:
        # The direct form subtracts the first q Taylor terms of -log|1-w|
        # and cancels catastrophically for small |w|; sum the tail instead.
        val = 0.0
        wk = w ** (q + 1)
        for k in range(q + 1, q + 64):
            term = wk.real / k
            val -= term
            wk *= w
            if abs(wk) < 1e-30:
                break
        return val
    val = math.log(abs(1.0 - w))
    wk = complex(1.0)
    for k in range(1, q + 1):
        wk *= w
        val += wk.real / k
    return val


def sandwich_bounds(q: int, z: complex, t1: float, t2: float) -> tuple[float, float]:
    """Two-sided envelope for Omega^[q](z, [t1, t2]).

    Returns (lo, hi) with lo <= Omega <= hi for every z in the closed
    upper half-plane except 0: lo = -(t2-t1)/pi * S and
    hi = omega(z,[t1,t2]) + (t2-t1)/pi * S, where
    S = sum_{k=1..q} T^{k-1} |Im z^-k| and T = max(|t1|, |t2|).
    """
    z = complex(z)
    if z == 0:
        raise SingularityError("sandwich_bounds: z = 0")
    if not t1 < t2:
        raise ValueError("need t1 < t2")
    t_big = max(abs(t1), abs(t2))
    s = 0.0
    zinv = 1.0 / z
    zk = complex(1.0)
    for k in range(1, q + 1):
        zk *= zinv
        s += t_big ** (k - 1) * abs(zk.imag)
    width = (t2 - t1) / math.pi
    omega = harmonic_measure_interval(z, t1, t2)
    return -width * s, omega + width * s


def kernel_bounds_check(q: int, t: float, z: complex, a: float) -> BoundReport:
    """Check the pointwise kernel bound in its applicable regime.

    |t| <= a|z|  (regime "small-t"):  |P^[q]| <= |t|^q / (pi (1-a) |z|^{q+1})
    a|t| >= |z|  (regime "large-t"):  |P^[q]| <= |t|^{q-1} / (pi (1-a) |z|^q)

    z in the closed upper half-plane, z not in {0, t}. RegimeError when
    neither regime holds.
    """
    if not 0.0 < a < 1.0:
        raise ValueError("need a in (0, 1)")
    z = complex(z)
    if z == 0:
        raise SingularityError("kernel_bounds_check: z = 0")
    az = abs(z)
    c = math.pi * (1.0 - a)
    if abs(t) <= a * az:
        bound = abs(t) ** q / (c * az ** (q + 1))
        regime = "small-t"
    elif a * abs(t) >= az:
        bound = abs(t) ** (q - 1) / (c * az ** q)
        regime = "large-t"
    else:
        raise RegimeError(
            f"|t| = {abs(t)} vs |z| = {az}: neither |t| <= a|z| nor a|t| >= |z|")
    lhs = abs(poisson_kernel(q, t, z))
    return BoundReport(lhs=lhs, bound=bound, passed=lhs <= bound * (1 + 1e-12),
                       regime=regime)


def interval_bounds_check(q: int, z: complex, t1: float, t2: float,
                          a: float) -> BoundReport:
    """Check the harmonic-charge interval bound in its applicable regime.

    With T = max(|t1|, |t2|):
      T <= a|z|:                    |Omega| <= (t2-t1) 2T^q / (pi (1-a) |z|^{q+1})
      min |t| >= |z|/a and q >= 1:  |Omega| <= (t2-t1) T^{q-1} / (pi (1-a) |z|^q)
    """
    if not 0.0 < a < 1.0:
        raise ValueError("need a in (0, 1)")
    if not t1 < t2:
        raise ValueError("need t1 < t2")
    z = complex(z)
    if z == 0:
        raise SingularityError("interval_bounds_check: z = 0")
    az = abs(z)
    t_big = max(abs(t1), abs(t2))
    t_min = 0.0 if t1 <= 0.0 <= t2 else min(abs(t1), abs(t2))
    c = math.pi * (1.0 - a)
    if t_big <= a * az:
        bound = (t2 - t1) * 2.0 * t_big ** q / (c * az ** (q + 1))
        regime = "near-origin interval"
    elif t_min >= az / a and q >= 1:
        bound = (t2 - t1) * t_big ** (q - 1) / (c * az ** q)
        regime = "far interval"
    else:
        raise RegimeError(
            "neither T <= a|z| nor (min |t| >= |z|/a with q >= 1) holds")
    lhs = abs(harmonic_charge_interval(q, z, t1, t2))
    return BoundReport(lhs=lhs, bound=bound, passed=lhs <= bound * (1 + 1e-12),
                       regime=regime)
