"""Growth-condition functionals for charges and log-modulus oracles.

Blaschke and Lindelof functionals act on the atoms directly; the Akhiezer
J and Carleman A/B functionals integrate a log-modulus oracle along the
boundary rays of an angle. Finite traces of these quantities stand in for
the asymptotic "= O(1)" statements through boundedness_detector, whose
thresholds (slope_tol = 0.05 per unit log r, ratio_cap = 10) are frozen.

All angles are radians; exponents follow n = (beta - alpha) p / pi, which
must be a positive integer for the angle functionals to make sense.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.integrate

from .errors import (ExponentMismatchError, InsufficientGridError,
                     QuadratureError)
from .kernels import AngleSpec
from .measures import DiscreteCharge
from .quadrature import QuadSpec, _integrate_vec, integrate

__all__ = [
    "LogModulusOracle",
    "DetectorReport",
    "ConditionTrace",
    "CarlemanReport",
    "EstimateReport",
    "blaschke_functional",
    "lindelof_functional",
    "akhiezer_J",
    "carleman_AB",
    "akhiezer_class_verdict",
    "integral_estimate_check",
    "boundedness_detector",
]

_TWO_PI = 2.0 * math.pi


def _angle_exponent(angle: AngleSpec, p: float) -> int:
    n = angle.aperture * p / math.pi
    if abs(n - round(n)) > 1e-9 or round(n) < 1:
        raise ExponentMismatchError(
            f"(beta-alpha)*p/pi = {n} is not a positive integer")
    return int(round(n))


class LogModulusOracle:
    """v(z) = sum masses*log|z - position| + Re H(z) + offset.

    H(z) = sum_k coeffs[k-1] * z^k is the optional harmonic-polynomial
    part; offset absorbs normalization constants of canonical products
    (e.g. the -2 log k terms of sin(pi z)/(pi z)) so that M_v matches the
    normalized function. v is -inf exactly at positive-mass atoms; the
    ray and circle samplers jitter such collisions away.
    """

    def __init__(self, charge: DiscreteCharge | None = None,
                 coeffs: tuple[complex, ...] = (),
                 offset: float = 0.0):
        self.charge = charge if charge is not None else DiscreteCharge(())
        self.coeffs = tuple(complex(c) for c in coeffs)
        self.offset = float(offset)
        self._pos = self.charge.positions
        self._mas = self.charge.masses

    def v(self, z):
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        zz = np.atleast_1d(z)
        out = np.full(zz.shape, self.offset, dtype=float)
        if self._pos.size:
            with np.errstate(divide="ignore"):
                out += np.log(np.abs(zz[..., None] - self._pos)) @ self._mas
        if self.coeffs:
            acc = np.zeros(zz.shape, dtype=complex)
            zp = np.ones(zz.shape, dtype=complex)
            for c in self.coeffs:
                zp = zp * zz
                acc += c * zp
            out += acc.real
        return float(out[0]) if scalar else out

    def on_ray(self, theta: float, t):
        """v(t e^{i theta}) with atom collisions jittered off the ray."""
        t = np.atleast_1d(np.asarray(t, dtype=float)).copy()
        e = complex(math.cos(theta), math.sin(theta))
        vals = np.atleast_1d(self.v(t * e))
        if self._pos.size:
            d = np.abs(t[:, None] * e - self._pos).min(axis=1)
            hit = d < 1e-9
            if hit.any():
                vals[hit] = np.atleast_1d(
                    self.v((t[hit] * (1 + 1e-6) + 1e-12) * e))
        return vals

    def max_on_circle(self, r: float) -> float:
        """M_v(r): angular grid of 720 with two refinement passes."""
        theta = np.linspace(0.0, _TWO_PI, 720, endpoint=False)
        vals = self._circle_vals(r, theta)
        width = _TWO_PI / 720
        for _ in range(2):
            k = int(np.argmax(vals))
            center = theta[k]
            theta = np.linspace(center - width, center + width, 64)
            vals = self._circle_vals(r, theta)
            width = 2 * width / 63
        return float(vals.max())

    def m_plus(self, r: float) -> float:
        return max(0.0, self.max_on_circle(r))

    def _circle_vals(self, r: float, theta):
        z = r * np.exp(1j * theta)
        vals = np.atleast_1d(self.v(z))
        bad = ~np.isfinite(vals)
        if bad.any():
            vals[bad] = np.atleast_1d(
                self.v(r * (1 + 1e-9) * np.exp(1j * (theta[bad] + 1e-7))))
        return vals


@dataclass(frozen=True)
class DetectorReport:
    verdict: str  # bounded | unbounded | inconclusive
    slope: float
    ratio: float


@dataclass(frozen=True)
class ConditionTrace:
    grid: np.ndarray
    values: np.ndarray
    verdict: str
    slope: float
    kind: str = "J"
    cross_verdict: str | None = None

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        if g.size < 16 or g[-1] < 100.0 * g[0]:
            raise InsufficientGridError(
                "condition trace needs >= 16 points over >= 2 decades")


@dataclass(frozen=True)
class CarlemanReport:
    A: float
    B: float
    identity_residual: float


@dataclass(frozen=True)
class EstimateReport:
    grid: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    ratio: np.ndarray
    ratio_cap: float
    passed: bool
    kind: str = field(default="increasing")


def blaschke_functional(charge: DiscreteCharge, angle: AngleSpec, p: float,
                        r0: float, r: float) -> float:
    """|sum_{r0 < |z| <= r, z interior} mass * Im (z e^{-i alpha})^{-p}|.

    The power uses the branch continuous inside the angle: with
    phi = (arg z - alpha) mod 2pi, the summand is -|z|^{-p} sin(p phi).
    """
    if not r > r0 > 0:
        raise ValueError("need r > r0 > 0")
    _angle_exponent(angle, p)
    total = 0.0
    for a in charge.atoms:
        rad = abs(a.position)
        if not r0 < rad <= r:
            continue
        phi = (math.atan2(a.position.imag, a.position.real)
               - angle.alpha) % _TWO_PI
        if 0.0 < phi < angle.aperture:
            total += a.mass * rad ** (-p) * math.sin(p * phi)
    return abs(total)


def lindelof_functional(charge: DiscreteCharge, p: int, r0: float,
                        r: float) -> float:
    """|sum_{r0 < |z| <= r} mass * z^{-p}| for integer p >= 1."""
    if int(p) != p or p < 1:
        raise ValueError("Lindelof exponent must be a positive integer")
    if not r > r0 > 0:
        raise ValueError("need r > r0 > 0")
    total = 0j
    for a in charge.atoms:
        if r0 < abs(a.position) <= r:
            total += a.mass * a.position ** (-int(p))
    return abs(total)


def _ray_cuts(oracle: LogModulusOracle, a: float, b: float,
              cap: int = 60) -> list[float]:
    """Atom radii in (a, b), thinned to at most cap cut points."""
    if not oracle._pos.size:
        return []
    radii = np.unique(np.abs(oracle._pos))
    radii = radii[(radii > a) & (radii < b)]
    if radii.size > cap:
        radii = radii[np.linspace(0, radii.size - 1, cap).astype(int)]
    return list(radii)


def _integrate_pieces(f, a: float, b: float, cuts, abs_tol=1e-9,
                      rel_tol=1e-8, max_doublings=9) -> float:
    # log|.| endpoint singularities at cut radii defeat fixed-order panels;
    # fall back to adaptive Gauss-Kronrod per refractory piece.
    total = 0.0
    lo = a
    for c in [c for c in cuts if a < c < b] + [b]:
        try:
            total += _integrate_vec(f, lo, c, abs_tol=abs_tol,
                                    rel_tol=rel_tol,
                                    max_doublings=max_doublings)[0]
        except QuadratureError:
            val, _ = scipy.integrate.quad(
                lambda t: float(f(np.array([t]))[0]), lo, c,
                epsabs=abs_tol, epsrel=max(rel_tol, 1e-10), limit=200)
            total += val
        lo = c
    return total


def akhiezer_J(v: LogModulusOracle, angle: AngleSpec, p: float, r0: float,
               r: float, q: int | None = None,
               spec: QuadSpec | None = None) -> float:
    """J = int_{r0}^{r} (v(t e^{i alpha}) + (-1)^{q-1} v(t e^{i beta}))
    dt / t^{p+1}, with q = (beta-alpha) p / pi.

    For the slit plane (aperture 2pi, rays coincide) the integrand is
    v(t)(1 + (-1)^{q-1}): identically zero for even q, 2 v(t)/t^{p+1}
    for odd q; the even case returns exact 0 without quadrature.
    """
    n = _angle_exponent(angle, p)
    if q is not None and q != n:
        raise ExponentMismatchError(f"declared q={q} but (beta-alpha)p/pi={n}")
    if not r > r0 > 0:
        raise ValueError("need r > r0 > 0")
    slit = angle.aperture >= _TWO_PI * (1 - 1e-15)
    if slit and n % 2 == 0:
        return 0.0
    sign = (-1.0) ** (n - 1)

    if slit:
        def f(t):
            return 2.0 * v.on_ray(angle.alpha, t) / t ** (p + 1)
    else:
        def f(t):
            return (v.on_ray(angle.alpha, t)
                    + sign * v.on_ray(angle.beta, t)) / t ** (p + 1)

    tol = spec.abs_tol if spec else 1e-9
    return _integrate_pieces(f, r0, r, _ray_cuts(v, r0, r), abs_tol=tol)


def carleman_AB(v: LogModulusOracle, angle: AngleSpec, p: float, r0: float,
                r: float, spec: QuadSpec | None = None) -> CarlemanReport:
    """Carleman functionals A and B for the angle, plus the A identity.

    A = (p/2pi) int_{r0}^r (t^{-p} - t^p r^{-2p})(v_alpha + s v_beta) dt/t,
    B = (p/(pi r^p)) int_alpha^beta v(r e^{i theta}) sin p(theta-alpha) dtheta,
    s = (-1)^{n-1}. The identity A = (p^2/(pi r^{2p})) int_{r0}^r
    J(r0,t) t^{2p-1} dt is evaluated on an independent Simpson route and
    its residual reported.
    """
    from scipy.integrate import simpson

    n = _angle_exponent(angle, p)
    if not r > r0 > 0:
        raise ValueError("need r > r0 > 0")
    sign = (-1.0) ** (n - 1)
    slit = angle.aperture >= _TWO_PI * (1 - 1e-15)

    def pair(t):
        va = v.on_ray(angle.alpha, t)
        if slit:
            return va * (1.0 + sign)
        return va + sign * v.on_ray(angle.beta, t)

    cuts = _ray_cuts(v, r0, r)
    tol = spec.abs_tol if spec else 1e-9
    a_val = (p / _TWO_PI) * _integrate_pieces(
        lambda t: (t ** (-p) - t ** p / r ** (2 * p)) * pair(t) / t,
        r0, r, cuts, abs_tol=tol)
    b_val = (p / (math.pi * r ** p)) * _integrate_vec(
        lambda th: v._circle_vals(r, th) * np.sin(p * (th - angle.alpha)),
        angle.alpha, angle.beta, abs_tol=tol, rel_tol=1e-8)[0]

    # Independent route for the identity: J(r0, t) cumulatively on a dense
    # log grid, then Simpson in t.
    ts = np.geomspace(r0, r, 257)
    j_vals = np.zeros_like(ts)
    acc = 0.0
    for i in range(1, ts.size):
        acc += _integrate_pieces(lambda t: pair(t) / t ** (p + 1),
                                 ts[i - 1], ts[i],
                                 [c for c in cuts if ts[i - 1] < c < ts[i]],
                                 abs_tol=tol / ts.size)
        j_vals[i] = acc
    rhs = (p ** 2 / (math.pi * r ** (2 * p))) * float(
        simpson(j_vals * ts ** (2 * p - 1), x=ts))
    return CarlemanReport(A=a_val, B=b_val,
                          identity_residual=abs(a_val - rhs))


def boundedness_detector(grid, values, slope_tol: float = 0.05,
                         ratio_cap: float = 10.0) -> DetectorReport:
    """Finite proxy for "trace = O(1) as r -> infinity".

    Fits values against log r on the tail half of the log range:
    bounded iff |slope| <= slope_tol and max|v| / median|v| <= ratio_cap;
    unbounded iff |slope| >= 3 slope_tol; inconclusive between.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    if grid.size < 16 or grid[-1] < 100.0 * grid[0]:
        raise InsufficientGridError(
            "detector needs >= 16 points over >= 2 decades")
    if np.max(np.abs(values)) <= 1e-12:
        return DetectorReport("bounded", 0.0, 1.0)
    logs = np.log(grid)
    tail = logs >= 0.5 * (logs[0] + logs[-1])
    slope = float(np.polyfit(logs[tail], values[tail], 1)[0])
    med = float(np.median(np.abs(values[tail])))
    ratio = float(np.max(np.abs(values[tail])) / med) if med > 0 else math.inf
    if abs(slope) <= slope_tol and ratio <= ratio_cap:
        return DetectorReport("bounded", slope, ratio)
    if abs(slope) >= 3.0 * slope_tol:
        return DetectorReport("unbounded", slope, ratio)
    return DetectorReport("inconclusive", slope, ratio)


def akhiezer_class_verdict(v: LogModulusOracle, angle: AngleSpec, p: float,
                           r0: float = 1.0, grid=None,
                           kind: str = "J") -> ConditionTrace:
    """Akhiezer-class membership trace over an r-grid.

    kind "J" uses the boundary functional J(r0, r); kind "carleman" uses
    A + B. When the oracle carries atoms, the genus-p Blaschke functional
    of its Riesz charge is traced on the same grid and its boundedness
    verdict stored as cross_verdict (the two must agree for finite-type
    oracles).
    """
    n = _angle_exponent(angle, p)
    if grid is None:
        radii = np.abs(v._pos) if v._pos.size else np.array([10.0 * r0])
        hi = max(float(radii.max()) * 2.0, 500.0 * r0)
        grid = np.geomspace(4.0 * r0, hi, 24)
    grid = np.asarray(grid, dtype=float)
    slit = angle.aperture >= _TWO_PI * (1 - 1e-15)
    sign = (-1.0) ** (n - 1)

    def pair(t):
        va = v.on_ray(angle.alpha, t)
        if slit:
            return va * (1.0 + sign)
        return va + sign * v.on_ray(angle.beta, t)

    values = np.zeros_like(grid)
    if kind == "J":
        if not (slit and n % 2 == 0):
            acc, lo = 0.0, r0
            for i, rr in enumerate(grid):
                acc += _integrate_pieces(
                    lambda t: pair(t) / t ** (p + 1), lo, rr,
                    _ray_cuts(v, lo, rr), abs_tol=1e-8)
                values[i] = acc
                lo = rr
    elif kind == "carleman":
        acc_j, acc_k, lo = 0.0, 0.0, r0
        for i, rr in enumerate(grid):
            cuts = _ray_cuts(v, lo, rr)
            acc_j += _integrate_pieces(lambda t: pair(t) / t ** (p + 1),
                                       lo, rr, cuts, abs_tol=1e-8)
            acc_k += _integrate_pieces(lambda t: pair(t) * t ** (p - 1),
                                       lo, rr, cuts, abs_tol=1e-8)
            a_val = (p / _TWO_PI) * (acc_j - acc_k / rr ** (2 * p))
            b_val = (p / (math.pi * rr ** p)) * _integrate_vec(
                lambda th: v._circle_vals(rr, th)
                * np.sin(p * (th - angle.alpha)),
                angle.alpha, angle.beta, abs_tol=1e-8, rel_tol=1e-7)[0]
            values[i] = a_val + b_val
            lo = rr
    else:
        raise ValueError(f"unknown kind {kind!r}")
    rep = boundedness_detector(grid, values)
    cross = None
    if v.charge.atoms:
        bvals = np.array([blaschke_functional(v.charge, angle, p, r0, rr)
                          for rr in grid])
        cross = boundedness_detector(grid, bvals).verdict
    return ConditionTrace(grid=grid, values=values, verdict=rep.verdict,
                          slope=rep.slope, kind=kind, cross_verdict=cross)


def integral_estimate_check(v: LogModulusOracle, g, g_kind: str, r0: float,
                            b: float, r_grid, ratio_cap: float = 10.0,
                            theta: float = 0.0) -> EstimateReport:
    """Radial integral bound check with unit constant.

    LHS(R) = int_{r0}^R |v(t e^{i theta})| g(t) dt. For increasing g,
    RHS(R) = M_v^+((1+2b)R) * R * g((1+4b)R); for decreasing positive g,
    RHS(R) = M_v^+((1+2b)R) * int_{(1-b)r0}^R g (grid points below 2 r0
    are dropped in this branch). Verdict: max ratio / median ratio
    <= ratio_cap.
    """
    if not (r0 > 0 and 0 < b <= 0.25):
        raise ValueError("need r0 > 0 and 0 < b <= 1/4")
    if g_kind not in ("increasing", "decreasing"):
        raise ValueError("g_kind must be 'increasing' or 'decreasing'")
    r_grid = np.asarray(sorted(r_grid), dtype=float)
    if g_kind == "decreasing":
        r_grid = r_grid[r_grid >= 2.0 * r0]
        if r_grid.size == 0:
            raise ValueError("decreasing branch needs grid points >= 2 r0")
    probe = np.geomspace((1 - b) * r0, (1 + 4 * b) * r_grid[-1], 64)
    gp = np.array([g(t) for t in probe])
    if np.any(gp <= 0) and g_kind == "decreasing":
        raise ValueError("g must stay positive")
    diffs = np.diff(gp)
    if g_kind == "increasing" and np.any(diffs < -1e-12 * np.abs(gp[:-1])):
        raise ValueError("g samples are not increasing")
    if g_kind == "decreasing" and np.any(diffs > 1e-12 * np.abs(gp[:-1])):
        raise ValueError("g samples are not decreasing")

    def integrand(t):
        return np.abs(v.on_ray(theta, t)) * np.array([g(x) for x in np.atleast_1d(t)])

    lhs = np.zeros_like(r_grid)
    acc, lo = 0.0, r0
    for i, rr in enumerate(r_grid):
        acc += _integrate_pieces(integrand, lo, rr, _ray_cuts(v, lo, rr),
                                 abs_tol=1e-8)
        lhs[i] = acc
        lo = rr
    rhs = np.zeros_like(r_grid)
    for i, rr in enumerate(r_grid):
        m = v.m_plus((1 + 2 * b) * rr)
        if g_kind == "increasing":
            rhs[i] = m * rr * g((1 + 4 * b) * rr)
        else:
            gi, _ = integrate(lambda t: g(t), (1 - b) * r0, rr,
                              QuadSpec(abs_tol=1e-10, rel_tol=1e-9))
            rhs[i] = m * gi
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rhs > 0, lhs / rhs,
                         np.where(lhs == 0, 0.0, math.inf))
    finite = ratio[np.isfinite(ratio)]
    med = float(np.median(finite)) if finite.size else 0.0
    if med <= 0:
        passed = bool(np.all(ratio == 0.0))
    else:
        passed = bool(np.all(np.isfinite(ratio))
                      and float(ratio.max()) / med <= ratio_cap)
    return EstimateReport(grid=r_grid, lhs=lhs, rhs=rhs, ratio=ratio,
                          ratio_cap=ratio_cap, passed=passed, kind=g_kind)
