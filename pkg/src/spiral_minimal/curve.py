"""Generating curves gamma = (cos s e^{i s1}, sin s e^{i s2}) in S^3.

The argument functions s1, s2 are known in closed form as integrals in the
profile variable s.  Their speeds carry an inverse square root singularity
at the two ends of the admissible interval, so every integral here is taken
in the variable u with s = s_minus + u^2 (or s = s_plus - u^2), where the
integrands become analytic, and then expanded in Chebyshev series.

The same expansions give the arclength tau along the curve, which is used to
assemble complete curves out of alternately oriented arcs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial import Chebyshev
from scipy import integrate, optimize

from .errors import (
    ConvergenceError,
    DomainError,
    MultipleComponents,
    QuadratureDisagreement,
    SubcriticalC2,
)

HALF_PI = 0.5 * math.pi
SCAN_POINTS = 10_000


@dataclass(frozen=True)
class CurveParams:
    """Parameters of one family of generating curves.

    ``k1``, ``k2`` are the intrinsic dimensions of the two inputs, ``C1`` the
    ratio of angular momenta and ``C2`` the family parameter.  ``branch``
    selects the sign of the closed-form speeds on the first arc; the
    ``-1`` branch is the complex conjugate of the ``+1`` curve.
    """

    k1: int
    k2: int
    C1: float
    C2: float | None = None
    branch: int = 1

    def __post_init__(self):
        for name in ("k1", "k2"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if not math.isfinite(self.C1):
            raise ValueError("C1 must be finite")
        if self.C2 is not None and not math.isfinite(self.C2):
            raise ValueError("C2 must be finite")
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")

    def with_c2(self, C2: float) -> CurveParams:
        return replace(self, C2=float(C2))

    @property
    def p1(self) -> int:
        return 2 * self.k1 + 2

    @property
    def p2(self) -> int:
        return 2 * self.k2 + 2

    def _need_c2(self) -> float:
        if self.C2 is None:
            raise ValueError("C2 is required for this operation")
        return self.C2


@dataclass(frozen=True)
class AdmissibleDomain:
    s_minus: float
    s_plus: float
    c2_min_value: float
    s_star: float


# ---------------------------------------------------------------------------
# Barrier and radicand
# ---------------------------------------------------------------------------

def _check_open_interval(s):
    s = np.asarray(s, dtype=float)
    if np.any(~(s > 0.0)) or np.any(~(s < HALF_PI)):
        raise DomainError("s must lie strictly inside (0, pi/2)")
    return s


def _numerator(s, C1):
    return 1.0 + (C1 * C1 - 1.0) * np.cos(s) ** 2


def barrier(s, params: CurveParams):
    """(1 + (C1^2 - 1) cos^2 s) / (cos^{2k1+2} s sin^{2k2+2} s).

    Vectorized in ``s``; raises :class:`DomainError` outside (0, pi/2).
    """
    s = _check_open_interval(s)
    with np.errstate(over="ignore", divide="ignore"):
        val = _numerator(s, params.C1) / (
            np.cos(s) ** params.p1 * np.sin(s) ** params.p2
        )
    return val if val.ndim else float(val)


def _log_barrier(s, params):
    return (
        np.log(_numerator(s, params.C1))
        - params.p1 * np.log(np.cos(s))
        - params.p2 * np.log(np.sin(s))
    )


def _log_barrier_slope(s, params):
    c2m1 = params.C1 * params.C1 - 1.0
    return (
        -c2m1 * np.sin(2.0 * s) / _numerator(s, params.C1)
        + params.p1 * np.tan(s)
        - params.p2 / np.tan(s)
    )


def _weight(s, params):
    # cos^{2k1+2} s sin^{2k2+2} s
    return np.cos(s) ** params.p1 * np.sin(s) ** params.p2


def radicand(s, params: CurveParams):
    """C2 cos^{2k1+2} sin^{2k2+2} - (1 + (C1^2 - 1) cos^2 s); positive on the arc."""
    C2 = params._need_c2()
    return C2 * _weight(s, params) - _numerator(s, params.C1)


def _radicand_anchored(anchor, d, params):
    """Radicand at ``anchor + d`` for an anchor where it vanishes.

    Written as differences relative to the anchor so that small ``d`` loses
    no relative accuracy.  The residual of the anchor root itself is dropped,
    i.e. the anchor is treated as the exact zero.
    """
    C2 = params.C2
    half = -2.0 * np.sin(0.5 * d) ** 2
    sd = np.sin(d)
    log_ratio = params.p1 * np.log1p(half - math.tan(anchor) * sd) + params.p2 * np.log1p(
        half + sd / math.tan(anchor)
    )
    g0 = math.cos(anchor) ** params.p1 * math.sin(anchor) ** params.p2
    return C2 * g0 * np.expm1(log_ratio) + (params.C1 ** 2 - 1.0) * np.sin(2.0 * anchor + d) * sd


def _radicand_slope(anchor, params):
    g0 = math.cos(anchor) ** params.p1 * math.sin(anchor) ** params.p2
    dlog = -params.p1 * math.tan(anchor) + params.p2 / math.tan(anchor)
    return params.C2 * g0 * dlog + (params.C1 ** 2 - 1.0) * math.sin(2.0 * anchor)


# ---------------------------------------------------------------------------
# Critical value and admissible interval
# ---------------------------------------------------------------------------

def _scan_grid(extra=()):
    grid = np.linspace(0.0, HALF_PI, SCAN_POINTS + 2)[1:-1]
    if extra:
        grid = np.union1d(grid, np.asarray(extra, dtype=float))
    return grid


def c2_min(params: CurveParams) -> tuple[float, float]:
    """Minimum of the barrier over (0, pi/2) and its location ``s_star``.

    A dense scan picks the global basin; the zero of the log-derivative is
    then refined with Brent's method.
    """
    grid = _scan_grid()
    with np.errstate(divide="ignore", invalid="ignore"):
        logf = _log_barrier(grid, params)
    if not np.all(np.isfinite(logf)):
        raise ConvergenceError("barrier is not finite on the scan grid")
    i = int(np.argmin(logf))
    if i == 0 or i == len(grid) - 1:
        raise ConvergenceError(
            f"barrier has no interior minimum for k1={params.k1}, k2={params.k2}, C1={params.C1}"
        )
    lo, hi = grid[i - 1], grid[i + 1]
    dlo, dhi = _log_barrier_slope(lo, params), _log_barrier_slope(hi, params)
    if not (dlo < 0.0 < dhi):
        raise ConvergenceError("could not bracket the critical point of the barrier")
    s_star = optimize.brentq(_log_barrier_slope, lo, hi, args=(params,), xtol=1e-16, rtol=8.9e-16)
    return float(barrier(s_star, params)), float(s_star)


def _bisect(f, lo, hi):
    """Bisection to machine resolution on a sign change of ``f``."""
    flo = f(lo)
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid


def admissible_domain(params: CurveParams) -> AdmissibleDomain:
    """The interval where the radicand is positive, for the given C2.

    The sublevel set of the barrier is checked on a dense scan to be a single
    interval before its ends are bisected.
    """
    C2 = params._need_c2()
    cmin, s_star = c2_min(params)
    if not C2 > cmin:
        raise SubcriticalC2(f"C2={C2!r} does not exceed c2_min={cmin!r}")
    log_c2 = math.log(C2)
    grid = _scan_grid((s_star,))
    inside = _log_barrier(grid, params) < log_c2
    edges = np.flatnonzero(np.diff(inside.astype(np.int8)))
    runs = (len(edges) + int(inside[0]) + int(inside[-1])) // 2
    if runs != 1:
        raise MultipleComponents(f"barrier < C2 has {runs} components on the scan grid")
    idx = np.flatnonzero(inside)
    i0, i1 = idx[0], idx[-1]

    def g(s):
        return _log_barrier(s, params) - log_c2

    lo = grid[i0 - 1] if i0 > 0 else 0.5 * grid[0]
    hi = grid[i1 + 1] if i1 < len(grid) - 1 else 0.5 * (grid[-1] + HALF_PI)
    s_minus = _bisect(g, lo, grid[i0])
    s_plus = _bisect(g, grid[i1], hi)
    return AdmissibleDomain(float(s_minus), float(s_plus), cmin, s_star)


# ---------------------------------------------------------------------------
# Speeds
# ---------------------------------------------------------------------------

def _rho(s, params, domain):
    if domain is None:
        R = radicand(s, params)
    else:
        near_lo = (s - domain.s_minus) <= (domain.s_plus - s)
        R = np.where(
            near_lo,
            _radicand_anchored(domain.s_minus, s - domain.s_minus, params),
            _radicand_anchored(domain.s_plus, s - domain.s_plus, params),
        )
    if np.any(~(R > 0.0)):
        raise DomainError("s is outside the admissible interval (or on its boundary)")
    return 1.0 / np.sqrt(R)


def angular_speed(s, params: CurveParams, domain: AdmissibleDomain | None = None):
    """(ds1/ds, ds2/ds) = branch * rho(s) * (tan s, C1 cot s).

    Passing ``domain`` evaluates the radicand relative to the nearer end of
    the interval, which keeps full relative accuracy next to the poles.
    """
    s = _check_open_interval(s)
    if domain is not None and np.any((s <= domain.s_minus) | (s >= domain.s_plus)):
        raise DomainError("s is outside the admissible interval (or on its boundary)")
    rho = params.branch * _rho(s, params, domain)
    sd1 = rho * np.tan(s)
    sd2 = rho * params.C1 / np.tan(s)
    if sd1.ndim == 0:
        return float(sd1), float(sd2)
    return sd1, sd2


def _speed_jets(s, params, domain):
    """Speeds and their s-derivatives, all analytic."""
    s = np.asarray(s, dtype=float)
    rho = params.branch * _rho(s, params, domain)
    R = 1.0 / (rho * rho)
    c2m1 = params.C1 ** 2 - 1.0
    dR = params.C2 * _weight(s, params) * (-params.p1 * np.tan(s) + params.p2 / np.tan(s)) + c2m1 * np.sin(
        2.0 * s
    )
    drho = -0.5 * rho * dR / R
    t, ct = np.tan(s), 1.0 / np.tan(s)
    sd1 = rho * t
    sd2 = params.C1 * rho * ct
    sdd1 = drho * t + rho * (1.0 + t * t)
    sdd2 = params.C1 * (drho * ct - rho * (1.0 + ct * ct))
    return sd1, sd2, sdd1, sdd2


# ---------------------------------------------------------------------------
# Half-arc expansions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadOptions:
    rtol: float = 1e-9
    grid_size: int = 201
    max_degree: int = 4096
    cross_check: bool = True


def _chebfit(fn, U, max_degree):
    """Adaptive Chebyshev interpolant of ``fn`` on [0, U]; returns (series, tail).

    The degree doubles until the last quarter of the coefficients has sunk to
    the roundoff plateau.
    """
    deg = 32
    while True:
        ser = Chebyshev.interpolate(fn, deg, domain=[0.0, U])
        c = np.abs(ser.coef)
        scale = max(c.max(), 1e-300)
        tail = c[-(len(c) // 4):].max()
        if tail <= 1e-13 * scale:
            return ser, tail
        if deg >= max_degree:
            raise ConvergenceError(f"Chebyshev expansion did not converge (tail {tail / scale:.3g})")
        deg *= 2


class _HalfArc:
    """Cumulative integrals from one end of the arc towards s_star.

    The end is ``anchor`` and points are ``s = anchor + sign * u**2`` for
    ``u`` in [0, U].  Each cumulative integral is stored as a Chebyshev
    series in ``u``, starting from zero at the anchor.
    """

    def __init__(self, params, anchor, sign, s_star, max_degree):
        self.params = params
        self.anchor = anchor
        self.sign = sign
        self.U = math.sqrt(abs(s_star - anchor))
        slope = abs(_radicand_slope(anchor, params))

        def q(u):
            # u / sqrt(R), analytic in u
            d = sign * u * u
            with np.errstate(invalid="ignore", divide="ignore"):
                ratio = _radicand_anchored(anchor, d, params) / (u * u)
            ratio = np.where(u == 0.0, slope, ratio)
            return 1.0 / np.sqrt(ratio)

        def s_of(u):
            return anchor + sign * u * u

        C2 = params.C2
        integrands = {
            "tau": lambda u: 2.0 * q(u) * np.sqrt(C2 * _weight(s_of(u), params)),
            "s1": lambda u: 2.0 * q(u) * np.tan(s_of(u)),
            "s2": lambda u: 2.0 * q(u) * params.C1 / np.tan(s_of(u)),
        }
        self.series = {}
        self.deriv = {}
        self.error = {}
        self.total = {}
        for name, fn in integrands.items():
            ser, tail = _chebfit(fn, self.U, max_degree)
            self.deriv[name] = ser
            self.series[name] = ser.integ(lbnd=0.0)
            self.total[name] = float(self.series[name](self.U))
            self.error[name] = 2.0 * self.U * tail * len(ser.coef) ** 0.5
        self._table_u = self.U * 0.5 * (1.0 - np.cos(np.linspace(0.0, math.pi, 513)))
        self._table_tau = self.series["tau"](self._table_u)

    def u_of_s(self, s):
        return np.clip(np.sqrt(np.maximum(self.sign * (s - self.anchor), 0.0)), 0.0, self.U)

    def u_of_tau(self, target):
        """Invert the cumulative arclength by Newton iteration."""
        target = np.clip(target, 0.0, self.total["tau"])
        u = np.interp(target, self._table_tau, self._table_u)
        T, dT = self.series["tau"], self.deriv["tau"]
        for _ in range(60):
            step = (T(u) - target) / dT(u)
            u_new = np.clip(u - step, 0.0, self.U)
            done = np.all(np.abs(u_new - u) <= 4e-16 * max(self.U, 1e-300))
            u = u_new
            if done:
                break
        return u


# ---------------------------------------------------------------------------
# Arc solutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArcSolution:
    """One solved arc over the admissible interval.

    ``s1``, ``s2`` are normalized to vanish at ``s_star`` and tabulated on an
    endpoint-clustered grid.  ``J1`` and ``J2`` are the increments of s1, s2
    across the arc on the +1 branch (``J1 > 0``, ``J2`` has the sign of C1).
    ``arg_scale`` multiplies both the tabulated arguments and their
    derivatives; it is 1 for genuine solutions and exists for perturbation
    controls.
    """

    params: CurveParams
    domain: AdmissibleDomain
    s: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    J1: float
    J2: float
    quadrature_error: float
    J1_parts: tuple[float, float]
    J2_parts: tuple[float, float]
    tau_parts: tuple[float, float]
    quadrature_detail: dict = field(default_factory=dict)
    arg_scale: tuple[float, float] = (1.0, 1.0)
    _lower: _HalfArc | None = field(default=None, repr=False, compare=False)
    _upper: _HalfArc | None = field(default=None, repr=False, compare=False)

    @property
    def tau_length(self) -> float:
        return self.tau_parts[0] + self.tau_parts[1]

    def arguments_at(self, s):
        """(s1, s2) at profile values ``s`` inside the arc (branch applied)."""
        s = np.asarray(s, dtype=float)
        lower = s <= self.domain.s_star
        ul = self._lower.u_of_s(s)
        uu = self._upper.u_of_s(s)
        out = []
        for name, parts in (("s1", self.J1_parts), ("s2", self.J2_parts)):
            lo = self._lower.series[name](ul) - parts[0]
            up = parts[1] - self._upper.series[name](uu)
            out.append(np.where(lower, lo, up))
        b = self.params.branch
        return b * self.arg_scale[0] * out[0], b * self.arg_scale[1] * out[1]

    def jets(self, s):
        """(ds1/ds, ds2/ds, d2s1/ds2, d2s2/ds2) including ``arg_scale``."""
        sd1, sd2, sdd1, sdd2 = _speed_jets(s, self.params, self.domain)
        a, b = self.arg_scale
        return a * sd1, b * sd2, a * sdd1, b * sdd2

    def perturbed(self, s1_factor=1.0, s2_factor=1.0) -> ArcSolution:
        """Copy with s1, s2 replaced by multiples of themselves."""
        a, b = self.arg_scale
        return replace(
            self,
            s1=self.s1 * s1_factor,
            s2=self.s2 * s2_factor,
            arg_scale=(a * s1_factor, b * s2_factor),
        )

    def state_at_local_tau(self, tau_loc):
        """(s, S1, S2) at arclength ``tau_loc`` from s_star, +1 branch, unscaled."""
        tau_loc = np.asarray(tau_loc, dtype=float)
        Tm, Tp = self.tau_parts
        lower = tau_loc <= 0.0
        ul = self._lower.u_of_tau(np.where(lower, Tm + tau_loc, 0.0))
        uu = self._upper.u_of_tau(np.where(lower, 0.0, Tp - tau_loc))
        s = np.where(lower, self.domain.s_minus + ul * ul, self.domain.s_plus - uu * uu)
        vals = []
        for name, parts in (("s1", self.J1_parts), ("s2", self.J2_parts)):
            lo = self._lower.series[name](ul) - parts[0]
            up = parts[1] - self._upper.series[name](uu)
            vals.append(np.where(lower, lo, up))
        return s, vals[0], vals[1]


def _qaws(params, domain, which):
    """Integral of rho * (tan s | C1 cot s) over the arc by QUADPACK QAWS.

    The algebraic weight (s - s_minus)^(-1/2) (s_plus - s)^(-1/2) carries the
    endpoint singularity; the remaining factor is bounded.
    """
    a, b = domain.s_minus, domain.s_plus
    sa, sb = _radicand_slope(a, params), _radicand_slope(b, params)

    def h(s):
        da, db = s - a, b - s
        if da <= db:
            R = float(_radicand_anchored(a, da, params))
            q = math.sqrt(da / R) if da > 0 else 1.0 / math.sqrt(sa)
            rest = math.sqrt(db)
        else:
            R = float(_radicand_anchored(b, -db, params))
            q = math.sqrt(db / R) if db > 0 else 1.0 / math.sqrt(-sb)
            rest = math.sqrt(da)
        w = math.tan(s) if which == "s1" else params.C1 / math.tan(s)
        return w * q * rest

    val, err = integrate.quad(
        h, a, b, weight="alg", wvar=(-0.5, -0.5), epsabs=0.0, epsrel=1e-13, limit=400
    )
    return val, err


def solve_arc(params: CurveParams, quad_opts: QuadOptions | None = None) -> ArcSolution:
    """Integrate the closed-form speeds over the admissible interval.

    J1 and J2 are computed twice: by Chebyshev (Clenshaw-Curtis) quadrature
    after the substitution s = s_pm -/+ u^2, and by adaptive QAWS on the
    singular integrand.  Disagreement beyond ten times ``rtol`` raises
    :class:`QuadratureDisagreement`.
    """
    opts = quad_opts or QuadOptions()
    domain = admissible_domain(params)
    lower = _HalfArc(params, domain.s_minus, +1.0, domain.s_star, opts.max_degree)
    upper = _HalfArc(params, domain.s_plus, -1.0, domain.s_star, opts.max_degree)

    J1_parts = (lower.total["s1"], upper.total["s1"])
    J2_parts = (lower.total["s2"], upper.total["s2"])
    J1 = J1_parts[0] + J1_parts[1]
    J2 = J2_parts[0] + J2_parts[1]
    err = {
        name: lower.error[name] + upper.error[name] for name in ("s1", "s2", "tau")
    }
    detail = {"chebyshev_J1": J1, "chebyshev_J2": J2, "chebyshev_error": max(err["s1"], err["s2"])}
    quad_err = max(err["s1"], err["s2"])
    if opts.cross_check:
        for name, val in (("s1", J1), ("s2", J2)):
            other, qerr = _qaws(params, domain, name)
            gap = abs(other - val)
            detail[f"qaws_{'J1' if name == 's1' else 'J2'}"] = other
            if gap > 10.0 * opts.rtol * max(abs(val), abs(J1)):
                raise QuadratureDisagreement(
                    f"{name}: Chebyshev {val!r} vs QAWS {other!r} (gap {gap:.3g})"
                )
            quad_err = max(quad_err, gap, qerr)

    n = opts.grid_size
    mid = 0.5 * (domain.s_minus + domain.s_plus)
    half = 0.5 * (domain.s_plus - domain.s_minus)
    grid = mid - half * np.cos(math.pi * (np.arange(n) + 0.5) / n)

    arc = ArcSolution(
        params=params,
        domain=domain,
        s=grid,
        s1=np.empty(0),
        s2=np.empty(0),
        J1=float(J1),
        J2=float(J2),
        quadrature_error=float(quad_err),
        J1_parts=J1_parts,
        J2_parts=J2_parts,
        tau_parts=(lower.total["tau"], upper.total["tau"]),
        quadrature_detail=detail,
        _lower=lower,
        _upper=upper,
    )
    s1, s2 = arc.arguments_at(grid)
    return replace(arc, s1=s1, s2=s2)


def closing_integrals(params: CurveParams, quad_opts: QuadOptions | None = None):
    """(J1, J2, quadrature_error) without tabulating the arc."""
    arc = solve_arc(params, replace(quad_opts or QuadOptions(), grid_size=1))
    return arc.J1, arc.J2, arc.quadrature_error


# ---------------------------------------------------------------------------
# First ODE residual
# ---------------------------------------------------------------------------

def ode1_residual_from_jets(s, sd1, sd2, sdd1, sdd2):
    """Residual of the first ODE in the profile parameter s, scaled.

    With a = cos s, b = sin s the equation
    0 = -2 s1' s2' b^2 (a/b)' - a b s2'^2 (s1'/s2')'
    becomes, after clearing the quotient,
    0 = 2 s1' s2' - a b (s1'' s2' - s1' s2'').
    The result is divided by the largest of the three terms.
    """
    s = np.asarray(s, dtype=float)
    ab = np.cos(s) * np.sin(s)
    t1 = 2.0 * sd1 * sd2
    t2 = ab * sdd1 * sd2
    t3 = ab * sd1 * sdd2
    scale = np.maximum(np.maximum(np.abs(t1), np.abs(t2)), np.abs(t3))
    res = t1 - t2 + t3
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(scale > 0.0, res / np.where(scale > 0.0, scale, 1.0), 0.0)
    return out if out.ndim else float(out)


def ode1_residual(arc: ArcSolution, s):
    """Scaled residual of the first ODE on ``arc`` at interior ``s``."""
    s = np.asarray(s, dtype=float)
    return ode1_residual_from_jets(s, *arc.jets(s))


# ---------------------------------------------------------------------------
# Complete curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompleteCurve:
    """``half_periods`` arcs joined alternately upward and downward in s.

    Arclength ``tau`` is zero at s_star on the first arc, so the curve covers
    ``[-tau_minus, -tau_minus + m * T]`` with ``T`` the arclength of one arc.
    """

    arc: ArcSolution
    half_periods: int
    offsets: tuple
    closure: object

    @property
    def period(self) -> float:
        return self.arc.tau_length

    @property
    def tau_range(self) -> tuple[float, float]:
        t0 = -self.arc.tau_parts[0]
        return t0, t0 + self.half_periods * self.period

    def state(self, tau):
        """(s, s1, s2) at curve arclength ``tau`` (no range check)."""
        arc = self.arc
        tau = np.asarray(tau, dtype=float)
        T = self.period
        Tm, Tp = arc.tau_parts
        x = tau + Tm
        j = np.clip(np.floor(x / T), 0, self.half_periods - 1)
        sigma = x - j * T
        up = (j % 2) == 0
        tau_loc = np.where(up, sigma - Tm, Tp - sigma)
        s, S1, S2 = arc.state_at_local_tau(tau_loc)
        out = []
        for S, J, (Jm, Jp) in ((S1, arc.J1, arc.J1_parts), (S2, arc.J2, arc.J2_parts)):
            out.append(np.where(up, j * J + S, j * J - Jm + (Jp - S)))
        b = arc.params.branch
        return s, b * out[0], b * out[1]

    def __call__(self, tau):
        s, s1, s2 = self.state(tau)
        return np.stack([np.cos(s) * np.exp(1j * s1), np.sin(s) * np.exp(1j * s2)], axis=-1)


def assemble_complete(arc: ArcSolution, half_periods: int, closure=None) -> CompleteCurve:
    """Join ``half_periods`` copies of ``arc`` with alternating orientation."""
    if int(half_periods) != half_periods or half_periods < 1:
        raise ValueError("half_periods must be a positive integer")
    m = int(half_periods)
    b = arc.params.branch
    offsets = tuple((b * j * arc.J1, b * j * arc.J2) for j in range(m + 1))
    if closure is None:
        from .closure import classify_closure

        closure = classify_closure(arc)
    return CompleteCurve(arc=arc, half_periods=m, offsets=offsets, closure=closure)


def eval_curve(curve: CompleteCurve, tau, tol: float = 1e-12):
    """Point(s) of S^3 as complex pairs (gamma1, gamma2) at arclength ``tau``."""
    lo, hi = curve.tau_range
    t = np.asarray(tau, dtype=float)
    slack = tol * max(1.0, abs(hi - lo))
    if np.any(t < lo - slack) or np.any(t > hi + slack):
        raise DomainError(f"tau outside the assembled range [{lo}, {hi}]")
    return curve(np.clip(t, lo, hi))
