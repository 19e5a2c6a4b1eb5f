"""C-totally real input immersions, spiral products and Hopf utilities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

import numpy as np

from .curve import CompleteCurve
from .errors import CertificationFailure, DimensionMismatch, UncertifiedInput

TWO_PI = 2.0 * math.pi
TIE_TOL = 1e-12


@dataclass(frozen=True)
class ImmersionChart:
    """A map from a k-dimensional parameter box into the unit sphere of C^{n+1}.

    ``fn`` takes an (N, k) real array and returns an (N, n+1) complex array.
    ``box`` is the region sampled by certificates; ``periods`` holds the
    period of each coordinate, or None.  Calling the chart wraps periodic
    coordinates into their box before evaluating.
    """

    name: str
    dim: int
    complex_dim: int
    fn: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    box: tuple = ()
    periods: tuple = ()
    is_minimal: bool = False
    is_c_totally_real: bool = False
    is_legendrian: bool = False
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.is_legendrian and self.dim != self.complex_dim:
            raise ValueError("a Legendrian chart needs dim == complex_dim")
        if len(self.box) != self.dim or len(self.periods) != self.dim:
            raise ValueError("box and periods must have one entry per parameter")

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        single = u.ndim == 1
        U = u.reshape(-1, self.dim) if self.dim else np.zeros((1 if single else len(u), 0))
        U = U.copy()
        for i, per in enumerate(self.periods):
            if per:
                lo = self.box[i][0]
                U[:, i] = lo + np.mod(U[:, i] - lo, per)
        out = self.fn(U)
        return out[0] if single else out

    @property
    def flags(self) -> dict:
        return {
            "is_minimal": self.is_minimal,
            "is_c_totally_real": self.is_c_totally_real,
            "is_legendrian": self.is_legendrian,
        }


def leaf_point() -> ImmersionChart:
    """The point 1 in the unit circle of C (k = n = 0)."""
    return ImmersionChart(
        name="point",
        dim=0,
        complex_dim=0,
        fn=lambda U: np.ones((U.shape[0], 1), dtype=complex),
        is_minimal=True,
        is_c_totally_real=True,
        is_legendrian=True,
        provenance={"kind": "point"},
    )


def leaf_real_sphere(n: int, margin: float = 0.25) -> ImmersionChart:
    """The real great sphere S^n in S^{2n+1}, in hyperspherical coordinates.

    Coordinates theta_1 .. theta_{n-1} are polar angles (sampled away from the
    poles by ``margin``); theta_n is periodic.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)

    def fn(U):
        N = U.shape[0]
        x = np.empty((N, n + 1))
        prod = np.ones(N)
        for i in range(n):
            x[:, i] = prod * np.cos(U[:, i])
            prod = prod * np.sin(U[:, i])
        x[:, n] = prod
        return x.astype(complex)

    box = tuple((margin, math.pi - margin) for _ in range(n - 1)) + ((0.0, TWO_PI),)
    periods = (None,) * (n - 1) + (TWO_PI,)
    return ImmersionChart(
        name=f"real_sphere({n})",
        dim=n,
        complex_dim=n,
        fn=fn,
        box=box,
        periods=periods,
        is_minimal=True,
        is_c_totally_real=True,
        is_legendrian=True,
        provenance={"kind": "real_sphere", "n": n},
    )


def leaf_legendrian_torus(n: int) -> ImmersionChart:
    """(n+1)^{-1/2} (e^{i t_1}, ..., e^{i t_n}, e^{-i (t_1 + ... + t_n)})."""
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    scale = 1.0 / math.sqrt(n + 1)

    def fn(U):
        phases = np.concatenate([U, -U.sum(axis=1, keepdims=True)], axis=1)
        return scale * np.exp(1j * phases)

    return ImmersionChart(
        name=f"legendrian_torus({n})",
        dim=n,
        complex_dim=n,
        fn=fn,
        box=((0.0, TWO_PI),) * n,
        periods=(TWO_PI,) * n,
        is_minimal=True,
        is_c_totally_real=True,
        is_legendrian=True,
        provenance={"kind": "legendrian_torus", "n": n},
    )


def _product_fn(curve_fn, M1, M2):
    k1 = M1.dim

    def fn(U):
        g = curve_fn(U[:, 0])
        f1 = M1(U[:, 1 : 1 + k1])
        f2 = M2(U[:, 1 + k1 :])
        return np.concatenate([g[:, :1] * f1, g[:, 1:] * f2], axis=1)

    return fn


def _require_inputs(M1, M2, legendrian=False):
    for side, M in (("left", M1), ("right", M2)):
        if not (M.is_minimal and M.is_c_totally_real):
            raise UncertifiedInput(f"{side} input {M.name} is not flagged minimal and C-totally real")
        if legendrian and not M.is_legendrian:
            raise UncertifiedInput(f"{side} input {M.name} is not flagged Legendrian")


def spiral_product(curve: CompleteCurve, M1: ImmersionChart, M2: ImmersionChart,
                   margin: float | None = None) -> ImmersionChart:
    """G(t, x, y) = (gamma1(t) f1(x), gamma2(t) f2(y)) with t the arclength of gamma."""
    params = curve.arc.params
    if (params.k1, params.k2) != (M1.dim, M2.dim):
        raise DimensionMismatch(
            f"curve built for (k1, k2) = ({params.k1}, {params.k2}) "
            f"but inputs have dimensions ({M1.dim}, {M2.dim})"
        )
    _require_inputs(M1, M2)
    lo, hi = curve.tau_range
    cert = curve.closure
    closed = getattr(cert, "closed", False) and curve.half_periods % cert.m_min == 0
    if closed:
        t_box, t_period = (lo, hi), hi - lo
    else:
        pad = margin if margin is not None else min(0.1, 0.05 * (hi - lo))
        t_box, t_period = (lo + pad, hi - pad), None
    horizontal = params.C1 == -1.0
    return ImmersionChart(
        name=f"spiral[{M1.name} x {M2.name}; C1={params.C1!r}, C2={params.C2!r}]",
        dim=M1.dim + M2.dim + 1,
        complex_dim=M1.complex_dim + M2.complex_dim + 1,
        fn=_product_fn(curve, M1, M2),
        box=(t_box,) + M1.box + M2.box,
        periods=(t_period,) + M1.periods + M2.periods,
        is_minimal=True,
        is_c_totally_real=horizontal,
        is_legendrian=horizontal and M1.is_legendrian and M2.is_legendrian,
        provenance={
            "kind": "spiral",
            "C1": params.C1,
            "C2": params.C2,
            "k1": params.k1,
            "k2": params.k2,
            "branch": params.branch,
            "half_periods": curve.half_periods,
            "left": M1.provenance,
            "right": M2.provenance,
        },
    )


def clifford_speeds(n1: int, n2: int) -> tuple[float, float, float]:
    """(s_star, c1, c2) of the constant-profile solution for inputs of dims n1, n2."""
    r = (n2 + 1) / (n1 + 1)
    return math.atan(math.sqrt(r)), math.sqrt(r), -1.0 / math.sqrt(r)


def clifford_period(n1: int, n2: int) -> float:
    """Least t > 0 at which both linear arguments return modulo 2 pi."""
    r = Fraction(n2 + 1, n1 + 1)
    return TWO_PI * math.sqrt(r.numerator * r.denominator)


def clifford_join(M1: ImmersionChart, M2: ImmersionChart, check_points: int = 3) -> ImmersionChart:
    """Spiral product along the constant-profile horizontal curve.

    gamma(t) = (cos s* e^{i c1 t}, sin s* e^{i c2 t}) with tan^2 s* =
    (n2+1)/(n1+1), unit speed and a^2 c1 + b^2 c2 = 0.  The speeds are
    checked against the mean-curvature certificate before the chart is
    returned.
    """
    _require_inputs(M1, M2, legendrian=True)
    n1, n2 = M1.complex_dim, M2.complex_dim
    s_star, c1, c2 = clifford_speeds(n1, n2)
    a, b = math.cos(s_star), math.sin(s_star)

    def gamma(t):
        t = np.asarray(t, dtype=float)
        return np.stack([a * np.exp(1j * c1 * t), b * np.exp(1j * c2 * t)], axis=-1)

    period = clifford_period(n1, n2)
    chart = ImmersionChart(
        name=f"clifford_join[{M1.name} x {M2.name}]",
        dim=M1.dim + M2.dim + 1,
        complex_dim=n1 + n2 + 1,
        fn=_product_fn(gamma, M1, M2),
        box=((0.0, period),) + M1.box + M2.box,
        periods=(period,) + M1.periods + M2.periods,
        is_minimal=True,
        is_c_totally_real=True,
        is_legendrian=True,
        provenance={
            "kind": "clifford_join",
            "s_star": s_star,
            "speeds": [c1, c2],
            "period": period,
            "left": M1.provenance,
            "right": M2.provenance,
        },
    )
    if check_points:
        from .verify import mean_curvature, sample_parameters

        for u in sample_parameters(chart, check_points, seed=1):
            norm = mean_curvature(chart, u)[1]
            if not norm < 1e-6:
                raise CertificationFailure(f"clifford_join speeds not minimal: |H| = {norm:.3g}")
    return chart


def rotate_fiber(M: ImmersionChart, theta: float) -> ImmersionChart:
    """The chart multiplied by the unit scalar e^{i theta}."""
    phase = complex(math.cos(theta), math.sin(theta))

    def fn(U):
        return phase * M.fn(U)

    return replace(
        M,
        name=f"rotate[{M.name}; {theta!r}]",
        fn=fn,
        provenance={"kind": "rotate", "theta": theta, "of": M.provenance},
    )


@dataclass(frozen=True)
class ProjectivePoint:
    """Phase-normalized homogeneous coordinates of a point of CP^n.

    The first coordinate of (numerically) largest modulus is real positive.
    """

    coords: np.ndarray

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())


def hopf_project(z, tol: float = 1e-10) -> ProjectivePoint:
    """Hopf projection S^{2n+1} -> CP^n."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    norm = np.linalg.norm(z)
    if norm == 0.0:
        raise ValueError("cannot project the zero vector")
    if abs(norm - 1.0) > tol:
        raise ValueError(f"expected a unit vector, got norm {norm!r}")
    mod = np.abs(z)
    i = int(np.flatnonzero(mod >= mod.max() * (1.0 - TIE_TOL))[0])
    rep = z * (abs(z[i]) / z[i])
    rep[i] = abs(z[i])
    return ProjectivePoint(rep)


def fs_distance(p, q) -> float:
    """Fubini-Study distance arccos |<z, w>|, evaluated without cancellation."""
    z = p.coords if isinstance(p, ProjectivePoint) else np.asarray(p, dtype=complex)
    w = q.coords if isinstance(q, ProjectivePoint) else np.asarray(q, dtype=complex)
    inner = np.vdot(z, w)
    perp = w - inner * z
    return float(math.atan2(np.linalg.norm(perp), abs(inner)))
