"""Finite-difference certificates for immersions into unit spheres.

Everything here consumes chart evaluations only.  A chart maps an (N, k)
array of parameters to an (N, n+1) complex array of unit vectors; complex
vectors are handled in the real coordinates ``[Re z, Im z]``, in which the
complex structure J acts as ``(x, y) -> (-y, x)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .errors import NotMaximalDimension, RankDeficient

DEFAULT_STEP = 1e-4
RICHARDSON_STEP = 1e-2
RANK_THRESHOLD = 1e-6

MEAN_CURVATURE_TOL = 1e-4
CTR_DEFECT_TOL = 1e-8
LEGENDRIAN_NORM_TOL = 1e-8
LEGENDRIAN_PHASE_STD_TOL = 1e-5


def real_view(z):
    z = np.asarray(z)
    return np.concatenate([z.real, z.imag], axis=-1)


def complex_view(x):
    x = np.asarray(x)
    m = x.shape[-1] // 2
    return x[..., :m] + 1j * x[..., m:]


def apply_J(x):
    x = np.asarray(x)
    m = x.shape[-1] // 2
    return np.concatenate([-x[..., m:], x[..., :m]], axis=-1)


def _eval(chart, pts):
    return real_view(chart(np.atleast_2d(pts)))


def _derivatives(chart, u, h, second=True):
    """Value, first and (optionally) second central differences at ``u``."""
    u = np.asarray(u, dtype=float).reshape(-1)
    k = u.size
    eye = np.eye(k) * h
    pts = [u]
    for i in range(k):
        pts += [u + eye[i], u - eye[i]]
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)] if second else []
    for i, j in pairs:
        pts += [u + eye[i] + eye[j], u + eye[i] - eye[j], u - eye[i] + eye[j], u - eye[i] - eye[j]]
    vals = _eval(chart, np.array(pts).reshape(len(pts), k))
    F = vals[0]
    plus, minus = vals[1 : 2 * k + 1 : 2], vals[2 : 2 * k + 2 : 2]
    D = (plus - minus) / (2.0 * h)
    if not second:
        return F, D, None
    hess = np.empty((k, k, F.size))
    for i in range(k):
        hess[i, i] = (plus[i] - 2.0 * F + minus[i]) / (h * h)
    base = 2 * k + 1
    for n, (i, j) in enumerate(pairs):
        pp, pm, mp, mm = vals[base + 4 * n : base + 4 * n + 4]
        hess[i, j] = hess[j, i] = (pp - pm - mp + mm) / (4.0 * h * h)
    return F, D, hess


def _check_rank(D):
    sv = np.linalg.svd(D, compute_uv=False)
    if sv.size and not sv[-1] >= RANK_THRESHOLD * sv[0]:
        raise RankDeficient(f"Jacobian singular values {sv}")
    return sv


def jacobian(chart, u, h: float = DEFAULT_STEP):
    """Central-difference Jacobian; columns are dF/du_i in real coordinates."""
    if not h > 1e-12:
        raise ValueError(f"step {h!r} underflows")
    _, D, _ = _derivatives(chart, u, h, second=False)
    return D.T


def mean_curvature(chart, u, h: float = DEFAULT_STEP):
    """Mean curvature vector of the chart inside its sphere, and its norm.

    g^{ij} d_i d_j F is projected off the position vector and off the tangent
    space; what remains is the trace of the second fundamental form.
    """
    F, D, hess = _derivatives(chart, u, h)
    if D.shape[0] == 0:
        return np.zeros_like(F), 0.0
    _check_rank(D)
    ginv = np.linalg.inv(D @ D.T)
    V = np.einsum("ij,ijm->m", ginv, hess)
    Q, _ = np.linalg.qr(np.column_stack([F, D.T]))
    H = V - Q @ (Q.T @ V)
    return H, float(np.linalg.norm(H))


def richardson_order(chart, u, h0: float = RICHARDSON_STEP, floor: float = 1e-9):
    """Observed convergence order of the mean curvature vector.

    Uses the steps h0, h0/2, h0/4, large enough that truncation error
    dominates roundoff.  Returns NaN when the differences are below
    ``floor``, i.e. when the central differences are exact up to roundoff in
    the normal directions (as for totally geodesic charts).
    """
    H = [mean_curvature(chart, u, h0 / 2.0**i)[0] for i in range(3)]
    d1 = np.linalg.norm(H[0] - H[1])
    d2 = np.linalg.norm(H[1] - H[2])
    if d2 < floor or d1 < floor:
        return math.nan
    return math.log2(d1 / d2)


def _unit_columns(D):
    return D / np.linalg.norm(D, axis=1, keepdims=True)


def ctr_defect(chart, u, h: float = DEFAULT_STEP):
    """Largest normalized violation of <J e_i, e_j> = 0 and <J F, e_i> = 0."""
    F, D, _ = _derivatives(chart, u, h, second=False)
    if D.shape[0] == 0:
        return 0.0
    _check_rank(D)
    T = _unit_columns(D)
    JT = apply_J(T)
    worst = float(np.max(np.abs(T @ apply_J(F)))) if T.size else 0.0
    if T.shape[0] > 1:
        G = JT @ T.T
        worst = max(worst, float(np.max(np.abs(G[np.triu_indices(T.shape[0], 1)]))))
    return worst


def legendrian_angle(chart, u, h: float = DEFAULT_STEP):
    """(|det|, arg det) of the complex matrix (e_1, ..., e_n, F).

    The tangent frame is Gram-Schmidt orthonormalized in parameter order.
    """
    if chart.dim != chart.complex_dim:
        raise NotMaximalDimension(
            f"intrinsic dimension {chart.dim} differs from complex dimension {chart.complex_dim}"
        )
    F, D, _ = _derivatives(chart, u, h, second=False)
    if D.shape[0]:
        _check_rank(D)
        Q, R = np.linalg.qr(D.T)
        Q = Q * np.sign(np.diag(R))
        frame = complex_view(Q.T)
        M = np.column_stack([*frame, complex_view(F)])
    else:
        M = complex_view(F).reshape(1, 1)
    det = np.linalg.det(M)
    return float(abs(det)), float(np.angle(det))


def planarity_rank(points, rel_tol: float = RANK_THRESHOLD) -> int:
    """Numerical rank of the centered point cloud."""
    pts = np.asarray(points)
    if np.iscomplexobj(pts):
        pts = real_view(pts)
    if pts.shape[0] < 10:
        raise ValueError("planarity_rank needs at least 10 points")
    sv = np.linalg.svd(pts - pts.mean(axis=0), compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0]))


def sample_parameters(chart, n: int, seed: int = 0):
    """Scrambled Halton points in the chart's sampling box."""
    k = chart.dim
    if k == 0:
        return np.zeros((n, 0))
    lo = np.array([b[0] for b in chart.box])
    hi = np.array([b[1] for b in chart.box])
    pts = qmc.Halton(d=k, scramble=True, seed=seed).random(n)
    return lo + (hi - lo) * pts


@dataclass(frozen=True)
class VerificationReport:
    """Per-sample certificates for one chart.

    Each quantity is given at step ``h`` and again at ``h/2``.
    ``legendrian_norm`` and ``legendrian_phase`` are NaN when the chart is not
    of maximal dimension.
    """

    chart_name: str
    h: float
    u: np.ndarray
    mean_curvature_norm: np.ndarray
    mean_curvature_norm_half: np.ndarray
    richardson_order: np.ndarray
    ctr_defect: np.ndarray
    ctr_defect_half: np.ndarray
    legendrian_norm: np.ndarray
    legendrian_norm_half: np.ndarray
    legendrian_phase: np.ndarray
    min_singular_value: np.ndarray

    @property
    def phase_spread(self) -> float:
        """Standard deviation of the Legendrian phase about the first sample."""
        ph = self.legendrian_phase
        if ph.size == 0 or np.all(np.isnan(ph)):
            return math.nan
        rel = np.angle(np.exp(1j * (ph - ph[0])))
        return float(np.std(rel))

    def summary(self) -> dict:
        def stats(a):
            a = np.asarray(a, dtype=float)
            if a.size == 0 or np.all(np.isnan(a)):
                return None
            return {"max": float(np.nanmax(a)), "median": float(np.nanmedian(a))}

        return {
            "samples": int(self.u.shape[0]),
            "h": self.h,
            "mean_curvature_norm": stats(self.mean_curvature_norm),
            "mean_curvature_norm_half": stats(self.mean_curvature_norm_half),
            "richardson_order": stats(self.richardson_order),
            "ctr_defect": stats(self.ctr_defect),
            "ctr_defect_half": stats(self.ctr_defect_half),
            "legendrian_norm_deviation": stats(np.abs(self.legendrian_norm - 1.0)),
            "legendrian_phase_std": None if math.isnan(self.phase_spread) else self.phase_spread,
            "min_singular_value": {
                "min": float(np.min(self.min_singular_value)),
                "median": float(np.median(self.min_singular_value)),
            },
        }


def _sample_record(chart, u, h, with_order):
    F, D, _ = _derivatives(chart, u, h, second=False)
    sv = _check_rank(D) if D.shape[0] else np.array([1.0])
    rec = {
        "mc": mean_curvature(chart, u, h)[1],
        "mc_half": mean_curvature(chart, u, h / 2.0)[1],
        "order": richardson_order(chart, u) if (with_order and chart.dim) else math.nan,
        "ctr": ctr_defect(chart, u, h),
        "ctr_half": ctr_defect(chart, u, h / 2.0),
        "sv": float(sv[-1]),
        "leg": math.nan,
        "leg_half": math.nan,
        "phase": math.nan,
    }
    if chart.dim == chart.complex_dim:
        rec["leg"], rec["phase"] = legendrian_angle(chart, u, h)
        rec["leg_half"] = legendrian_angle(chart, u, h / 2.0)[0]
    return rec


def verify_chart(chart, n_samples: int = 50, seed: int = 0, h: float = DEFAULT_STEP,
                 threads: int = 1, richardson: bool = True) -> VerificationReport:
    """Run every certificate at ``n_samples`` quasi-random parameters."""
    U = sample_parameters(chart, n_samples, seed)

    def work(i):
        return _sample_record(chart, U[i], h, richardson)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            recs = list(pool.map(work, range(n_samples)))
    else:
        recs = [work(i) for i in range(n_samples)]

    def col(key):
        return np.array([r[key] for r in recs], dtype=float)

    return VerificationReport(
        chart_name=chart.name,
        h=h,
        u=U,
        mean_curvature_norm=col("mc"),
        mean_curvature_norm_half=col("mc_half"),
        richardson_order=col("order"),
        ctr_defect=col("ctr"),
        ctr_defect_half=col("ctr_half"),
        legendrian_norm=col("leg"),
        legendrian_norm_half=col("leg_half"),
        legendrian_phase=col("phase"),
        min_singular_value=col("sv"),
    )


def flag_failures(chart, report: VerificationReport) -> list[str]:
    """Flags claimed by ``chart`` that its report does not support."""
    bad = []
    if chart.is_minimal:
        worst = max(np.max(report.mean_curvature_norm), np.max(report.mean_curvature_norm_half))
        if not worst < MEAN_CURVATURE_TOL:
            i = int(np.argmax(report.mean_curvature_norm))
            bad.append(f"is_minimal: mean curvature {worst:.3g} at u={report.u[i].tolist()}")
        orders = report.richardson_order[~np.isnan(report.richardson_order)]
        if orders.size and not np.all((orders >= 1.5) & (orders <= 2.5)):
            bad.append(f"is_minimal: Richardson order outside [1.5, 2.5]: {orders.min():.3g}..{orders.max():.3g}")
    if chart.is_c_totally_real:
        worst = max(np.max(report.ctr_defect), np.max(report.ctr_defect_half))
        if not worst < CTR_DEFECT_TOL:
            i = int(np.argmax(report.ctr_defect))
            bad.append(f"is_c_totally_real: defect {worst:.3g} at u={report.u[i].tolist()}")
    if chart.is_legendrian:
        if chart.dim != chart.complex_dim:
            bad.append("is_legendrian: dimension is not maximal")
        else:
            dev = float(np.max(np.abs(report.legendrian_norm - 1.0)))
            if not dev < LEGENDRIAN_NORM_TOL:
                bad.append(f"is_legendrian: |det| deviates from 1 by {dev:.3g}")
            spread = report.phase_spread
            if chart.is_minimal and not spread < LEGENDRIAN_PHASE_STD_TOL:
                bad.append(f"is_legendrian: Legendrian phase spread {spread:.3g}")
    return bad
