"""Sweeps of the closing integral J1 over C2 and search for closing parameters."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import qmc

from .closure import DEFAULT_Q_MAX, DEFAULT_RATIONAL_TOL, classify
from .curve import CurveParams, QuadOptions, c2_min, closing_integrals
from .errors import BracketBelowC2Min, SpiralError

DEFAULT_BRACKET = (1.02, 50.0)  # multiples of c2_min
DEFAULT_SCAN = 256
CLOSING_TOL = 1e-9


@dataclass(frozen=True)
class ProfileSample:
    C2: float
    J1: float
    J2_abs: float
    quadrature_error: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class J1Profile:
    k1: int
    k2: int
    C1: float
    samples: tuple = ()

    @property
    def range(self):
        if not self.samples:
            return None
        return self.samples[0].C2, self.samples[-1].C2

    def arrays(self):
        """(C2, J1, |J2|, quadrature_error) as arrays; failed samples are NaN."""
        rows = [(p.C2, p.J1, p.J2_abs, p.quadrature_error) for p in self.samples]
        return tuple(np.array(col, dtype=float) for col in zip(*rows)) if rows else (np.empty(0),) * 4


@dataclass(frozen=True)
class ClosingHit:
    C2_root: float
    target: tuple[int, int]
    achieved_J1: float
    bracket: tuple[float, float]
    refinement_error: float

    def to_dict(self):
        return {
            "C2_root": self.C2_root,
            "target": list(self.target),
            "achieved_J1": self.achieved_J1,
            "bracket": list(self.bracket),
            "refinement_error": self.refinement_error,
        }


@dataclass(frozen=True)
class ClosingSearch:
    """Hits of J1(C2) = pi p/q in a bracket, ordered by C2.

    ``identically_satisfied`` marks a profile that equals the target at every
    scanned point; the hits are then the scan points themselves.
    """

    k1: int
    k2: int
    C1: float
    target: tuple[int, int]
    bracket: tuple[float, float]
    hits: tuple = ()
    identically_satisfied: bool = False
    profile: J1Profile | None = field(default=None, repr=False)

    def __iter__(self):
        return iter(self.hits)

    def __len__(self):
        return len(self.hits)

    def __getitem__(self, i):
        return self.hits[i]


def _pmap(fn, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _sample(base: CurveParams, C2: float, quad_opts) -> ProfileSample:
    try:
        J1, J2, err = closing_integrals(base.with_c2(C2), quad_opts)
    except SpiralError as exc:
        nan = float("nan")
        return ProfileSample(C2, nan, nan, nan, f"{type(exc).__name__}: {exc}")
    return ProfileSample(C2, J1, abs(J2), err)


def _check_bracket(base, lo):
    cmin, _ = c2_min(base)
    if not lo > cmin:
        raise BracketBelowC2Min(f"C2 = {lo!r} does not exceed c2_min = {cmin!r}")
    return cmin


def j1_profile(k1, k2, C1, C2_grid, threads: int = 1, quad_opts: QuadOptions | None = None) -> J1Profile:
    """Solve one arc per grid value of C2; failures are recorded, not raised.

    The grid is sorted and deduplicated so samples are increasing in C2
    regardless of the order given or of thread scheduling.
    """
    base = CurveParams(k1, k2, C1)
    grid = sorted(set(float(c) for c in C2_grid))
    if not grid:
        return J1Profile(base.k1, base.k2, base.C1)
    _check_bracket(base, grid[0])
    samples = _pmap(lambda c: _sample(base, c, quad_opts), grid, threads)
    return J1Profile(base.k1, base.k2, base.C1, tuple(samples))


def default_bracket(k1, k2, C1):
    cmin, _ = c2_min(CurveParams(k1, k2, C1))
    return DEFAULT_BRACKET[0] * cmin, DEFAULT_BRACKET[1] * cmin


def scan_grid(bracket, n=DEFAULT_SCAN):
    """Geometrically spaced C2 values covering ``bracket``."""
    lo, hi = bracket
    return np.geomspace(lo, hi, n)


def _refine(base, target, lo, flo, hi, fhi, tol, quad_opts, max_iter=200):
    """Bisection in C2 until |J1 - target| < tol / 100 or the bracket collapses."""
    a, fa, b, fb = lo, flo, hi, fhi
    best = (a, fa) if abs(fa) < abs(fb) else (b, fb)
    for _ in range(max_iter):
        if abs(best[1]) < 0.01 * tol:
            break
        c = 0.5 * (a + b)
        if not a < c < b:
            break
        fc = _sample(base, c, quad_opts).J1 - target
        if not math.isfinite(fc):
            return None
        if abs(fc) < abs(best[1]):
            best = (c, fc)
        if (fc < 0) == (fa < 0):
            a, fa = c, fc
        else:
            b, fb = c, fc
    return best


def find_closing(k1, k2, C1, p: int, q: int, bracket=None, scan: int = DEFAULT_SCAN,
                 tol: float = CLOSING_TOL, threads: int = 1,
                 quad_opts: QuadOptions | None = None) -> ClosingSearch:
    """All scanned sign changes of J1(C2) - pi p/q, refined by bisection.

    No monotonicity of J1 is assumed: every adjacent pair of scan points with
    a sign change (or a scan point already within ``tol``) is examined.
    """
    if q <= 0 or math.gcd(p, q) != 1:
        raise ValueError("target p/q must be in lowest terms with q > 0")
    base = CurveParams(k1, k2, C1)
    bracket = tuple(float(x) for x in (bracket or default_bracket(k1, k2, C1)))
    if not bracket[0] < bracket[1]:
        raise ValueError("bracket must be increasing")
    _check_bracket(base, bracket[0])
    target = math.pi * p / q
    profile = j1_profile(k1, k2, C1, scan_grid(bracket, scan), threads, quad_opts)
    C2, J1, _, qerr = profile.arrays()
    f = J1 - target
    finite = np.isfinite(f)
    kw = dict(k1=base.k1, k2=base.k2, C1=base.C1, target=(p, q), bracket=bracket, profile=profile)

    if finite.all() and np.all(np.abs(f) + qerr < tol):
        hits = tuple(
            ClosingHit(float(c), (p, q), float(j), (float(c), float(c)), tol) for c, j in zip(C2, J1)
        )
        return ClosingSearch(hits=hits, identically_satisfied=True, **kw)

    jobs = []
    for i in range(len(C2)):
        if finite[i] and abs(f[i]) + qerr[i] < tol:
            jobs.append((i, i))
        elif i + 1 < len(C2) and finite[i] and finite[i + 1] and (f[i] < 0) != (f[i + 1] < 0):
            if abs(f[i + 1]) + qerr[i + 1] >= tol:
                jobs.append((i, i + 1))

    def work(job):
        i, j = job
        if i == j:
            return float(C2[i]), float(f[i]), (float(C2[i]), float(C2[i]))
        res = _refine(base, target, C2[i], f[i], C2[j], f[j], tol, quad_opts)
        if res is None:
            return None
        return float(res[0]), float(res[1]), (float(C2[i]), float(C2[j]))

    hits = []
    for res in _pmap(work, jobs, threads):
        if res is None or not abs(res[1]) < tol:
            continue
        c, fc, br = res
        hits.append(ClosingHit(c, (p, q), target + fc, br, tol))
    return ClosingSearch(hits=tuple(hits), **kw)


@dataclass(frozen=True)
class DensityWitnesses:
    """C2 values classified Dense; the verdict is heuristic by construction."""

    C2: tuple = ()
    probes: int = 0
    constant_rational: bool = False
    rational_tol: float = DEFAULT_RATIONAL_TOL
    q_max: int = DEFAULT_Q_MAX
    heuristic: bool = True

    def __len__(self):
        return len(self.C2)

    def __iter__(self):
        return iter(self.C2)


def density_examples(k1, k2, C1, bracket=None, count: int = 10, rational_tol: float = DEFAULT_RATIONAL_TOL,
                     q_max: int = DEFAULT_Q_MAX, seed: int = 0, threads: int = 1,
                     quad_opts: QuadOptions | None = None) -> DensityWitnesses:
    """Probe ``10 * count`` quasi-random C2 values and keep up to ``count`` Dense ones.

    If every probe is Closed with one common p/q and J1 does not vary beyond
    ``rational_tol``, the profile is flagged constant-rational and no
    witnesses are returned.
    """
    base = CurveParams(k1, k2, C1)
    lo, hi = tuple(float(x) for x in (bracket or default_bracket(k1, k2, C1)))
    _check_bracket(base, lo)
    n = 10 * count
    if n <= 0:
        return DensityWitnesses(rational_tol=rational_tol, q_max=q_max)
    u = qmc.Halton(d=1, scramble=True, seed=seed).random(n)[:, 0]
    probes = np.exp(math.log(lo) + u * (math.log(hi) - math.log(lo)))
    samples = _pmap(lambda c: _sample(base, c, quad_opts), list(probes), threads)
    good = [s for s in samples if s.ok]
    certs = [classify(s.J1, s.J2_abs, s.quadrature_error, rational_tol, q_max) for s in good]
    kw = dict(probes=n, rational_tol=rational_tol, q_max=q_max)
    if good:
        fracs = {Fraction(c.p, c.q) if c.closed else None for c in certs}
        J1 = np.array([s.J1 for s in good])
        if None not in fracs and len(fracs) == 1 and np.ptp(J1) < math.pi * rational_tol:
            return DensityWitnesses(constant_rational=True, **kw)
    dense = sorted(s.C2 for s, c in zip(good, certs) if c.kind == "dense")
    return DensityWitnesses(C2=tuple(dense[:count]) if len(dense) > count else tuple(dense), **kw)
