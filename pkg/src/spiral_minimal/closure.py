"""Rational closure detection via continued fractions."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

DEFAULT_RATIONAL_TOL = 1e-9
DEFAULT_Q_MAX = 10_000


def convergents(x):
    """Continued-fraction convergents (p, q) of the exact value of ``x``."""
    x = Fraction(x)
    p0, q0, p1, q1 = 0, 1, 1, 0
    while True:
        a = math.floor(x)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def rational_approximation(x, rational_tol, q_max):
    """First convergent p/q of ``x`` with q <= q_max and |x - p/q| < tol.

    Returns ``(p, q, depth)``, with ``p = q = None`` when the convergents
    outgrow ``q_max`` first; ``depth`` counts the convergents examined.
    """
    depth = 0
    for p, q in convergents(x):
        if q > q_max:
            break
        depth += 1
        if abs(x - p / q) < rational_tol:
            return p, q, depth
    return None, None, depth


def closing_multiple(ratios):
    """Least even m with m * r an even integer for every rational r in ``ratios``.

    Each r stands for an angle r * pi; m * r * pi must vanish modulo 2 pi.
    """
    m = 2
    for r in ratios:
        r = Fraction(r)
        need = 2 * r.denominator // math.gcd(2 * r.denominator, r.numerator)
        m = m * need // math.gcd(m, need)
    return m


@dataclass(frozen=True)
class ClosureCertificate:
    kind: str  # "closed", "dense" or "undetermined"
    j1_over_pi: float
    rational_tol: float
    q_max: int
    p: int | None = None
    q: int | None = None
    m_min: int | None = None
    cf_depth: int = 0
    j2_over_pi: tuple[int, int] | None = None
    heuristic: bool = False
    note: str = ""

    @property
    def closed(self) -> bool:
        return self.kind == "closed"

    def to_dict(self):
        d = asdict(self)
        if d["j2_over_pi"] is not None:
            d["j2_over_pi"] = list(d["j2_over_pi"])
        return d


def classify(J1, J2, quadrature_error, rational_tol=DEFAULT_RATIONAL_TOL, q_max=DEFAULT_Q_MAX):
    """Classify closure from the two closing integrals.

    The curve closes after m arcs when m is even and both m*J1 and m*|J2| are
    multiples of 2 pi.  A "dense" verdict only means that no fraction with
    denominator up to ``q_max`` matched; it is a heuristic, not a proof of
    irrationality.
    """
    x = J1 / math.pi
    base = dict(j1_over_pi=x, rational_tol=rational_tol, q_max=q_max)
    if not quadrature_error / math.pi < rational_tol / 10.0:
        return ClosureCertificate(
            kind="undetermined", note="quadrature error exceeds rational_tol/10", **base
        )
    p, q, depth = rational_approximation(x, rational_tol, q_max)
    if p is None:
        return ClosureCertificate(kind="dense", cf_depth=depth, heuristic=True, **base)
    p2, q2, _ = rational_approximation(abs(J2) / math.pi, rational_tol, q_max)
    if p2 is None:
        return ClosureCertificate(
            kind="dense",
            cf_depth=depth,
            heuristic=True,
            note="J1/pi is rational but |J2|/pi is not within q_max",
            **base,
        )
    m = closing_multiple([Fraction(p, q), Fraction(p2, q2)])
    return ClosureCertificate(
        kind="closed", p=p, q=q, m_min=m, cf_depth=depth, j2_over_pi=(p2, q2), **base
    )


def classify_closure(arc, rational_tol=DEFAULT_RATIONAL_TOL, q_max=DEFAULT_Q_MAX):
    """Closure certificate of the complete curve built from ``arc``."""
    return classify(arc.J1, arc.J2, arc.quadrature_error, rational_tol, q_max)
