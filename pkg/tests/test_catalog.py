import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spiral_minimal.catalog import (
    ImmersionChart,
    clifford_join,
    clifford_period,
    fs_distance,
    hopf_project,
    leaf_legendrian_torus,
    leaf_point,
    leaf_real_sphere,
    rotate_fiber,
    spiral_product,
)
from spiral_minimal.curve import CurveParams, assemble_complete, c2_min, solve_arc
from spiral_minimal.errors import DimensionMismatch, UncertifiedInput
from spiral_minimal.verify import ctr_defect, mean_curvature, sample_parameters, verify_chart


def curve_for(k1, k2, C1, factor, m=6):
    base = CurveParams(k1, k2, C1)
    arc = solve_arc(base.with_c2(factor * c2_min(base)[0]))
    return assemble_complete(arc, m)


def unit_norm(chart, n=50):
    U = sample_parameters(chart, n, seed=3)
    return np.max(np.abs(np.linalg.norm(chart(U), axis=1) - 1.0))


def test_point_leaf():
    P = leaf_point()
    assert P.dim == 0 and P.complex_dim == 0 and all(P.flags.values())
    assert abs(P(np.zeros(0))[0]) == 1.0


def test_point_point_product_is_the_curve():
    curve = curve_for(0, 0, -1.0, 2.0, m=4)
    G = spiral_product(curve, leaf_point(), leaf_point())
    t = np.linspace(*curve.tau_range, 31)[:-1]
    np.testing.assert_array_equal(G(t[:, None]), curve(t))


def test_point_hopf_projection_is_one_point():
    assert hopf_project(np.array([-1j])).coords.tolist() == [1.0]


def test_real_circle_chart():
    S = leaf_real_sphere(1)
    np.testing.assert_allclose(S(np.array([0.3])), [math.cos(0.3), math.sin(0.3)])
    assert ctr_defect(S, np.array([0.3])) == 0.0


@pytest.mark.parametrize("chart", [leaf_real_sphere(1), leaf_real_sphere(3), leaf_legendrian_torus(2),
                                   leaf_legendrian_torus(3)], ids=lambda c: c.name)
def test_leaf_unit_norm(chart):
    assert unit_norm(chart) < 1e-12


def test_legendrian_flag_requires_maximal_dimension():
    with pytest.raises(ValueError):
        ImmersionChart("bad", 1, 2, lambda U: U, box=((0, 1),), periods=(None,), is_legendrian=True)


def test_periodic_wrap():
    T = leaf_legendrian_torus(2)
    u = np.array([0.4, 1.1])
    np.testing.assert_allclose(T(u + 2 * np.pi * np.array([3, -2])), T(u), atol=1e-13)


def test_torus_fiber_symmetry_by_shift():
    T = leaf_legendrian_torus(2)
    R = rotate_fiber(T, 2 * math.pi / 3)
    U = sample_parameters(T, 50, seed=0)
    np.testing.assert_allclose(R(U), T(U + 2 * math.pi / 3), atol=1e-12)


def test_rotate_identity_cases():
    T = leaf_legendrian_torus(2)
    U = sample_parameters(T, 10, seed=0)
    np.testing.assert_array_equal(rotate_fiber(T, 0.0)(U), T(U))
    np.testing.assert_allclose(rotate_fiber(T, 2 * math.pi)(U), T(U), atol=1e-15)
    assert rotate_fiber(T, 1.0).flags == T.flags


def test_spiral_dimension_bookkeeping():
    inner = spiral_product(curve_for(1, 0, -1.0, 2.0), leaf_real_sphere(1), leaf_point())
    assert (inner.dim, inner.complex_dim) == (2, 2) and inner.is_legendrian
    outer = spiral_product(curve_for(2, 2, -1.0, 3.0), inner, leaf_legendrian_torus(2))
    assert (outer.dim, outer.complex_dim) == (5, 5) and outer.is_legendrian
    assert unit_norm(outer) < 1e-12
    assert outer.provenance["left"]["kind"] == "spiral"


def test_spiral_flags_follow_C1():
    for C1 in (1.0, 0.5, -2.0):
        G = spiral_product(curve_for(1, 0, C1, 2.0), leaf_real_sphere(1), leaf_point())
        assert G.is_minimal and not G.is_c_totally_real and not G.is_legendrian


def test_spiral_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        spiral_product(curve_for(1, 0, -1.0, 2.0), leaf_point(), leaf_point())


def test_spiral_uncertified_input():
    bad = ImmersionChart("plain", 1, 1, leaf_real_sphere(1).fn, box=((0, 1),), periods=(None,))
    with pytest.raises(UncertifiedInput):
        spiral_product(curve_for(1, 0, -1.0, 2.0), bad, leaf_point())


def test_spiral_closed_curve_is_periodic_in_t():
    curve = curve_for(0, 0, -1.0, 2.0, m=4)
    G = spiral_product(curve, leaf_point(), leaf_point())
    assert G.periods[0] == pytest.approx(curve.tau_range[1] - curve.tau_range[0])
    open_curve = curve_for(1, 0, -1.0, 2.0, m=3)
    G2 = spiral_product(open_curve, leaf_real_sphere(1), leaf_point())
    lo, hi = open_curve.tau_range
    assert G2.periods[0] is None and lo < G2.box[0][0] < G2.box[0][1] < hi


def test_clifford_join_points_is_horizontal_great_circle():
    C = clifford_join(leaf_point(), leaf_point())
    t = np.linspace(0, 2 * math.pi, 9)
    expect = np.stack([np.exp(1j * t), np.exp(-1j * t)], axis=1) / math.sqrt(2)
    np.testing.assert_allclose(C(t[:, None]), expect, atol=1e-15)
    for u in sample_parameters(C, 5):
        assert mean_curvature(C, u)[1] < 1e-8
        assert ctr_defect(C, u) < 1e-10


def test_clifford_join_circle_point():
    C = clifford_join(leaf_real_sphere(1), leaf_point())
    assert C.provenance["s_star"] == pytest.approx(math.atan(1 / math.sqrt(2)))
    for u in sample_parameters(C, 5):
        assert mean_curvature(C, u)[1] < 1e-6


@pytest.mark.parametrize("n1,n2", [(0, 0), (1, 0), (2, 1), (1, 3)])
def test_clifford_period_closes(n1, n2):
    T = clifford_period(n1, n2)
    r = (n2 + 1) / (n1 + 1)
    for c in (math.sqrt(r), -1 / math.sqrt(r)):
        assert math.cos(c * T) == pytest.approx(1.0, abs=1e-12)


def test_clifford_join_needs_legendrian():
    inner = spiral_product(curve_for(1, 0, 0.5, 2.0), leaf_real_sphere(1), leaf_point())
    with pytest.raises(UncertifiedInput):
        clifford_join(inner, leaf_point())


def test_hopf_tie_break():
    z = np.array([1j, -1j]) / math.sqrt(2)
    np.testing.assert_allclose(hopf_project(z).coords, np.array([1, -1]) / math.sqrt(2), atol=1e-15)


def test_hopf_rejects_bad_input():
    with pytest.raises(ValueError):
        hopf_project(np.zeros(3))
    with pytest.raises(ValueError):
        hopf_project(np.array([1.0, 1.0]))


unit_vectors = st.lists(
    st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=2, max_size=5
).map(lambda xs: np.array([complex(a, b) for a, b in xs])).filter(lambda z: np.linalg.norm(z) > 0.1)


@settings(max_examples=80)
@given(z=unit_vectors, theta=st.floats(-10, 10))
def test_hopf_fiber_invariance(z, theta):
    z = z / np.linalg.norm(z)
    a, b = hopf_project(z), hopf_project(np.exp(1j * theta) * z)
    assert fs_distance(a, b) < 1e-12
    assert np.max(np.abs(a.coords - b.coords)) < 1e-12 or np.sort(np.abs(z))[-1] - np.sort(np.abs(z))[-2] < 1e-9


@settings(max_examples=80)
@given(z=unit_vectors, w=unit_vectors)
def test_fs_distance_formula(z, w):
    if z.size != w.size:
        return
    z, w = z / np.linalg.norm(z), w / np.linalg.norm(w)
    expect = math.acos(min(1.0, abs(np.vdot(z, w))))
    assert fs_distance(hopf_project(z), hopf_project(w)) == pytest.approx(expect, abs=1e-7)


def test_hopf_after_rotation_on_chart():
    T = leaf_legendrian_torus(2)
    R = rotate_fiber(T, 0.77)
    for u in sample_parameters(T, 20, seed=5):
        assert fs_distance(hopf_project(T(u)), hopf_project(R(u))) < 1e-12


def test_flags_confirmed_on_catalog():
    charts = [
        leaf_real_sphere(2),
        leaf_legendrian_torus(2),
        spiral_product(curve_for(1, 0, -1.0, 2.0), leaf_real_sphere(1), leaf_point()),
        clifford_join(leaf_real_sphere(1), leaf_point()),
    ]
    from spiral_minimal.verify import flag_failures

    for chart in charts:
        rep = verify_chart(chart, n_samples=20)
        assert flag_failures(chart, rep) == [], chart.name
