from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ebk import groups
from ebk.models import (ActionSpec, Locus, ModelManifold, Point, act_on_point, check_level, coadjoint, hopf,
                        is_excluded_point, locus_distance, moment_map, named_point, scaled_moment,
                        torus_moment_from_t)

EXAMPLE = ModelManifold((2, 1))
SU2 = ActionSpec.su2_diagonal()
P1 = ModelManifold((1,))


def test_model_validation():
    assert EXAMPLE.n == 2 and EXAMPLE.degrees(3) == (6, 3)
    assert EXAMPLE.describe() == "P1xP1(2,1)"
    with pytest.raises(ValueError):
        ModelManifold((1, 1, 1))
    with pytest.raises(ValueError):
        ModelManifold((0,))


def test_action_shift_is_rational():
    a = ActionSpec.circle((1,), "1/2")
    assert a.shift == (Fraction(1, 2),)
    assert a.shift_denominator == 2
    b = ActionSpec.torus([(1, 0), (0, 1)], [Fraction(1, 3), Fraction(1, 2)])
    assert b.shift_denominator == 6
    assert ActionSpec.torus([(1, 2)]).shift == (0,)


def test_action_validation():
    with pytest.raises(ValueError):
        ActionSpec(groups.GroupSpec.su2(), ((1,),))
    with pytest.raises(ValueError):
        ActionSpec.torus([(1, 0), (1,)])
    with pytest.raises(ValueError):
        ActionSpec(groups.GroupSpec.circle(), ((1,),), (Fraction(1), Fraction(2)))


def test_check_level():
    a = ActionSpec.circle((1,), Fraction(1, 2))
    assert check_level(a, 4) == 4
    for bad in (3, -2, 1.5):
        with pytest.raises(ValueError):
            check_level(a, bad)


def test_named_points():
    n = named_point("north", 1)
    np.testing.assert_allclose(n.coords, [[1, 0]])
    s = named_point("south", 2)
    np.testing.assert_allclose(s.t, [1, 1])
    p = named_point("t=1/3", 1)
    assert p.exact_t == (Fraction(1, 3),)
    assert p.t[0] == pytest.approx(1 / 3)
    q = named_point("offdiag-sample", 2)
    assert not is_excluded_point(EXAMPLE, SU2, q)
    for bad in ("east", "t=2"):
        with pytest.raises(ValueError):
            named_point(bad, 1)
    with pytest.raises(ValueError):
        named_point("offdiag-sample", 1)


def test_point_normalizes():
    p = Point.from_homogeneous((3, 4j))
    np.testing.assert_allclose(np.linalg.norm(p.coords, axis=1), 1)
    with pytest.raises(ValueError):
        Point.from_homogeneous((0, 0))


def _points(n):
    c = st.floats(-1, 1, allow_nan=False)
    pair = st.tuples(c, c, c, c).filter(lambda v: np.linalg.norm(v) > 0.1)
    return st.lists(pair, min_size=n, max_size=n).map(
        lambda rows: Point.from_homogeneous(*[(complex(a, b), complex(x, y)) for a, b, x, y in rows]))


@settings(max_examples=50, deadline=None)
@given(p=_points(1), a=st.integers(1, 5))
def test_su2_single_factor_moment_norm(p, a):
    assert np.linalg.norm(moment_map(ModelManifold((a,)), SU2, p)) == pytest.approx(a, abs=1e-10)


@settings(max_examples=50, deadline=None)
@given(p=_points(2), w=st.tuples(*[st.floats(-1, 1)] * 4))
def test_su2_moment_equivariance(p, w):
    g = np.asarray(w)
    if np.linalg.norm(g) < 0.1:
        g = groups.su2_identity()
    g = g / np.linalg.norm(g)
    lhs = moment_map(EXAMPLE, SU2, act_on_point(SU2, g, p))
    rhs = coadjoint(SU2, g, moment_map(EXAMPLE, SU2, p))
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(p=_points(2), th=st.floats(0, 7))
def test_torus_moment_invariant(p, th):
    a = ActionSpec.circle((1, -2), 1)
    np.testing.assert_allclose(moment_map(ModelManifold((1, 1)), a, act_on_point(a, [th], p)),
                               moment_map(ModelManifold((1, 1)), a, p), atol=1e-12)


def test_torus_moment_exact():
    a = ActionSpec.circle((1,), Fraction(1, 2))
    assert torus_moment_from_t(P1, a, [Fraction(1, 2)]) == [0]
    assert moment_map(P1, a, named_point("north", 1))[0] == -0.5
    assert scaled_moment(P1, a, named_point("south", 1), 4)[0] == pytest.approx(2.0)


def test_hopf_values():
    np.testing.assert_allclose(hopf((1, 0)), [0, 0, 1])
    np.testing.assert_allclose(hopf((0, 1)), [0, 0, -1])


def test_locus_distance_zero_level_and_ray():
    a = ActionSpec.circle((1,), Fraction(1, 2))
    rep = locus_distance(P1, a, named_point("t=1/2", 1), Locus.zero_level())
    assert rep.distance == 0 and rep.interior
    rep = locus_distance(P1, a, named_point("t=3/10", 1), Locus.zero_level())
    assert rep.distance == pytest.approx(0.2)
    # moment at t = 0.8 is +0.3: on the ray of weight 1, off the ray of weight -1
    p = Point.from_t(0.8)
    assert locus_distance(P1, a, p, Locus.ray(1)).distance == pytest.approx(0)
    assert locus_distance(P1, a, p, Locus.ray(-1)).distance == pytest.approx(0.3)
    with pytest.raises(ValueError):
        locus_distance(P1, a, p, Locus.ray(0))


def test_su2_cone_membership():
    p = named_point("offdiag-sample", 2)
    rep = locus_distance(EXAMPLE, SU2, p, Locus.cone_over_orbit(3))
    assert rep.distance == 0 and rep.interior
    # (1,1) at antipodal points has zero moment
    q = Point.from_homogeneous((1, 0), (0, 1))
    rep = locus_distance(ModelManifold((1, 1)), SU2, q, Locus.cone_over_orbit(1))
    assert not rep.interior


def test_excluded_diagonal():
    p = Point.from_t(0.3, 0.3, phases=(1.0, 1.0))
    assert is_excluded_point(EXAMPLE, SU2, p)
    with pytest.raises(ValueError):
        is_excluded_point(P1, SU2, Point.from_t(0.3))


def test_compatibility_checked():
    with pytest.raises(ValueError):
        moment_map(P1, ActionSpec.circle((1, 1)), Point.from_t(0.5))


def test_scaled_moment_examples():
    a = ActionSpec.circle((1,), Fraction(1, 2))
    assert scaled_moment(P1, a, Point.from_t(Fraction(3, 4)), 4)[0] == pytest.approx(1.0)
    assert scaled_moment(P1, a, Point.from_t(Fraction(1, 2)), 6)[0] == 0.0
    north = Point.from_homogeneous((1, 0))
    np.testing.assert_allclose(scaled_moment(P1, SU2, north, 2), [0, 0, 2])
    with pytest.raises(ValueError):
        scaled_moment(P1, a, north, 3)


def test_section_weights_lie_in_scaled_image():
    # every occurring torus weight at level k lies in k * Phi(M) = [k(0 - beta), k(a - beta)]
    from ebk import sections

    a = ActionSpec.circle((1,), Fraction(1, 3))
    for k in (3, 6, 9):
        w = sections.build_space(ModelManifold((2,)), k, a).torus_weights[:, 0]
        lo = scaled_moment(ModelManifold((2,)), a, Point.from_t(0), k)[0]
        hi = scaled_moment(ModelManifold((2,)), a, Point.from_t(1), k)[0]
        assert w.min() >= lo - 1e-12 and w.max() <= hi + 1e-12
