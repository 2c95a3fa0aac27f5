from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from masure import linalg as la
from masure.apartment import L1, LINF, norm_eval
from masure.errors import DegenerateWitness, MixedSigns
from masure.masure_sim import Masure, MasurePoint, make_config
from masure.metrics import (
    XiSpec,
    chi,
    discreteness_probe,
    distance,
    distance_mixed,
    distance_oracle,
    distance_result,
    equivalence_constant,
    geodesic,
    geodesic_family,
    mixed_bound_k,
    path_retract_check,
    ray_exit,
    standard_xi,
    t_lipschitz_constant,
    theta,
    translate,
    upsilon,
)
from masure.rootsys import germ, preset

from conftest import PRESETS, a1_chain, fractions, points, small_masure

MASURES = {name: small_masure(name) for name in PRESETS}
A1 = preset("a1")
HYP = preset("hyp23")


def root(*b):
    return MasurePoint((), la.vec(b))


def test_distance_examples():
    m = MASURES["hyp23"]
    res = distance_result(m, root(0, 0), root(-1, -1), theta(HYP))
    assert res.value == 2
    assert res.witness.u == (-1, -1) or res.witness.u2 == (0, 0)
    assert distance(m, root(0, 0), root(-1, -1), theta(HYP)) == 2
    m1, w = a1_chain((0,))
    x, y = m1.point(w, [-1]), root(-1)
    assert distance(m1, x, y, theta(A1)) == 2
    assert distance_mixed(m1, x, y, standard_xi(A1)) == 4
    assert distance(m1, x, x, theta(A1)) == 0
    assert distance_oracle(m1, x, y, theta(A1), N=1) == 2


def test_hyp23_witness_is_lexmin():
    m = MASURES["hyp23"]
    res = distance_result(m, root(0, 0), root(-1, -1), theta(HYP))
    assert (res.witness.u, res.witness.u2) == ((-1, -1), (0, 0))


def tree_distance(k, x, y):
    """Distance in the a1 tree with one branch glued on 2b + k >= 0."""
    if x.word == y.word:
        return abs(x.b[0] - y.b[0])
    b0 = F(-k, 2)
    return abs(x.b[0] - b0) + abs(y.b[0] - b0)


@given(st.integers(-3, 3), fractions, fractions, st.booleans(), st.booleans(), st.sampled_from([1, -1]))
def test_a1_equals_tree_metric(k, b1, b2, on1, on2, sign):
    m, w = a1_chain((k,))
    x = m.point(w if on1 else (), [b1])
    y = m.point(w if on2 else (), [b2])
    assert distance(m, x, y, theta(A1, sign=sign)) == tree_distance(k, x, y)


@st.composite
def triple(draw):
    name = draw(st.sampled_from(PRESETS))
    m = MASURES[name]
    sign = draw(st.sampled_from([1, -1]))
    norm = draw(st.sampled_from([L1, LINF]))
    return m, theta(m.real, norm, sign), draw(points(m)), draw(points(m)), draw(points(m))


@given(triple())
def test_metric_axioms(case):
    m, th, x, y, z = case
    dxy, dyx = distance(m, x, y, th), distance(m, y, x, th)
    assert dxy == dyx
    assert (dxy == 0) == m.points_equal(x, y)
    assert distance(m, x, z, th) <= dxy + distance(m, y, z, th)


@given(triple())
def test_retraction_is_1_lipschitz(case):
    m, th, x, y, _ = case
    g = th.germ
    rx, ry = MasurePoint((), m.retract(x, g)), MasurePoint((), m.retract(y, g))
    assert distance(m, rx, ry, th) <= distance(m, x, y, th)


@given(triple())
def test_root_restriction_is_norm_induced(case):
    m, th, x, y, _ = case
    d = la.sub(y.b, x.b)
    shift = la.vec([3] * m.real.d)
    a, b = root(*x.b), root(*y.b)
    a2, b2 = root(*la.add(x.b, shift)), root(*la.add(la.add(x.b, shift), d))
    assert distance(m, a, b, th) == distance(m, a2, b2, th)


@given(triple())
def test_witness_attains_value(case):
    m, th, x, y, _ = case
    res = distance_result(m, x, y, th)
    assert norm_eval(th.norm, res.witness.u) + norm_eval(th.norm, res.witness.u2) == res.value
    assert translate(m, x, th.germ, res.witness.u) == translate(m, y, th.germ, res.witness.u2)


def test_oracle_bounds_lp():
    m = MASURES["affine-a1"]
    th = theta(m.real)
    pts = [m._canon(w, la.vec(b)) for w in m.apartments[:4] for b in [(0, 0), (1, -1), (F(1, 2), 0)]]
    for x in pts[:6]:
        for y in pts[6:]:
            lp = distance(m, x, y, th)
            if lp > 8:
                continue
            orc = distance_oracle(m, x, y, th, N=2)
            assert orc >= lp
            res = distance_result(m, x, y, th)
            if all((2 * c).denominator == 1 for c in res.witness.u + res.witness.u2):
                assert orc == lp


def test_ray_exit_and_contraction():
    m, w = a1_chain((0,))
    x = m.point(w, [-1])
    assert ray_exit(m, x, [1]) == (1, (0,))
    assert ray_exit(m, root(5), [1]) == (0, (5,))
    assert chi(m, x, 1, [1]) == root(0)
    assert chi(m, x, 0, [1]) == x
    assert chi(m, root(3), F(1, 3), [1]) == root(3)
    assert upsilon(m, x, 1, [1]) == root(0)
    assert upsilon(m, x, F(1, 2), [1]) == root(0)
    with pytest.raises(ValueError):
        ray_exit(m, x, [0])


@given(st.sampled_from(PRESETS).flatmap(lambda n: st.tuples(st.just(n), points(MASURES[n]))))
def test_ray_exit_bound(case):
    name, x = case
    m = MASURES[name]
    u = m.real.rho_vee
    ell = t_lipschitz_constant(m.real, u)
    gap = la.sub(m.retract(x, germ(m.real, 1)), m.retract(x, germ(m.real, -1)))
    for sign in (1, -1):
        T, y = ray_exit(m, x, u, sign)
        assert T >= 0 and (T == 0) == (x.word == ())
        assert T <= ell * norm_eval(L1, gap)


@given(st.sampled_from(PRESETS).flatmap(lambda n: st.tuples(st.just(n), points(MASURES[n]))))
def test_mixed_bound(case):
    name, x = case
    m = MASURES[name]
    real = m.real
    xi = standard_xi(real)
    u = real.rho_vee
    a = root(*la.zeros(real.d))
    k = mixed_bound_k(real, u, xi)
    rp = root(*m.retract(x, germ(real, 1)))
    rm = root(*m.retract(x, germ(real, -1)))
    lhs = distance_mixed(m, a, x, xi)
    assert lhs <= k * (distance_mixed(m, a, rm, xi) + distance_mixed(m, a, rp, xi))


@given(triple(), fractions, fractions)
def test_geodesic_isometry(case, s, t):
    m, th, x, y, _ = case
    s, t = abs(s) / 12, abs(t) / 12
    res = distance_result(m, x, y, th)
    assert geodesic(m, x, y, th, 0, res) == x
    assert m.points_equal(geodesic(m, x, y, th, 1, res), y)
    gs, gt = geodesic(m, x, y, th, s, res), geodesic(m, x, y, th, t, res)
    assert distance(m, gs, gt, th) == abs(s - t) * res.value


def test_geodesic_family_hyp23():
    m = MASURES["hyp23"]
    th = theta(HYP)
    xp = HYP.coroots[0]
    res = distance_result(m, root(0, 0), root(*xp), th)
    assert res.value == 5
    a1 = norm_eval(L1, res.witness.u) / res.value
    assert geodesic_family(m, xp, th, F(1, 2), a1 / 2, res) != geodesic_family(m, xp, th, 0, a1 / 2, res)
    for z in (0, F(1, 3), 1):
        for s, t in ((0, F(1, 2)), (F(1, 5), F(4, 5)), (F(1, 3), 1)):
            p = root(*geodesic_family(m, xp, th, z, s, res))
            q = root(*geodesic_family(m, xp, th, z, t, res))
            assert distance(m, p, q, th) == (t - s) * res.value
        assert geodesic_family(m, xp, th, z, 0, res) == (0, 0)
        assert geodesic_family(m, xp, th, z, 1, res) == la.vec(xp)
    with pytest.raises(DegenerateWitness):
        geodesic_family(m, (-1, -1), th, 0, 0)


def test_discreteness():
    assert discreteness_probe(MASURES["a1"]) == {"discrete": True, "min_spacing": 1}
    m = Masure(make_config(HYP, 200, 2, 4))
    rep = discreteness_probe(m, levels=3)
    d = [s["d_plus"] for s in rep["levels"]]
    cor = [s["coroot_norm"] for s in rep["levels"]]
    assert all(v > 0 for v in d) and d == sorted(d, reverse=True) and len(set(d)) == 3
    assert cor == sorted(cor) and len(set(cor)) == 3
    assert rep["min_mixed"] >= 1


def test_equivalence():
    m = MASURES["hyp23"]
    pts = [root(0, 0), root(1, -1), root(F(1, 2), 2)] + [m._canon(w, (0, 0)) for w in m.apartments[1:3]]
    pairs = [(x, y) for x in pts for y in pts if x != y]
    same = equivalence_constant(m, theta(HYP), theta(HYP), pairs)
    assert (same["forward"], same["backward"]) == (1, 1)
    rep = equivalence_constant(m, theta(HYP), theta(HYP, word=[0, 1]), pairs)
    assert rep["gallery"] == 2
    assert rep["forward"] <= rep["bound"] and rep["backward"] <= rep["bound"]
    with pytest.raises(MixedSigns):
        equivalence_constant(m, theta(HYP), theta(HYP, sign=-1), pairs)
    with pytest.raises(MixedSigns):
        XiSpec(theta(HYP), theta(HYP))


def test_path_check():
    m, w = a1_chain((0,))
    rep = path_retract_check(m, root(1), [2])
    assert rep["u_path"] and rep["increment_ok"] and len(rep["breakpoints"]) == 2
    rep = path_retract_check(m, m.point(w, [-1]), [2])
    assert [t for t, _ in rep["breakpoints"]] == [0, F(1, 2), 1]
    assert rep["u_path"] and rep["increment_ok"] and rep["two_time_ok"]


@given(st.sampled_from(PRESETS).flatmap(lambda n: st.tuples(st.just(n), points(MASURES[n]))))
def test_path_check_samples(case):
    name, x = case
    m = MASURES[name]
    rep = path_retract_check(m, x, m.real.rho_vee)
    assert rep["u_path"] and rep["increment_ok"] and rep["two_time_ok"]
