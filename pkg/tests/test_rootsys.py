import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from masure import linalg as la
from masure.errors import RootOutsideTable, ViolatesGcmAxioms
from masure.rootsys import (
    enumerate_real_roots,
    germ,
    germ_side,
    inversion_count,
    parse_germ,
    preset,
    validate_gcm,
    weyl_identity,
    weyl_inverse,
    weyl_mul,
    weyl_reduce,
    word_matrix,
)


@pytest.mark.parametrize(
    "bad",
    [((1,),), ((2, 1), (-1, 2)), ((2, -1), (0, 2)), ((2, -1),), ((2, "1/2"), (-1, 2)), ()],
)
def test_gcm_axioms_rejected(bad):
    with pytest.raises(ViolatesGcmAxioms):
        validate_gcm(bad)


def test_realization_shapes(reals):
    aff = reals["affine-a1"]
    assert (aff.n, aff.d) == (2, 3)
    assert aff.roots == ((2, -2, 1), (-2, 2, 0))
    hyp = reals["hyp23"]
    assert hyp.roots == ((2, -3), (-3, 2))
    for real in reals.values():
        for i in range(real.n):
            for j in range(real.n):
                assert la.dot(real.roots[j], real.coroots[i]) == real.matrix[i][j]
        assert la.rank(real.roots) == real.n
        assert all(la.dot(a, real.rho_vee) == 1 for a in real.roots)


def test_root_counts(reals):
    assert [r.coords for r in enumerate_real_roots(reals["a1"], 20).positive] == [(1,)]
    hyp = enumerate_real_roots(reals["hyp23"], 20).positive
    assert sorted(r.coords for r in hyp) == [(0, 1), (1, 0), (1, 3), (3, 1), (3, 8), (8, 3)]
    assert len(enumerate_real_roots(reals["hyp23"], 200).positive) == 12
    aff = enumerate_real_roots(reals["affine-a1"], 20).positive
    # alpha_1 + k delta and alpha_2 + k delta
    assert sorted(r.coords for r in aff) == sorted(
        [(k + 1, k) for k in range(10)] + [(k, k + 1) for k in range(10)]
    )


def orbit_oracle(real, H, max_len=12):
    """Real roots of height <= H reached by words of bounded length applied to simple roots."""
    C = real.matrix
    found = set()
    for i in range(real.n):
        frontier = {tuple(1 if j == i else 0 for j in range(real.n))}
        for _ in range(max_len):
            nxt = set()
            for b in frontier:
                for s in (b, tuple(-x for x in b)):
                    if abs(sum(s)) <= H:
                        found.add(s)
                for j in range(real.n):
                    p = sum(b[t] * C[j][t] for t in range(real.n))
                    c = tuple(b[t] - (p if t == j else 0) for t in range(real.n))
                    nxt.add(c)
            frontier = nxt
    return found


@pytest.mark.parametrize("name", ["a1", "affine-a1", "hyp23"])
def test_roots_match_orbit_oracle(reals, tables, name):
    got = {r.coords for r in tables[name].roots}
    assert got == orbit_oracle(reals[name], 20)


@pytest.mark.parametrize("name", ["a1", "affine-a1", "hyp23"])
def test_table_closure(tables, name):
    table = tables[name]
    real = table.realization
    for r in table.roots:
        assert table.negate(r).coords == tuple(-c for c in r.coords)
        # the coroot pairs to 2 with its root
        assert r(r.coroot) == 2
        for i in range(real.n):
            cov = la.covec_mat(r.covector, real.reflections[i])
            img = tuple(r.coords[t] - (sum(r.coords[s] * real.matrix[i][s] for s in range(real.n)) if t == i else 0) for t in range(real.n))
            if abs(sum(img)) <= table.height_bound:
                assert table.by_covector(cov).coords == img


def test_by_covector_missing(tables):
    with pytest.raises(RootOutsideTable):
        tables["hyp23"].by_coords((21, 55))


words = st.lists(st.integers(0, 1), max_size=6)


def shortest_words(real, M, max_len):
    """All words of minimal length acting by M (brute force)."""
    for n in range(max_len + 1):
        hits = [w for w in itertools.product(range(real.n), repeat=n) if word_matrix(real, w) == M]
        if hits:
            return hits
    return []


@given(words)
def test_reduction_is_lex_least_reduced(word):
    real = preset("hyp23")
    w = weyl_reduce(real, word)
    assert w.matrix == word_matrix(real, word)
    assert word_matrix(real, w.word) == w.matrix
    hits = shortest_words(real, w.matrix, len(word))
    assert len(w.word) == len(hits[0])
    assert w.word == min(hits)


@given(st.lists(st.integers(0, 1), max_size=3))
def test_inversion_count_is_length(word):
    real = preset("hyp23")
    table = enumerate_real_roots(real, 20)
    w = weyl_reduce(real, word)
    assert inversion_count(real, table, w) == len(w)


@given(words, words)
def test_group_laws(a, b):
    real = preset("affine-a1")
    wa, wb = weyl_reduce(real, a), weyl_reduce(real, b)
    assert weyl_mul(real, wa, weyl_inverse(real, wa)) == weyl_identity(real)
    assert weyl_mul(real, wa, wb).matrix == la.matmul(wa.matrix, wb.matrix)


def test_affine_orbit_grows(reals):
    real = reals["affine-a1"]
    v = (F(1), F(0), F(0))
    seen = {v}
    for n in range(1, 8):
        for w in itertools.product(range(2), repeat=n):
            seen.add(la.matvec(word_matrix(real, w), v))
    assert len(seen) > 8


def test_germ_literals(reals):
    real = reals["hyp23"]
    for text in ["+e", "-e", "+s1s2", "-s2"]:
        assert parse_germ(real, text).literal() == text
    assert parse_germ(real, "+s1s1").literal() == "+e"
    with pytest.raises(ValueError):
        parse_germ(real, "s1")
    with pytest.raises(ValueError):
        parse_germ(real, "+x1")


def test_germ_side(tables, reals):
    real = reals["hyp23"]
    t = tables["hyp23"]
    a1 = t.simple(0)
    assert germ_side(t, a1, germ(real, 1)) == 1
    assert germ_side(t, a1, germ(real, -1)) == -1
    assert germ_side(t, a1, germ(real, 1, [0])) == -1
    assert germ_side(t, t.simple(1), germ(real, 1, [0])) == 1
