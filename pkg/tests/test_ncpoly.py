"""Presented algebras: normal forms against naive rewriting and concrete representations."""
import random

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from qbundle.ncpoly import (
    NCPoly, Presentation, RewriteError, UnknownGenerator, check_confluence, check_hopf_axioms,
    group_algebra, pbw_count, preset, quaternions, suq2, zn_times_zn,
)
from qbundle.scalars import ONE, Q_VAR, S_VAR, ZERO, Scalar

SUQ2 = suq2()


def naive_reduce(pres, raw, rng):
    """Apply randomly chosen rewrites until nothing matches; confluence makes the result unique."""
    cur = {pres.word(w): c for w, c in raw.items() if c}
    while True:
        redexes = [(w, i, lhs) for w in cur for lhs in pres.rules
                   for i in range(len(w) - len(lhs) + 1) if w[i:i + len(lhs)] == lhs]
        if not redexes:
            return cur
        w, i, lhs = rng.choice(redexes)
        c = cur.pop(w)
        for r, x in pres.rules[lhs].items():
            v = w[:i] + r + w[i + len(lhs):]
            cur[v] = cur.get(v, ZERO) + c * x
            if not cur[v]:
                del cur[v]


words = st.lists(st.integers(0, 3), max_size=6).map(tuple)


@given(words, st.integers(0, 2 ** 32))
def test_suq2_normal_form_matches_random_rewriting(w, seed):
    got = SUQ2.normal_form({w: ONE}).terms
    assert got == naive_reduce(SUQ2, {w: ONE}, random.Random(seed))


@given(words, words, words)
def test_suq2_associative(a, b, c):
    x, y, z = (NCPoly(SUQ2, {w: ONE}) for w in (a, b, c))
    assert (x * y) * z == x * (y * z)


def character(w, pres):
    """alpha -> s, delta -> 1/s, beta, gamma -> 0 is an algebra map to scalars."""
    val = {"alpha": S_VAR, "delta": ONE / S_VAR, "beta": ZERO, "gamma": ZERO}
    out = ONE
    for i in w:
        out = out * val[pres.generators[i]]
    return out


@given(words)
def test_suq2_character_respects_normal_form(w):
    nf = SUQ2.normal_form({w: ONE})
    total = sum((c * character(v, SUQ2) for v, c in nf.terms.items()), ZERO)
    assert total == character(w, SUQ2)


def test_suq2_pbw_counts():
    assert [pbw_count(SUQ2, d) for d in range(7)] == [1, 4, 9, 16, 25, 36, 49]
    for w in SUQ2.basis(4):
        assert SUQ2.is_irreducible(w)


def test_suq2_confluent_to_degree_4():
    rep = check_confluence(SUQ2, 4)
    assert rep.pairs and rep.passed, [str(p.word) for p in rep.unresolved]


def test_broken_relation_is_not_confluent():
    """Swapping one q for q^2 breaks the diamond lemma; the checker must notice."""
    q = Q_VAR
    rules = {k: dict(v) for k, v in SUQ2.rules.items()}
    a, b = SUQ2.word(["alpha"])[0], SUQ2.word(["beta"])[0]
    rules[(a, b)] = {(b, a): q * q}
    bad = Presentation(SUQ2.generators, rules)
    assert not check_confluence(bad, 4).passed


def test_suq2_hopf_axioms():
    res = check_hopf_axioms(SUQ2)
    assert res and all(ok for _, ok, _ in res), [n for n, ok, _ in res if not ok]


def test_wrong_antipode_sign_fails():
    pres = suq2()
    H = pres.hopf
    b = pres.word(["beta"])[0]
    H.s_gen[b] = pres.gen("beta") * (ONE / Q_VAR)
    H._s_cache.clear()
    res = dict((n, ok) for n, ok, _ in check_hopf_axioms(pres))
    assert not res["antipode_left[beta]"]


@given(words, words)
def test_antipode_antimultiplicative(a, b):
    H = SUQ2.hopf
    x, y = NCPoly(SUQ2, {a: ONE}), NCPoly(SUQ2, {b: ONE})
    assert H.antipode(x * y) == H.antipode(y) * H.antipode(x)
    assert H.antipode_inverse(H.antipode(x)) == x
    assert H.counit(x * y) == H.counit(x) * H.counit(y)


def test_quaternions_match_sympy():
    pres = quaternions()
    Qt = sp.Quaternion
    units = {"i": Qt(0, 1, 0, 0), "j": Qt(0, 0, 1, 0), "k": Qt(0, 0, 0, 1)}
    rng = random.Random(3)
    for _ in range(40):
        w = [rng.choice("ijk") for _ in range(rng.randint(0, 5))]
        expect = Qt(1, 0, 0, 0)
        for x in w:
            expect = expect * units[x]
        nf = pres.normal_form({tuple(w): ONE})
        got = Qt(0, 0, 0, 0)
        for v, c in nf.terms.items():
            term = Qt(1, 0, 0, 0)
            for i in v:
                term = term * units[pres.generators[i]]
            got = got + term * sp.Rational(str(c))
        assert got == expect


def _matmul(a, b, n):
    return [[sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n)] for i in range(n)]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_zn_times_zn_clock_and_shift(n):
    """h g = q g h is realised faithfully by clock (h) and shift (g) matrices."""
    pres = zn_times_zn(n)
    q = Scalar.zeta(n)
    eye = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    shift = [[ONE if i == (j + 1) % n else ZERO for j in range(n)] for i in range(n)]
    clock = [[q ** i if i == j else ZERO for j in range(n)] for i in range(n)]
    mats = {"g": shift, "h": clock}

    def image(w):
        m = eye
        for i in w:
            m = _matmul(m, mats[pres.generators[i]], n)
        return m

    rng = random.Random(n)
    for _ in range(25):
        w = tuple(rng.choice("gh") for _ in range(rng.randint(0, 2 * n)))
        nf = pres.normal_form({w: ONE})
        acc = [[ZERO] * n for _ in range(n)]
        for v, c in nf.terms.items():
            mv = image(v)
            acc = [[acc[i][j] + c * mv[i][j] for j in range(n)] for i in range(n)]
        assert acc == image(pres.word(w))
    assert len(pres.basis(2 * n)) == n * n


@pytest.mark.parametrize("n", [2, 3, 5])
def test_group_algebra(n):
    pres = group_algebra(n)
    g = pres.gen("g")
    assert g ** n == pres.one() and g ** (n + 2) == g ** 2
    assert all(ok for _, ok, _ in check_hopf_axioms(pres))


def test_json_round_trip():
    back = Presentation.from_json(SUQ2.to_json())
    assert back.to_json() == SUQ2.to_json()
    x = back.normal_form({("delta", "alpha", "beta"): ONE})
    y = SUQ2.normal_form({("delta", "alpha", "beta"): ONE})
    assert str(x) == str(y)


def test_rule_must_decrease():
    with pytest.raises(RewriteError):
        Presentation(["x", "y"], {("x",): {("y", "y"): ONE}})


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        SUQ2.word(["epsilon"])
    with pytest.raises(KeyError):
        preset("sl3")


def test_relations_hold():
    al, be, ga, de = (SUQ2.gen(x) for x in ("alpha", "beta", "gamma", "delta"))
    q = Q_VAR
    assert al * de - q * be * ga == SUQ2.one()
    assert de * al - (ONE / q) * be * ga == SUQ2.one()
    assert al * be == q * be * al and be * ga == ga * be
