"""Scalars in Q(zeta_n)(q, s), checked against sympy on the same expression trees."""
import re
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import assume, given, strategies as st

from qbundle.scalars import (
    I_UNIT, ONE, Q_VAR, S_VAR, ZERO, CycloScalar, Scalar, ScalarError, ScalarOrderError,
    ScalarSyntaxError, ScalarZeroDivision, cyclotomic_poly, parse_scalar, scalar, totient,
)

Z, Q, S = sp.symbols("z q s")


def to_sympy(x: Scalar, n):
    """Read a printed scalar back as a sympy expression in z = zeta_n."""
    text = str(x).replace("^", "**")

    def zeta(m):
        m = int(m.group(1))
        assert n % m == 0, (n, m)
        return f"(z**{n // m})"
    text = re.sub(r"zeta\((\d+)\)", zeta, text)
    text = re.sub(r"\bi\b", f"(z**{n // 4})" if n % 4 == 0 else "I", text)
    return sp.sympify(text, locals={"z": Z, "q": Q, "s": S})


def same_in_field(e1, e2, n):
    num, _ = sp.fraction(sp.together(e1 - e2))
    phi = sp.cyclotomic_poly(n, Z)
    return sp.rem(sp.expand(num), phi, Z) == 0


def trees(n):
    leaf = st.one_of(
        st.integers(-4, 4).map(lambda k: (scalar(k), sp.Integer(k))),
        st.fractions(min_value=-3, max_value=3, max_denominator=5).map(
            lambda f: (scalar(f), sp.Rational(f.numerator, f.denominator))),
        st.just((Q_VAR, Q)), st.just((S_VAR, S)),
        st.integers(1, n - 1).map(lambda k: (Scalar.zeta(n) ** k, Z ** k)),
    )

    def ext(children):
        return st.tuples(st.sampled_from("+-*/"), children, children)
    return st.recursive(leaf, ext, max_leaves=6)


def evaluate(tree):
    if isinstance(tree[0], str):
        op, a, b = tree
        (x, ex), (y, ey) = evaluate(a), evaluate(b)
        if op == "+":
            return x + y, ex + ey
        if op == "-":
            return x - y, ex - ey
        if op == "*":
            return x * y, ex * ey
        if y.is_zero():
            raise ScalarZeroDivision()
        return x / y, ex / ey
    return tree


@pytest.mark.parametrize("n", [3, 5, 6, 8])
@given(data=st.data())
def test_agrees_with_sympy(n, data):
    tree = data.draw(trees(n))
    try:
        x, ex = evaluate(tree)
    except ScalarZeroDivision:
        assume(False)
    assert same_in_field(to_sympy(x, n), ex, n)


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_rational_round_trip(a, b):
    x, y = scalar(a), scalar(b)
    assert (x + y).to_fraction() == a + b
    assert (x * y).to_fraction() == a * b
    if b:
        assert (x / y).to_fraction() == a / b


def _field_elems():
    base = [Q_VAR, S_VAR, Scalar.zeta(3), I_UNIT, scalar(Fraction(2, 7))]
    return st.lists(st.sampled_from(base), min_size=1, max_size=3).map(
        lambda xs: sum(xs[1:], xs[0]) * (xs[0] + 1))


@given(_field_elems(), _field_elems(), _field_elems())
def test_field_axioms(a, b, c):
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if a:
        assert a * a.inverse() == ONE
    assert hash(a + b) == hash(b + a)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8, 12])
def test_roots_of_unity(n):
    z = Scalar.zeta(n)
    assert z ** n == ONE
    assert all(z ** k != ONE for k in range(1, n))
    assert sum((z ** k for k in range(n)), ZERO) == ZERO
    assert totient(n) == sp.totient(n)


def test_cyclotomic_poly_matches_sympy():
    x = sp.Symbol("z")
    for n in (1, 2, 3, 4, 6, 9, 10, 12):
        ours = cyclotomic_poly(n)
        assert sp.Poly(str(ours).replace("^", "**"), x) == sp.Poly(sp.cyclotomic_poly(n, x), x)


def test_zeta_embeddings_and_i():
    assert I_UNIT * I_UNIT == -ONE
    assert Scalar.zeta(8) ** 2 == I_UNIT
    assert Scalar.zeta(6) ** 2 == Scalar.zeta(3)
    assert Scalar.zeta(3) * Scalar.zeta(4) == Scalar.zeta(12) ** 7
    assert (Scalar.zeta(6) ** 3).order == 1


def test_conjugation():
    z = Scalar.zeta(5)
    x = z + 2 * z ** 3
    assert x.conjugate(2) == z ** 2 + 2 * z ** 6
    norm = x
    for j in (2, 3, 4):
        norm = norm * x.conjugate(j)
    assert norm.is_rational()


def test_specialize_and_mod():
    x = (Q_VAR + S_VAR ** 2) / (1 + Q_VAR * S_VAR)
    assert x.specialize(q=2, s=3).to_fraction() == Fraction(11, 7)
    assert x.specialize(q=Fraction(1, 2)) == (Fraction(1, 2) + S_VAR ** 2) / (1 + S_VAR / 2)
    p = 10007
    assert x.eval_mod(p, 2, 3) == 11 * pow(7, -1, p) % p
    with pytest.raises(ScalarZeroDivision):
        (ONE / (Q_VAR - 1)).specialize(q=1)


@pytest.mark.parametrize("text,expected", [
    ("1", ONE), ("-3/4", scalar(Fraction(-3, 4))), ("q^2", Q_VAR * Q_VAR),
    ("q^-1", ONE / Q_VAR), ("q^(-2)", ONE / (Q_VAR * Q_VAR)), ("2*q - s/3", 2 * Q_VAR - S_VAR / 3),
    ("-q^2", -(Q_VAR * Q_VAR)), ("(1+s)^2", (1 + S_VAR) * (1 + S_VAR)), ("i", I_UNIT),
    ("zeta(3)^3", ONE), ("1/(1+q^2*s^2)", ONE / (1 + Q_VAR ** 2 * S_VAR ** 2)),
    ("q**3", Q_VAR ** 3), ("2 ^ 3", scalar(8)),
])
def test_parse(text, expected):
    assert parse_scalar(text) == expected


@pytest.mark.parametrize("text,pos", [
    ("1+", 2), ("q^^2", 2), ("2 ^ 3 ^ 1", 6), ("(1", 2), ("x", 0), ("2*", 2), ("q^s", 2), ("1 2", 2),
])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ScalarSyntaxError) as info:
        parse_scalar(text)
    assert info.value.pos == pos
    assert f"position {pos}" in str(info.value)


def test_parse_semantic_errors():
    with pytest.raises(ScalarZeroDivision):
        parse_scalar("1/(q-q)")
    with pytest.raises(ScalarError):
        parse_scalar("zeta(0)")
    assert issubclass(ScalarOrderError, ScalarError)


@given(_field_elems())
def test_print_parse_round_trip(x):
    assert parse_scalar(str(x)) == x


@given(st.lists(st.fractions(max_denominator=9), min_size=2, max_size=2))
def test_cyclo_oracle(coeffs):
    """The coefficient-vector view agrees with the polynomial view."""
    z = Scalar.zeta(3)
    x = scalar(coeffs[0]) + scalar(coeffs[1]) * z
    c = CycloScalar.from_scalar(x)
    if coeffs[1]:
        assert c.order == 3 and c.coeffs == tuple(coeffs)
    else:
        assert c.coeffs == (coeffs[0],)
    assert (c * c).to_scalar() == x * x
    assert c.to_scalar() == x
