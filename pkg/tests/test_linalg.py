"""Exact linear algebra against sympy matrices, plus finite algebras and duals."""
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from qbundle.linalg import (
    FinAlgebra, FinCoalgebra, FinSpace, LinearMap, check_algebra, check_coalgebra, dualize, kernel,
    quotient, rank, rank_mod_p, same_structure, solve_columns, span_basis, tensor_space,
)
from qbundle.scalars import ONE, Q_VAR, S_VAR, ZERO, scalar

from helpers import matrix_algebra

entries = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def matrices(max_dim=5):
    return st.integers(1, max_dim).flatmap(lambda m: st.integers(1, max_dim).flatmap(
        lambda n: st.lists(st.lists(st.one_of(st.just(Fraction(0)), entries), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


def as_map(rows):
    m, n = len(rows), len(rows[0])
    cols = [{i: scalar(rows[i][j]) for i in range(m) if rows[i][j]} for j in range(n)]
    return LinearMap(FinSpace([f"x{j}" for j in range(n)]), FinSpace([f"y{i}" for i in range(m)]), cols)


def as_sympy(rows):
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in r] for r in rows])


@given(matrices())
def test_rank_and_kernel(rows):
    L, M = as_map(rows), as_sympy(rows)
    assert L.rank() == M.rank()
    ker = L.kernel()
    assert len(ker) == L.domain.dim - M.rank()
    for v in ker:
        assert not L(v)


@given(matrices(), st.lists(entries, min_size=5, max_size=5))
def test_solve(rows, rhs):
    L, M = as_map(rows), as_sympy(rows)
    b = {i: scalar(rhs[i]) for i in range(len(rows)) if rhs[i]}
    sol = solve_columns(L.columns, b)
    bm = sp.Matrix([sp.Rational(rhs[i].numerator, rhs[i].denominator) for i in range(len(rows))])
    consistent = M.rank() == M.row_join(bm).rank()
    assert sol.feasible == consistent
    if sol.feasible:
        got = L(sol.particular)
        assert {k: v for k, v in got.items() if v} == b


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_and_inverse(rows):
    L, M = as_map(rows), as_sympy(rows)
    d = M.det()
    assert L.det() == scalar(Fraction(int(sp.numer(d)), int(sp.denom(d))))
    inv = L.inverse()
    assert (inv is None) == (d == 0)
    if inv is not None:
        assert inv @ L == LinearMap.identity(L.domain)


def test_symbolic_det():
    q, s = Q_VAR, S_VAR
    rows = [[q, s, ONE], [ONE, q * s, ZERO], [s, ONE, q]]
    L = LinearMap(FinSpace("abc"), FinSpace("abc"), [{i: rows[i][j] for i in range(3)} for j in range(3)])
    Q, S = sp.symbols("q s")
    M = sp.Matrix([[Q, S, 1], [1, Q * S, 0], [S, 1, Q]])
    expect = sp.expand(M.det())
    assert str(L.det()).replace("^", "**") and sp.expand(sp.sympify(str(L.det()).replace("^", "**"))) == expect


@given(st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_mod_p(rows):
    p = 101
    ours = rank_mod_p([{j: x for j, x in enumerate(r) if x} for r in rows], p)
    assert ours == DomainMatrix([[GF(p)(x) for x in r] for r in rows], (len(rows), 4), GF(p)).rank()


@given(st.lists(st.lists(entries, min_size=4, max_size=4), min_size=1, max_size=4))
def test_span_basis_and_quotient(rows):
    vecs = [{j: scalar(x) for j, x in enumerate(r) if x} for r in rows]
    r = rank(vecs)
    assert len(span_basis(vecs)) == r
    Qt = quotient(FinSpace("abcd"), vecs)
    assert Qt.space.dim == 4 - r
    for v in vecs:
        assert not Qt.projection(v)
    assert Qt.projection @ Qt.section == LinearMap.identity(Qt.space)


def test_kernel_of_dependent_columns():
    cols = [{0: ONE}, {1: ONE}, {0: ONE, 1: ONE}]
    (k,) = kernel(cols)
    total = {}
    for j, c in k.items():
        for i, x in cols[j].items():
            total[i] = total.get(i, ZERO) + c * x
    assert not any(total.values())


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matrix_algebra_and_dual(n):
    A = matrix_algebra(n)
    assert check_algebra(A).passed
    C = dualize(A)
    assert check_coalgebra(C).passed
    assert same_structure(dualize(C), A)
    assert same_structure(dualize(dualize(A, opposite=True), opposite=True), A)


def test_broken_algebra_detected():
    A = matrix_algebra(2)
    mult = dict(A.mult)
    mult[(0, 0)] = {0: scalar(2)}
    assert not check_algebra(FinAlgebra(A.space, mult, A.unit())).passed


def test_grouplike_coalgebra_and_tensor():
    C = FinCoalgebra.grouplike(["g0", "g1", "g2"])
    assert check_coalgebra(C).passed
    A = matrix_algebra(2)
    T = A.tensor(A)
    assert T.dim == 16 and check_algebra(T).passed
    assert tensor_space(A.space, C.space).dim == 12


def test_inverse_of_in_algebra():
    A = matrix_algebra(2)
    x = {0: ONE, 1: scalar(2), 3: ONE}
    y = A.inverse_of(x)
    assert A.mul(x, y) == A.unit()
    assert A.inverse_of({0: ONE}) is None


def test_json_round_trip():
    rng = random.Random(1)
    rows = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(3)] for _ in range(2)]
    L = as_map(rows)
    assert LinearMap.from_json(L.to_json()) == L
