"""Universal forms: dimensions, d^2 = 0, the graded Leibniz rule and lifted Psi."""
import pytest
from hypothesis import given, strategies as st

from qbundle import factor as fac
from qbundle import forms
from qbundle.entwine import entwining_from_factorisation
from qbundle.linalg import FinAlgebra, FinSpace
from qbundle.scalars import ONE, scalar

from helpers import matrix_algebra


def cyclic(n):
    return fac.cyclic_algebra(n)


ALGEBRAS = {"kZ3": cyclic(3), "M2": matrix_algebra(2), "S3fun": fac.smash_s3()[0].P}


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_form_dimensions(name):
    """dim Omega^n P = m (m - 1)^n for an m-dimensional unital algebra."""
    P = ALGEBRAS[name]
    m = P.dim
    for n in range(3 if m < 5 else 2):
        assert len(forms.form_basis(P, n, range(m))) == m * (m - 1) ** n


def random_form(P, n, coeffs):
    basis = forms.form_basis(P, n, range(P.dim))
    out = {}
    for b, c in zip(basis, coeffs):
        out = forms.add(out, forms.scale(b, scalar(c)))
    return out


coeff_lists = st.lists(st.integers(-2, 2), min_size=12, max_size=12)


@pytest.mark.parametrize("name", ["kZ3", "M2"])
@given(coeff_lists, coeff_lists, st.integers(0, 1), st.integers(0, 1))
def test_leibniz_and_d_squared(name, c1, c2, n1, n2):
    P = ALGEBRAS[name]
    w1, w2 = random_form(P, n1, c1), random_form(P, n2, c2)
    assert forms.is_form(forms.d(w1, P), P)
    assert not forms.clean(forms.d(forms.d(w1, P), P))
    lhs = forms.d(forms.mul(w1, w2, P), P)
    sign = ONE if n1 % 2 == 0 else -ONE
    rhs = forms.add(forms.mul(forms.d(w1, P), w2, P), forms.scale(forms.mul(w1, forms.d(w2, P), P), sign))
    assert forms.clean(forms.add(lhs, forms.scale(rhs, -ONE))) == {}


def test_non_form_detected():
    P = ALGEBRAS["kZ3"]
    assert not forms.is_form({(0, 0): ONE}, P)
    assert forms.is_form(forms.d_elem({1: ONE}, P), P)


@pytest.mark.parametrize("n", [2, 3])
def test_lifted_factorisation(n):
    F, _ = fac.example26(n)
    rep = forms.check_lifted_factorisation(F, max_degree=2)
    assert rep.passed, rep.failures
    assert rep.data["form_dims"] == {k: n * (n - 1) ** k for k in range(3)}


def test_lifted_entwining_commutes_with_d():
    F, _ = fac.example26(3)
    E = entwining_from_factorisation(F)
    ws = [w for k in range(2) for w in forms.form_basis(F.P, k, range(F.np))]
    assert forms.check_cov_d(E.psi, F.P, range(E.C.dim), ws).passed


def test_psi_n_on_flip_is_identity_shuffle():
    A = fac.cyclic_algebra(2)
    P = FinAlgebra(FinSpace(["1", "p"]), {(0, 0): {0: ONE}, (0, 1): {1: ONE}, (1, 0): {1: ONE}, (1, 1): {0: ONE}},
                   {0: ONE})
    F = fac.flip_factorisation(A, P)
    w = {(0, 1, 1): scalar(3)}
    assert forms.Psi_n(F, 1, w) == {(0, 1, 1, 1): scalar(3)}
