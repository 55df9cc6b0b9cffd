"""Factorisations, copoints, Galois data and cleft bundles on the finite presets."""
import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qbundle import factor as fac
from qbundle.linalg import LinearMap, tensor_space
from qbundle.scalars import I_UNIT, ONE, ZERO, Scalar, scalar


@pytest.fixture(scope="module", params=[2, 3, 4])
def ex26(request):
    n = request.param
    F, et = fac.example26(n)
    return n, F, et, fac.galois_data(F, et)


def test_psi_formula(ex26):
    """Psi(h^m (x) g^k) = q^(mk) g^k (x) h^m, frozen from the defining formula."""
    n, F, _, _ = ex26
    q = Scalar.zeta(n)
    for m, k in itertools.product(range(n), repeat=2):
        assert F.pair(m, k) == {(k, m): q ** (m * k)}


def test_factorisation_axioms(ex26):
    n, F, et, _ = ex26
    rep = fac.check_factorisation(F)
    assert rep.passed, rep.failures
    assert rep.data["X"].dim == n * n


def test_copoint_and_action(ex26):
    n, F, et, G = ex26
    assert fac.check_copoint(F, et).passed
    q = Scalar.zeta(n)
    # h^m |> g^k = q^(mk) q^m g^k
    for m, k in itertools.product(range(n), repeat=2):
        assert G.action.basis(m, k) == {k: q ** (m * k + m)}
    assert G.report.passed and len(G.M) == 1


def test_paper_chi_sharp(ex26):
    n, F, et, G0 = ex26
    G = fac.action_from_copoint(F, et)
    rep = fac.galois_identities(G, fac.example26_chi_sharp(n, G))
    assert rep.passed, rep.failures
    for m, k, l in itertools.product(range(n), repeat=3):
        got = G.chi_of({m: ONE}, G.Q.proj_pairs({(k, l): ONE}))
        assert got == fac.example26_chi_formula(n, m, k, l)


def test_translation_and_round_trip(ex26):
    n, F, et, G = ex26
    assert fac.verify_translation(G).passed
    F2, et2, G2 = fac.galois_product(G.A, G.P, G.action.map, compare=F)
    assert F2.psi == F.psi and et2 == et
    assert G2.report.get("uniqueness_round_trip").ok


def test_cleft(ex26):
    n, F, et, G = ex26
    phi, phi_inv = fac.find_cleaving(G)
    assert fac.cleaving_condition_ok(G, phi)
    assert fac.trivialisation_ops(G, phi, phi_inv).passed


def test_wrong_parameter_breaks_factorisation():
    F = fac.braided_factorisation(3, scalar(2))
    assert not fac.check_factorisation(F, build_x=False).passed


def test_bad_copoint_rejected():
    F, _ = fac.example26(3)
    et = fac.character_copoint(F, [1, 2, 4])
    assert not fac.check_copoint(F, et).passed
    with pytest.raises(ValueError):
        fac.action_from_copoint(F, et)


def test_trivial_action_is_not_galois():
    A, P = fac.cyclic_algebra(2, "h"), fac.cyclic_algebra(2, "g")
    # h |> u = u: every element is invariant, so chi cannot be bijective
    cols = [dict(P.basis_vector(u)) for a, u in itertools.product(range(2), range(2))]
    act = LinearMap(tensor_space(A.space, P.space), P.space, cols)
    with pytest.raises(ValueError):
        fac.galois_product(A, P, act)


# -- the two-dimensional family on the unit circle ------------------------

def circle_point(t):
    """Rational points (cos, sin) = ((1 - t^2) / (1 + t^2), 2t / (1 + t^2))."""
    t = Fraction(t)
    return (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)


@given(st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_example27_family(t):
    c, s = circle_point(t)
    F, et = fac.example27(c, s)
    assert fac.check_factorisation(F, build_x=False).passed
    G = fac.galois_data(F, et)
    assert len(G.M) == 1 and G.chi_sharp is not None
    assert fac.verify_translation(G).passed
    assert fac.find_cleaving(G) is not None
    # P is an A-module algebra exactly on the real axis
    assert (not fac.module_algebra_defect(G)) == (s == 0)


@pytest.mark.parametrize("point", [(Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(12, 13))])
def test_example27_frozen_points(point):
    F, et = fac.example27(*point)
    G = fac.galois_data(F, et)
    assert G.report.passed and len(G.M) == 1
    defect = fac.module_algebra_defect(G)
    assert defect  # sin != 0


@pytest.mark.parametrize("c", [1, -1])
def test_example27_axis(c):
    F, et = fac.example27(c, 0)
    assert not fac.module_algebra_defect(fac.galois_data(F, et))


def test_quaternion_copoint():
    F = fac.quaternion_factorisation()
    assert fac.check_factorisation(F).passed
    red = fac.copoint_feasibility_dim2(F, "Q")
    assert not red.feasible and red.certificate and red.sign == -1
    red_i = fac.copoint_feasibility_dim2(F, "Q(i)")
    assert red_i.feasible and (I_UNIT, ZERO) in red_i.witnesses
    et = fac._copoint_from_xy(F, I_UNIT, ZERO)
    assert fac.check_copoint(F, et).passed


def test_group_algebra_copoint_conic():
    """The circle family reduces to alpha^2 + beta^2 = 1, which has rational points."""
    F, _ = fac.example27(1, 0)
    red = fac.copoint_feasibility_dim2(F)
    assert red.feasible and red.sign == 1
    assert (scalar(Fraction(3, 5)), scalar(Fraction(4, 5))) in red.witnesses


def test_s3_smash_product():
    F, et = fac.smash_s3()
    assert fac.check_factorisation(F).passed
    G = fac.galois_data(F, et)
    assert G.report.passed and len(G.M) == 1
    assert fac.verify_translation(G).passed
    assert fac.find_cleaving(G) is not None
