"""Coalgebra side: entwinings, the duality bridge, connections and the chi determinant."""

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from qbundle import entwine as ent
from qbundle import factor as fac
from qbundle import pipeline as pl
from qbundle.scalars import Scalar

FINITE = [("example26", {"n": 2}), ("example26", {"n": 3}), ("example26", {"n": 4}),
          ("example27", {"point": ["3/5", "4/5"]}), ("example27", {"point": ["5/13", "12/13"]}),
          ("example27", {"point": ["1", "0"]}), ("s3", {})]


@pytest.mark.parametrize("name,args", FINITE, ids=[f"{n}-{a}" for n, a in FINITE])
def test_duality_bridge(name, args):
    inst = pl.preset_instance(name, **args)
    rep = ent.duality_bridge(inst.F, inst.et)
    assert rep.passed, [c.name for c in rep.failures]
    assert rep.get("double_transport_psi").ok and rep.get("double_transport_algebra").ok


def test_opposite_convention_needs_commutative_factor():
    """With the swapped dual coproduct the transported map is an entwining only for commutative A."""
    F, et = fac.example26(3)
    assert ent.duality_bridge(F, et, opposite=True).passed
    F, et = fac.smash_s3()
    rep = ent.duality_bridge(F, et, opposite=True)
    assert rep.get("double_transport_psi").ok
    assert not ent.check_entwining(ent.entwining_from_factorisation(F, opposite=True)).passed


def test_non_galois_instance_bridges():
    """Trivial character on a flip: both sides agree that the bundle is not Galois."""
    A, P = fac.cyclic_algebra(2, "h"), fac.cyclic_algebra(2, "g")
    F = fac.flip_factorisation(A, P)
    et = fac.character_copoint(F, [1, 1])
    rep = ent.duality_bridge(F, et)
    assert rep.passed
    assert rep.get("galois_agrees").ok and rep.get("left_canonical_bijectivity_agrees").ok
    G = fac.galois_data(F, et)
    assert G.chi_sharp is None


@pytest.mark.parametrize("n", [2, 3])
def test_entwining_axioms_and_coaction(n):
    F, et = fac.example26(n)
    E = ent.entwining_from_factorisation(F)
    assert ent.check_entwining(E).passed
    t = ent.copoint_to_tensor(et)
    data = ent.coaction_ops(E, t)
    assert data.report.passed and len(data.M) == 1


def test_corrupted_entwining_fails():
    F, _ = fac.example26(3)
    E = ent.entwining_from_factorisation(F)
    bad = ent.Entwining(E.P, E.C, lambda c, u: {k: v * 2 for k, v in E.psi(c, u).items()}
                        if (c, u) == (1, 1) else E.psi(c, u), range(3))
    assert not ent.check_entwining(bad).passed


# -- chi of the two-dimensional family in the basis {1, c} of A^* --------------

def paper_chi(cos, sin, order):
    """Sympy matrix of g^k (x) g^l -> (c+ + c- (-1)^k cos) g^(k+l) + c- i (-1)^k sin g^(k+l+1)."""
    half = sp.Rational(1, 2)
    cplus, cminus = {0: half, 1: half}, {0: half, 1: -half}   # coordinates on {1, c}
    M = sp.zeros(4, 4)
    pairs = [(k, l) for k in range(2) for l in range(2)]
    if order == "lk":
        pairs = [(k, l) for l in range(2) for k in range(2)]
    for col, (k, l) in enumerate(pairs):
        sgn = (-1) ** k
        for a in range(2):
            M[a * 2 + (k + l) % 2, col] += cplus[a] + cminus[a] * sgn * cos
            M[a * 2 + (k + l + 1) % 2, col] += cminus[a] * sp.I * sgn * sin
    return M


def as_sympy(x: Scalar):
    return sp.sympify(str(x).replace("^", "**"), locals={"i": sp.I})


@given(st.fractions(min_value=-4, max_value=4, max_denominator=6), st.sampled_from(["lex", "lk"]))
def test_chi_matrix_matches_formula(t, order):
    cos, sin = (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
    F, et = fac.example27(cos, sin)
    T = ent.chi_group_basis(F, et, order)
    expect = paper_chi(sp.Rational(cos.numerator, cos.denominator), sp.Rational(sin.numerator, sin.denominator), order)
    ours = sp.Matrix(4, 4, lambda i, j: as_sympy(T.entry(i, j)))
    assert sp.simplify(ours - expect) == sp.zeros(4, 4)
    assert as_sympy(T.det()) == sp.simplify(expect.det())


def test_chi_determinant_symbolic():
    """On the whole circle the determinant is -1 in (k, l) order and +1 with l varying slowest."""
    c, s = sp.symbols("c s")
    on_circle = {s ** 2: 1 - c ** 2}
    assert sp.expand(paper_chi(c, s, "lex").det()).subs(on_circle) == -1
    assert sp.expand(paper_chi(c, s, "lk").det()).subs(on_circle) == 1


# -- connections -----------------------------------------------------------

@pytest.mark.parametrize("name,args", [("example26", {"n": 2}), ("example26", {"n": 3}), ("s3", {})])
def test_trivial_connection_is_strong(name, args):
    inst = pl.preset_instance(name, **args)
    rep = pl.chk_connection(inst, {})
    assert rep.passed, [c.name for c in rep.failures]
    names = {c.name for c in rep.checks}
    assert {"phi_intertwines", "psi_bijective"} <= names


@pytest.mark.parametrize("name,args", [("example26", {"n": 3}), ("s3", {})])
def test_perturbed_connection_rejected(name, args):
    inst = pl.preset_instance(name, **args)
    rep = pl.chk_connection_negative(inst, {})
    assert rep.passed and rep.data["witness"] is not None


def test_cleaving_map_normalised():
    inst = pl.preset_instance("s3")
    phi, _ = fac.find_cleaving(inst.galois)
    Phi = ent.cleaving_map_from_factor(inst.F, phi, inst.grouplike)
    total = {}
    for a in range(inst.F.na):
        for u, x in Phi[a].items():
            total[u] = total.get(u, 0) + x
    assert total == inst.F.P.unit()
