"""Algebra factorisations X = P A and the bundles they define.

Everything here is finite dimensional.  Elements of P (x) A are dicts keyed
by ``(u, a)`` basis-index pairs, elements of A (x) P by ``(a, u)``; the flat
index used by `LinearMap` is ``u * dim A + a`` (resp. ``a * dim P + u``).

The quotient P (x)_M P is realised as a `linalg.Quotient` of P (x) P (flat
index ``u * dim P + v``); its basis vectors are called classes below.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import itertools
import random

from .scalars import Scalar, ONE, ZERO, I_UNIT, scalar
from .tensor import acc, add_into
from .linalg import (FinSpace, FinAlgebra, LinearMap, Eliminator, quotient, tensor_space,
                     solve_columns, kernel, vsub, vscale, check_algebra)
from .report import Report


# ----------------------------------------------------------------------
# small algebras used by the presets

def cyclic_algebra(n, name="g"):
    """k Z_n with basis 1, g, ..., g^(n-1)."""
    labels = ["1"] + [name if k == 1 else f"{name}^{k}" for k in range(1, n)]
    mult = {(i, j): {(i + j) % n: ONE} for i in range(n) for j in range(n)}
    return FinAlgebra(FinSpace(labels), mult, {0: ONE})


def complex_like_algebra(name):
    """R[x]/(x^2 + 1) with basis 1, x."""
    mult = {(0, 0): {0: ONE}, (0, 1): {1: ONE}, (1, 0): {1: ONE}, (1, 1): {0: -ONE}}
    return FinAlgebra(FinSpace(["1", name]), mult, {0: ONE})


def trivial_algebra():
    return FinAlgebra(FinSpace(["1"]), {(0, 0): {0: ONE}}, {0: ONE})


# ----------------------------------------------------------------------

class FactorisationMap:
    """Psi: A (x) P -> P (x) A together with the algebras."""

    def __init__(self, A: FinAlgebra, P: FinAlgebra, psi: LinearMap):
        if psi.domain.dim != A.dim * P.dim or psi.codomain.dim != A.dim * P.dim:
            raise ValueError("psi has the wrong shape")
        self.A, self.P, self.psi = A, P, psi
        self.na, self.np = A.dim, P.dim
        self._cache = {}

    def pair(self, a, u):
        """Psi(e_a (x) e_u) as {(u', a'): c}."""
        hit = self._cache.get((a, u))
        if hit is None:
            hit = {}
            for k, c in self.psi.columns[a * self.np + u].items():
                hit[divmod(k, self.na)] = c
            self._cache[(a, u)] = hit
        return hit

    def apply(self, t):
        """Psi on {(a, u): c}."""
        out = {}
        for (a, u), c in t.items():
            add_into(out, self.pair(a, u), c)
        return out

    def apply_vecs(self, avec, uvec):
        out = {}
        for a, ca in avec.items():
            for u, cu in uvec.items():
                add_into(out, self.pair(a, u), ca * cu)
        return out

    @classmethod
    def from_function(cls, A, P, f):
        """Build from f(a, u) -> {(u', a'): c}."""
        dom = tensor_space(A.space, P.space)
        cod = tensor_space(P.space, A.space)
        cols = []
        for a, u in itertools.product(range(A.dim), range(P.dim)):
            col = {}
            for (v, b), c in f(a, u).items():
                acc(col, v * A.dim + b, c)
            cols.append(col)
        return cls(A, P, LinearMap(dom, cod, cols))

    def X(self):
        """The factorised algebra on P (x) A, (u a)(v b) = u Psi(a v) b."""
        na, np = self.na, self.np
        mult = {}
        for (u, a), (v, b) in itertools.product(itertools.product(range(np), range(na)), repeat=2):
            out = {}
            for (v1, a1), c in self.pair(a, v).items():
                for w, c1 in self.P.mul_keys(u, v1).items():
                    for x, c2 in self.A.mul_keys(a1, b).items():
                        acc(out, w * na + x, c * c1 * c2)
            mult[(u * na + a, v * na + b)] = out
        unit = {}
        for u, c in self.P.unit().items():
            for a, d in self.A.unit().items():
                acc(unit, u * na + a, c * d)
        return FinAlgebra(tensor_space(self.P.space, self.A.space), mult, unit)


def _lbl(space, i):
    return space.labels[i]


def check_factorisation(F: FactorisationMap, build_x=True) -> Report:
    """The four factorisation conditions, plus associativity of X."""
    A, P = F.A, F.P
    rep = Report("factorisation")
    # Psi(ab (x) u) = (id (x) m_A) Psi_12 Psi_23 (a (x) b (x) u)
    bad = None
    for a, b, u in itertools.product(range(F.na), range(F.na), range(F.np)):
        lhs = F.apply_vecs(A.mul_keys(a, b), {u: ONE})
        rhs = {}
        for (u1, b1), c in F.pair(b, u).items():
            for (u2, a1), d in F.pair(a, u1).items():
                for k, e in A.mul_keys(a1, b1).items():
                    acc(rhs, (u2, k), c * d * e)
        if vsub(lhs, rhs):
            bad = (_lbl(A.space, a), _lbl(A.space, b), _lbl(P.space, u))
            break
    rep.add("psi_multiplicative_in_A", bad is None, bad)
    # Psi(a (x) uv) = (m_P (x) id) Psi_23 Psi_12 (a (x) u (x) v)
    bad = None
    for a, u, v in itertools.product(range(F.na), range(F.np), range(F.np)):
        lhs = F.apply_vecs({a: ONE}, P.mul_keys(u, v))
        rhs = {}
        for (u1, a1), c in F.pair(a, u).items():
            for (v1, a2), d in F.pair(a1, v).items():
                for k, e in P.mul_keys(u1, v1).items():
                    acc(rhs, (k, a2), c * d * e)
        if vsub(lhs, rhs):
            bad = (_lbl(A.space, a), _lbl(P.space, u), _lbl(P.space, v))
            break
    rep.add("psi_multiplicative_in_P", bad is None, bad)
    bad = None
    for u in range(F.np):
        lhs = F.apply_vecs(A.unit(), {u: ONE})
        rhs = {(u, a): c for a, c in A.unit().items()}
        if vsub(lhs, rhs):
            bad = _lbl(P.space, u)
            break
    rep.add("psi_unit_A", bad is None, bad)
    bad = None
    for a in range(F.na):
        lhs = F.apply_vecs({a: ONE}, P.unit())
        rhs = {(u, a): c for u, c in P.unit().items()}
        if vsub(lhs, rhs):
            bad = _lbl(A.space, a)
            break
    rep.add("psi_unit_P", bad is None, bad)
    if build_x:
        X = F.X()
        rep.extend(check_algebra(X), "X_")
        rep.add("X_dim", X.dim == F.na * F.np, X.dim)
        # P (x) 1 and 1 (x) A are subalgebras with (1 (x) a)(u (x) 1) = Psi(a (x) u)
        bad = None
        for a, u in itertools.product(range(F.na), range(F.np)):
            left = {}
            for x, c in A.unit().items():
                acc(left, u * F.na + x, c)
            right = {}
            for y, c in P.unit().items():
                acc(right, y * F.na + a, c)
            prod = X.mul(right, left)
            expect = {k[0] * F.na + k[1]: c for k, c in F.pair(a, u).items()}
            if vsub(prod, expect):
                bad = (_lbl(A.space, a), _lbl(P.space, u))
                break
        rep.add("X_cross_relations", bad is None, bad)
        rep.data["X"] = X
    return rep


# ----------------------------------------------------------------------
# copoints and actions

def check_copoint(F: FactorisationMap, et: LinearMap) -> Report:
    """e~(1) = 1 and e~(ab) = Psi(a (x) e~(b))^(1) e~(Psi(a (x) e~(b))^(2))."""
    rep = Report("copoint")
    A, P = F.A, F.P
    rep.add("unit", not vsub(et(A.unit()), P.unit()))
    bad = None
    for a, b in itertools.product(range(F.na), repeat=2):
        lhs = et(A.mul_keys(a, b))
        rhs = {}
        for (u, a1), c in F.apply_vecs({a: ONE}, et.columns[b]).items():
            add_into(rhs, P.mul({u: ONE}, et.columns[a1]), c)
        if vsub(lhs, rhs):
            bad = (_lbl(A.space, a), _lbl(A.space, b))
            break
    rep.add("multiplicative_through_psi", bad is None, bad)
    return rep


def character_copoint(F: FactorisationMap, values) -> LinearMap:
    """e~(a) = e(a) 1 for a character e given on the A basis."""
    P = F.P
    return LinearMap(F.A.space, P.space, [vscale(P.unit(), scalar(v)) for v in values])


def action_from_copoint_map(F, et):
    """a |> u = Psi(a (x) u)^(1) e~(Psi(a (x) u)^(2)) as a LinearMap A (x) P -> P."""
    cols = []
    for a, u in itertools.product(range(F.na), range(F.np)):
        out = {}
        for (v, b), c in F.pair(a, u).items():
            add_into(out, F.P.mul({v: ONE}, et.columns[b]), c)
        cols.append(out)
    return LinearMap(tensor_space(F.A.space, F.P.space), F.P.space, cols)


class Action:
    """Helper wrapping a LinearMap A (x) P -> P."""

    def __init__(self, A, P, lm):
        self.A, self.P, self.map = A, P, lm

    def __call__(self, avec, uvec):
        out = {}
        for a, ca in avec.items():
            for u, cu in uvec.items():
                add_into(out, self.map.columns[a * self.P.dim + u], ca * cu)
        return out

    def basis(self, a, u):
        return self.map.columns[a * self.P.dim + u]


def check_action(act: Action) -> Report:
    A, P = act.A, act.P
    rep = Report("action")
    bad = None
    for a, b, u in itertools.product(range(A.dim), range(A.dim), range(P.dim)):
        if vsub(act(A.mul_keys(a, b), {u: ONE}), act({a: ONE}, act.basis(b, u))):
            bad = (_lbl(A.space, a), _lbl(A.space, b), _lbl(P.space, u))
            break
    rep.add("action_associative", bad is None, bad)
    bad = None
    for u in range(P.dim):
        if vsub(act(A.unit(), {u: ONE}), {u: ONE}):
            bad = _lbl(P.space, u)
            break
    rep.add("action_unital", bad is None, bad)
    return rep


def check_psi_module(F, act: Action) -> Report:
    """a |> (u v) = Psi(a (x) u)^(1) (Psi(a (x) u)^(2) |> v)."""
    rep = Report("psi-module")
    P = F.P
    bad = None
    for a, u, v in itertools.product(range(F.na), range(F.np), range(F.np)):
        lhs = act({a: ONE}, P.mul_keys(u, v))
        rhs = {}
        for (u1, a1), c in F.pair(a, u).items():
            add_into(rhs, P.mul({u1: ONE}, act.basis(a1, v)), c)
        if vsub(lhs, rhs):
            bad = (_lbl(F.A.space, a), _lbl(P.space, u), _lbl(P.space, v))
            break
    rep.add("psi_module_law", bad is None, bad)
    return rep


def fixed_subalgebra(A, P, act: Action, et: LinearMap):
    """Basis of M = {m : a |> m = e~(a) m for all a}."""
    cols = []
    for u in range(P.dim):
        col = {}
        for a in range(A.dim):
            diff = vsub(act.basis(a, u), P.mul(et.columns[a], {u: ONE}))
            for w, c in diff.items():
                acc(col, a * P.dim + w, c)
        cols.append(col)
    return kernel(cols)


def fixed_subalgebra_from_action(A, P, act: Action):
    """M = {m : a |> (u m) = (a |> u) m for all u, a}; needs no copoint."""
    cols = []
    n = P.dim
    for m in range(n):
        col = {}
        for a, u in itertools.product(range(A.dim), range(n)):
            diff = vsub(act({a: ONE}, P.mul_keys(u, m)), P.mul(act.basis(a, u), {m: ONE}))
            for w, c in diff.items():
                acc(col, (a * n + u) * n + w, c)
        cols.append(col)
    return kernel(cols)


def check_subalgebra(P, basis) -> Report:
    rep = Report("subalgebra")
    e = Eliminator()
    for v in basis:
        e.add(v)
    rep.add("contains_unit", e.contains(P.unit()))
    bad = None
    for i, j in itertools.product(range(len(basis)), repeat=2):
        if not e.contains(P.mul(basis[i], basis[j])):
            bad = (i, j)
            break
    rep.add("closed_under_product", bad is None, bad)
    return rep


# ----------------------------------------------------------------------
# Galois data

class TensorOverM:
    """P (x)_M P with the operations needed by translation maps."""

    def __init__(self, P, M_basis):
        self.P = P
        n = P.dim
        gens = []
        for u, v in itertools.product(range(n), repeat=2):
            for m in M_basis:
                vec = {}
                for w, c in P.mul({u: ONE}, m).items():
                    acc(vec, w * n + v, c)
                for w, c in P.mul(m, {v: ONE}).items():
                    acc(vec, u * n + w, -c)
                if vec:
                    gens.append(vec)
        self.relations = gens
        self.q = quotient(tensor_space(P.space, P.space), gens)
        self.space = self.q.space
        self.dim = self.space.dim

    def proj(self, vec):
        """Class of {u*n+v: c}."""
        return self.q.projection(vec)

    def proj_pairs(self, t):
        n = self.P.dim
        return self.proj({u * n + v: c for (u, v), c in t.items()})

    def lift(self, x):
        """Representative pairs {(u, v): c} of a class vector."""
        n = self.P.dim
        return {divmod(k, n): c for k, c in self.q.section(x).items()}

    def right_mul(self, x, v):
        """[a (x) b] v = [a (x) b v]."""
        out = {}
        for (a, b), c in self.lift(x).items():
            for w, d in self.P.mul({b: ONE}, v).items():
                acc(out, (a, w), c * d)
        return self.proj_pairs(out)

    def left_mul(self, u, x):
        out = {}
        for (a, b), c in self.lift(x).items():
            for w, d in self.P.mul(u, {a: ONE}).items():
                acc(out, (w, b), c * d)
        return self.proj_pairs(out)

    def first_leg(self, f, x):
        """[f(a) (x) b] for a linear f: P-basis index -> P vector."""
        out = {}
        for (a, b), c in self.lift(x).items():
            for w, d in f(a).items():
                acc(out, (w, b), c * d)
        return self.proj_pairs(out)


@dataclass
class GaloisData:
    A: FinAlgebra
    P: FinAlgebra
    action: Action
    M: list
    Q: TensorOverM
    chi: LinearMap            # A (x) Q -> P
    chi_sharp: LinearMap | None = None   # P -> Q (x) A
    copoint: LinearMap | None = None
    F: FactorisationMap | None = None
    report: Report = field(default_factory=Report)

    def chi_sharp_unit(self):
        """chi#(1) as {(class, a): c}."""
        return self.sharp_of(self.P.unit())

    def sharp_of(self, uvec):
        out = {}
        for k, c in self.chi_sharp(uvec).items():
            acc(out, divmod(k, self.A.dim), c)
        return out

    def chi_of(self, avec, qvec):
        out = {}
        for a, ca in avec.items():
            for x, cx in qvec.items():
                add_into(out, self.chi.columns[a * self.Q.dim + x], ca * cx)
        return out


def _build_chi(A, P, act, Q: TensorOverM, rep):
    n = P.dim
    cols = []
    for a in range(A.dim):
        for x in range(Q.dim):
            out = {}
            for (u, v), c in Q.lift({x: ONE}).items():
                add_into(out, P.mul(act.basis(a, u), {v: ONE}), c)
            cols.append(out)
    chi = LinearMap(tensor_space(A.space, Q.space), P.space, cols)
    # chi~ must kill A (x) relations
    bad = None
    for a in range(A.dim):
        for r in Q.relations:
            out = {}
            for k, c in r.items():
                u, v = divmod(k, n)
                add_into(out, P.mul(act.basis(a, u), {v: ONE}), c)
            if out:
                bad = (_lbl(A.space, a), r)
                break
        if bad:
            break
    rep.add("chi_descends", bad is None, bad)
    return chi


def action_from_copoint(F: FactorisationMap, et: LinearMap) -> GaloisData:
    """Action, fixed subalgebra M, P (x)_M P and chi (chi# left empty)."""
    rep = check_copoint(F, et)
    if not rep.passed:
        w = rep.failures[0].witness
        raise ValueError(f"copoint condition fails at {w}")
    act = Action(F.A, F.P, action_from_copoint_map(F, et))
    rep.extend(check_action(act))
    rep.extend(check_psi_module(F, act))
    M = fixed_subalgebra(F.A, F.P, act, et)
    rep.extend(check_subalgebra(F.P, M), "M_")
    Q = TensorOverM(F.P, M)
    chi = _build_chi(F.A, F.P, act, Q, rep)
    return GaloisData(F.A, F.P, act, M, Q, chi, None, et, F, rep)


def galois_identities(G: GaloisData, chi_sharp: LinearMap) -> Report:
    """Tr_A(chi# o chi) = id on P (x)_M P and (chi (x) id)(id (x) chi#) = flip."""
    rep = Report("galois identities")
    A, P, Q = G.A, G.P, G.Q
    na = A.dim
    bad = None
    for j in range(Q.dim):
        total = {}
        for a in range(na):
            img = chi_sharp(G.chi.columns[a * Q.dim + j])
            for k, c in img.items():
                x, b = divmod(k, na)
                if b == a:
                    acc(total, x, c)
        if vsub(total, {j: ONE}):
            bad = Q.space.labels[j]
            break
    rep.add("trace_identity", bad is None, bad)
    bad = None
    for a, u in itertools.product(range(na), range(P.dim)):
        out = {}
        for k, c in chi_sharp.columns[u].items():
            x, b = divmod(k, na)
            for w, d in G.chi.columns[a * Q.dim + x].items():
                acc(out, (w, b), c * d)
        if vsub(out, {(u, a): ONE}):
            bad = (_lbl(A.space, a), _lbl(P.space, u))
            break
    rep.add("flip_identity", bad is None, bad)
    return rep


def find_chi_sharp(G: GaloisData):
    """Solve both identities as one exact linear system; returns the LinearMap or None."""
    A, P, Q = G.A, G.P, G.Q
    na, np, nq = A.dim, P.dim, Q.dim
    # unknown X[u, x, a] is coefficient of class x (x) e_a in chi#(e_u)
    def unk(u, x, a):
        return (u * nq + x) * na + a

    off = nq * nq
    cols = [dict() for _ in range(np * nq * na)]
    for u, x, a in itertools.product(range(np), range(nq), range(na)):
        col = cols[unk(u, x, a)]
        # trace identity rows (j, x): sum_a sum_u chi(e_a (x) q_j)_u X[u, x, a]
        for j in range(nq):
            c = G.chi.columns[a * nq + j].get(u)
            if c:
                acc(col, j * nq + x, c)
        # flip identity rows (a2, u, w, b=a)
        for a2 in range(na):
            for w, c in G.chi.columns[a2 * nq + x].items():
                acc(col, off + ((a2 * np + u) * np + w) * na + a, c)
    rhs = {}
    for j in range(nq):
        rhs[j * nq + j] = ONE
    for a2, u in itertools.product(range(na), range(np)):
        rhs[off + ((a2 * np + u) * np + u) * na + a2] = ONE
    sol = solve_columns(cols, rhs)
    if not sol.feasible:
        return None
    X = sol.particular
    mcols = []
    for u in range(np):
        col = {}
        for x, a in itertools.product(range(nq), range(na)):
            c = X.get(unk(u, x, a))
            if c:
                col[x * na + a] = c
        mcols.append(col)
    return LinearMap(P.space, tensor_space(Q.space, A.space), mcols)


def attach_chi_sharp(G: GaloisData, chi_sharp=None):
    """Find (or accept) chi# and record the identities in G.report."""
    if chi_sharp is None:
        chi_sharp = find_chi_sharp(G)
    G.report.add("chi_sharp_exists", chi_sharp is not None)
    if chi_sharp is not None:
        G.chi_sharp = chi_sharp
        G.report.extend(galois_identities(G, chi_sharp))
    return G


def verify_translation(G: GaloisData) -> Report:
    """The three translation-map identities for chi# = chi#(1)."""
    rep = Report("translation map")
    A, P, Q, act = G.A, G.P, G.Q, G.action
    na = A.dim
    cs = G.chi_sharp_unit()
    # (a) chi# a = a |> chi#  (action on the first P factor)
    bad = None
    for a in range(na):
        lhs = {}
        for (x, b), c in cs.items():
            for k, d in A.mul_keys(b, a).items():
                acc(lhs, (x, k), c * d)
        rhs = {}
        for (x, b), c in cs.items():
            moved = Q.first_leg(lambda w: act.basis(a, w), {x: ONE})
            for y, d in moved.items():
                acc(rhs, (y, b), c * d)
        if vsub(lhs, rhs):
            bad = _lbl(A.space, a)
            break
    rep.add("a_equivariance", bad is None, bad)
    # (b) chi#(uv) = chi#(u)^(1) v (x) chi#(u)^(2)
    bad = None
    for u, v in itertools.product(range(P.dim), repeat=2):
        lhs = G.sharp_of(P.mul_keys(u, v))
        rhs = {}
        for (x, b), c in G.sharp_of({u: ONE}).items():
            for y, d in Q.right_mul({x: ONE}, {v: ONE}).items():
                acc(rhs, (y, b), c * d)
        if vsub(lhs, rhs):
            bad = (_lbl(P.space, u), _lbl(P.space, v))
            break
    rep.add("right_P_linearity", bad is None, bad)
    # (c) chi#^(1) (chi#^(2) |> u) = u (x)_M 1
    bad = None
    for u in range(P.dim):
        out = {}
        for (x, b), c in cs.items():
            add_into(out, Q.right_mul({x: ONE}, act.basis(b, u)), c)
        target = Q.proj_pairs({(u, w): c for w, c in P.unit().items()})
        if vsub(out, target):
            bad = _lbl(P.space, u)
            break
    rep.add("reconstruction", bad is None, bad)
    return rep


def galois_product(A: FinAlgebra, P: FinAlgebra, action: LinearMap, compare: FactorisationMap | None = None):
    """Psi(a (x) u) = chi(a (x) u chi#^(1)) (x) chi#^(2) and e~(a) = a |> 1.

    Returns (FactorisationMap, copoint LinearMap, GaloisData).  Raises ValueError
    when the action is not Galois.
    """
    act = Action(A, P, action)
    rep = check_action(act)
    M = fixed_subalgebra_from_action(A, P, act)
    rep.extend(check_subalgebra(P, M), "M_")
    Q = TensorOverM(P, M)
    chi = _build_chi(A, P, act, Q, rep)
    G = GaloisData(A, P, act, M, Q, chi, None, None, None, rep)
    attach_chi_sharp(G)
    if G.chi_sharp is None:
        raise ValueError("action is not Galois: no chi# exists")
    cs = G.chi_sharp_unit()

    def psi_fn(a, u):
        out = {}
        for (x, b), c in cs.items():
            ux = Q.left_mul({u: ONE}, {x: ONE})
            for w, d in G.chi_of({a: ONE}, ux).items():
                acc(out, (w, b), c * d)
        return out

    F = FactorisationMap.from_function(A, P, psi_fn)
    et = LinearMap(A.space, P.space, [act({a: ONE}, P.unit()) for a in range(A.dim)])
    G.F, G.copoint = F, et
    rep.extend(check_factorisation(F, build_x=False), "product_")
    rep.extend(check_psi_module(F, act), "product_")
    if compare is not None:
        rep.add("uniqueness_round_trip", F.psi == compare.psi)
    return F, et, G


def galois_data(F, et, chi_sharp=None):
    """action_from_copoint followed by chi# (found or supplied)."""
    G = action_from_copoint(F, et)
    return attach_chi_sharp(G, chi_sharp)


# ----------------------------------------------------------------------
# cleft bundles and automorphisms

def tensor_op(P, A):
    """P (x) A^op, basis index u * dim A + a."""
    return P.tensor(A.opposite())


def _pa_pairs(vec, na):
    return {divmod(k, na): c for k, c in vec.items()}


def _pa_flat(t, na):
    return {u * na + a: c for (u, a), c in t.items()}


def cleaving_condition_ok(G: GaloisData, phi):
    """Phi a = a |> Phi for all a (A product on the right)."""
    A, na = G.A, G.A.dim
    pairs = _pa_pairs(phi, na)
    for a in range(na):
        lhs, rhs = {}, {}
        for (u, b), c in pairs.items():
            for k, d in A.mul_keys(b, a).items():
                acc(lhs, (u, k), c * d)
            for w, d in G.action.basis(a, u).items():
                acc(rhs, (w, b), c * d)
        if vsub(lhs, rhs):
            return False, _lbl(A.space, a)
    return True, None


def cleaving_candidates(G: GaloisData):
    """Basis of the solution space of Phi a = a |> Phi."""
    A, P = G.A, G.P
    na, np = A.dim, P.dim
    cols = []
    for u, b in itertools.product(range(np), range(na)):
        col = {}
        for a in range(na):
            for k, d in A.mul_keys(b, a).items():
                acc(col, (a * np + u) * na + k, d)
            for w, d in G.action.basis(a, u).items():
                acc(col, (a * np + w) * na + b, -d)
        cols.append(col)
    return kernel(cols)


def find_cleaving(G: GaloisData, seed=0, tries=50):
    """Search the solution space for an element invertible in P (x) A^op."""
    R = tensor_op(G.P, G.A)
    cands = cleaving_candidates(G)
    rng = random.Random(seed)
    for k in range(len(cands) + tries):
        if k < len(cands):
            phi = cands[k]
        else:
            phi = {}
            for v in cands:
                add_into(phi, v, Scalar(rng.randint(-3, 3)))
        if not phi:
            continue
        inv = R.inverse_of(phi)
        if inv is not None:
            return phi, inv
    return None


def chi_sharp_from_cleaving(G: GaloisData, phi, phi_inv):
    """chi#(u) = Phi^(1) (x)_M Phi^-(1) u (x) Phi^-(2) Phi^(2)."""
    A, P, Q = G.A, G.P, G.Q
    na, np = A.dim, P.dim
    pp = _pa_pairs(phi, na)
    pi = _pa_pairs(phi_inv, na)
    cols = []
    for u in range(np):
        out = {}
        for (w, b), c in pp.items():
            for (w2, b2), d in pi.items():
                right = P.mul({w2: ONE}, {u: ONE})
                cls = Q.proj_pairs({(w, v): e for v, e in right.items()})
                for k, e in A.mul_keys(b2, b).items():
                    for x, f in cls.items():
                        acc(out, x * na + k, c * d * e * f)
        cols.append(out)
    return LinearMap(P.space, tensor_space(Q.space, A.space), cols)


def trivialisation_ops(G: GaloisData, phi, phi_inv=None) -> Report:
    """Cleft bundle checks: the condition on Phi, Theta round trips and chi# from Phi."""
    A, P = G.A, G.P
    na, np = A.dim, P.dim
    rep = Report("trivialisation")
    R = tensor_op(P, A)
    if phi_inv is None:
        phi_inv = R.inverse_of(phi)
    ok_inv = phi_inv is not None and not vsub(R.mul(phi, phi_inv), R.unit()) and not vsub(R.mul(phi_inv, phi), R.unit())
    rep.add("phi_invertible", ok_inv)
    if not ok_inv:
        raise ValueError("Phi is not invertible in P (x) A^op")
    ok, w = cleaving_condition_ok(G, phi)
    rep.add("phi_intertwines", ok, w)
    pp, pi = _pa_pairs(phi, na), _pa_pairs(phi_inv, na)
    Melim = Eliminator(track=True)
    for i, m in enumerate(G.M):
        Melim.add(m, i)

    def m_coords(vec):
        r, combo = Melim.reduce(vec, {})
        if r:
            return None
        return vscale(combo, -ONE)

    def theta(f):
        """f: dict a -> M-coordinate dict."""
        out = {}
        for (u, b), c in pp.items():
            val = {}
            for i, d in f.get(b, {}).items():
                add_into(val, G.M[i], d)
            add_into(out, P.mul({u: ONE}, val), c)
        return out

    def theta_inv(u):
        f = {}
        for a in range(na):
            val = {}
            for (w, b), c in pi.items():
                add_into(val, P.mul({w: ONE}, G.action(A.mul_keys(b, a), {u: ONE})), c)
            coords = m_coords(val)
            if coords is None:
                return None
            f[a] = coords
        return f

    bad_in_m, bad_rt = None, None
    for u in range(np):
        f = theta_inv(u)
        if f is None:
            bad_in_m = _lbl(P.space, u)
            break
        if vsub(theta(f), {u: ONE}):
            bad_rt = _lbl(P.space, u)
            break
    rep.add("theta_inverse_lands_in_M", bad_in_m is None, bad_in_m)
    rep.add("theta_after_inverse", bad_rt is None and bad_in_m is None, bad_rt)
    bad = None
    for a, i in itertools.product(range(na), range(len(G.M))):
        f = {a: {i: ONE}}
        g = theta_inv_vec(theta(f), theta_inv, np)
        norm = {b: v for b, v in g.items() if v}
        if norm != {a: {i: ONE}} and not _same_hom(norm, f):
            bad = (_lbl(A.space, a), i)
            break
    rep.add("inverse_after_theta", bad is None, bad)
    cs = chi_sharp_from_cleaving(G, phi, phi_inv)
    rep.extend(galois_identities(G, cs), "from_phi_")
    if G.chi_sharp is not None:
        rep.add("chi_sharp_agrees", cs == G.chi_sharp)
    rep.data["chi_sharp"] = cs
    return rep


def _same_hom(f, g):
    keys = set(f) | set(g)
    return all(not vsub(f.get(k, {}), g.get(k, {})) for k in keys)


def theta_inv_vec(vec, theta_inv, np):
    out = {}
    for u, c in vec.items():
        f = theta_inv(u)
        for a, coords in f.items():
            add_into(out.setdefault(a, {}), coords, c)
    return out


def automorphism_condition(G: GaloisData, f):
    """Psi(a (x) f^(1)) f^(2) = f^(1) (x) f^(2) a for all a."""
    A, na = G.A, G.A.dim
    F = G.F
    pairs = _pa_pairs(f, na)
    for a in range(na):
        lhs, rhs = {}, {}
        for (u, b), c in pairs.items():
            for (u1, a1), d in F.pair(a, u).items():
                for k, e in A.mul_keys(a1, b).items():
                    acc(lhs, (u1, k), c * d * e)
            for k, e in A.mul_keys(b, a).items():
                acc(rhs, (u, k), c * e)
        if vsub(lhs, rhs):
            return False, _lbl(A.space, a)
    return True, None


def automorphism_map(G: GaloisData, f) -> LinearMap:
    """F(u) = f^(1) (f^(2) |> u)."""
    P, na = G.P, G.A.dim
    pairs = _pa_pairs(f, na)
    cols = []
    for u in range(P.dim):
        out = {}
        for (w, b), c in pairs.items():
            add_into(out, P.mul({w: ONE}, G.action.basis(b, u)), c)
        cols.append(out)
    return LinearMap(P.space, P.space, cols)


def automorphism_ops(G: GaloisData, f, other=None, phi=None, gamma=None) -> Report:
    rep = Report("automorphism")
    A, P = G.A, G.P
    R = tensor_op(P, A)
    ok, w = automorphism_condition(G, f)
    rep.add("condition", ok, w)
    rep.add("invertible", R.inverse_of(f) is not None)
    Fm = automorphism_map(G, f)
    bad = None
    for a, u in itertools.product(range(A.dim), range(P.dim)):
        if vsub(Fm(G.action.basis(a, u)), G.action({a: ONE}, Fm.columns[u])):
            bad = (_lbl(A.space, a), _lbl(P.space, u))
            break
    rep.add("left_A_module_map", bad is None, bad)
    bad = None
    for u, m in itertools.product(range(P.dim), range(len(G.M))):
        if vsub(Fm(P.mul({u: ONE}, G.M[m])), P.mul(Fm.columns[u], G.M[m])):
            bad = (_lbl(P.space, u), m)
            break
    rep.add("right_M_module_map", bad is None, bad)
    rep.add("bijective", Fm.rank() == P.dim)
    if other is not None:
        prod = R.mul(f, other)
        ok, w = automorphism_condition(G, prod)
        rep.add("group_law", ok, w)
        # composition of automorphisms matches the product in P (x) A^op
        rep.add("composition", automorphism_map(G, prod) == automorphism_map(G, f) @ automorphism_map(G, other)
                or automorphism_map(G, prod) == automorphism_map(G, other) @ automorphism_map(G, f))
    if phi is not None and gamma is not None:
        phi_inv = R.inverse_of(phi)
        g = R.mul(R.mul(phi, gamma), phi_inv)
        ok, w = automorphism_condition(G, g)
        rep.add("gauge_transform_valid", ok, w)
        rep.data["gauge_f"] = g
    return rep


def gauge_element(G, phi, gamma):
    R = tensor_op(G.P, G.A)
    return R.mul(R.mul(phi, gamma), R.inverse_of(phi))


# ----------------------------------------------------------------------
# associated bundles

def check_module(A, rho, side) -> Report:
    """rho[a]: LinearMap V -> V; side 'left' means a |> (b |> v) = (ab) |> v."""
    rep = Report(f"{side} module")
    V = rho[0].domain
    bad = None
    for a, b in itertools.product(range(A.dim), repeat=2):
        ab = A.mul_keys(a, b)
        lhs = None
        for k, c in ab.items():
            term = LinearMap(V, V, [vscale(col, c) for col in rho[k].columns])
            lhs = term if lhs is None else lhs + term
        if lhs is None:
            lhs = LinearMap(V, V, [{} for _ in range(V.dim)])
        comp = rho[a] @ rho[b] if side == "left" else rho[b] @ rho[a]
        if not lhs == comp:
            bad = (_lbl(A.space, a), _lbl(A.space, b))
            break
    rep.add("module_associative", bad is None, bad)
    unit = None
    for k, c in A.unit().items():
        term = LinearMap(V, V, [vscale(col, c) for col in rho[k].columns])
        unit = term if unit is None else unit + term
    rep.add("module_unital", unit == LinearMap.identity(V))
    return rep


@dataclass
class AssociatedBundle:
    kind: str            # "E" (right module) or "Ebar" (left module)
    basis: list          # vectors in V (x) P (index v*np+u) or P (x) V (index u*nv+w)
    m_action: dict       # M basis index -> matrix on the bundle basis (list of coordinate dicts)
    report: Report


def _coords_in(basis, vec):
    e = Eliminator(track=True)
    for i, b in enumerate(basis):
        e.add(b, i)
    r, combo = e.reduce(vec, {})
    return None if r else vscale(combo, -ONE)


def associated_bundle_right(G: GaloisData, rho) -> AssociatedBundle:
    """E = {sum v (x) u : sum v <| a (x) u = sum v (x) a |> u}."""
    A, P = G.A, G.P
    rep = check_module(A, rho, "right")
    if not rep.passed:
        raise ValueError("not a right A-module")
    nv, np = rho[0].domain.dim, P.dim
    cols = []
    for v, u in itertools.product(range(nv), range(np)):
        col = {}
        for a in range(A.dim):
            for w, c in rho[a].columns[v].items():
                acc(col, (a * nv + w) * np + u, c)
            for w, c in G.action.basis(a, u).items():
                acc(col, (a * nv + v) * np + w, -c)
        cols.append(col)
    basis = kernel(cols)
    acts = {}
    ok = True
    for i, m in enumerate(G.M):
        mat = []
        for b in basis:
            img = {}
            for k, c in b.items():
                v, u = divmod(k, np)
                for w, d in P.mul({u: ONE}, m).items():
                    acc(img, v * np + w, c * d)
            coords = _coords_in(basis, img)
            ok = ok and coords is not None
            mat.append(coords)
        acts[i] = mat
    rep.add("E_closed_under_M", ok)
    return AssociatedBundle("E", basis, acts, rep)


def associated_bundle_left(G: GaloisData, rho) -> AssociatedBundle:
    """Ebar = {sum u (x) v : sum Psi(a (x) u) |> v = e~(a) u (x) v}."""
    A, P, F = G.A, G.P, G.F
    rep = check_module(A, rho, "left")
    if not rep.passed:
        raise ValueError("not a left A-module")
    nv, np = rho[0].domain.dim, P.dim
    et = G.copoint
    cols = []
    for u, v in itertools.product(range(np), range(nv)):
        col = {}
        for a in range(A.dim):
            for (u1, a1), c in F.pair(a, u).items():
                for w, d in rho[a1].columns[v].items():
                    acc(col, (a * np + u1) * nv + w, c * d)
            for w, c in P.mul(et.columns[a], {u: ONE}).items():
                acc(col, (a * np + w) * nv + v, -c)
        cols.append(col)
    basis = kernel(cols)
    acts = {}
    ok = True
    for i, m in enumerate(G.M):
        mat = []
        for b in basis:
            img = {}
            for k, c in b.items():
                u, v = divmod(k, nv)
                for w, d in P.mul(m, {u: ONE}).items():
                    acc(img, w * nv + v, c * d)
            coords = _coords_in(basis, img)
            ok = ok and coords is not None
            mat.append(coords)
        acts[i] = mat
    rep.add("Ebar_closed_under_M", ok)
    return AssociatedBundle("Ebar", basis, acts, rep)


def section_correspondence_left(G: GaloisData, rho, phi, phi_inv, bundle: AssociatedBundle | None = None) -> Report:
    """Hom_k(V_L, M) -> Hom_A(V_L, P), fbar |-> Phi^(1) fbar(Phi^(2) |> v), and back."""
    A, P = G.A, G.P
    na, nv = A.dim, rho[0].domain.dim
    pp, pi = _pa_pairs(phi, na), _pa_pairs(phi_inv, na)
    rep = Report("sections (left module)")

    def phi_of(fbar):
        # fbar: list over v of P-vectors (in M)
        out = []
        for v in range(nv):
            val = {}
            for (u, b), c in pp.items():
                inner = {}
                for w, d in rho[b].columns[v].items():
                    add_into(inner, fbar[w], d)
                add_into(val, P.mul({u: ONE}, inner), c)
            out.append(val)
        return out

    def fbar_of(phimap):
        out = []
        for v in range(nv):
            val = {}
            for (u, b), c in pi.items():
                inner = {}
                for w, d in rho[b].columns[v].items():
                    add_into(inner, phimap[w], d)
                add_into(val, P.mul({u: ONE}, inner), c)
            out.append(val)
        return out

    Melim = Eliminator()
    for m in G.M:
        Melim.add(m)
    ok_lin, ok_rt, ok_m, ok_sec = True, True, True, True
    for v0, i in itertools.product(range(nv), range(len(G.M))):
        fbar = [G.M[i] if v == v0 else {} for v in range(nv)]
        ph = phi_of(fbar)
        for a, v in itertools.product(range(na), range(nv)):
            lhs = {}
            for w, d in rho[a].columns[v].items():
                add_into(lhs, ph[w], d)
            if vsub(lhs, G.action({a: ONE}, ph[v])):
                ok_lin = False
        back = fbar_of(ph)
        if any(vsub(x, y) for x, y in zip(back, fbar)):
            ok_rt = False
        if any(not Melim.contains(x) for x in back):
            ok_m = False
        if bundle is not None:
            for b in bundle.basis:
                val = {}
                for k, c in b.items():
                    u, v = divmod(k, nv)
                    add_into(val, P.mul({u: ONE}, ph[v]), c)
                if not Melim.contains(val):
                    ok_sec = False
    rep.add("phi_f_is_A_linear", ok_lin)
    rep.add("round_trip", ok_rt)
    rep.add("inverse_lands_in_M", ok_m)
    if bundle is not None:
        rep.add("section_values_in_M", ok_sec)
    return rep


def section_correspondence_right(G: GaloisData, rho, phi, phi_inv, bundle: AssociatedBundle | None = None) -> Report:
    """f |-> phi_f(v) = f(v <| Phi^-(2)) Phi^-(1); back via f(v) = phi(v <| Phi^(2)) Phi^(1)."""
    A, P = G.A, G.P
    na, nv, np = A.dim, rho[0].domain.dim, P.dim
    pp, pi = _pa_pairs(phi, na), _pa_pairs(phi_inv, na)
    rep = Report("sections (right module)")

    def transport(fvals, pairs):
        out = []
        for v in range(nv):
            val = {}
            for (u, b), c in pairs.items():
                inner = {}
                for w, d in rho[b].columns[v].items():
                    add_into(inner, fvals[w], d)
                add_into(val, P.mul(inner, {u: ONE}), c)
            out.append(val)
        return out

    Melim = Eliminator()
    for m in G.M:
        Melim.add(m)
    ok_rt, ok_sec = True, True
    for v0, i in itertools.product(range(nv), range(len(G.M))):
        f = [G.M[i] if v == v0 else {} for v in range(nv)]
        ph = transport(f, pi)
        back = transport(ph, pp)
        if any(vsub(x, y) for x, y in zip(back, f)):
            ok_rt = False
        if bundle is not None:
            for b in bundle.basis:
                val = {}
                for k, c in b.items():
                    v, u = divmod(k, np)
                    add_into(val, P.mul(ph[v], {u: ONE}), c)
                if not Melim.contains(val):
                    ok_sec = False
    rep.add("round_trip", ok_rt)
    if bundle is not None:
        rep.add("section_values_in_M", ok_sec)
    return rep


# ----------------------------------------------------------------------
# copoints on 2-dimensional factors

@dataclass
class ConicReduction:
    coeffs: dict          # monomial (i, j) in (x, y) -> Scalar, per P component
    equation: str
    sign: int
    feasible: bool
    witnesses: list
    certificate: str = ""


def _copoint_from_xy(F, x, y):
    """e~(1) = 1, e~(a) = x 1 + y p for 2-dim A, P with first basis vector the unit."""
    P = F.P
    return LinearMap(F.A.space, P.space, [P.unit(), add_into(vscale(P.unit(), x), {1: y})])


def _copoint_defect(F, x, y):
    """e~(a a) - Psi(a (x) e~(a))^(1) e~(...)^(2), a vector in P."""
    et = _copoint_from_xy(F, x, y)
    A, P = F.A, F.P
    lhs = et(A.mul_keys(1, 1))
    rhs = {}
    for (u, a1), c in F.apply_vecs({1: ONE}, et.columns[1]).items():
        add_into(rhs, P.mul({u: ONE}, et.columns[a1]), c)
    return vsub(lhs, rhs)


def copoint_feasibility_dim2(F: FactorisationMap, field="Q") -> ConicReduction:
    """Reduce the copoint condition on a 2-dim factorisation to a conic and decide it.

    The defect is a polynomial of degree <= 2 in the unknowns e~(a) = x + y p;
    its coefficients are recovered by exact interpolation.  Supported shapes
    are x^2 - y^2 = 1 (after y = i beta: alpha^2 + beta^2 = 1) and
    x^2 + y^2 = -1 (alpha^2 + beta^2 = -1), as for the group-algebra and
    quaternion presets.
    """
    if F.na != 2 or F.np != 2:
        raise ValueError("only 2-dimensional factors are supported")
    if F.A.unit() != {0: ONE} or F.P.unit() != {0: ONE}:
        raise ValueError("first basis vector must be the unit")
    monos = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    points = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)]
    rows = []
    for (px, py) in points:
        rows.append({k: Scalar(px) ** i * Scalar(py) ** j for k, (i, j) in enumerate(monos) if (px or not i) and (py or not j)})
    coeffs = {}
    for comp in range(2):
        vals = {}
        for k, (px, py) in enumerate(points):
            d = _copoint_defect(F, Scalar(px), Scalar(py)).get(comp, ZERO)
            if d:
                vals[k] = d
        # solve Vandermonde-like system rows * c = vals
        cols = [dict() for _ in monos]
        for r, row in enumerate(rows):
            for k, v in row.items():
                if v:
                    cols[k][r] = v
        sol = solve_columns(cols, vals)
        coeffs[comp] = {monos[k]: v for k, v in (sol.particular or {}).items() if v}
    # the condition is: defect == 0 in both components
    if coeffs[1]:
        raise ValueError("copoint condition has a nontrivial p-component; unsupported shape")
    c = coeffs[0]
    cx, cy, c0 = c.get((2, 0), ZERO), c.get((0, 2), ZERO), c.get((0, 0), ZERO)
    if set(c) - {(2, 0), (0, 2), (0, 0)} or not cx:
        raise ValueError("unsupported conic shape")
    # normalise to x^2 + (cy/cx) y^2 = -c0/cx
    ratio, rhs = cy / cx, -c0 / cx
    if ratio == -ONE and rhs == ONE:
        # x^2 - y^2 = 1; with y = i beta this is alpha^2 + beta^2 = 1
        wit = []
        for a, b in ((Scalar(1), ZERO), (-Scalar(1), ZERO), (Scalar(3) / 5, Scalar(4) / 5), (Scalar(5) / 13, Scalar(12) / 13)):
            if not _copoint_defect(F, a, I_UNIT * b):
                wit.append((a, b))
        return ConicReduction(c, "alpha^2 + beta^2 = 1", 1, bool(wit), wit)
    if ratio == ONE and rhs == -ONE:
        if field == "Q":
            cert = ("alpha^2 + beta^2 + 1 is a sum of squares plus 1, hence >= 1 > 0 "
                    "for every rational alpha, beta")
            return ConicReduction(c, "alpha^2 + beta^2 = -1", -1, False, [], cert)
        wit = [(I_UNIT, ZERO)] if not _copoint_defect(F, I_UNIT, ZERO) else []
        return ConicReduction(c, "alpha^2 + beta^2 = -1", -1, bool(wit), wit)
    raise ValueError("unsupported conic shape")


# ----------------------------------------------------------------------
# presets

def braided_factorisation(n, q=None):
    """k Z_n . k Z_n with Psi(h^m (x) g^k) = q^(mk) g^k (x) h^m."""
    q = Scalar.zeta(n) if q is None else scalar(q)
    P, A = cyclic_algebra(n, "g"), cyclic_algebra(n, "h")
    return FactorisationMap.from_function(A, P, lambda m, k: {(k, m): q ** ((m * k) % n)})


def example26(n):
    """Matrix factorisation with the character e(h) = q.  Returns (F, copoint)."""
    q = Scalar.zeta(n)
    F = braided_factorisation(n, q)
    return F, character_copoint(F, [q ** m for m in range(n)])


def example26_chi_sharp(n, G: GaloisData):
    """chi#(g^m) = n^-1 sum_{a,b} q^(-ab) g^(b-1) (x) g^(m-b+1) (x) h^a."""
    q = Scalar.zeta(n)
    inv_n = ONE / n
    cols = []
    for m in range(n):
        out = {}
        for a, b in itertools.product(range(n), repeat=2):
            cls = G.Q.proj_pairs({((b - 1) % n, (m - b + 1) % n): ONE})
            for x, c in cls.items():
                acc(out, x * n + a, inv_n * q ** ((-a * b) % n) * c)
        cols.append(out)
    return LinearMap(G.P.space, tensor_space(G.Q.space, G.A.space), cols)


def example26_chi_formula(n, m, k, l):
    """q^(m(k+1)) g^(k+l) as {index: coeff}."""
    q = Scalar.zeta(n)
    return {(k + l) % n: q ** ((m * (k + 1)) % n)}


def example27(cos, sin):
    """n = 2 factorisation with e~(h) = cos + i sin g.  Returns (F, copoint)."""
    F = braided_factorisation(2, -ONE)
    cos, sin = scalar(cos), scalar(sin)
    et = LinearMap(F.A.space, F.P.space, [{0: ONE}, {0: cos, 1: I_UNIT * sin}])
    return F, et


def quaternion_factorisation():
    """H = R[i] R[j] with Psi(j (x) i) = -i (x) j."""
    P, A = complex_like_algebra("i"), complex_like_algebra("j")
    return FactorisationMap.from_function(A, P, lambda a, u: {(u, a): -ONE if (a and u) else ONE})


def _s3():
    elems = list(itertools.permutations(range(3)))
    index = {g: i for i, g in enumerate(elems)}

    def mul(g, h):  # (g h)(i) = g(h(i))
        return tuple(g[h[i]] for i in range(3))

    def inv(g):
        out = [0] * 3
        for i, x in enumerate(g):
            out[x] = i
        return tuple(out)
    return elems, index, mul, inv


def smash_s3():
    """k S_3 acting on functions k(S_3) by translation: Psi(g (x) delta_x) = delta_(x g^-1) (x) g.

    Returns (F, copoint) with the trivial character as copoint.
    """
    elems, index, mul, inv = _s3()
    names = ["".join(map(str, g)) for g in elems]
    A = FinAlgebra(FinSpace([f"g{n}" for n in names]),
                   {(index[g], index[h]): {index[mul(g, h)]: ONE} for g in elems for h in elems},
                   {index[(0, 1, 2)]: ONE})
    P = FinAlgebra(FinSpace([f"d{n}" for n in names]),
                   {(i, j): ({i: ONE} if i == j else {}) for i in range(6) for j in range(6)},
                   {i: ONE for i in range(6)})

    def f(a, u):
        g, x = elems[a], elems[u]
        return {(index[mul(x, inv(g))], a): ONE}
    F = FactorisationMap.from_function(A, P, f)
    return F, character_copoint(F, [1] * 6)


def flip_factorisation(A, P):
    """Psi = flip; X is the tensor product algebra."""
    return FactorisationMap.from_function(A, P, lambda a, u: {(u, a): ONE})


def module_algebra_defect(G: GaloisData):
    """(h |> g)^2 - h |> 1: zero iff the action makes P an A-module algebra (n = 2 case)."""
    P = G.P
    hg = G.action.basis(1, 1)
    return vsub(P.mul(hg, hg), P.unit())
