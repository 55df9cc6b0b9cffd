"""Universal differential forms.

Omega^n P sits inside P^(n+1); an element is a dict mapping (n+1)-tuples of
basis keys to scalars.  The algebra is anything with ``unit()`` and
``mul_keys`` (a `FinAlgebra` or an ncpoly `Presentation`).
"""
from __future__ import annotations

import itertools

from .scalars import ONE
from .tensor import acc, add_into
from .linalg import Eliminator, kernel, vsub
from .report import Report


def clean(t):
    return {k: v for k, v in t.items() if v}


def pure(*vecs):
    """u0 (x) u1 (x) ... from dict vectors."""
    out = {(): ONE}
    for vec in vecs:
        nxt = {}
        for k, c in out.items():
            for key, d in vec.items():
                acc(nxt, k + (key,), c * d)
        out = nxt
    return out


def contract_adjacent(w, i, alg):
    """Multiply legs i and i+1."""
    out = {}
    for k, c in w.items():
        for m, d in alg.mul_keys(k[i], k[i + 1]).items():
            acc(out, k[:i] + (m,) + k[i + 2:], c * d)
    return out


def is_form(w, alg):
    """Adjacent products vanish; this is exactly membership in Omega^n P."""
    if not w:
        return True
    n = len(next(iter(w)))
    return all(not contract_adjacent(w, i, alg) for i in range(n - 1))


def d(w, alg):
    """sum_k (-1)^(k-1) (unit inserted at position k)."""
    unit = alg.unit()
    out = {}
    for k, c in w.items():
        n = len(k)
        for pos in range(n + 1):
            sign = c if pos % 2 == 0 else -c
            for u, e in unit.items():
                acc(out, k[:pos] + (u,) + k[pos:], sign * e)
    return out


def d_elem(u, alg):
    """du = 1 (x) u - u (x) 1 for a vector u."""
    return d({(k,): c for k, c in u.items()}, alg)


def mul(w1, w2, alg):
    """Juxtaposition product: last leg of w1 times first leg of w2."""
    out = {}
    for k1, c1 in w1.items():
        for k2, c2 in w2.items():
            for m, e in alg.mul_keys(k1[-1], k2[0]).items():
                acc(out, k1[:-1] + (m,) + k2[1:], c1 * c2 * e)
    return out


def as_form0(u):
    return {(k,): c for k, c in u.items()}


def left_mul(u, w, alg):
    return mul(as_form0(u), w, alg)


def right_mul(w, u, alg):
    return mul(w, as_form0(u), alg)


def degree(w):
    return len(next(iter(w))) - 1 if w else 0


def add(*ws, coeffs=None):
    out = {}
    for i, w in enumerate(ws):
        add_into(out, w, None if coeffs is None else coeffs[i])
    return out


def scale(w, c):
    return {k: v * c for k, v in w.items()} if c else {}


def form_basis(alg, n, keys):
    """Basis of Omega^n P for a finite-dimensional algebra with basis keys."""
    tuples = list(itertools.product(keys, repeat=n + 1))
    cols = []
    for t in tuples:
        col = {}
        w = {t: ONE}
        for i in range(n):
            for k, c in contract_adjacent(w, i, alg).items():
                acc(col, (i, k), c)
        cols.append(col)
    # kernel over tuple-valued rows: relabel rows to ints
    rows = {}
    relab = []
    for col in cols:
        relab.append({rows.setdefault(r, len(rows)): c for r, c in col.items()})
    return [{tuples[i]: c for i, c in v.items()} for v in kernel(relab)]


# ----------------------------------------------------------------------
# iterated entwinings

def psi_n(psi, c, w):
    """psi^n = psi_{n,n+1} ... psi_{12} on c (x) w; returns {(u1..un, c'): coeff}."""
    out = {}
    for k, coeff in w.items():
        cur = {((), c): coeff}
        for leg in k:
            nxt = {}
            for (done, cc), x in cur.items():
                for (u, c2), y in psi(cc, leg).items():
                    acc(nxt, (done + (u,), c2), x * y)
            cur = nxt
        for (done, cc), x in cur.items():
            acc(out, done + (cc,), x)
    return out


def psi_n_vec(psi, cvec, w):
    out = {}
    for c, x in cvec.items():
        add_into(out, psi_n(psi, c, w), x)
    return out


def Psi_n(F, a, w):
    """Factorisation-side Psi^n on a (x) w, with F.pair(a, u) -> {(u', a'): c}."""
    out = {}
    for k, coeff in w.items():
        cur = {((), a): coeff}
        for leg in k:
            nxt = {}
            for (done, aa), x in cur.items():
                for (u, a2), y in F.pair(aa, leg).items():
                    acc(nxt, (done + (u,), a2), x * y)
            cur = nxt
        for (done, aa), x in cur.items():
            acc(out, done + (aa,), x)
    return out


def d_first_legs(t, alg):
    """(d (x) id) on a tensor whose last leg is not a P leg."""
    unit = alg.unit()
    out = {}
    for k, c in t.items():
        body, last = k[:-1], k[-1]
        for pos in range(len(body) + 1):
            sign = c if pos % 2 == 0 else -c
            for u, e in unit.items():
                acc(out, body[:pos] + (u,) + body[pos:] + (last,), sign * e)
    return out


def check_cov_d(psi, alg, cs, ws) -> Report:
    """psi^bullet (id (x) d) = (d (x) id) psi^bullet on the given c and w."""
    rep = Report("psi commutes with d")
    bad = None
    for c, w in itertools.product(cs, ws):
        lhs = psi_n(psi, c, d(w, alg))
        rhs = d_first_legs(psi_n(psi, c, w), alg)
        if vsub(lhs, rhs):
            bad = (c, degree(w))
            break
    rep.add("cov_d", bad is None, bad, count=len(cs) * len(ws))
    return rep


def check_Psi_cov_d(F, ws) -> Report:
    rep = Report("Psi commutes with d")
    bad = None
    for a, w in itertools.product(range(F.na), ws):
        lhs = Psi_n(F, a, d(w, F.P))
        rhs = d_first_legs(Psi_n(F, a, w), F.P)
        if vsub(lhs, rhs):
            bad = (F.A.space.labels[a], degree(w))
            break
    rep.add("cov_d", bad is None, bad)
    return rep


def check_lifted_factorisation(F, max_degree=2) -> Report:
    """Psi^bullet on Omega P (x) A obeys the factorisation conditions up to max_degree."""
    P, A = F.P, F.A
    keys = list(range(P.dim))
    bases = {k: form_basis(P, k, keys) for k in range(max_degree + 1)}
    rep = Report("lifted factorisation")
    # preserves forms
    bad = None
    for k in range(max_degree + 1):
        for a, w in itertools.product(range(F.na), bases[k]):
            img = Psi_n(F, a, w)
            for b in range(F.na):
                part = {kk[:-1]: c for kk, c in img.items() if kk[-1] == b}
                if not is_form(part, P):
                    bad = (F.A.space.labels[a], k)
                    break
            if bad:
                break
    rep.add("maps_forms_to_forms", bad is None, bad)
    # multiplicative in A: Psi(ab (x) w) = Psi_12 Psi_23 then multiply A legs
    bad = None
    for k in range(max_degree + 1):
        for a, b, w in itertools.product(range(F.na), range(F.na), bases[k]):
            lhs = {}
            for m, c in A.mul_keys(a, b).items():
                add_into(lhs, Psi_n(F, m, w), c)
            rhs = {}
            for kk, c in Psi_n(F, b, w).items():
                for kk2, c2 in Psi_n(F, a, {kk[:-1]: ONE}).items():
                    for m, e in A.mul_keys(kk2[-1], kk[-1]).items():
                        acc(rhs, kk2[:-1] + (m,), c * c2 * e)
            if vsub(lhs, rhs):
                bad = (F.A.space.labels[a], F.A.space.labels[b], k)
                break
        if bad:
            break
    rep.add("multiplicative_in_A", bad is None, bad)
    # multiplicative in Omega P: Psi(a (x) w w') = (mul (x) id) Psi_23 Psi_12
    bad = None
    for k1 in range(max_degree + 1):
        for k2 in range(max_degree + 1 - k1):
            for a, w1, w2 in itertools.product(range(F.na), bases[k1], bases[k2]):
                lhs = Psi_n(F, a, mul(w1, w2, P))
                rhs = {}
                for kk, c in Psi_n(F, a, w1).items():
                    for kk2, c2 in Psi_n(F, kk[-1], w2).items():
                        for t, e in mul({kk[:-1]: ONE}, {kk2[:-1]: ONE}, P).items():
                            acc(rhs, t + (kk2[-1],), c * c2 * e)
                if vsub(lhs, rhs):
                    bad = (F.A.space.labels[a], k1, k2)
                    break
            if bad:
                break
        if bad:
            break
    rep.add("multiplicative_in_forms", bad is None, bad)
    bad = None
    for k in range(max_degree + 1):
        for w in bases[k]:
            lhs = {}
            for u, c in A.unit().items():
                add_into(lhs, Psi_n(F, u, w), c)
            rhs = {}
            for kk, c in w.items():
                for u, e in A.unit().items():
                    acc(rhs, kk + (u,), c * e)
            if vsub(lhs, rhs):
                bad = k
                break
    rep.add("unit_A", bad is None, bad)
    rep.extend(check_Psi_cov_d(F, [w for k in range(max_degree) for w in bases[k]]))
    rep.data["form_dims"] = {k: len(v) for k, v in bases.items()}
    return rep


# ----------------------------------------------------------------------
# horizontal forms

def horizontal_span(alg, m_elems, left_keys, right_keys):
    """Spanning vectors u (dm) v for u in left_keys, v in right_keys."""
    out = []
    for m in m_elems:
        dm = d_elem(m, alg)
        for u in left_keys:
            um = left_mul({u: ONE}, dm, alg)
            for v in right_keys:
                out.append(right_mul(um, {v: ONE}, alg))
    return out


class SpanTester:
    """Membership in the span of given tensors (keys are arbitrary hashables)."""

    def __init__(self, vectors):
        self.index = {}
        self.elim = Eliminator()
        for v in vectors:
            self.elim.add(self._flat(v, grow=True))

    def _flat(self, t, grow=False):
        out = {}
        for k, c in t.items():
            i = self.index.get(k)
            if i is None:
                if not grow:
                    return None
                i = self.index[k] = len(self.index)
            out[i] = c
        return out

    def contains(self, t):
        t = clean(t)
        if not t:
            return True
        f = self._flat(t)
        if f is None:
            return False
        return self.elim.contains(f)

    @property
    def rank(self):
        return self.elim.rank


def horizontal_membership(w, alg, m_elems, left_keys, right_keys=None):
    """Decide w in span{u (dm) v} for the supplied truncation (True/False)."""
    if right_keys is None:
        right_keys = list(alg.unit())
    return SpanTester(horizontal_span(alg, m_elems, left_keys, right_keys)).contains(w)


# ----------------------------------------------------------------------
# covariant derivatives on tensorial forms

def covariant_left(phi_v, dphi_v, omega_terms, alg):
    """Dbar phi(v) = d phi(v) + sum omega(v1) phi(v_inf).

    ``omega_terms`` is a list of (omega-form, phi-value-form) pairs coming
    from the left coaction of v.
    """
    out = dict(dphi_v)
    for om, ph in omega_terms:
        add_into(out, mul(om, ph, alg))
    return out


def covariant_right(dphi_v, phi_omega_terms, n, alg):
    """D phi(v) = d phi(v) + (-1)^(n+1) sum phi(v0) omega(v1)."""
    sign = ONE if (n + 1) % 2 == 0 else -ONE
    out = dict(dphi_v)
    for ph, om in phi_omega_terms:
        add_into(out, mul(ph, om, alg), sign)
    return out
