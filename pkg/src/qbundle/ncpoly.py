"""Noncommutative polynomials modulo a rewriting system.

A `Presentation` is a list of generators with degrees and a set of rewrite
rules ``lhs -> rhs`` where ``lhs`` is a word and ``rhs`` a combination of words
that are strictly smaller in graded-lex order (generator order = list order).
Words are tuples of generator indices.  Normal forms are computed left to
right and memoised per presentation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import itertools
import threading

from .scalars import Scalar, ONE, ZERO, scalar, parse_scalar, Q_VAR
from .tensor import Tensor, AlgebraOps, acc, add_into


class UnknownGenerator(KeyError):
    pass


class RewriteError(ValueError):
    pass


class Presentation(AlgebraOps):
    """Generators, degrees and oriented rewrite rules."""

    def __init__(self, generators, rules, degrees=None, name=""):
        self.name = name
        self.generators = tuple(generators)
        self.degrees = tuple(degrees) if degrees is not None else (1,) * len(self.generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        self._index = {g: i for i, g in enumerate(self.generators)}
        self.rules = {}
        for lhs, rhs in rules.items():
            lhs = self.word(lhs)
            rhs = {self.word(w): scalar(c) for w, c in rhs.items() if scalar(c)}
            for w in rhs:
                if not self.word_less(w, lhs):
                    raise RewriteError(f"rule {self.show_word(lhs)} -> {self.show_word(w)} does not decrease the word order")
            self.rules[lhs] = rhs
        # rules grouped by last letter for suffix matching
        self._by_last = {}
        for lhs in self.rules:
            self._by_last.setdefault(lhs[-1], []).append(lhs)
        self._cache = {}
        self._lock = threading.Lock()
        self.hopf = None

    # -- words -------------------------------------------------------
    def word(self, w):
        """Coerce a word given as index tuple, symbol list or single-letter string."""
        if isinstance(w, str):
            if w == "":
                return ()
            if w in self._index:
                return (self._index[w],)
            w = list(w)
        out = []
        for x in w:
            if isinstance(x, int):
                if not 0 <= x < len(self.generators):
                    raise UnknownGenerator(x)
                out.append(x)
            else:
                if x not in self._index:
                    raise UnknownGenerator(x)
                out.append(self._index[x])
        return tuple(out)

    def weight(self, w):
        return sum(self.degrees[i] for i in w)

    def word_key(self, w):
        return (self.weight(w), len(w), w)

    def word_less(self, a, b):
        return self.word_key(a) < self.word_key(b)

    def show_word(self, w):
        if not w:
            return "1"
        return "*".join(self.generators[i] for i in w)

    # -- normal form -------------------------------------------------
    def _reduce_tail(self, v):
        """Normal form of v, where v[:-1] is already irreducible."""
        for lhs in self._by_last.get(v[-1], ()):
            n = len(lhs)
            if len(v) >= n and v[-n:] == lhs:
                prefix = v[:-n]
                out = {}
                for r, c in self.rules[lhs].items():
                    add_into(out, self._nf_word(prefix + r), c)
                return out
        return {v: ONE}

    def _nf_word(self, w):
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        if len(w) <= 1:
            res = self._reduce_tail(w) if w else {(): ONE}
        else:
            head = self._nf_word(w[:-1])
            x = w[-1]
            res = {}
            for u, c in head.items():
                part = self._reduce_tail(u + (x,)) if u == w[:-1] else self._nf_word(u + (x,))
                add_into(res, part, c)
        with self._lock:
            self._cache[w] = res
        return res

    def normal_form(self, raw):
        """Reduce a formal combination {word: coeff} to an NCPoly."""
        out = {}
        for w, c in raw.items():
            c = scalar(c)
            if c:
                add_into(out, self._nf_word(self.word(w)), c)
        return NCPoly(self, out, _trusted=True)

    def is_irreducible(self, w):
        for lhs in self.rules:
            n = len(lhs)
            for i in range(len(w) - n + 1):
                if w[i:i + n] == lhs:
                    return False
        return True

    # -- AlgebraOps ----------------------------------------------------
    def unit(self):
        return {(): ONE}

    def mul_keys(self, a, b):
        return self._nf_word(a + b)

    # -- constructors ------------------------------------------------
    def gen(self, name):
        return NCPoly(self, {self.word([name]): ONE}, _trusted=True)

    def gens(self):
        return [NCPoly(self, {(i,): ONE}, _trusted=True) for i in range(len(self.generators))]

    def one(self):
        return NCPoly(self, {(): ONE}, _trusted=True)

    def zero(self):
        return NCPoly(self, {}, _trusted=True)

    def const(self, c):
        return self.one() * scalar(c)

    def basis(self, max_degree, min_degree=0):
        """Irreducible words of weighted degree in [min_degree, max_degree]."""
        out = []

        def grow(w, deg):
            if deg >= min_degree:
                out.append(w)
            for i, d in enumerate(self.degrees):
                if deg + d <= max_degree:
                    v = w + (i,)
                    if self._suffix_irreducible(v):
                        grow(v, deg + d)

        grow((), 0)
        return sorted(out, key=self.word_key)

    def _suffix_irreducible(self, v):
        for lhs in self._by_last.get(v[-1], ()):
            n = len(lhs)
            if len(v) >= n and v[-n:] == lhs:
                return False
        return True

    # -- serialisation -----------------------------------------------
    def to_json(self):
        rules = []
        for lhs, rhs in sorted(self.rules.items(), key=lambda t: self.word_key(t[0])):
            rules.append({
                "lhs": [self.generators[i] for i in lhs],
                "rhs": [{"word": [self.generators[i] for i in w], "coeff": str(c)}
                        for w, c in sorted(rhs.items(), key=lambda t: self.word_key(t[0]))],
            })
        return {"generators": list(self.generators), "degrees": list(self.degrees), "rules": rules}

    @classmethod
    def from_json(cls, data, name=""):
        gens = data["generators"]
        rules = {}
        for r in data["rules"]:
            rhs = {}
            for t in r["rhs"]:
                rhs[tuple(t["word"])] = parse_scalar(t["coeff"])
            rules[tuple(r["lhs"])] = rhs
        return cls(gens, rules, data.get("degrees"), name=name)

    def __repr__(self):
        return f"Presentation({self.name or ','.join(self.generators)}, {len(self.rules)} rules)"


class NCPoly:
    """Element of a presented algebra, always in normal form."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres, terms=None, _trusted=False):
        self.pres = pres
        if _trusted:
            self.terms = {w: c for w, c in (terms or {}).items() if c}
        else:
            self.terms = pres.normal_form(terms or {}).terms

    def _coerce(self, other):
        if isinstance(other, NCPoly):
            return other
        return self.pres.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        return NCPoly(self.pres, add_into(dict(self.terms), other.terms), _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.pres, {w: -c for w, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return NCPoly(self.pres, self.pres.mul(self.terms, other.terms), _trusted=True)
        c = scalar(other)
        if not c:
            return self.pres.zero()
        return NCPoly(self.pres, {w: v * c for w, v in self.terms.items()}, _trusted=True)

    def __rmul__(self, other):
        c = scalar(other)
        if not c:
            return self.pres.zero()
        return NCPoly(self.pres, {w: c * v for w, v in self.terms.items()}, _trusted=True)

    def __truediv__(self, other):
        return self * (ONE / scalar(other))

    def __pow__(self, k):
        out = self.pres.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return (self - other).is_zero()
        return (self - self.pres.const(other)).is_zero()

    __hash__ = None

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        return max((self.pres.weight(w) for w in self.terms), default=-1)

    def coeff(self, w):
        return self.terms.get(self.pres.word(w), ZERO)

    def specialize(self, pres=None, q=None, s=None):
        """Substitute rational values into the coefficients (optionally moving to another presentation)."""
        target = pres or self.pres
        raw = {w: c.specialize(q=q, s=s) for w, c in self.terms.items()}
        return target.normal_form(raw)

    def map_coeffs(self, f):
        return NCPoly(self.pres, {w: f(c) for w, c in self.terms.items()}, _trusted=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=self.pres.word_key, reverse=True):
            c = self.terms[w]
            cs = str(c)
            if not w:
                parts.append(cs)
            elif c == ONE:
                parts.append(self.pres.show_word(w))
            elif c == -ONE:
                parts.append("-" + self.pres.show_word(w))
            else:
                parts.append(f"({cs})*{self.pres.show_word(w)}")
        return " + ".join(parts)

    __repr__ = __str__


# ----------------------------------------------------------------------
# confluence

@dataclass
class CriticalPair:
    word: tuple
    left: NCPoly
    right: NCPoly

    @property
    def resolved(self):
        return self.left == self.right


@dataclass
class ConfluenceReport:
    max_deg: int
    pairs: list = field(default_factory=list)

    @property
    def passed(self):
        return all(p.resolved for p in self.pairs)

    @property
    def unresolved(self):
        return [p for p in self.pairs if not p.resolved]


def _rewrite_at(pres, word, pos, lhs):
    out = {}
    for r, c in pres.rules[lhs].items():
        acc(out, word[:pos] + r + word[pos + len(lhs):], c)
    return pres.normal_form(out)


def check_confluence(pres: Presentation, max_deg: int) -> ConfluenceReport:
    """Enumerate overlap and inclusion ambiguities of the rule heads up to ``max_deg``."""
    rep = ConfluenceReport(max_deg)
    heads = sorted(pres.rules, key=pres.word_key)
    seen = set()
    for l1, l2 in itertools.product(heads, repeat=2):
        # overlaps: suffix of l1 = prefix of l2
        for o in range(1, min(len(l1), len(l2))):
            if l1[-o:] != l2[:o]:
                continue
            w = l1 + l2[o:]
            if pres.weight(w) > max_deg or (w, l1, l2) in seen:
                continue
            seen.add((w, l1, l2))
            rep.pairs.append(CriticalPair(w, _rewrite_at(pres, w, 0, l1), _rewrite_at(pres, w, len(l1) - o, l2)))
        # inclusions: l2 strictly inside l1
        if l1 != l2 and len(l2) < len(l1):
            for i in range(len(l1) - len(l2) + 1):
                if l1[i:i + len(l2)] == l2 and pres.weight(l1) <= max_deg:
                    rep.pairs.append(CriticalPair(l1, _rewrite_at(pres, l1, 0, l1), _rewrite_at(pres, l1, i, l2)))
    return rep


def pbw_count(pres: Presentation, d: int) -> int:
    return len(pres.basis(d, d))


# ----------------------------------------------------------------------
# Hopf structure

class HopfData:
    """Coproduct, counit, antipode and its inverse given on generators."""

    def __init__(self, pres, coproduct, counit, antipode, antipode_inverse=None):
        self.pres = pres
        self.delta_gen = {pres.word([g])[0]: v for g, v in coproduct.items()}
        self.eps_gen = {pres.word([g])[0]: scalar(v) for g, v in counit.items()}
        self.s_gen = {pres.word([g])[0]: v for g, v in antipode.items()}
        self.sinv_gen = {pres.word([g])[0]: v for g, v in (antipode_inverse or {}).items()}
        self._delta_cache = {}
        self._s_cache = {}
        self._sinv_cache = {}

    # word-level helpers, memoised
    def _delta_word(self, w):
        hit = self._delta_cache.get(w)
        if hit is not None:
            return hit
        if not w:
            res = {((), ()): ONE}
        else:
            head = self._delta_word(w[:-1])
            last = self.delta_gen[w[-1]]
            res = {}
            for (a, b), c in head.items():
                for (x, y), d in last.items():
                    for u, cu in self.pres.mul_keys(a, x).items():
                        for v, cv in self.pres.mul_keys(b, y).items():
                            acc(res, (u, v), c * d * cu * cv)
        self._delta_cache[w] = res
        return res

    def _anti_word(self, w, table, cache):
        hit = cache.get(w)
        if hit is not None:
            return hit
        if not w:
            res = {(): ONE}
        else:
            # S(w x) = S(x) S(w)
            res = self.pres.mul(table[w[-1]].terms, self._anti_word(w[:-1], table, cache))
        cache[w] = res
        return res

    def coproduct(self, p: NCPoly) -> Tensor:
        out = {}
        for w, c in p.terms.items():
            add_into(out, self._delta_word(w), c)
        return Tensor(out)

    def counit(self, p: NCPoly) -> Scalar:
        total = ZERO
        for w, c in p.terms.items():
            v = c
            for i in w:
                v = v * self.eps_gen[i]
                if not v:
                    break
            total = total + v
        return total

    def counit_word(self, w):
        v = ONE
        for i in w:
            v = v * self.eps_gen[i]
        return v

    def antipode(self, p: NCPoly) -> NCPoly:
        out = {}
        for w, c in p.terms.items():
            add_into(out, self._anti_word(w, self.s_gen, self._s_cache), c)
        return NCPoly(self.pres, out, _trusted=True)

    def antipode_inverse(self, p: NCPoly) -> NCPoly:
        if not self.sinv_gen:
            raise ValueError("no inverse antipode supplied")
        out = {}
        for w, c in p.terms.items():
            add_into(out, self._anti_word(w, self.sinv_gen, self._sinv_cache), c)
        return NCPoly(self.pres, out, _trusted=True)

    def antipode_word(self, w):
        return self._anti_word(w, self.s_gen, self._s_cache)


def _tensor_mul(pres, t):
    """m: P (x) P -> P."""
    out = {}
    for (a, b), c in t.items():
        add_into(out, pres.mul_keys(a, b), c)
    return NCPoly(pres, out, _trusted=True)


def check_hopf_axioms(pres: Presentation):
    """Exact Hopf axioms on generators plus compatibility of the maps with every rule.

    Returns a list of (name, passed, witness) triples.
    """
    H = pres.hopf
    if H is None:
        raise ValueError("presentation carries no Hopf data")
    results = []
    one = pres.one()
    for i, g in enumerate(pres.generators):
        x = pres.gens()[i]
        dx = H.coproduct(x)
        # coassociativity
        left = dx.map_leg(0, lambda w: {k: v for k, v in H._delta_word(w).items()})
        right = dx.map_leg(1, lambda w: {k: v for k, v in H._delta_word(w).items()})
        results.append((f"coassociative[{g}]", left == right, g))
        # counit
        l = dx.contract(0, H.counit_word).terms
        r = dx.contract(1, H.counit_word).terms
        ok = Tensor(l) == Tensor({(w,): c for w, c in x.terms.items()}) and Tensor(r) == Tensor({(w,): c for w, c in x.terms.items()})
        results.append((f"counit[{g}]", ok, g))
        # antipode both sides
        sl = _tensor_mul(pres, dx.map_leg(0, lambda w: {(k,): v for k, v in H.antipode_word(w).items()}).terms)
        sr = _tensor_mul(pres, dx.map_leg(1, lambda w: {(k,): v for k, v in H.antipode_word(w).items()}).terms)
        eps = one * H.counit(x)
        results.append((f"antipode_left[{g}]", sl == eps, g))
        results.append((f"antipode_right[{g}]", sr == eps, g))
        if H.sinv_gen:
            results.append((f"antipode_inverse[{g}]",
                            H.antipode(H.antipode_inverse(x)) == x and H.antipode_inverse(H.antipode(x)) == x, g))
    # every map respects every relation
    for lhs, rhs in pres.rules.items():
        name = pres.show_word(lhs)
        diff_delta = Tensor(_raw_delta_word(H, lhs)) - _raw_delta(H, rhs)
        results.append((f"coproduct_respects[{name}]", diff_delta.is_zero(), name))
        e_l = H.counit_word(lhs)
        e_r = sum((c * H.counit_word(w) for w, c in rhs.items()), ZERO)
        results.append((f"counit_respects[{name}]", e_l == e_r, name))
        s_l = _raw_anti(H, lhs)
        s_r = {}
        for w, c in rhs.items():
            add_into(s_r, _raw_anti(H, w), c)
        results.append((f"antipode_respects[{name}]",
                        NCPoly(pres, s_l, _trusted=True) == NCPoly(pres, s_r, _trusted=True), name))
    return results


def _raw_delta_word(H, w):
    """Coproduct of a possibly reducible word, multiplying generator coproducts letter by letter."""
    res = {((), ()): ONE}
    for x in w:
        nxt = {}
        for (a, b), c in res.items():
            for (u, v), d in H.delta_gen[x].items():
                for a2, c1 in H.pres.mul_keys(a, u).items():
                    for b2, c2 in H.pres.mul_keys(b, v).items():
                        acc(nxt, (a2, b2), c * d * c1 * c2)
        res = nxt
    return res


def _raw_delta(H, rhs):
    out = {}
    for w, c in rhs.items():
        add_into(out, _raw_delta_word(H, w), c)
    return Tensor(out)


def _raw_anti(H, w):
    res = {(): ONE}
    for x in w:
        res = H.pres.mul(H.s_gen[x].terms, res)
    return res


# ----------------------------------------------------------------------
# presets

def suq2(q=None, name="suq2"):
    """Quantum SU(2) with generators ordered beta < gamma < alpha < delta.

    Normal words are beta^b gamma^c alpha^a and beta^b gamma^c delta^e.
    """
    q = Q_VAR if q is None else scalar(q)
    qi = ONE / q
    b, g, a, d = "beta", "gamma", "alpha", "delta"
    rules = {
        (g, b): {(b, g): ONE},
        (a, b): {(b, a): q},
        (a, g): {(g, a): q},
        (d, b): {(b, d): qi},
        (d, g): {(g, d): qi},
        (a, d): {(): ONE, (b, g): q},
        (d, a): {(): ONE, (b, g): qi},
    }
    pres = Presentation([b, g, a, d], rules, name=name)
    al, de, be, ga = (pres.gen(x) for x in (a, d, b, g))

    def t(*pairs):
        out = {}
        for x, y in pairs:
            acc(out, (pres.word([x]), pres.word([y])), ONE)
        return out

    coproduct = {
        a: t((a, a), (b, g)),
        b: t((a, b), (b, d)),
        g: t((g, a), (d, g)),
        d: t((g, b), (d, d)),
    }
    counit = {a: 1, d: 1, b: 0, g: 0}
    antipode = {a: de, d: al, b: be * (-qi), g: ga * (-q)}
    antipode_inv = {a: de, d: al, b: be * (-q), g: ga * (-qi)}
    pres.hopf = HopfData(pres, coproduct, counit, antipode, antipode_inv)
    return pres


def group_algebra(n):
    """C Z_n = k[g]/(g^n - 1) with its group Hopf structure."""
    if n < 2:
        raise ValueError("n >= 2 required")
    pres = Presentation(["g"], {("g",) * n: {(): ONE}}, name=f"group_algebra({n})")
    gw = pres.word(["g"])
    pres.hopf = HopfData(pres, {"g": {(gw, gw): ONE}}, {"g": 1}, {"g": pres.gen("g") ** (n - 1)},
                         {"g": pres.gen("g") ** (n - 1)})
    return pres


def quaternions():
    """Real quaternions i, j, k with i^2 = j^2 = k^2 = -1 and ij = k."""
    m = -ONE
    rules = {
        ("i", "i"): {(): m}, ("j", "j"): {(): m}, ("k", "k"): {(): m},
        ("i", "j"): {("k",): ONE}, ("j", "i"): {("k",): m},
        ("j", "k"): {("i",): ONE}, ("k", "j"): {("i",): m},
        ("k", "i"): {("j",): ONE}, ("i", "k"): {("j",): m},
    }
    return Presentation(["i", "j", "k"], rules, name="quaternions")


def zn_times_zn(n, q=None):
    """k Z_n . k Z_n: g^n = h^n = 1 and hg = q gh, q a primitive n-th root of unity."""
    if n < 2:
        raise ValueError("n >= 2 required")
    q = Scalar.zeta(n) if q is None else scalar(q)
    rules = {
        ("h", "g"): {("g", "h"): q},
        ("g",) * n: {(): ONE},
        ("h",) * n: {(): ONE},
    }
    return Presentation(["g", "h"], rules, name=f"zn_times_zn({n})")


PRESETS = {
    "suq2": suq2,
    "group_algebra": group_algebra,
    "quaternions": quaternions,
    "zn_times_zn": zn_times_zn,
}


def preset(name, *args, **kw):
    """(Presentation, HopfData or None) by preset name."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}")
    pres = PRESETS[name](*args, **kw)
    return pres, pres.hopf
