"""Exact finite-dimensional linear algebra over `Scalar`.

Vectors are sparse dicts ``index -> Scalar``.  A `LinearMap` stores the image
of every domain basis vector (its columns).  Elimination always pivots on the
smallest index with a nonzero entry, so results are deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
import itertools
import random

from .scalars import ONE, ZERO, scalar, parse_scalar
from .tensor import AlgebraOps, acc, add_into
from .report import Report


def vscale(v, c):
    if not c:
        return {}
    return {k: x * c for k, x in v.items()}


def vadd(a, b, c=None):
    return add_into({k: x for k, x in a.items() if x}, b, c)


def vsub(a, b):
    """a - b with zero entries dropped, so an empty result means a == b."""
    return add_into({k: x for k, x in a.items() if x}, b, -ONE)


class Eliminator:
    """Incremental row echelon form with optional combination tracking.

    Each stored row has pivot = smallest index, normalised to 1.  With
    ``track=True`` every row remembers which input vectors produced it, which
    gives kernels and solutions without a second pass.
    """

    def __init__(self, track=False):
        self.track = track
        self.rows = {}  # pivot -> (vector, combo)

    def reduce(self, vec, combo=None):
        vec = {k: v for k, v in vec.items() if v}
        combo = dict(combo) if combo is not None else ({} if self.track else None)
        done = set()
        while True:
            cand = [k for k in vec if k in self.rows and k not in done]
            if not cand:
                break
            p = min(cand)
            done.add(p)
            c = vec.get(p)
            if not c:
                continue
            row, rc = self.rows[p]
            add_into(vec, row, -c)
            if combo is not None and rc:
                add_into(combo, rc, -c)
        return vec, combo

    def add(self, vec, label=None):
        """Insert a vector; returns None if independent, else the dependency combo."""
        combo = {label: ONE} if self.track else None
        r, combo = self.reduce(vec, combo)
        if not r:
            return combo if self.track else {}
        p = min(r)
        inv = ONE / r[p]
        r = vscale(r, inv)
        if combo is not None:
            combo = vscale(combo, inv)
        self.rows[p] = (r, combo)
        return None

    @property
    def rank(self):
        return len(self.rows)

    def contains(self, vec):
        r, _ = self.reduce(vec)
        return not r


def rank(vectors):
    e = Eliminator()
    for v in vectors:
        e.add(v)
    return e.rank


def span_basis(vectors):
    """Echelon basis of the span."""
    e = Eliminator()
    for v in vectors:
        e.add(v)
    return [e.rows[p][0] for p in sorted(e.rows)]


def kernel(columns):
    """Basis of {x : sum_j x_j columns[j] = 0}."""
    e = Eliminator(track=True)
    out = []
    for j, col in enumerate(columns):
        dep = e.add(col, j)
        if dep is not None:
            out.append(dep)
    return out


@dataclass
class Solution:
    feasible: bool
    particular: dict | None
    kernel: list

    @property
    def unique(self):
        return self.feasible and not self.kernel


def solve_columns(columns, b):
    """All x with sum_j x_j columns[j] = b."""
    e = Eliminator(track=True)
    ker = []
    for j, col in enumerate(columns):
        dep = e.add(col, j)
        if dep is not None:
            ker.append(dep)
    r, combo = e.reduce(b, {})
    if r:
        return Solution(False, None, ker)
    # b - sum combo_j col_j ... reduce subtracted combos, so b = -combo . columns
    return Solution(True, vscale(combo, -ONE), ker)


def rank_mod_p(rows, p):
    """Rank over Z/p of integer row dicts."""
    piv = {}
    for row in rows:
        r = {k: v % p for k, v in row.items() if v % p}
        while r:
            k = min(r)
            if k in piv:
                c = r[k]
                for kk, vv in piv[k].items():
                    r[kk] = (r.get(kk, 0) - c * vv) % p
                    if not r[kk]:
                        del r[kk]
            else:
                inv = pow(r[k], -1, p)
                piv[k] = {kk: vv * inv % p for kk, vv in r.items()}
                break
    return len(piv)


# ----------------------------------------------------------------------

class FinSpace:
    def __init__(self, labels):
        self.labels = tuple(str(l) for l in labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique")

    @property
    def dim(self):
        return len(self.labels)

    def index(self, label):
        return self.labels.index(label)

    def __eq__(self, other):
        return isinstance(other, FinSpace) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return f"FinSpace({self.dim})"


def tensor_space(*spaces):
    labels = ["@".join(t) for t in itertools.product(*(s.labels for s in spaces))]
    return FinSpace(labels)


def flat_index(dims, idx):
    out = 0
    for d, i in zip(dims, idx):
        out = out * d + i
    return out


def split_index(dims, k):
    out = []
    for d in reversed(dims):
        out.append(k % d)
        k //= d
    return tuple(reversed(out))


class LinearMap:
    def __init__(self, domain, codomain, columns):
        self.domain, self.codomain = domain, codomain
        self.columns = [{k: v for k, v in col.items() if v} for col in columns]
        if len(self.columns) != domain.dim:
            raise ValueError("column count does not match domain")
        for col in self.columns:
            if any(not 0 <= k < codomain.dim for k in col):
                raise ValueError("column entry outside codomain")

    @classmethod
    def identity(cls, space):
        return cls(space, space, [{i: ONE} for i in range(space.dim)])

    @classmethod
    def from_function(cls, domain, codomain, f):
        return cls(domain, codomain, [f(j) for j in range(domain.dim)])

    def __call__(self, vec):
        out = {}
        for j, c in vec.items():
            add_into(out, self.columns[j], c)
        return out

    def __matmul__(self, other):
        return LinearMap(other.domain, self.codomain, [self(col) for col in other.columns])

    def __add__(self, other):
        return LinearMap(self.domain, self.codomain, [vadd(a, b) for a, b in zip(self.columns, other.columns)])

    def __sub__(self, other):
        return LinearMap(self.domain, self.codomain, [vsub(a, b) for a, b in zip(self.columns, other.columns)])

    def __eq__(self, other):
        return (isinstance(other, LinearMap) and self.domain.dim == other.domain.dim
                and all(not vsub(a, b) for a, b in zip(self.columns, other.columns)))

    __hash__ = None

    def entry(self, i, j):
        return self.columns[j].get(i, ZERO)

    def rank(self):
        return rank(self.columns)

    def kernel(self):
        return kernel(self.columns)

    def image(self):
        return span_basis(self.columns)

    def solve(self, b):
        return solve_columns(self.columns, b)

    def transpose(self):
        cols = [dict() for _ in range(self.codomain.dim)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                cols[i][j] = v
        return LinearMap(self.codomain, self.domain, cols)

    def inverse(self):
        """Inverse map, or None when the (square) map is singular."""
        if self.domain.dim != self.codomain.dim:
            raise ValueError("not square")
        cols = []
        for i in range(self.codomain.dim):
            sol = self.solve({i: ONE})
            if not sol.feasible or sol.kernel:
                return None
            cols.append(sol.particular)
        return LinearMap(self.codomain, self.domain, cols)

    def det(self):
        """Determinant by Gaussian elimination on a dense copy."""
        n = self.domain.dim
        if n != self.codomain.dim:
            raise ValueError("not square")
        rows = [[self.entry(i, j) for j in range(n)] for i in range(n)]
        d = ONE
        for c in range(n):
            p = next((r for r in range(c, n) if rows[r][c]), None)
            if p is None:
                return ZERO
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                d = -d
            d = d * rows[c][c]
            inv = ONE / rows[c][c]
            for r in range(c + 1, n):
                f = rows[r][c] * inv
                if f:
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
        return d

    def tensor(self, other):
        dims_in = (self.domain.dim, other.domain.dim)
        dims_out = (self.codomain.dim, other.codomain.dim)
        cols = []
        for j1, j2 in itertools.product(range(dims_in[0]), range(dims_in[1])):
            col = {}
            for i1, a in self.columns[j1].items():
                for i2, b in other.columns[j2].items():
                    acc(col, flat_index(dims_out, (i1, i2)), a * b)
            cols.append(col)
        return LinearMap(tensor_space(self.domain, other.domain), tensor_space(self.codomain, other.codomain), cols)

    def to_json(self):
        d = {"domain": {"labels": list(self.domain.labels)},
             "codomain": {"labels": list(self.codomain.labels)},
             "matrix": [[i, j, str(v)] for j, col in enumerate(self.columns) for i, v in sorted(col.items())]}
        d["matrix"].sort(key=lambda t: (t[0], t[1]))
        return d

    @classmethod
    def from_json(cls, data):
        if "space" in data:
            dom = cod = FinSpace(data["space"]["labels"])
        else:
            dom, cod = FinSpace(data["domain"]["labels"]), FinSpace(data["codomain"]["labels"])
        cols = [dict() for _ in range(dom.dim)]
        for i, j, v in data["matrix"]:
            acc(cols[j], i, parse_scalar(v))
        return cls(dom, cod, cols)

    def __repr__(self):
        return f"LinearMap({self.domain.dim} -> {self.codomain.dim})"


# ----------------------------------------------------------------------

class FinAlgebra(AlgebraOps):
    """Finite-dimensional algebra from structure constants m[(i, j)] = {k: c}."""

    def __init__(self, space, mult, unit):
        self.space = space
        self.mult = {k: {kk: vv for kk, vv in v.items() if vv} for k, v in mult.items()}
        self._unit = {k: v for k, v in unit.items() if v}

    @property
    def dim(self):
        return self.space.dim

    def unit(self):
        return dict(self._unit)

    def mul_keys(self, i, j):
        return self.mult.get((i, j), {})

    def basis_vector(self, i):
        return {i: ONE}

    def left_mult_map(self, x):
        return LinearMap(self.space, self.space, [self.mul(x, {j: ONE}) for j in range(self.dim)])

    def right_mult_map(self, x):
        return LinearMap(self.space, self.space, [self.mul({j: ONE}, x) for j in range(self.dim)])

    def opposite(self):
        return FinAlgebra(self.space, {(j, i): v for (i, j), v in self.mult.items()}, self._unit)

    def tensor(self, other):
        dims = (self.dim, other.dim)
        mult = {}
        for (i1, j1), m1 in self.mult.items():
            for (i2, j2), m2 in other.mult.items():
                out = {}
                for k1, a in m1.items():
                    for k2, b in m2.items():
                        acc(out, flat_index(dims, (k1, k2)), a * b)
                mult[(flat_index(dims, (i1, i2)), flat_index(dims, (j1, j2)))] = out
        unit = {}
        for k1, a in self._unit.items():
            for k2, b in other._unit.items():
                acc(unit, flat_index(dims, (k1, k2)), a * b)
        return FinAlgebra(tensor_space(self.space, other.space), mult, unit)

    def inverse_of(self, x):
        """Two-sided inverse of x, or None."""
        L = self.left_mult_map(x)
        sol = L.solve(self.unit())
        if not sol.feasible:
            return None
        y = sol.particular
        if vsub(self.mul(y, x), self.unit()) or vsub(self.mul(x, y), self.unit()):
            return None
        return y

    def structure_json(self):
        return [[i, j, k, str(v)] for (i, j), m in sorted(self.mult.items()) for k, v in sorted(m.items())]

    @classmethod
    def from_presentation(cls, pres, max_degree=64):
        words = []
        for d in range(max_degree + 1):
            layer = pres.basis(d, d)
            if not layer and d > 0:
                break
            words.extend(layer)
        index = {w: i for i, w in enumerate(words)}
        mult = {}
        for a, b in itertools.product(words, repeat=2):
            prod = pres.mul_keys(a, b)
            mult[(index[a], index[b])] = {index[w]: c for w, c in prod.items()}
        alg = cls(FinSpace([pres.show_word(w) for w in words]), mult, {index[()]: ONE})
        alg.words = words
        alg.word_index = index
        return alg


def check_algebra(A: FinAlgebra) -> Report:
    rep = Report("algebra axioms")
    n = A.dim
    bad = None
    for i, j, k in itertools.product(range(n), repeat=3):
        left = A.mul(A.mul_keys(i, j), {k: ONE})
        right = A.mul({i: ONE}, A.mul_keys(j, k))
        if vsub(left, right):
            bad = (A.space.labels[i], A.space.labels[j], A.space.labels[k])
            break
    rep.add("associative", bad is None, bad)
    u = A.unit()
    bad = None
    for i in range(n):
        if vsub(A.mul(u, {i: ONE}), {i: ONE}) or vsub(A.mul({i: ONE}, u), {i: ONE}):
            bad = A.space.labels[i]
            break
    rep.add("unit", bad is None, bad)
    return rep


class FinCoalgebra:
    """Finite-dimensional coalgebra: comult[i] = {(j, k): c}, counit[i] = c."""

    def __init__(self, space, comult, counit):
        self.space = space
        self.comult = {i: {k: v for k, v in d.items() if v} for i, d in comult.items()}
        self.counit = {i: scalar(v) for i, v in counit.items()}

    @property
    def dim(self):
        return self.space.dim

    def comult_key(self, i):
        return self.comult.get(i, {})

    def counit_key(self, i):
        return self.counit.get(i, ZERO)

    def delta(self, vec):
        out = {}
        for i, c in vec.items():
            add_into(out, self.comult_key(i), c)
        return out

    def eps(self, vec):
        return sum((c * self.counit_key(i) for i, c in vec.items()), ZERO)

    @classmethod
    def grouplike(cls, labels):
        sp = FinSpace(labels)
        return cls(sp, {i: {(i, i): ONE} for i in range(sp.dim)}, {i: ONE for i in range(sp.dim)})


def check_coalgebra(C: FinCoalgebra) -> Report:
    rep = Report("coalgebra axioms")
    bad = None
    for i in range(C.dim):
        left, right = {}, {}
        for (a, b), c in C.comult_key(i).items():
            for (x, y), d in C.comult_key(a).items():
                acc(left, (x, y, b), c * d)
            for (x, y), d in C.comult_key(b).items():
                acc(right, (a, x, y), c * d)
        if vsub(left, right):
            bad = C.space.labels[i]
            break
    rep.add("coassociative", bad is None, bad)
    bad = None
    for i in range(C.dim):
        l, r = {}, {}
        for (a, b), c in C.comult_key(i).items():
            acc(l, b, c * C.counit_key(a))
            acc(r, a, c * C.counit_key(b))
        if vsub(l, {i: ONE}) or vsub(r, {i: ONE}):
            bad = C.space.labels[i]
            break
    rep.add("counit", bad is None, bad)
    return rep


def _dual_label(l):
    return l[:-1] if l.endswith("*") else l + "*"


def dualize(X, opposite=False):
    """Dual of a finite-dimensional coalgebra (resp. algebra) in the dual basis.

    For a coalgebra C the product is the convolution (f g)(c) = f(c1) g(c2);
    ``opposite=True`` swaps the factors.  For an algebra A the coproduct is
    Delta(f)(a (x) b) = f(ab) (resp. f(ba)).  Applying it twice returns the
    original structure constants.
    """
    if isinstance(X, FinCoalgebra):
        mult = {}
        for k, d in X.comult.items():
            for (i, j), c in d.items():
                key = (j, i) if opposite else (i, j)
                acc(mult.setdefault(key, {}), k, c)
        unit = {i: c for i, c in X.counit.items() if c}
        return FinAlgebra(FinSpace([_dual_label(l) for l in X.space.labels]), mult, unit)
    if isinstance(X, FinAlgebra):
        comult = {}
        for (i, j), m in X.mult.items():
            for k, c in m.items():
                key = (j, i) if opposite else (i, j)
                acc(comult.setdefault(k, {}), key, c)
        counit = dict(X.unit())
        return FinCoalgebra(FinSpace([_dual_label(l) for l in X.space.labels]), comult, counit)
    raise TypeError("dualize expects a FinAlgebra or FinCoalgebra")


def same_structure(X, Y):
    if type(X) is not type(Y) or X.dim != Y.dim:
        return False
    if isinstance(X, FinAlgebra):
        keys = set(X.mult) | set(Y.mult)
        return all(not vsub(X.mult.get(k, {}), Y.mult.get(k, {})) for k in keys) and not vsub(X.unit(), Y.unit())
    keys = set(X.comult) | set(Y.comult)
    return (all(not vsub(X.comult.get(k, {}), Y.comult.get(k, {})) for k in keys)
            and all(X.counit_key(i) == Y.counit_key(i) for i in range(X.dim)))


@dataclass
class Quotient:
    space: FinSpace
    projection: LinearMap
    section: LinearMap
    subspace: list


def quotient(space: FinSpace, subspace_vectors) -> Quotient:
    """V / W with complement spanned by the non-pivot standard basis vectors."""
    e = Eliminator()
    for v in subspace_vectors:
        e.add(v)
    # fully reduce rows so that projection is a single pass
    pivots = sorted(e.rows)
    free = [i for i in range(space.dim) if i not in e.rows]
    pos = {i: k for k, i in enumerate(free)}
    qspace = FinSpace([space.labels[i] for i in free])
    proj_cols = []
    for i in range(space.dim):
        r, _ = e.reduce({i: ONE})
        proj_cols.append({pos[k]: v for k, v in r.items()})
    proj = LinearMap(space, qspace, proj_cols)
    sec = LinearMap(qspace, space, [{i: ONE} for i in free])
    return Quotient(qspace, proj, sec, [e.rows[p][0] for p in pivots])


def random_linear_map(rng: random.Random, m, n, density=0.5, symbolic=False):
    from .scalars import random_scalar
    cols = []
    for _ in range(n):
        col = {}
        for i in range(m):
            if rng.random() < density:
                col[i] = random_scalar(rng, symbolic=symbolic, max_deg=1)
        cols.append(col)
    return LinearMap(FinSpace([f"x{i}" for i in range(n)]), FinSpace([f"y{i}" for i in range(m)]), cols)
