"""Sparse tensors with Scalar coefficients.

Keys are tuples with one entry per tensor leg.  A leg entry is whatever the
underlying space uses as a basis key: a word (tuple of generator indices) for
polynomial algebras, an int for finite spaces.  Algebra and coalgebra
operations are passed in as small adapter objects (see `AlgebraOps`).
"""
from __future__ import annotations

from .scalars import scalar


def acc(d, key, c):
    """d[key] += c, dropping zeros."""
    if not c:
        return
    v = d.get(key)
    if v is None:
        d[key] = c
    else:
        v = v + c
        if v:
            d[key] = v
        else:
            del d[key]


def add_into(d, other, factor=None):
    for k, c in other.items():
        acc(d, k, c if factor is None else c * factor)
    return d


class AlgebraOps:
    """Minimal interface the generic code needs from an algebra.

    Subclasses provide ``unit()`` (dict key -> Scalar) and
    ``mul_keys(k1, k2)`` (dict key -> Scalar).
    """

    def unit(self):
        raise NotImplementedError

    def mul_keys(self, a, b):
        raise NotImplementedError

    def mul(self, x, y):
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                add_into(out, self.mul_keys(a, b), ca * cb)
        return out


class Tensor:
    """Element of V1 (x) ... (x) Vk as a sparse dict of key tuples."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def pure(cls, *keys, coeff=None):
        return cls({tuple(keys): scalar(1) if coeff is None else coeff})

    @classmethod
    def from_legs(cls, *vectors):
        """Tensor product of dict vectors."""
        out = {(): scalar(1)}
        for vec in vectors:
            nxt = {}
            for k, c in out.items():
                for key, d in vec.items():
                    acc(nxt, k + (key,), c * d)
            out = nxt
        return cls(out)

    def items(self):
        return self.terms.items()

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        return Tensor(add_into(dict(self.terms), other.terms))

    def __sub__(self, other):
        return Tensor(add_into(dict(self.terms), other.terms, scalar(-1)))

    def __neg__(self):
        return Tensor({k: -v for k, v in self.terms.items()})

    def scale(self, c):
        c = scalar(c)
        if not c:
            return Tensor()
        return Tensor({k: v * c for k, v in self.terms.items()})

    __rmul__ = lambda self, c: self.scale(c)

    def __eq__(self, other):
        if isinstance(other, Tensor):
            return (self - other).is_zero()
        return NotImplemented

    __hash__ = None

    def tensor(self, other):
        out = {}
        for k, c in self.terms.items():
            for l, d in other.terms.items():
                acc(out, k + l, c * d)
        return Tensor(out)

    def map_leg(self, leg, f, width=1):
        """Replace legs ``leg:leg+width`` by ``f(key_or_keys)``.

        ``f`` returns a dict whose keys are tuples (spliced in as several legs).
        With width 1 the single key is passed, otherwise the tuple of keys.
        """
        out = {}
        for k, c in self.terms.items():
            arg = k[leg] if width == 1 else k[leg:leg + width]
            for nk, d in f(arg).items():
                acc(out, k[:leg] + nk + k[leg + width:], c * d)
        return Tensor(out)

    def mul_legs(self, leg, alg):
        """Multiply legs ``leg`` and ``leg+1`` in the algebra ``alg``."""
        return self.map_leg(leg, lambda ab: {(k,): v for k, v in alg.mul_keys(*ab).items()}, 2)

    def left_mul(self, leg, x, alg):
        return self.map_leg(leg, lambda k: {(m,): v for m, v in alg.mul(x, {k: scalar(1)}).items()})

    def right_mul(self, leg, x, alg):
        return self.map_leg(leg, lambda k: {(m,): v for m, v in alg.mul({k: scalar(1)}, x).items()})

    def apply_linear(self, leg, f):
        """Apply a leg-preserving linear map given on keys (``f(key) -> dict``)."""
        return self.map_leg(leg, lambda k: {(m,): v for m, v in f(k).items()})

    def contract(self, leg, f):
        """Apply a functional to one leg (removing it)."""
        return self.map_leg(leg, lambda k: {(): f(k)} if f(k) else {})

    def split_last(self):
        """Group as {last_key: Tensor of remaining legs}."""
        out = {}
        for k, c in self.terms.items():
            out.setdefault(k[-1], {})[k[:-1]] = c
        return {k: Tensor(v) for k, v in out.items()}

    def __repr__(self):
        if not self.terms:
            return "Tensor(0)"
        return "Tensor(" + " + ".join(f"({c})*{k}" for k, c in list(self.terms.items())[:8]) + (
            " + ..." if len(self.terms) > 8 else "") + ")"
