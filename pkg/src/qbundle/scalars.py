"""Exact scalars: the field Q(zeta_n)(q, s).

A `Scalar` is stored as ``num / den`` where

* ``num`` lives in Q[z, q, s] and is reduced modulo the cyclotomic polynomial
  Phi_n(z), so every z-degree is below phi(n);
* ``den`` lives in Q[q, s] (no z), is monic in deglex order and coprime to
  ``num``.

Because Phi_n is irreducible, the fraction with z-free denominator is unique,
which makes equality a comparison of stored polynomials.  Inversion clears z
from a denominator by multiplying with the Galois conjugates z -> z^j.

Scalars with different cyclotomic orders are compared and combined inside the
order given by the lcm.  Elements that do not involve z are kept at order 1,
so that e.g. ``Scalar(2)`` is the same object whatever field it came from.

The grammar accepted by :func:`parse_scalar` (EBNF)::

    expr     = term { ("+" | "-") term } ;
    term     = unary { ("*" | "/") unary } ;
    unary    = ("+" | "-") unary | power ;
    power    = atom [ ( "^" | "**" ) exponent ] ;
    exponent = [ "+" | "-" ] INT | "(" [ "+" | "-" ] INT ")" ;
    atom     = INT | "q" | "s" | "i" | "zeta" "(" INT ")" | "(" expr ")" ;
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
import random
import re

import flint

_CTX = flint.fmpq_mpoly_ctx.get(("z", "q", "s"), "deglex")
_Z, _Q, _S = _CTX.gens()
_ONE_POLY = _CTX.constant(1)
_ZERO_POLY = _CTX.constant(0)


class ScalarError(ValueError):
    """Base class for malformed scalar input."""


class ScalarSyntaxError(ScalarError):
    def __init__(self, message, pos, text=""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class ScalarOrderError(ScalarError):
    """Raised when ``i`` and ``zeta(n)`` are combined inconsistently."""


class ScalarZeroDivision(ZeroDivisionError):
    def __init__(self, message="division by zero", pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int):
    """Phi_n as a polynomial in z."""
    if n < 1:
        raise ScalarOrderError(f"cyclotomic order must be positive, got {n}")
    coeffs = flint.fmpz_poly.cyclotomic(n).coeffs()
    return sum((int(c) * _Z ** k for k, c in enumerate(coeffs) if c), _ZERO_POLY)


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def _lcm(a, b):
    return a * b // gcd(a, b)


def _poly_key(p):
    return tuple(sorted((tuple(m), (int(c.p), int(c.q))) for m, c in zip(p.monoms(), p.coeffs())))


def _has_z(p):
    return p.degrees()[0] > 0


def _coerce_const(value):
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        return flint.fmpq(value)
    if isinstance(value, Fraction):
        return flint.fmpq(value.numerator, value.denominator)
    if isinstance(value, flint.fmpq):
        return value
    raise TypeError(f"cannot convert {type(value).__name__} to a scalar")


class Scalar:
    """Element of Q(zeta_order)(q, s) in canonical form."""

    __slots__ = ("order", "num", "den", "_hash")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self.order, self.num, self.den = value.order, value.num, value.den
        elif isinstance(value, str):
            other = parse_scalar(value)
            self.order, self.num, self.den = other.order, other.num, other.den
        else:
            self.order = 1
            self.num = _CTX.constant(_coerce_const(value))
            self.den = _ONE_POLY
        self._hash = None

    # -- construction -------------------------------------------------
    @classmethod
    def _make(cls, order, num, den):
        obj = object.__new__(cls)
        obj.order, obj.num, obj.den, obj._hash = order, num, den, None
        return obj

    @classmethod
    def from_polys(cls, num, den=None, order=1):
        """Normalise ``num/den`` (flint polynomials) into canonical form."""
        if den is None:
            den = _ONE_POLY
        if den.is_zero():
            raise ScalarZeroDivision()
        if order > 1 and _has_z(den):
            # clear z from the denominator via its norm
            inv = cls.from_polys(den, None, order).inverse()
            return cls.from_polys(num, None, order) * inv
        if order > 1:
            num = num % cyclotomic_poly(order)
        if num.is_zero():
            return cls._make(1, _ZERO_POLY, _ONE_POLY)
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        if order > 1 and not _has_z(num):
            order = 1
        return cls._make(order, num, den)

    @classmethod
    def var(cls, name):
        return cls._make(1, {"q": _Q, "s": _S}[name], _ONE_POLY)

    @classmethod
    def zeta(cls, n):
        if n < 1:
            raise ScalarOrderError(f"cyclotomic order must be positive, got {n}")
        return cls.from_polys(_Z, None, n)

    # -- field embedding -----------------------------------------------
    def embed(self, order):
        """Same element viewed in Q(zeta_order); ``order`` must be a multiple."""
        if order == self.order:
            return self.num
        if order % self.order:
            raise ScalarOrderError(f"cannot embed zeta({self.order}) into zeta({order})")
        k = order // self.order
        num = self.num.compose(_Z ** k, _Q, _S) if _has_z(self.num) else self.num
        return num % cyclotomic_poly(order) if order > 1 else num

    def _common(self, other):
        if self.order == other.order:
            return self.order, self.num, other.num
        n = _lcm(self.order, other.order)
        return n, self.embed(n), other.embed(n)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return other
        if self.order == 1 == other.order and self.den.is_one() and other.den.is_one():
            c = self.num + other.num
            return Scalar._make(1, c, _ONE_POLY) if not c.is_zero() else ZERO
        n, a, b = self._common(other)
        if self.den == other.den:
            return Scalar.from_polys(a + b, self.den, n)
        return Scalar.from_polys(a * other.den + b * self.den, self.den * other.den, n)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._make(self.order, -self.num, self.den)

    def __sub__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return ZERO
        if self.order == 1 == other.order and self.den.is_one() and other.den.is_one():
            return Scalar._make(1, self.num * other.num, _ONE_POLY)
        n, a, b = self._common(other)
        return Scalar.from_polys(a * b, self.den * other.den, n)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ScalarZeroDivision()
        if not _has_z(self.num):
            return Scalar.from_polys(self.den, self.num, 1)
        n = self.order
        phi = cyclotomic_poly(n)
        others = _ONE_POLY
        for j in range(2, n):
            if gcd(j, n) == 1:
                others = (others * self.num.compose(_Z ** j, _Q, _S)) % phi
        norm = (self.num * others) % phi
        assert not _has_z(norm)
        return Scalar.from_polys(self.den * others, norm, n)

    def __truediv__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _as_scalar(other) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- predicates -----------------------------------------------------
    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_rational(self):
        """True for elements of Q (no z, q or s)."""
        return self.num.is_constant() and self.den.is_constant()

    def is_constant(self):
        """True for elements of Q(zeta_n), i.e. free of q and s."""
        d = self.num.degrees()
        return d[1] <= 0 and d[2] <= 0 and self.den.is_constant()

    def __eq__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return False
        if self.den != other.den:
            return False
        if self.order == other.order:
            return self.num == other.num
        n, a, b = self._common(other)
        return a == b

    def __hash__(self):
        if self._hash is None:
            # elements with z are never equal to z-free ones, so hashing the
            # denominator alone is consistent across embeddings
            if _has_z(self.num):
                self._hash = hash(("cyc", _poly_key(self.den)))
            else:
                self._hash = hash((_poly_key(self.num), _poly_key(self.den)))
        return self._hash

    # -- conversion -----------------------------------------------------
    def to_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        if self.num.is_zero():
            return Fraction(0)
        c = self.num.leading_coefficient()
        return Fraction(int(c.p), int(c.q))

    def specialize(self, q=None, s=None):
        """Substitute rational values for q and/or s."""
        sub = {}
        if q is not None:
            sub["q"] = _coerce_const(Fraction(q) if not isinstance(q, (int, Fraction)) else q)
        if s is not None:
            sub["s"] = _coerce_const(Fraction(s) if not isinstance(s, (int, Fraction)) else s)
        if not sub:
            return self
        den = self.den.subs(sub)
        if den.is_zero():
            raise ScalarZeroDivision("denominator vanishes under specialisation")
        return Scalar.from_polys(self.num.subs(sub), den, self.order)

    def eval_mod(self, p, q0, s0):
        """Value in Z/p at q=q0, s=s0 (order-1 scalars only)."""
        if self.order != 1:
            raise ValueError("modular evaluation needs a z-free scalar")

        def ev(poly):
            acc = 0
            for (ez, eq, es), c in zip(poly.monoms(), poly.coeffs()):
                acc += int(c.p) * pow(int(c.q), -1, p) * pow(q0, eq, p) * pow(s0, es, p)
            return acc % p

        d = ev(self.den)
        if d == 0:
            raise ScalarZeroDivision("denominator vanishes modulo p")
        return ev(self.num) * pow(d, -1, p) % p

    def conjugate(self, j):
        """Galois conjugate z -> z^j (j coprime to the order)."""
        if self.order == 1:
            return self
        return Scalar.from_polys(self.num.compose(_Z ** j, _Q, _S), self.den, self.order)

    # -- printing -------------------------------------------------------
    def _zeta_name(self):
        return "i" if self.order == 4 else f"zeta({self.order})"

    def _poly_str(self, poly):
        parts = []
        for (ez, eq, es), c in sorted(zip(poly.monoms(), poly.coeffs()), key=lambda t: tuple(-x for x in t[0])):
            frac = Fraction(int(c.p), int(c.q))
            sign = "-" if frac < 0 else "+"
            frac = abs(frac)
            factors = []
            for name, e in ((self._zeta_name(), ez), ("q", eq), ("s", es)):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if frac != 1 or not factors:
                factors.insert(0, str(frac))
            parts.append((sign, "*".join(factors)))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        if self.is_zero():
            return "0"
        num = self._poly_str(self.num)
        if self.den.is_one():
            return num
        den = self._poly_str(self.den)
        if len(self.num.monoms()) > 1 or num.startswith("-") or "/" in num:
            num = f"({num})"
        if len(self.den.monoms()) > 1 or "*" in den or "/" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"Scalar('{self}')"


def _as_scalar(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction, flint.fmpq)):
        return Scalar(x)
    return NotImplemented


def scalar(x) -> Scalar:
    """Coerce int, Fraction, literal string or Scalar to a Scalar."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return Scalar(x)


ZERO = Scalar._make(1, _ZERO_POLY, _ONE_POLY)
ONE = Scalar._make(1, _ONE_POLY, _ONE_POLY)
Q_VAR = Scalar.var("q")
S_VAR = Scalar.var("s")
I_UNIT = Scalar.zeta(4)


def random_scalar(rng: random.Random, order=1, symbolic=True, max_deg=2):
    """Random element with small coefficients; used by property tests and rank prechecks."""
    def rpoly(with_z):
        p = _ZERO_POLY
        for _ in range(rng.randint(1, 3)):
            ez = rng.randint(0, totient(order) - 1) if with_z and order > 1 else 0
            eq = rng.randint(0, max_deg) if symbolic else 0
            es = rng.randint(0, max_deg) if symbolic else 0
            p += rng.randint(-5, 5) * _Z ** ez * _Q ** eq * _S ** es
        return p

    den = rpoly(False)
    while den.is_zero():
        den = rpoly(False)
    return Scalar.from_polys(rpoly(True), den, order)


# ----------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+)|(zeta|q|s|i)|(\*\*|[-+*/^(),]))")


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ScalarSyntaxError(f"unexpected character {text[start]!r}", start, text)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("int", m.group(1), start))
        elif m.group(2):
            out.append(("name", m.group(2), start))
        else:
            out.append(("op", "^" if m.group(3) == "**" else m.group(3), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.order = None  # cyclotomic order seen so far

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ScalarSyntaxError(f"expected {value!r}, got {got}", tok[2], self.text)
        return tok

    def parse(self):
        val = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ScalarSyntaxError(f"unexpected token {tok[1]!r}", tok[2], self.text)
        return val

    def expr(self):
        val = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                val = val * rhs
            else:
                if rhs.is_zero():
                    raise ScalarZeroDivision(pos=pos)
                val = val / rhs
        return val

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            val = self.unary()
            return -val if tok[1] == "-" else val
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            pos = self.take()[2]
            k = self.exponent()
            if k < 0 and base.is_zero():
                raise ScalarZeroDivision(pos=pos)
            base = base ** k
        return base

    def exponent(self):
        paren = False
        if self.peek()[1] == "(":
            self.take()
            paren = True
        sign = 1
        if self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        tok = self.take()
        if tok[0] != "int":
            raise ScalarSyntaxError("exponent must be an integer", tok[2], self.text)
        if paren:
            self.expect(")")
        return sign * int(tok[1])

    def _note_order(self, n, pos):
        if self.order is not None and self.order != n:
            raise ScalarOrderError(
                f"inconsistent cyclotomic orders {self.order} and {n} at position {pos}")
        self.order = n

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            return Scalar(int(val))
        if kind == "name":
            if val in ("q", "s"):
                return Scalar.var(val)
            if val == "i":
                self._note_order(4, pos)
                return I_UNIT
            self.expect("(")
            ntok = self.take()
            if ntok[0] != "int" or int(ntok[1]) < 1:
                raise ScalarSyntaxError("zeta needs a positive integer order", ntok[2], self.text)
            self.expect(")")
            n = int(ntok[1])
            self._note_order(n, pos)
            return Scalar.zeta(n)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        got = "end of input" if kind == "end" else repr(val)
        raise ScalarSyntaxError(f"unexpected {got}", pos, self.text)


def parse_scalar(text: str) -> Scalar:
    """Parse a scalar literal; errors carry the offending position."""
    if not isinstance(text, str):
        raise TypeError("scalar literal must be a string")
    return _Parser(text).parse()


# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CycloScalar:
    """Element of Q(zeta_n) stored as coefficients on 1, z, ..., z^(phi(n)-1)."""

    order: int
    coeffs: tuple

    @classmethod
    def from_scalar(cls, x: Scalar):
        if not x.is_constant():
            raise ValueError(f"{x} depends on q or s")
        n = x.order
        coeffs = [Fraction(0)] * totient(n)
        lc = x.den.leading_coefficient()
        for (ez, _, _), c in zip(x.num.monoms(), x.num.coeffs()):
            coeffs[ez] += Fraction(int(c.p), int(c.q)) / Fraction(int(lc.p), int(lc.q))
        return cls(n, tuple(coeffs))

    def to_scalar(self) -> Scalar:
        num = sum((flint.fmpq(c.numerator, c.denominator) * _Z ** k
                   for k, c in enumerate(self.coeffs) if c), _ZERO_POLY)
        return Scalar.from_polys(num, None, self.order)

    def _lift(self, other, op):
        if isinstance(other, CycloScalar):
            other = other.to_scalar()
        return CycloScalar.from_scalar(op(self.to_scalar(), other))

    def __add__(self, other):
        return self._lift(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._lift(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._lift(other, lambda a, b: a * b)

    def __truediv__(self, other):
        return self._lift(other, lambda a, b: a / b)

    def __neg__(self):
        return CycloScalar(self.order, tuple(-c for c in self.coeffs))

    def __eq__(self, other):
        if isinstance(other, CycloScalar):
            return self.to_scalar() == other.to_scalar()
        return self.to_scalar() == other

    def __hash__(self):
        return hash(self.to_scalar())

    def __str__(self):
        return str(self.to_scalar())
