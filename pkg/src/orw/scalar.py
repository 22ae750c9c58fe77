"""Exact scalars: rationals and sparse multivariate polynomials over Q.

Rationals are plain :class:`fractions.Fraction`.  :class:`Poly` is a
sparse polynomial in named indeterminates (``a``, ``b``, ``lambda``,
``j``, ...) with a canonical term order, so equal polynomials always
compare and print identically.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Union

__all__ = [
    "Fraction",
    "Poly",
    "Scalar",
    "as_fraction",
    "parse_rational",
    "format_rational",
    "poly_arith",
    "poly_substitute",
    "finite_difference",
]

Number = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` into a Fraction; anything else is an error."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    match = _RATIONAL_RE.match(str(text))
    if match is None:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Number) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Poly):
        return x.constant_value()
    raise TypeError(f"cannot interpret {x!r} as a rational")


# A monomial is a tuple of (name, exponent) pairs sorted by name, exponents > 0.
Monomial = tuple


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for name, e in m2:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Poly:
    """Immutable sparse polynomial with Fraction coefficients.

    ``gens`` is the declared indeterminate set.  It grows by union under
    arithmetic and is what :meth:`subs` validates binding names against.
    Equality and hashing only look at the terms.
    """

    __slots__ = ("_terms", "_gens", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None, gens: Iterable[str] = ()):
        clean = {}
        names = set(gens)
        for mono, c in (terms or {}).items():
            if c:
                clean[mono] = Fraction(c)
                names.update(n for n, _ in mono)
        self._terms = clean
        self._gens = frozenset(names)
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, gens: frozenset) -> "Poly":
        p = object.__new__(cls)
        p._terms = terms
        p._gens = gens
        p._hash = None
        return p

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls._raw({((name, 1),): Fraction(1)}, frozenset((name,)))

    @classmethod
    def const(cls, c: Number, gens: Iterable[str] = ()) -> "Poly":
        c = Fraction(c)
        return cls._raw({(): c} if c else {}, frozenset(gens))

    @classmethod
    def coerce(cls, x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Poly")

    # -- inspection ---------------------------------------------------------

    @property
    def gens(self) -> frozenset:
        return self._gens

    @property
    def variables(self) -> frozenset:
        """Indeterminates that actually occur with nonzero coefficient."""
        return frozenset(n for mono in self._terms for n, _ in mono)

    def terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in canonical order: total degree descending, then lex descending."""
        order = sorted(self._gens | self.variables)

        def key(item):
            exps = dict(item[0])
            return (_mono_degree(item[0]), tuple(exps.get(n, 0) for n in order))

        return sorted(self._terms.items(), key=key, reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"polynomial {self} is not constant")
        return self._terms.get((), Fraction(0))

    def degree(self, var: str | None = None) -> int:
        if not self._terms:
            return -1
        if var is None:
            return max(_mono_degree(m) for m in self._terms)
        return max(dict(m).get(var, 0) for m in self._terms)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(sorted(mono)), Fraction(0))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self
            terms = dict(self._terms)
            c = terms.get((), 0) + other
            if c:
                terms[()] = c
            else:
                terms.pop((), None)
            return Poly._raw(terms, self._gens)
        if not isinstance(other, Poly):
            return NotImplemented
        if len(other._terms) > len(self._terms):
            big, small = other, self
        else:
            big, small = self, other
        terms = dict(big._terms)
        for mono, c in small._terms.items():
            s = terms.get(mono, 0) + c
            if s:
                terms[mono] = s
            else:
                del terms[mono]
        return Poly._raw(terms, self._gens | other._gens)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self._terms.items()}, self._gens)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw({}, self._gens)
            return Poly._raw({m: c * other for m, c in self._terms.items()}, self._gens)
        if not isinstance(other, Poly):
            return NotImplemented
        gens = self._gens | other._gens
        if not self._terms or not other._terms:
            return Poly._raw({}, gens)
        terms: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _mono_mul(m1, m2)
                s = terms.get(mono, 0) + c1 * c2
                if s:
                    terms[mono] = s
                else:
                    del terms[mono]
        return Poly._raw(terms, gens)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # Division by known nonzero rationals only; no rational functions.
        if isinstance(other, Poly):
            other = other.constant_value()
        other = Fraction(other)
        if not other:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Poly.const(1, self._gens)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._terms
            return self._terms == {(): Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- substitution -------------------------------------------------------

    def subs(self, bindings: Mapping[str, object], strict: bool = True) -> "Poly":
        """Substitute indeterminates by polynomials or rationals.

        With ``strict`` a binding for a name outside ``gens`` is an error.
        """
        if strict:
            unknown = [n for n in bindings if n not in self._gens]
            if unknown:
                raise KeyError(f"unknown indeterminate(s) {sorted(unknown)} for {self}")
        if not bindings:
            return self
        values = {n: Poly.coerce(v) for n, v in bindings.items()}
        gens = (self._gens - set(values)).union(*(v.gens for v in values.values()))
        powers: dict = {}
        result = Poly._raw({}, gens)
        for mono, c in self._terms.items():
            term = Poly._raw({(): c}, frozenset())
            rest = []
            for name, e in mono:
                if name in values:
                    key = (name, e)
                    if key not in powers:
                        powers[key] = values[name] ** e
                    term = term * powers[key]
                else:
                    rest.append((name, e))
            if rest:
                term = term * Poly._raw({tuple(rest): Fraction(1)}, frozenset())
            result = result + term
        return Poly._raw(result._terms, gens)

    # -- text ---------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.terms():
            factors = [n if e == 1 else f"{n}^{e}" for n, e in mono]
            if not factors:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(format_rational(c) + "*" + "*".join(factors))
        text = parts[0]
        for p in parts[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


Scalar = Union[Fraction, Poly]


def poly_arith(p: Poly, q: Poly, kind: str) -> Poly:
    if kind == "add":
        return p + q
    if kind == "sub":
        return p - q
    if kind == "mul":
        return p * q
    raise ValueError(f"unknown polynomial operation {kind!r}")


def poly_substitute(p: Poly, bindings: Mapping[str, object]) -> Poly:
    return p.subs(bindings, strict=True)


def finite_difference(p: Poly, var: str, m: int) -> Poly:
    """Return sum_{i=0}^{m} (-1)^i C(m, i) p(var + i)."""
    if var not in p.gens:
        raise KeyError(f"{var!r} is not an indeterminate of {p}")
    if m < 0:
        raise ValueError("order must be non-negative")
    x = Poly.var(var)
    total = Poly.const(0, p.gens)
    for i in range(m + 1):
        total = total + p.subs({var: x + i}) * ((-1) ** i * comb(m, i))
    return total
