"""Enveloping-algebra elements, PBW straightening and the Omega builders."""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .report import Report
from .scalar import Poly, format_rational, parse_rational
from .superalg import AlgebraPresentation, GeneratorRef, HalfInt, _GEN_RE, _make_generator

__all__ = [
    "EnvElement",
    "env_mul",
    "normal_form",
    "element_equal",
    "build_omega",
    "omega2_rhs",
    "verify_omega2_identity",
    "verify_omega3_combination",
    "parse_element",
    "OMEGA_KINDS",
]

Word = tuple  # tuple[GeneratorRef, ...]


def _is_zero(c) -> bool:
    return not c


def _coef_text(c) -> str:
    if isinstance(c, Poly):
        if c.is_constant():
            return format_rational(c.constant_value())
        return f"({c})"
    return format_rational(c)


class EnvElement:
    """Finite sum of coefficient-weighted words over one presentation.

    Coefficients are Fractions or :class:`~orw.scalar.Poly`.  Words are
    kept exactly as given; :func:`normal_form` does the straightening.
    """

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: AlgebraPresentation, terms: Mapping[Word, object] | None = None):
        self.algebra = algebra
        clean = {}
        for w, c in (terms or {}).items():
            if isinstance(c, int):
                c = Fraction(c)
            if not _is_zero(c):
                clean[tuple(w)] = c
        self.terms = clean

    @classmethod
    def generator(cls, A: AlgebraPresentation, g: GeneratorRef, coef=1) -> "EnvElement":
        A.validate(g)
        return cls(A, {(g,): coef})

    @classmethod
    def word(cls, A: AlgebraPresentation, letters: Iterable[GeneratorRef], coef=1) -> "EnvElement":
        letters = tuple(letters)
        for g in letters:
            A.validate(g)
        return cls(A, {letters: coef})

    @classmethod
    def zero(cls, A: AlgebraPresentation) -> "EnvElement":
        return cls(A, {})

    def _check(self, other: "EnvElement") -> None:
        if other.algebra is not self.algebra:
            raise ValueError("elements belong to different presentations")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "EnvElement") -> "EnvElement":
        self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms[w] + c if w in terms else c
        return EnvElement(self.algebra, terms)

    def __neg__(self) -> "EnvElement":
        return EnvElement(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "EnvElement") -> "EnvElement":
        return self + (-other)

    def scale(self, c) -> "EnvElement":
        return EnvElement(self.algebra, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, EnvElement):
            return env_mul(self.algebra, self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return EnvElement(self.algebra, {w: c * v for w, v in self.terms.items()})

    def __eq__(self, other):
        # structural equality of stored words; use element_equal for equality in U(L)
        if not isinstance(other, EnvElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    __hash__ = None

    def sorted_terms(self) -> list:
        key = self.algebra.order_key
        return sorted(self.terms.items(), key=lambda wc: (len(wc[0]), [key(g) for g in wc[0]]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            if w:
                parts.append(f"{_coef_text(c)} * " + " ".join(str(g) for g in w))
            else:
                parts.append(_coef_text(c))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"<EnvElement over {self.algebra.name}: {self}>"


def env_mul(A: AlgebraPresentation, e1: EnvElement, e2: EnvElement) -> EnvElement:
    """Free (concatenation) product; no straightening."""
    if e1.algebra is not A or e2.algebra is not A:
        raise ValueError("elements belong to different presentations")
    terms: dict = {}
    for w1, c1 in e1.terms.items():
        for w2, c2 in e2.terms.items():
            w = w1 + w2
            c = c1 * c2
            terms[w] = terms[w] + c if w in terms else c
    return EnvElement(A, terms)


# ---------------------------------------------------------------------------
# Straightening
# ---------------------------------------------------------------------------


def _nf_word(A: AlgebraPresentation, word: Word) -> dict:
    """Normal form of a single word as {sorted word: Fraction}, memoised on A."""
    cache = A._cache.setdefault("nf", {})
    hit = cache.get(word)
    if hit is not None:
        return hit
    key = A.order_key
    pos = None
    for i in range(len(word) - 1):
        x, y = word[i], word[i + 1]
        kx, ky = key(x), key(y)
        if kx > ky or (kx == ky and A.parity(x) == 1):
            pos = i
            break
    if pos is None:
        result = {word: Fraction(1)}
        cache[word] = result
        return result

    x, y = word[pos], word[pos + 1]
    head, tail = word[:pos], word[pos + 2 :]
    result: dict = {}

    def accumulate(w: Word, c: Fraction) -> None:
        for nw, nc in _nf_word(A, w).items():
            v = result.get(nw, 0) + c * nc
            if v:
                result[nw] = v
            else:
                result.pop(nw, None)

    if x == y:
        # odd square: x x = 1/2 [x, x]
        for z, c in A.bracket_combo(x, x).items():
            accumulate(head + (z,) + tail, c / 2)
    else:
        sign = -1 if A.parity(x) * A.parity(y) else 1
        accumulate(head + (y, x) + tail, Fraction(sign))
        for z, c in A.bracket_combo(x, y).items():
            accumulate(head + (z,) + tail, c)
    cache[word] = result
    return result


def normal_form(A: AlgebraPresentation, e: EnvElement) -> EnvElement:
    """PBW normal form: words non-decreasing in the generator order.

    Straightening rewrites the leftmost out-of-order adjacent pair with
    x y -> (-1)^{|x||y|} y x + [x, y]; an adjacent equal odd pair becomes
    1/2 [x, x].
    """
    if e.algebra is not A:
        raise ValueError("element belongs to a different presentation")
    terms: dict = {}
    for w, c in e.terms.items():
        for nw, nc in _nf_word(A, w).items():
            v = c * nc
            if nw in terms:
                v = terms[nw] + v
            terms[nw] = v
    return EnvElement(A, terms)


def element_equal(A: AlgebraPresentation, e1: EnvElement, e2: EnvElement) -> bool:
    return normal_form(A, e1 - e2).is_zero()


# ---------------------------------------------------------------------------
# Omega operators
# ---------------------------------------------------------------------------

OMEGA_KINDS = ("LL", "GL", "GG")


def omega_families(A: AlgebraPresentation, kind: str, even: str = "L", odd: str | None = None) -> tuple[str, str]:
    if kind not in OMEGA_KINDS:
        raise ValueError(f"unknown Omega kind {kind!r}")
    if odd is None and kind != "LL":
        odds = A.odd_families
        if not odds:
            raise ValueError(f"{A.name} has no odd family for Omega kind {kind}")
        odd = odds[0]
    return {"LL": (even, even), "GL": (odd, even), "GG": (odd, odd)}[kind]


def build_omega(
    A: AlgebraPresentation,
    kind: str,
    first,
    s,
    m: int,
    even: str = "L",
    odd: str | None = None,
) -> EnvElement:
    """sum_{i=0}^{m} (-1)^i C(m, i) X_{first-i} Y_{s+i}, un-straightened."""
    if m < 0:
        raise ValueError("Omega order must be non-negative")
    fx, fy = omega_families(A, kind, even, odd)
    first, s = HalfInt.of(first), HalfInt.of(s)
    terms = {}
    for i in range(m + 1):
        x = A.validate(GeneratorRef(fx, first - i))
        y = A.validate(GeneratorRef(fy, s + i))
        terms[(x, y)] = Fraction((-1) ** i * comb(m, i))
    return EnvElement(A, terms)


def _require_orw(A: AlgebraPresentation) -> None:
    if A.name != "orw":
        raise ValueError("the omega identities are stated for the Ovsienko-Roger superalgebra")


def omega2_rhs(A: AlgebraPresentation, m: int, r, s, t) -> EnvElement:
    """sum_i (-1)^i C(m,i) (t + lambda (s+i)) G_{r-i} G_{s+t+i}.

    For lambda = -1/2 this is -1/2 * sum_i (-1)^i C(m,i) (s+i-2t) G_{r-i} G_{s+t+i}.
    """
    lam = A.params["lambda"]
    r, s, t = HalfInt.of(r), HalfInt.of(s), HalfInt.of(t)
    terms = {}
    for i in range(m + 1):
        c = Fraction((-1) ** i * comb(m, i)) * (t.value + lam * (s.value + i))
        w = (A.validate(GeneratorRef("G", r - i)), A.validate(GeneratorRef("G", s + t + i)))
        terms[w] = terms.get(w, 0) + c
    return EnvElement(A, terms)


def _w_element(A, m, r, s, t) -> EnvElement:
    """W_{s,t} = sum_i (-1)^i C(m,i) (s+i-2t) G_{r-i} G_{s+t+i}."""
    r, s, t = HalfInt.of(r), HalfInt.of(s), HalfInt.of(t)
    terms = {}
    for i in range(m + 1):
        c = Fraction((-1) ** i * comb(m, i)) * (s.value + i - 2 * t.value)
        w = (A.validate(GeneratorRef("G", r - i)), A.validate(GeneratorRef("G", s + t + i)))
        terms[w] = terms.get(w, 0) + c
    return EnvElement(A, terms)


def verify_omega2_identity(A: AlgebraPresentation, m: int, r, s, t) -> Report:
    """G_t Omegabar + Omegabar G_t equals the G G combination obtained by acting with G_t.

    At lambda = -1/2 the right side is -1/2 W_{s,t}; for other lambda the
    general coefficient t + lambda (s+i) is used.
    """
    _require_orw(A)
    r, s, t = HalfInt.of(r), HalfInt.of(s), HalfInt.of(t)
    if not s.is_integral:
        raise ValueError("s must be an integer")
    omega = build_omega(A, "GL", r, s, m)
    gt = EnvElement.generator(A, GeneratorRef("G", t))
    lhs = gt * omega + omega * gt
    if A.params["lambda"] == Fraction(-1, 2):
        rhs = _w_element(A, m, r, s, t).scale(Fraction(-1, 2))
    else:
        rhs = omega2_rhs(A, m, r, s, t)
    residual = normal_form(A, lhs - rhs)
    rep = Report("omega2_identity", residual.is_zero(), 1, info={"m": m, "r": str(r), "s": str(s), "t": str(t)})
    if residual:
        rep.failures.append({"residual": str(residual)})
    return rep


def verify_omega3_combination(A: AlgebraPresentation, m: int, r, u, s1, s2) -> Report:
    """W_{s1,t1} - W_{s2,t2} = 3 (s1 - s2) Omegaunder_{r,u} with t_k = u - s_k."""
    _require_orw(A)
    r, u, s1, s2 = (HalfInt.of(v) for v in (r, u, s1, s2))
    if s1 == s2:
        raise ValueError("s1 and s2 must differ")
    t1, t2 = u - s1, u - s2
    lhs = _w_element(A, m, r, s1, t1) - _w_element(A, m, r, s2, t2)
    rhs = build_omega(A, "GG", r, u, m).scale(3 * (s1.value - s2.value))
    residual = normal_form(A, lhs - rhs)
    rep = Report(
        "omega3_combination",
        residual.is_zero(),
        1,
        info={"m": m, "r": str(r), "u": str(u), "s1": str(s1), "s2": str(s2)},
    )
    if residual:
        rep.failures.append({"residual": str(residual)})
    return rep


# ---------------------------------------------------------------------------
# Text syntax
# ---------------------------------------------------------------------------

_WS = re.compile(r"\s*")
_RAT = re.compile(r"[+-]?\s*\d+(?:\s*/\s*\d+)?")


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def parse_element(text: str, A: AlgebraPresentation) -> EnvElement:
    """Parse ``coeff * Fam[i] Fam[j] + ...`` into an element of U(A).

    A term may be a bare word (coefficient 1) or a bare rational (scalar).
    Terms are separated by ``+``; negative coefficients are written
    ``+ -1/2 * L[0]`` or with a leading ``-``.
    """
    pos = 0
    n = len(text)
    terms: dict = {}

    def skip(p):
        return _WS.match(text, p).end()

    expect_term = True
    while True:
        pos = skip(pos)
        if pos >= n:
            if expect_term:
                raise ParseError("expected a term", pos)
            break
        if not expect_term:
            if text[pos] != "+":
                raise ParseError(f"expected '+' but found {text[pos]!r}", pos)
            pos += 1
            expect_term = True
            continue
        coef = Fraction(1)
        rat = _RAT.match(text, pos)
        if rat is not None and not _GEN_RE.match(text, pos):
            coef = parse_rational(rat.group(0).replace(" ", ""))
            pos = skip(rat.end())
            if pos < n and text[pos] == "*":
                pos = skip(pos + 1)
            else:
                terms[()] = terms.get((), 0) + coef
                expect_term = False
                continue
        elif text.startswith("-", pos):
            coef = Fraction(-1)
            pos = skip(pos + 1)
        letters = []
        while True:
            pos = skip(pos)
            match = _GEN_RE.match(text, pos)
            if match is None:
                break
            try:
                letters.append(_make_generator(match, match.group(0), A))
            except ValueError as exc:
                raise ParseError(str(exc), match.start()) from None
            pos = match.end()
        if not letters:
            raise ParseError("expected a generator Family[index]", pos)
        w = tuple(letters)
        terms[w] = terms.get(w, 0) + coef
        expect_term = False
    return EnvElement(A, terms)
