"""Exterior algebra on a window of odd generators and ideal membership.

Since the odd generators G_r pairwise anticommute, the subalgebra they
generate in the enveloping algebra is an exterior algebra.  Ideals
generated by the images of the G-G Omega operators are handled degree by
degree with exact row reduction over Q, and every membership answer
comes with a certificate that can be expanded back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, NamedTuple

from .pbw import EnvElement
from .report import Report
from .scalar import format_rational
from .superalg import HalfInt

__all__ = [
    "ExtElement",
    "ext_inject",
    "ext_monomial",
    "omega_gg_ext",
    "IdealBasis",
    "Membership",
    "ideal_build",
    "member",
    "expand_certificate",
    "verify_lemma33",
    "degree_threshold",
]

Monomial = tuple  # strictly increasing doubled indices


def _sort_sign(indices: Iterable[int]) -> tuple[int, Monomial]:
    """Sign of the sorting permutation, and the sorted tuple; sign 0 on repeats."""
    seq = list(indices)
    sign = 1
    # insertion sort counting transpositions; words are short
    for a in range(1, len(seq)):
        b = a
        while b > 0 and seq[b - 1] > seq[b]:
            seq[b - 1], seq[b] = seq[b], seq[b - 1]
            sign = -sign
            b -= 1
    for a in range(1, len(seq)):
        if seq[a] == seq[a - 1]:
            return 0, ()
    return sign, tuple(seq)


def _mono_text(mono: Monomial) -> str:
    if not mono:
        return "1"
    return "^".join(f"G[{HalfInt(d)}]" for d in mono)


class ExtElement:
    """Finite combination of exterior monomials with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms = {tuple(m): Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def monomial(cls, indices: Iterable, coef=1) -> "ExtElement":
        sign, mono = _sort_sign(HalfInt.of(i).doubled for i in indices)
        return cls({mono: sign * Fraction(coef)} if sign else {})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "ExtElement") -> "ExtElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return ExtElement(out)

    def __neg__(self) -> "ExtElement":
        return ExtElement({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "ExtElement") -> "ExtElement":
        return self + (-other)

    def scale(self, c) -> "ExtElement":
        return ExtElement({m: v * c for m, v in self.terms.items()})

    def wedge(self, other: "ExtElement") -> "ExtElement":
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, mono = _sort_sign(m1 + m2)
                if sign:
                    out[mono] = out.get(mono, 0) + sign * c1 * c2
        return ExtElement(out)

    __xor__ = wedge

    def degrees(self) -> set[int]:
        return {len(m) for m in self.terms}

    def __eq__(self, other):
        if not isinstance(other, ExtElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda mc: (len(mc[0]), mc[0]))
        return " + ".join(f"{format_rational(c)}*{_mono_text(m)}" for m, c in items)

    def __repr__(self) -> str:
        return f"ExtElement({self})"


def ext_monomial(*indices) -> ExtElement:
    return ExtElement.monomial(indices)


def ext_inject(e: EnvElement, window2: tuple[int, int] | None = None) -> ExtElement:
    """Map an element of U(odd part) to the exterior algebra.

    Every letter must be an odd generator (inside ``window2`` if given).
    """
    A = e.algebra
    out = ExtElement()
    for word, c in e.terms.items():
        for g in word:
            if A.parity(g) != 1 or A.is_central(g):
                raise ValueError(f"{g} is not an odd generator")
            if window2 is not None and not (window2[0] <= g.index.doubled <= window2[1]):
                raise ValueError(f"{g} lies outside the window {window2}")
        families = {g.family for g in word}
        if len(families) > 1:
            raise ValueError("ext_inject expects letters from a single odd family")
        if hasattr(c, "constant_value"):
            c = c.constant_value()
        out = out + ExtElement.monomial([g.index for g in word], c)
    return out


def omega_gg_ext(r2: int, s2: int, m: int) -> ExtElement:
    """Image of sum_i (-1)^i C(m,i) G_{r-i} G_{s+i} (indices doubled)."""
    terms: dict = {}
    for i in range(m + 1):
        sign, mono = _sort_sign((r2 - 2 * i, s2 + 2 * i))
        if sign:
            terms[mono] = terms.get(mono, 0) + sign * (-1) ** i * comb(m, i)
    return ExtElement(terms)


# ---------------------------------------------------------------------------
# Row reduction with provenance
# ---------------------------------------------------------------------------


def _order_key(mono: Monomial) -> tuple:
    return (len(mono), mono)


class _Echelon:
    """Echelon basis of one homogeneous degree.

    Pivot rows are stored monic in their leading (smallest) monomial.
    Each pivot remembers the product it came from and the multiples of
    earlier pivots subtracted on the way, which is all that is needed to
    rebuild certificates lazily.
    """

    def __init__(self):
        self.rows: list[dict] = []  # monomial -> Fraction
        self.lead: dict = {}  # leading monomial -> row number
        self.origin: list = []  # (product id, scale)
        self.steps: list[list] = []  # [(earlier row, coefficient)]

    def _reduce(self, vec: dict, full: bool):
        vec = dict(vec)
        used: list = []
        skipped: set = set()
        while True:
            candidates = [m for m in vec if m not in skipped]
            if not candidates:
                break
            lead = min(candidates, key=_order_key)
            row = self.lead.get(lead)
            if row is None:
                if not full:
                    break
                skipped.add(lead)
                continue
            c = vec[lead]
            used.append((row, c))
            for mono, v in self.rows[row].items():
                nv = vec.get(mono, 0) - c * v
                if nv:
                    vec[mono] = nv
                else:
                    vec.pop(mono, None)
        return vec, used

    def insert(self, vec: dict, product_id) -> None:
        rem, used = self._reduce(vec, full=False)
        if not rem:
            return
        lead = min(rem, key=_order_key)
        scale = rem[lead]
        self.rows.append({m: v / scale for m, v in rem.items()})
        self.lead[lead] = len(self.rows) - 1
        self.origin.append((product_id, scale))
        self.steps.append(used)

    def expand(self, used: list) -> dict:
        """Rewrite sum c_k * pivot_k as a combination of original products."""
        weight: dict = {}
        for row, c in used:
            weight[row] = weight.get(row, 0) + c
        out: dict = {}
        for row in range(len(self.rows) - 1, -1, -1):
            w = weight.get(row)
            if not w:
                continue
            # pivot_row = (product - sum used) / scale
            pid, scale = self.origin[row]
            coeff = w / scale
            out[pid] = out.get(pid, 0) + coeff
            for earlier, c in self.steps[row]:
                weight[earlier] = weight.get(earlier, 0) - coeff * c
        return {k: v for k, v in out.items() if v}


@dataclass
class IdealBasis:
    window2: tuple[int, int]
    m: int
    cap: int
    generators: list[tuple[int, int]]  # (r2, s2) of each relation
    images: list[ExtElement]
    echelon: dict[int, _Echelon] = field(repr=False)
    products: dict[int, list] = field(repr=False)  # degree -> [(left monomial, generator number)]
    vacuous: bool = False

    @property
    def indices2(self) -> list[int]:
        lo, hi = self.window2
        return [d for d in range(lo, hi + 1) if d % 2]

    def rank(self, degree: int) -> int:
        ech = self.echelon.get(degree)
        return len(ech.rows) if ech else 0


def _odd_window(window2: tuple[int, int]) -> list[int]:
    lo, hi = window2
    return [d for d in range(lo, hi + 1) if d % 2]


def ideal_build(window2: tuple[int, int], m: int, cap: int) -> IdealBasis:
    """Degree <= cap slice of the ideal generated by the in-window G-G Omega images.

    The exterior algebra is graded-commutative, so the two-sided ideal is
    spanned by left multiples ``x ^ g`` of the generators.
    """
    if m < 0 or cap < 0:
        raise ValueError("m and cap must be non-negative")
    idx = _odd_window(window2)
    inside = set(idx)
    gens, images = [], []
    for r2 in idx:
        for s2 in idx:
            letters = [r2 - 2 * i for i in range(m + 1)] + [s2 + 2 * i for i in range(m + 1)]
            if all(d in inside for d in letters):
                img = omega_gg_ext(r2, s2, m)
                if img:
                    gens.append((r2, s2))
                    images.append(img)
    echelon: dict = {}
    products: dict = {}
    for d in range(2, cap + 1):
        ech = _Echelon()
        prods = []
        for left in combinations(idx, d - 2):
            lx = ExtElement({left: 1})
            for gi, img in enumerate(images):
                vec = lx.wedge(img).terms
                if vec:
                    pid = len(prods)
                    prods.append((left, gi))
                    ech.insert(vec, pid)
        echelon[d] = ech
        products[d] = prods
    return IdealBasis(tuple(window2), m, cap, gens, images, echelon, products, vacuous=cap > len(idx))


class Membership(NamedTuple):
    is_member: bool
    certificate: list  # [(coefficient, left monomial, (r, s, m), right monomial)]
    remainder: ExtElement


def member(x: ExtElement, I: IdealBasis) -> Membership:
    """Reduce ``x`` against the ideal; certificate on success, remainder otherwise."""
    degs = x.degrees()
    if degs and max(degs) > I.cap:
        raise ValueError(f"degree {max(degs)} exceeds the ideal's cap {I.cap}")
    certificate: list = []
    remainder: dict = {}
    for d in sorted(degs):
        part = {mo: c for mo, c in x.terms.items() if len(mo) == d}
        ech = I.echelon.get(d)
        if ech is None:
            remainder.update(part)
            continue
        rem, used = ech._reduce(part, full=True)
        remainder.update(rem)
        if rem:
            continue
        for pid, c in sorted(ech.expand(used).items()):
            left, gi = I.products[d][pid]
            r2, s2 = I.generators[gi]
            certificate.append((c, left, (HalfInt(r2), HalfInt(s2), I.m), ()))
    rem_el = ExtElement(remainder)
    if rem_el:
        certificate = []
    return Membership(rem_el.is_zero(), certificate, rem_el)


def expand_certificate(certificate: list) -> ExtElement:
    """Sum of coefficient * left ^ Omegaunder_{r,s}^{(m)} ^ right."""
    total = ExtElement()
    for c, left, (r, s, m), right in certificate:
        g = omega_gg_ext(HalfInt.of(r).doubled, HalfInt.of(s).doubled, m)
        total = total + ExtElement({tuple(left): 1}).wedge(g).wedge(ExtElement({tuple(right): 1})).scale(c)
    return total


def certificate_json(certificate: list) -> list:
    return [
        {
            "coefficient": format_rational(c),
            "left": [str(HalfInt(d)) for d in left],
            "relation": {"r": str(r), "s": str(s), "m": m},
            "right": [str(HalfInt(d)) for d in right],
        }
        for c, left, (r, s, m), right in certificate
    ]


def verify_lemma33(m: int, k: int, s, margin: tuple[int, int] | None = None, with_certificates: bool = False) -> Report:
    """Every (m+2)-fold product of G's indexed by {s, ..., s+m+k} lies in the ideal.

    The default window is [s-m-1, s+m+k+1].  A failure is re-tested on a
    window widened by two on each side; if it then succeeds the failure is
    marked margin-limited.
    """
    s = HalfInt.of(s)
    if s.is_integral:
        raise ValueError("s must lie in Z + 1/2")
    left, right = margin if margin is not None else (m + 1, 1)
    window2 = (s.doubled - 2 * left, s.doubled + 2 * (m + k + right))
    block = [s.doubled + 2 * t for t in range(m + k + 1)]
    ideal = ideal_build(window2, m, m + 2)
    rep = Report(
        "lemma33",
        True,
        info={
            "m": m,
            "k": k,
            "s": str(s),
            "window2": list(window2),
            "degree": m + 2,
            "ideal_rank": ideal.rank(m + 2),
            "n_relations": len(ideal.generators),
        },
    )
    wider = None
    certs = []
    for mono in combinations(block, m + 2):
        rep.n_checked += 1
        x = ExtElement({mono: 1})
        res = member(x, ideal)
        if res.is_member:
            if expand_certificate(res.certificate) != x:
                rep.failures.append({"monomial": _mono_text(mono), "reason": "certificate does not expand to x"})
            elif with_certificates:
                certs.append({"monomial": _mono_text(mono), "certificate": certificate_json(res.certificate)})
            continue
        if wider is None:
            wider = ideal_build((window2[0] - 4, window2[1] + 4), m, m + 2)
        margin_limited = member(x, wider).is_member
        rep.failures.append(
            {"monomial": _mono_text(mono), "remainder": str(res.remainder), "margin_limited": margin_limited}
        )
    rep.passed = not rep.failures
    if with_certificates:
        rep.info["certificates"] = certs
    return rep


def degree_threshold(window2: tuple[int, int], m: int, max_degree: int) -> dict[int, int]:
    """Number of non-member monomials per degree 2..max_degree (0 means the whole degree is in the ideal)."""
    ideal = ideal_build(window2, m, max_degree)
    idx = ideal.indices2
    return {d: comb(len(idx), d) - ideal.rank(d) for d in range(2, max_degree + 1)}
