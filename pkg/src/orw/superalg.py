"""Presentations of 1/2 Z-graded Lie superalgebras.

Every catalog entry keeps its bracket table exactly as printed, sign and
central-term conventions included.  Nothing is normalised; the
antisymmetry and super-Jacobi checkers below decide whether a table is
consistent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .report import Report
from .scalar import format_rational, parse_rational

__all__ = [
    "HalfInt",
    "Family",
    "GeneratorRef",
    "AlgebraPresentation",
    "CATALOG",
    "catalog_build",
    "table_algebra",
    "algebra_from_config",
    "bracket",
    "check_antisymmetry",
    "check_super_jacobi",
    "check_degree_additivity",
    "parse_generator",
    "parse_window",
    "format_combo",
]


@dataclass(frozen=True, order=True, slots=True)
class HalfInt:
    """A number in (1/2)Z stored as twice its value."""

    doubled: int

    @classmethod
    def of(cls, x) -> "HalfInt":
        if isinstance(x, HalfInt):
            return x
        if isinstance(x, bool):
            raise TypeError("booleans are not indices")
        if isinstance(x, int):
            return cls(2 * x)
        if isinstance(x, str):
            x = parse_rational(x)
        if isinstance(x, Fraction):
            if x.denominator not in (1, 2):
                raise ValueError(f"{format_rational(x)} is not in Z nor Z+1/2")
            return cls(int(2 * x))
        raise TypeError(f"cannot make a half-integer from {x!r}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.doubled, 2)

    @property
    def is_integral(self) -> bool:
        return self.doubled % 2 == 0

    def __add__(self, other):
        if isinstance(other, int):
            return HalfInt(self.doubled + 2 * other)
        if isinstance(other, HalfInt):
            return HalfInt(self.doubled + other.doubled)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return HalfInt(self.doubled - 2 * other)
        if isinstance(other, HalfInt):
            return HalfInt(self.doubled - other.doubled)
        return NotImplemented

    def __neg__(self):
        return HalfInt(-self.doubled)

    def __str__(self) -> str:
        if self.doubled % 2 == 0:
            return str(self.doubled // 2)
        return f"{self.doubled}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self})"


ZERO = HalfInt(0)


@dataclass(frozen=True)
class Family:
    name: str
    parity: int  # 0 even, 1 odd
    half: bool = False  # indices in Z + 1/2 instead of Z
    central: bool = False

    @property
    def lattice(self) -> str:
        if self.central:
            return "0"
        return "Z+1/2" if self.half else "Z"

    def admits(self, index: HalfInt) -> bool:
        if self.central:
            return index.doubled == 0
        return (index.doubled % 2 == 1) == self.half


class GeneratorRef(NamedTuple):
    family: str
    index: HalfInt

    def __str__(self) -> str:
        return f"{self.family}[{self.index}]"


def gen(family: str, index) -> GeneratorRef:
    return GeneratorRef(family, HalfInt.of(index))


Combo = dict  # GeneratorRef -> Fraction
BracketRule = Callable[[GeneratorRef, GeneratorRef], Combo]


@dataclass(frozen=True, eq=False)
class AlgebraPresentation:
    name: str
    families: tuple[Family, ...]
    rule: BracketRule
    params: Mapping[str, object] = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_name", {f.name: (rank, f) for rank, f in enumerate(self.families)})

    # -- generators ---------------------------------------------------------

    def family(self, name: str) -> Family:
        try:
            return self._by_name[name][1]
        except KeyError:
            raise ValueError(f"family {name!r} is not part of {self.name}") from None

    def has_family(self, name: str) -> bool:
        return name in self._by_name

    def validate(self, g: GeneratorRef) -> GeneratorRef:
        fam = self.family(g.family)
        if not fam.admits(g.index):
            raise ValueError(f"{g} violates the {fam.lattice} index lattice of {fam.name} in {self.name}")
        return g

    def parity(self, g: GeneratorRef) -> int:
        return self._by_name[g.family][1].parity

    def is_central(self, g: GeneratorRef) -> bool:
        return self._by_name[g.family][1].central

    def degree(self, g: GeneratorRef) -> HalfInt:
        return ZERO if self.is_central(g) else g.index

    def order_key(self, g: GeneratorRef) -> tuple:
        """Central families first, then declaration rank, then index."""
        rank, fam = self._by_name[g.family]
        return (0 if fam.central else 1, rank, g.index.doubled)

    def generators(self, window2: tuple[int, int]) -> list[GeneratorRef]:
        """All generators whose doubled index lies in ``window2``, in PBW order."""
        lo, hi = window2
        out = []
        for fam in self.families:
            if fam.central:
                if lo <= 0 <= hi:
                    out.append(GeneratorRef(fam.name, ZERO))
                continue
            for d in range(lo, hi + 1):
                if (d % 2 == 1) == fam.half:
                    out.append(GeneratorRef(fam.name, HalfInt(d)))
        out.sort(key=self.order_key)
        return out

    @property
    def odd_families(self) -> list[str]:
        return [f.name for f in self.families if f.parity == 1 and not f.central]

    # -- brackets -----------------------------------------------------------

    def bracket_combo(self, x: GeneratorRef, y: GeneratorRef) -> Combo:
        cache = self._cache
        key = (x, y)
        hit = cache.get(key)
        if hit is None:
            self.validate(x)
            self.validate(y)
            if self.is_central(x) or self.is_central(y):
                hit = {}
            else:
                hit = {g: c for g, c in self.rule(x, y).items() if c}
            cache[key] = hit
        return hit

    def bracket(self, x: GeneratorRef, y: GeneratorRef) -> tuple:
        combo = self.bracket_combo(x, y)
        return tuple((combo[g], g) for g in sorted(combo, key=self.order_key))

    def describe(self) -> dict:
        return {
            "name": self.name,
            "params": {k: format_rational(v) if isinstance(v, Fraction) else str(v) for k, v in self.params.items()},
            "families": [
                {"name": f.name, "parity": "odd" if f.parity else "even", "lattice": f.lattice} for f in self.families
            ],
            "notes": list(self.notes),
        }

    def __repr__(self) -> str:
        ps = ", ".join(f"{k}={v}" for k, v in self.describe()["params"].items())
        return f"<AlgebraPresentation {self.name}({ps})>"


def bracket(A: AlgebraPresentation, x: GeneratorRef, y: GeneratorRef) -> tuple:
    return A.bracket(x, y)


# ---------------------------------------------------------------------------
# Bracket tables
# ---------------------------------------------------------------------------

Formula = Callable[[Fraction, Fraction], Iterable[tuple[Fraction, str, Fraction]]]


def _delta(x: Fraction) -> int:
    return 1 if x == 0 else 0


class _FormulaRule:
    """Bracket rule from closed-form formulas on ordered family pairs.

    A pair listed only in one order gets the other order from
    super-antisymmetry; unlisted pairs bracket to zero.
    """

    def __init__(self, families: Sequence[Family], formulas: Mapping[tuple[str, str], Formula]):
        self.parity = {f.name: f.parity for f in families}
        self.formulas = dict(formulas)

    def __call__(self, x: GeneratorRef, y: GeneratorRef) -> Combo:
        fx, fy = x.family, y.family
        if (fx, fy) in self.formulas:
            terms, sign = self.formulas[(fx, fy)](x.index.value, y.index.value), 1
        elif (fy, fx) in self.formulas:
            terms = self.formulas[(fy, fx)](y.index.value, x.index.value)
            sign = 1 if self.parity[fx] * self.parity[fy] else -1
        else:
            return {}
        out: Combo = {}
        for c, fam, idx in terms:
            if c:
                g = GeneratorRef(fam, HalfInt.of(idx))
                out[g] = out.get(g, 0) + sign * Fraction(c)
        return out


def _vir_like(sign_nm: bool, central: str | None, cubic_in_second: bool, target: str = "L") -> Formula:
    """[L_m, X_n] = +-(n-m) X_{m+n} + delta (1/12)(k^3 - k) central."""

    def f(m, n):
        coef = (n - m) if sign_nm else (m - n)
        out = [(coef, target, m + n)]
        if central is not None and m + n == 0:
            k = n if cubic_in_second else m
            out.append((Fraction(k**3 - k, 12), central, Fraction(0)))
        return out

    return f


def _build_vir(params):
    fams = (Family("L", 0), Family("C", 0, central=True))
    # [L_m, L_n] = (n-m) L_{m+n} + delta (1/12)(m^3 - m) C
    rule = _FormulaRule(fams, {("L", "L"): _vir_like(True, "C", cubic_in_second=False)})
    return AlgebraPresentation("vir", fams, rule, {})


def _build_witt(params):
    fams = (Family("L", 0),)
    rule = _FormulaRule(fams, {("L", "L"): _vir_like(True, None, False)})
    return AlgebraPresentation("witt", fams, rule, {})


def _build_orw(params):
    lam = params["lambda"]
    eps = params["epsilon"]
    fams = (Family("L", 0), Family("G", 1, half=(eps != 0)), Family("C", 0, central=True))

    def lg(m, r):
        return [(r + lam * m, "G", r + m)]

    rule = _FormulaRule(
        fams,
        {
            # the L-hat table writes its central term with (n^3 - n)
            ("L", "L"): _vir_like(True, "C", cubic_in_second=True),
            ("L", "G"): lg,
            ("G", "G"): lambda r, s: [],
        },
    )
    return AlgebraPresentation("orw", fams, rule, {"lambda": lam, "epsilon": eps})


def _build_q(params):
    fams = (
        Family("L", 0),
        Family("H", 0),
        Family("G", 1, half=True),
        Family("C", 0, central=True),
    )
    third = Fraction(1, 3)
    rule = _FormulaRule(
        fams,
        {
            ("L", "L"): _vir_like(True, "C", cubic_in_second=True),
            ("H", "H"): lambda m, n: [(third * m * _delta(m + n), "C", 0)],
            ("L", "H"): lambda m, n: [(n, "H", m + n)],
            ("L", "G"): lambda m, p: [(p - m / 2, "G", p + m)],
            ("H", "G"): lambda m, p: [(1, "G", m + p)],
            ("G", "G"): lambda p, q: [],
        },
    )
    notes = ("[L_m,L_n] central term printed without delta_{m+n,0}; delta inserted (degree additivity)",)
    return AlgebraPresentation("q", fams, rule, {}, notes)


def _odd_square(target: str, central: str):
    third = Fraction(1, 3)

    def f(r, s):
        out = [(2, target, r + s)]
        if r + s == 0:
            out.append((third * (r * r - Fraction(1, 4)), central, 0))
        return out

    return f


def _build_bms3(params):
    fams = (
        Family("L", 0),
        Family("I", 0),
        Family("Q", 1, half=True),
        Family("C1", 0, central=True),
        Family("C2", 0, central=True),
    )
    rule = _FormulaRule(
        fams,
        {
            ("L", "L"): _vir_like(False, "C1", cubic_in_second=False),
            ("L", "I"): _vir_like(False, "C2", cubic_in_second=False, target="I"),
            ("Q", "Q"): _odd_square("I", "C2"),
            ("L", "Q"): lambda m, r: [(m / 2 - r, "Q", m + r)],
            ("I", "I"): lambda m, n: [],
            ("I", "Q"): lambda m, r: [],
        },
    )
    notes = ("relation [M_n,Q_r]=0 read as [I_n,Q_r]=0 (M taken as a misprint for I)",)
    return AlgebraPresentation("bms3", fams, rule, {}, notes)


def _build_sw22(params):
    convention = params.get("convention", "printed")
    fams = (
        Family("L", 0),
        Family("I", 0),
        Family("G", 1, half=True),
        Family("Q", 1, half=True),
        Family("C1", 0, central=True),
        Family("C2", 0, central=True),
    )
    li_sign = convention == "printed"  # printed table has (n-m) for [L_m, I_n]
    rule = _FormulaRule(
        fams,
        {
            ("L", "L"): _vir_like(False, "C1", cubic_in_second=False),
            ("L", "I"): _vir_like(li_sign, "C2", cubic_in_second=False, target="I"),
            ("G", "G"): _odd_square("L", "C1"),
            ("G", "Q"): _odd_square("I", "C2"),
            ("L", "G"): lambda m, r: [(m / 2 - r, "G", m + r)],
            ("L", "Q"): lambda m, r: [(m / 2 - r, "Q", m + r)],
            ("I", "G"): lambda m, r: [(m / 2 - r, "Q", m + r)],
        },
    )
    notes = [
        "[I_m,Q_r], [I_m,I_n], [Q_r,Q_s] not listed in the table; taken as 0",
    ]
    if convention != "printed":
        notes.append("[L_m,I_n] sign changed to (m-n)I_{m+n} (corrected convention, not the printed one)")
    return AlgebraPresentation("sw22", fams, rule, {"convention": convention}, tuple(notes))


def _build_ns(params):
    fams = (Family("L", 0), Family("G", 1, half=True), Family("C", 0, central=True))
    rule = _FormulaRule(
        fams,
        {
            ("L", "L"): _vir_like(False, "C", cubic_in_second=False),
            ("G", "G"): _odd_square("L", "C"),
            ("L", "G"): lambda m, r: [(m / 2 - r, "G", m + r)],
        },
    )
    return AlgebraPresentation("ns", fams, rule, {})


CATALOG: dict[str, Callable] = {
    "vir": _build_vir,
    "witt": _build_witt,
    "orw": _build_orw,
    "q": _build_q,
    "bms3": _build_bms3,
    "sw22": _build_sw22,
    "ns": _build_ns,
}

_ALLOWED_PARAMS = {"orw": {"lambda", "epsilon"}, "sw22": {"convention"}}


def catalog_build(name: str, params: Mapping[str, object] | None = None) -> AlgebraPresentation:
    """Build a catalog algebra.

    ``orw`` needs ``lambda`` (rational) and ``epsilon`` (0 or 1/2).
    ``sw22`` optionally takes ``convention`` = ``"printed"`` | ``"corrected"``.
    """
    if name not in CATALOG:
        raise ValueError(f"unknown algebra {name!r}; choose from {sorted(CATALOG)}")
    params = dict(params or {})
    extra = set(params) - _ALLOWED_PARAMS.get(name, set())
    if extra:
        raise ValueError(f"unexpected parameters {sorted(extra)} for {name}")
    if name == "orw":
        missing = {"lambda", "epsilon"} - set(params)
        if missing:
            raise ValueError(f"orw needs parameters {sorted(missing)}")
        lam = params["lambda"]
        if isinstance(lam, float) or not isinstance(lam, (int, Fraction, str)):
            raise ValueError(f"lambda must be rational, got {lam!r}")
        params["lambda"] = parse_rational(lam)
        eps = parse_rational(params["epsilon"])
        if eps not in (0, Fraction(1, 2)):
            raise ValueError(f"epsilon must be 0 or 1/2, got {format_rational(eps)}")
        params["epsilon"] = eps
    if name == "sw22" and params.get("convention", "printed") not in ("printed", "corrected"):
        raise ValueError("sw22 convention must be 'printed' or 'corrected'")
    return CATALOG[name](params)


def table_algebra(
    name: str,
    families: Sequence[Family],
    entries: Iterable[tuple[GeneratorRef, GeneratorRef, Sequence[tuple[Fraction, GeneratorRef]]]],
) -> AlgebraPresentation:
    """Algebra given by an explicit finite structure-constant table.

    A pair given in only one order gets the other from super-antisymmetry;
    a pair given in both orders is used verbatim (so inconsistent tables
    stay inconsistent and show up in :func:`check_antisymmetry`).
    """
    by_name = {f.name: f for f in families}
    table: dict = {}
    for x, y, result in entries:
        for g in (x, y, *(t for _, t in result)):
            if g.family not in by_name or not by_name[g.family].admits(g.index):
                raise ValueError(f"table entry uses invalid generator {g}")
        combo: Combo = {}
        for c, t in result:
            combo[t] = combo.get(t, 0) + Fraction(c)
        deg = (0 if by_name[x.family].central else x.index.doubled) + (0 if by_name[y.family].central else y.index.doubled)
        for t, c in combo.items():
            tdeg = 0 if by_name[t.family].central else t.index.doubled
            if c and tdeg != deg:
                raise ValueError(f"[{x},{y}] -> {t} is not degree-additive")
        table[(x, y)] = combo

    def rule(x, y):
        if (x, y) in table:
            return dict(table[(x, y)])
        if (y, x) in table:
            sign = 1 if by_name[x.family].parity * by_name[y.family].parity else -1
            return {g: sign * c for g, c in table[(y, x)].items()}
        return {}

    return AlgebraPresentation(name, tuple(families), rule, {}, ("custom structure-constant table",))


_GEN_RE = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*)\[\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*\]")


def parse_generator(text: str, A: AlgebraPresentation | None = None) -> GeneratorRef:
    """Parse ``Fam[i]`` with ``i`` an integer or ``p/2``."""
    match = _GEN_RE.fullmatch(text.strip())
    if match is None:
        raise ValueError(f"malformed generator {text!r}; expected Family[index]")
    return _make_generator(match, text, A)


def _make_generator(match, text, A):
    num = int(match.group(2))
    den = int(match.group(3)) if match.group(3) else 1
    if den not in (1, 2):
        raise ValueError(f"index of {text.strip()!r} is not in Z nor Z+1/2")
    g = GeneratorRef(match.group(1), HalfInt(2 * num // den))
    if A is not None:
        A.validate(g)
    return g


def parse_window(text: str) -> tuple[int, int]:
    """Parse ``lo..hi`` in degrees (rationals allowed) into doubled bounds."""
    lo, sep, hi = str(text).partition("..")
    if not sep:
        raise ValueError(f"window must look like lo..hi, got {text!r}")
    lo2, hi2 = HalfInt.of(parse_rational(lo)).doubled, HalfInt.of(parse_rational(hi)).doubled
    if lo2 > hi2:
        raise ValueError(f"empty window {text!r}")
    return lo2, hi2


def _family_from_config(d: Mapping) -> Family:
    parity = {"even": 0, "odd": 1, 0: 0, 1: 1}[d.get("parity", "even")]
    lattice = d.get("lattice", "Z")
    if lattice not in ("Z", "Z+1/2", "0"):
        raise ValueError(f"unknown lattice {lattice!r}")
    return Family(d["name"], parity, half=(lattice == "Z+1/2"), central=(lattice == "0" or bool(d.get("central"))))


def algebra_from_config(cfg: Mapping) -> AlgebraPresentation:
    """Build from ``{algebra = "orw", lambda = "-1/2", epsilon = "1/2"}`` or a custom table.

    A custom table needs ``families = [{name, parity, lattice}]`` and
    ``table = [{x = "L[1]", y = "G[1/2]", result = [["0", "G[3/2]"]]}]``.
    """
    if "table" in cfg:
        fams = [_family_from_config(f) for f in cfg["families"]]
        entries = []
        for row in cfg["table"]:
            x, y = parse_generator(row["x"]), parse_generator(row["y"])
            result = [(parse_rational(c), parse_generator(t)) for c, t in row.get("result", [])]
            entries.append((x, y, result))
        return table_algebra(cfg.get("algebra", cfg.get("name", "custom")), fams, entries)
    name = cfg.get("algebra")
    if name is None:
        raise ValueError("algebra selection needs an 'algebra' key")
    params = {k: v for k, v in cfg.items() if k in ("lambda", "epsilon", "convention")}
    return catalog_build(name, params)


# ---------------------------------------------------------------------------
# Consistency checks
# ---------------------------------------------------------------------------


def format_combo(combo: Mapping[GeneratorRef, Fraction], A: AlgebraPresentation | None = None) -> str:
    items = [(g, c) for g, c in combo.items() if c]
    if not items:
        return "0"
    key = A.order_key if A is not None else (lambda g: (g.family, g.index.doubled))
    items.sort(key=lambda gc: key(gc[0]))
    return " + ".join(f"{format_rational(c)}*{g}" for g, c in items)


def _add_into(acc: dict, combo: Mapping, scale) -> None:
    for g, c in combo.items():
        v = acc.get(g, 0) + scale * c
        if v:
            acc[g] = v
        else:
            acc.pop(g, None)


def _bracket_left(A, x, combo) -> dict:
    out: dict = {}
    for g, c in combo.items():
        _add_into(out, A.bracket_combo(x, g), c)
    return out


def _bracket_right(A, combo, z) -> dict:
    out: dict = {}
    for g, c in combo.items():
        _add_into(out, A.bracket_combo(g, z), c)
    return out


def check_antisymmetry(A: AlgebraPresentation, window2: tuple[int, int], max_failures: int = 25) -> Report:
    gens = A.generators(window2)
    rep = Report("antisymmetry", True, info={"algebra": A.describe(), "window2": list(window2)})
    n_fail = 0
    for a, x in enumerate(gens):
        for y in gens[a:]:
            xy = A.bracket_combo(x, y)
            yx = A.bracket_combo(y, x)
            sign = -1 if A.parity(x) * A.parity(y) else 1
            residual = dict(xy)
            _add_into(residual, yx, sign)
            rep.n_checked += 1
            if residual:
                n_fail += 1
                if len(rep.failures) < max_failures:
                    rep.failures.append(
                        {"x": str(x), "y": str(y), "xy": format_combo(xy, A), "yx": format_combo(yx, A)}
                    )
    rep.passed = n_fail == 0
    rep.info["n_failures"] = n_fail
    return rep


def check_super_jacobi(A: AlgebraPresentation, window2: tuple[int, int], max_failures: int = 25) -> Report:
    """[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]] on every ordered window triple."""
    gens = [g for g in A.generators(window2) if not A.is_central(g)]
    rep = Report("super_jacobi", True, info={"algebra": A.describe(), "window2": list(window2)})
    n_fail = 0
    for x, y, z in product(gens, repeat=3):
        rep.n_checked += 1
        lhs = _bracket_left(A, x, A.bracket_combo(y, z))
        residual = lhs
        _add_into(residual, _bracket_right(A, A.bracket_combo(x, y), z), -1)
        sign = -1 if A.parity(x) * A.parity(y) else 1
        _add_into(residual, _bracket_left(A, y, A.bracket_combo(x, z)), -sign)
        if residual:
            n_fail += 1
            if len(rep.failures) < max_failures:
                rep.failures.append({"x": str(x), "y": str(y), "z": str(z), "residual": format_combo(residual, A)})
    # triples with a central letter vanish identically (central brackets are zero)
    rep.passed = n_fail == 0
    rep.info["n_failures"] = n_fail
    return rep


def check_degree_additivity(A: AlgebraPresentation, window2: tuple[int, int]) -> Report:
    gens = A.generators(window2)
    rep = Report("degree_additivity", True, info={"algebra": A.name, "window2": list(window2)})
    for x, y in product(gens, repeat=2):
        rep.n_checked += 1
        want = A.degree(x) + A.degree(y)
        for t in A.bracket_combo(x, y):
            if A.degree(t) != want:
                rep.failures.append({"x": str(x), "y": str(y), "target": str(t)})
    rep.passed = not rep.failures
    return rep
