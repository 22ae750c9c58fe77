"""Check batteries, suite configuration and JSON reports.

Suites are plain lists of :class:`CheckSpec` records naming a registered
check function and its keyword arguments, so adding a battery means
adding data, not code paths.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Mapping

from . import grassmann, pbw, superalg, weightmod
from .scalar import Poly, finite_difference, format_rational, parse_rational
from .superalg import HalfInt

SCHEMA = "orw.report/1"
STATUSES = ("pass", "fail", "skipped-margin-limited")
SUITE_NAMES = ("jacobi", "modules", "lemma21", "lemma31", "lemma32", "lemma33", "thm34", "section5")

ORW_STD = {"algebra": "orw", "lambda": "-1/2", "epsilon": "1/2"}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


def _window(value) -> tuple[int, int]:
    if isinstance(value, str):
        return superalg.parse_window(value)
    lo, hi = (int(v) for v in value)
    if lo > hi:
        raise ConfigError(f"empty window {value!r}")
    return lo, hi


@dataclass
class SuiteConfig:
    window2: tuple[int, int] = (-8, 8)
    lambdas: list[str] = field(default_factory=lambda: ["-1/2", "0", "1", "-1"])
    epsilons: list[str] = field(default_factory=lambda: ["0", "1/2"])
    max_m: int = 6
    omega_grid2: tuple[int, int] = (-8, 8)
    pbw_max_m: int = 4
    pbw_bound2: int = 8
    lemma33_ms: list[int] = field(default_factory=lambda: [0, 1, 2])
    lemma33_ks: list[int] = field(default_factory=lambda: [1, 2, 3, 4])
    lemma33_s: str = "1/2"
    scan_window2: tuple[int, int] = (-20, 20)
    scan_margin: int = 3
    specializations: list[list[str]] = field(default_factory=lambda: [["0", "0"], ["1/2", "1/3"], ["2", "-3/7"]])
    workers: int = 1
    timings: bool = False
    out: str | None = None

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "SuiteConfig":
        cfg = cls()
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys {sorted(unknown)}")
        for key, value in data.items():
            if key in ("window2", "omega_grid2", "scan_window2"):
                value = _window(value)
            setattr(cfg, key, value)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        try:
            for lam in self.lambdas:
                parse_rational(lam)
            for eps in self.epsilons:
                if parse_rational(eps) not in (0, Fraction(1, 2)):
                    raise ConfigError(f"epsilon {eps} not in {{0, 1/2}}")
            if HalfInt.of(parse_rational(self.lemma33_s)).is_integral:
                raise ConfigError(f"lemma33_s must lie in Z+1/2, got {self.lemma33_s}")
            for spec in self.specializations:
                for v in spec:
                    parse_rational(v)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        for w in (self.window2, self.omega_grid2, self.scan_window2):
            if w[0] > w[1]:
                raise ConfigError(f"empty window {w}")
        if self.workers < 1 or self.max_m < 0 or self.pbw_max_m < 0:
            raise ConfigError("workers must be >= 1 and orders non-negative")

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("window2", "omega_grid2", "scan_window2"):
            d[k] = list(d[k])
        for k in ("workers", "timings", "out"):
            d.pop(k)
        return d


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return json.loads(text)
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    return tomllib.loads(text)


# ---------------------------------------------------------------------------
# Check registry
# ---------------------------------------------------------------------------

CHECKS: dict[str, Callable[..., tuple[str, dict]]] = {}


def check(fn):
    CHECKS[fn.__name__] = fn
    return fn


@dataclass(frozen=True)
class CheckSpec:
    suite: str
    check_id: str
    fn: str
    kwargs: dict


@dataclass
class CheckResult:
    suite: str
    check: str
    status: str
    payload: dict
    wall_time: float | None = None

    def to_dict(self, timings: bool = False) -> dict:
        d = {"suite": self.suite, "check": self.check, "status": self.status, "payload": self.payload}
        if timings and self.wall_time is not None:
            d["wall_time"] = round(self.wall_time, 6)
        return d


def _algebra(cfg: Mapping) -> superalg.AlgebraPresentation:
    return superalg.algebra_from_config(cfg)


def _module(alg_cfg: Mapping, mod_cfg: Mapping, pin: bool = False, window2=(-8, 8)):
    A = _algebra(alg_cfg)
    spec = weightmod.module_from_config(mod_cfg, A)
    pin_info = None
    if pin:
        spec, rep = weightmod.pin_sign_convention(spec, tuple(window2))
        pin_info = {"pinned_twist": rep.info["pinned_twist"], "candidates": rep.info["candidates"]}
    return spec, pin_info


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


@check
def algebra_validity(algebra: dict, window2: list) -> tuple[str, dict]:
    A = _algebra(algebra)
    w = tuple(window2)
    anti = superalg.check_antisymmetry(A, w)
    jac = superalg.check_super_jacobi(A, w)
    deg = superalg.check_degree_additivity(A, w)
    payload = {
        "algebra": A.describe(),
        "antisymmetry": {"passed": anti.passed, "n_checked": anti.n_checked, "violations": anti.failures},
        "super_jacobi": {
            "passed": jac.passed,
            "n_checked": jac.n_checked,
            "n_violations": jac.info["n_failures"],
            "violations": jac.failures,
        },
        "degree_additive": deg.passed,
    }
    return _status(anti.passed and jac.passed and deg.passed), payload


@check
def module_axioms(algebra: dict, module: dict, window2: list, pin: bool = False) -> tuple[str, dict]:
    spec, pin_info = _module(algebra, module, pin=pin, window2=window2)
    rep = weightmod.axiom_check(spec, tuple(window2))
    payload = {
        "module": spec.describe(),
        "n_checked": rep.n_checked,
        "n_failures": rep.info["n_failures"],
        "failures": rep.failures,
    }
    if pin_info is not None:
        payload["sign_convention"] = pin_info
    return _status(rep.passed), payload


@check
def omega_min(algebra: dict, module: dict, kind: str, max_m: int, grid2: list, expect: int, pin: bool = False):
    spec, _ = _module(algebra, module, pin=pin)
    scan = weightmod.omega_scan(spec, kind, max_m, tuple(grid2))
    payload = {"module": spec.describe(), "expected_min_m": expect, **scan.to_dict()}
    ok = scan.min_m == expect and scan.confirmed is not False
    if expect > 0:
        # the order just below the minimum must leave a nonzero residual
        ok = ok and (expect - 1) in scan.residuals
    return _status(ok), payload


@check
def finite_difference_oracle(expect: int, b_value: str | None = None) -> tuple[str, dict]:
    """Coefficient of Omega^{(m)} on v_j as sum_i (-1)^i C(m,i) f(i); smallest m killing f."""
    a, j, k, s, i = (Poly.var(n) for n in ("a", "j", "k", "s", "i"))
    b = Poly.var("b") if b_value is None else Poly.const(parse_rational(b_value), ("b",))
    f = (a + j + b * (s + i)) * (a + j + s + i + b * (k - i))
    diffs = {m: finite_difference(f, "i", m).subs({"i": 0}) for m in range(expect + 1)}
    first_zero = next((m for m, d in diffs.items() if d.is_zero()), None)
    payload = {
        "coefficient": str(f),
        "differences": {str(m): str(d) for m, d in diffs.items()},
        "oracle_min_m": first_zero,
        "expected_min_m": expect,
    }
    return _status(first_zero == expect), payload


@check
def omega2_grid(lam: str, max_m: int, bound2: int) -> tuple[str, dict]:
    A = superalg.catalog_build("orw", {"lambda": lam, "epsilon": "1/2"})
    odd = [d for d in range(-bound2, bound2 + 1) if d % 2]
    even = [d for d in range(-bound2, bound2 + 1) if d % 2 == 0]
    n, failures = 0, []
    for m in range(max_m + 1):
        for r2 in odd:
            for s2 in even:
                for t2 in odd:
                    n += 1
                    rep = pbw.verify_omega2_identity(A, m, HalfInt(r2), HalfInt(s2), HalfInt(t2))
                    if not rep.passed and len(failures) < 10:
                        failures.append({**rep.info, **rep.failures[0]})
    return _status(not failures), {"lambda": lam, "n_checked": n, "failures": failures}


@check
def omega3_grid(max_m: int, bound2: int) -> tuple[str, dict]:
    A = superalg.catalog_build("orw", {"lambda": "-1/2", "epsilon": "1/2"})
    odd = [d for d in range(-bound2, bound2 + 1) if d % 2]
    even = [d for d in range(-bound2, bound2 + 1) if d % 2 == 0]
    n, failures = 0, []
    for m in range(max_m + 1):
        for r2 in odd:
            for u2 in odd:
                for s1 in even:
                    for s2 in even:
                        if s1 == s2:
                            continue
                        n += 1
                        rep = pbw.verify_omega3_combination(
                            A, m, HalfInt(r2), HalfInt(u2), HalfInt(s1), HalfInt(s2)
                        )
                        if not rep.passed and len(failures) < 10:
                            failures.append({**rep.info, **rep.failures[0]})
    return _status(not failures), {"n_checked": n, "failures": failures}


@check
def lemma33(m: int, k: int, s: str) -> tuple[str, dict]:
    rep = grassmann.verify_lemma33(m, k, s)
    if rep.passed:
        status = "pass"
    elif all(f.get("margin_limited") for f in rep.failures):
        status = "skipped-margin-limited"
    else:
        status = "fail"
    return status, {**rep.info, "n_checked": rep.n_checked, "failures": rep.failures}


@check
def lemma33_sharpness(m: int, s: str, k: int) -> tuple[str, dict]:
    """Some (m+1)-fold product in the lemma window is not in the ideal."""
    s_ = HalfInt.of(parse_rational(s))
    window2 = (s_.doubled - 2 * (m + 1), s_.doubled + 2 * (m + k + 1))
    ideal = grassmann.ideal_build(window2, m, m + 1)
    idx = ideal.indices2
    from itertools import combinations

    witness = None
    n = 0
    for mono in combinations(idx, m + 1):
        n += 1
        res = grassmann.member(grassmann.ExtElement({mono: 1}), ideal)
        if not res.is_member:
            witness = {"monomial": grassmann._mono_text(mono), "remainder": str(res.remainder)}
            break
    from math import comb

    payload = {
        "m": m,
        "window2": list(window2),
        "degree": m + 1,
        "n_monomials": comb(len(idx), m + 1),
        "ideal_rank": ideal.rank(m + 1),
        "n_tested": n,
        "witness": witness,
    }
    return _status(witness is not None), payload


@check
def g_trivial_check(algebra: dict, module: dict, expect: bool) -> tuple[str, dict]:
    spec, _ = _module(algebra, module)
    value = weightmod.g_trivial(spec)
    return _status(value == expect), {"module": spec.describe(), "g_trivial": value, "expected": expect}


@check
def submodule_witness(
    algebra: dict,
    module: dict,
    window2: list,
    margin: int,
    expect: str,
    pin: bool = False,
) -> tuple[str, dict]:
    """``expect``: 'none', 'any', 'odd_sector', or a comma-separated basis list that must occur."""
    spec, _ = _module(algebra, module, pin=pin)
    wm = weightmod.WindowModule(spec, tuple(window2), margin)
    witnesses = weightmod.submodule_scan(wm)
    if expect == "none":
        ok = not witnesses
    elif expect == "any":
        ok = bool(witnesses)
    elif expect == "odd_sector":
        odd = [f"{s}[{i}]" for s, i in wm.basis(wm.inner_window2) if spec.sector(s).parity == 1]
        ok = any(w["basis"] == odd for w in witnesses)
    elif expect == "complement_of_zero":
        rest = [f"{s}[{i}]" for s, i in wm.basis(wm.inner_window2) if i.doubled != 0]
        ok = any(w["basis"] == rest for w in witnesses)
    else:
        want = [b.strip() for b in expect.split(",")]
        ok = any(w["basis"] == want for w in witnesses)
    payload = {
        "module": spec.describe(),
        "inner_window2": list(wm.inner_window2),
        "expect": expect,
        "witnesses": witnesses,
        "verdict": "non-simplicity witness found" if witnesses else "no witness found (window-limited)",
    }
    return _status(ok), payload


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def _label(d: Mapping) -> str:
    name = d.get("algebra") or d.get("module")
    rest = ",".join(f"{k}={v}" for k, v in d.items() if k not in ("algebra", "module"))
    return f"{name}({rest})" if rest else name


def catalog_algebras(cfg: SuiteConfig) -> list[dict]:
    algs = [{"algebra": "vir"}, {"algebra": "witt"}]
    for lam in cfg.lambdas:
        for eps in cfg.epsilons:
            algs.append({"algebra": "orw", "lambda": lam, "epsilon": eps})
    algs += [
        {"algebra": "q"},
        {"algebra": "bms3"},
        {"algebra": "sw22"},
        {"algebra": "sw22", "convention": "corrected"},
        {"algebra": "ns"},
    ]
    return algs


def _suite_jacobi(cfg):
    return [
        CheckSpec("jacobi", _label(a), "algebra_validity", {"algebra": a, "window2": list(cfg.window2)})
        for a in catalog_algebras(cfg)
    ]


def _axioms(suite, alg, mod, cfg, pin=False):
    return CheckSpec(
        suite,
        f"axioms:{_label(mod)}/{_label(alg)}",
        "module_axioms",
        {"algebra": alg, "module": mod, "window2": list(cfg.window2), "pin": pin},
    )


def _witness(suite, alg, mod, cfg, expect, pin=False):
    return CheckSpec(
        suite,
        f"scan:{_label(mod)}/{_label(alg)}",
        "submodule_witness",
        {
            "algebra": alg,
            "module": mod,
            "window2": list(cfg.scan_window2),
            "margin": cfg.scan_margin,
            "expect": expect,
            "pin": pin,
        },
    )


def _suite_modules(cfg):
    vir, witt = {"algebra": "vir"}, {"algebra": "witt"}
    sym = {"a": "sym", "b": "sym"}
    out = [
        _axioms("modules", vir, {"module": "Aab", **sym}, cfg),
        _axioms("modules", witt, {"module": "Flambda", "lambda": "sym"}, cfg),
        _axioms("modules", ORW_STD, {"module": "Aab_trivial_ext", **sym}, cfg),
        _axioms("modules", ORW_STD, {"module": "HalfS", **sym}, cfg),
        _witness("modules", vir, {"module": "Aab", "a": "0", "b": "0"}, cfg, "v[0]"),
        _witness("modules", vir, {"module": "Aab", "a": "0", "b": "1"}, cfg, "complement_of_zero"),
        _witness("modules", vir, {"module": "Aab", "a": "1/2", "b": "1/3"}, cfg, "none"),
    ]
    return out


def _suite_lemma21(cfg):
    vir = {"algebra": "vir"}
    grid = list(cfg.omega_grid2)
    return [
        CheckSpec(
            "lemma21",
            "omega_LL:Aab(a=sym,b=sym)",
            "omega_min",
            {"algebra": vir, "module": {"module": "Aab", "a": "sym", "b": "sym"}, "kind": "LL",
             "max_m": cfg.max_m, "grid2": grid, "expect": 3},
        ),
        CheckSpec("lemma21", "finite_difference_oracle:b=sym", "finite_difference_oracle", {"expect": 3}),
        CheckSpec(
            "lemma21",
            "omega_LL:Aab(a=sym,b=0)",
            "omega_min",
            {"algebra": vir, "module": {"module": "Aab", "a": "sym", "b": "0"}, "kind": "LL",
             "max_m": cfg.max_m, "grid2": grid, "expect": 2},
        ),
        CheckSpec("lemma21", "finite_difference_oracle:b=0", "finite_difference_oracle", {"expect": 2, "b_value": "0"}),
    ]


def _suite_lemma31(cfg):
    return [
        CheckSpec(
            "lemma31",
            "omega_GL:HalfS(a=sym,b=sym)",
            "omega_min",
            {"algebra": ORW_STD, "module": {"module": "HalfS", "a": "sym", "b": "sym"}, "kind": "GL",
             "max_m": cfg.max_m, "grid2": list(cfg.omega_grid2), "expect": 3},
        )
    ]


def _suite_lemma32(cfg):
    out = [
        CheckSpec(
            "lemma32",
            "omega_GG:HalfS(a=sym,b=sym)",
            "omega_min",
            {"algebra": ORW_STD, "module": {"module": "HalfS", "a": "sym", "b": "sym"}, "kind": "GG",
             "max_m": cfg.max_m, "grid2": list(cfg.omega_grid2), "expect": 0},
        )
    ]
    for lam in cfg.lambdas:
        out.append(
            CheckSpec("lemma32", f"omega2_identity:lambda={lam}", "omega2_grid",
                      {"lam": lam, "max_m": cfg.pbw_max_m, "bound2": cfg.pbw_bound2})
        )
    out.append(
        CheckSpec("lemma32", "omega3_combination", "omega3_grid", {"max_m": cfg.pbw_max_m, "bound2": cfg.pbw_bound2})
    )
    return out


def _suite_lemma33(cfg):
    out = [
        CheckSpec("lemma33", f"nilpotency:m={m},k={k}", "lemma33", {"m": m, "k": k, "s": cfg.lemma33_s})
        for m in cfg.lemma33_ms
        for k in cfg.lemma33_ks
    ]
    out.append(CheckSpec("lemma33", "sharpness:m=1", "lemma33_sharpness", {"m": 1, "s": cfg.lemma33_s, "k": 3}))
    return out


def _suite_thm34(cfg):
    out = [
        CheckSpec("thm34", "g_trivial:HalfS", "g_trivial_check",
                  {"algebra": ORW_STD, "module": {"module": "HalfS", "a": "sym", "b": "sym"}, "expect": False}),
    ]
    for a, b in cfg.specializations:
        out.append(_witness("thm34", ORW_STD, {"module": "HalfS", "a": a, "b": b}, cfg, "odd_sector"))
    for alg, mod in (
        (ORW_STD, {"module": "Aab_trivial_ext", "a": "sym", "b": "sym"}),
        ({"algebra": "q"}, {"module": "Aabc", "a": "sym", "b": "sym", "c": "sym"}),
        ({"algebra": "bms3"}, {"module": "Aab_trivial_ext", "a": "sym", "b": "sym"}),
    ):
        out.append(CheckSpec("thm34", f"g_trivial:{_label(mod)}/{_label(alg)}", "g_trivial_check",
                             {"algebra": alg, "module": mod, "expect": True}))
    return out


def _suite_section5(cfg):
    q, bms, ns, sw = ({"algebra": n} for n in ("q", "bms3", "ns", "sw22"))
    sym = {"a": "sym", "b": "sym"}
    out = [
        _axioms("section5", q, {"module": "Aabc", **sym, "c": "sym"}, cfg),
        _axioms("section5", bms, {"module": "Aab_trivial_ext", **sym}, cfg, pin=True),
    ]
    for alg in (ns, sw):
        for mod in ("Sab", "PiSab"):
            out.append(_axioms("section5", alg, {"module": mod, **sym}, cfg, pin=True))
    out += [
        _witness("section5", ns, {"module": "Sab", "a": "0", "b": "0"}, cfg, "x[0]", pin=True),
        _witness("section5", ns, {"module": "Sab", "a": "0", "b": "1/2"}, cfg, "any", pin=True),
        _witness("section5", ns, {"module": "Sab", "a": "1/3", "b": "1/5"}, cfg, "none", pin=True),
    ]
    return out


SUITES = {
    "jacobi": _suite_jacobi,
    "modules": _suite_modules,
    "lemma21": _suite_lemma21,
    "lemma31": _suite_lemma31,
    "lemma32": _suite_lemma32,
    "lemma33": _suite_lemma33,
    "thm34": _suite_thm34,
    "section5": _suite_section5,
}


def suite_checks(name: str, cfg: SuiteConfig) -> list[CheckSpec]:
    if name == "all":
        return [c for n in SUITE_NAMES for c in SUITES[n](cfg)]
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; choose from {list(SUITE_NAMES) + ['all']}")
    return SUITES[name](cfg)


def run_check(spec: CheckSpec) -> CheckResult:
    start = time.perf_counter()
    status, payload = CHECKS[spec.fn](**spec.kwargs)
    assert status in STATUSES
    if status == "fail" and not payload:
        payload = {"reason": "check failed"}
    return CheckResult(spec.suite, spec.check_id, status, payload, time.perf_counter() - start)


def run_suite(name: str, cfg: SuiteConfig | None = None) -> dict:
    """Run a suite and return the report as a JSON-ready dict."""
    cfg = cfg or SuiteConfig()
    cfg.validate()
    checks = suite_checks(name, cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run_check, checks))
    else:
        results = [run_check(c) for c in checks]
    order = {n: i for i, n in enumerate(SUITE_NAMES)}
    results.sort(key=lambda r: (order.get(r.suite, len(order)), r.check))
    counts = {s: sum(r.status == s for r in results) for s in STATUSES}
    return {
        "schema": SCHEMA,
        "suite": name,
        "config": cfg.to_dict(),
        "summary": {"total": len(results), **counts},
        "status": "pass" if counts["fail"] == 0 else "fail",
        "results": [r.to_dict(cfg.timings) for r in results],
    }


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
