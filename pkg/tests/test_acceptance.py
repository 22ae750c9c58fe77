"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line (shown in the terminal summary)
before asserting, so a failing criterion still reports what it found.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction
from itertools import combinations

import pytest

from orw.grassmann import ExtElement, expand_certificate, ideal_build, member, verify_lemma33
from orw.pbw import EnvElement, normal_form, verify_omega2_identity, verify_omega3_combination
from orw.scalar import Poly, finite_difference
from orw.superalg import HalfInt, algebra_from_config, catalog_build, check_antisymmetry, check_super_jacobi
from orw.weightmod import (
    WindowModule,
    axiom_check,
    g_trivial,
    module_build,
    omega_scan,
    pin_sign_convention,
    submodule_scan,
    symbolic_act,
)

WINDOW = (-8, 8)  # degrees -4..4
SYM = {"a": "sym", "b": "sym"}
ORW = catalog_build("orw", {"lambda": "-1/2", "epsilon": "1/2"})


def test_algebra_validity(record_criterion):
    configs = [{"algebra": "vir"}, {"algebra": "witt"}]
    configs += [
        {"algebra": "orw", "lambda": lam, "epsilon": eps}
        for lam in ("-1/2", "0", "1", "-1")
        for eps in ("0", "1/2")
    ]
    configs += [{"algebra": n} for n in ("q", "bms3", "sw22", "ns")]
    start = time.perf_counter()
    failing, printed_sw22 = [], None
    for cfg in configs:
        A = algebra_from_config(cfg)
        anti, jac = check_antisymmetry(A, WINDOW), check_super_jacobi(A, WINDOW)
        if cfg["algebra"] == "sw22":
            printed_sw22 = (anti, jac)
        elif not (anti.passed and jac.passed):
            failing.append(A.name)
    corrected = algebra_from_config({"algebra": "sw22", "convention": "corrected"})
    corrected_ok = check_antisymmetry(corrected, WINDOW).passed and check_super_jacobi(corrected, WINDOW).passed
    elapsed = time.perf_counter() - start

    anti, jac = printed_sw22
    # a printed-table failure must be reported with its violating triples
    sw22_reported = jac.passed or all({"x", "y", "z", "residual"} <= set(f) for f in jac.failures) and jac.failures
    triple = jac.failures[0] if jac.failures else None
    detail = (
        f"{len(configs)} presentations, {elapsed:.1f}s; sw22 as printed: "
        + ("pass" if jac.passed else f"{jac.info['n_failures']} Jacobi violations, e.g. "
           f"({triple['x']}, {triple['y']}, {triple['z']}) -> {triple['residual']}")
        + f"; sw22 corrected: {'pass' if corrected_ok else 'fail'}"
    )
    ok = not failing and anti.passed and bool(sw22_reported) and corrected_ok and elapsed < 10
    record_criterion(1, "algebra validity", ok, detail if not failing else f"failing: {failing}; {detail}")
    assert ok


def test_module_axioms(record_criterion):
    vir, witt, q, bms, ns, sw = (catalog_build(n) for n in ("vir", "witt", "q", "bms3", "ns", "sw22"))
    cases = [
        ("Aab", vir, SYM, False),
        ("Flambda", witt, {"lambda": "sym"}, False),
        ("Aab_trivial_ext", ORW, SYM, False),
        ("Aab_trivial_ext", bms, SYM, True),
        ("Aabc", q, {**SYM, "c": "sym"}, False),
        ("Sab", ns, SYM, True),
        ("PiSab", ns, SYM, True),
        ("Sab", sw, SYM, True),
        ("PiSab", sw, SYM, True),
        ("HalfS", ORW, SYM, False),
    ]
    failing, pins = [], []
    for name, A, params, pin in cases:
        spec = module_build(name, A, params)
        if pin:
            spec, rep = pin_sign_convention(spec, WINDOW)
            pins.append(f"{name}/{A.name}={rep.info['pinned_twist'] or 'identity'}")
        if not axiom_check(spec, WINDOW).passed:
            failing.append(f"{name}/{A.name}")
    ok = not failing
    record_criterion(2, "module axioms", ok, f"{len(cases)} modules; pinned {', '.join(pins)}; failing {failing}")
    assert ok


def test_vir_omega_order(record_criterion):
    vir = catalog_build("vir")
    scan = omega_scan(module_build("Aab", vir, SYM), "LL", 6)
    # independent route: coefficient on v_j is quadratic in the summation index
    a, b, j, k, s, i = (Poly.var(n) for n in ("a", "b", "j", "k", "s", "i"))
    coef = (a + j + b * (s + i)) * (a + j + s + i + b * (k - i))
    oracle = next(m for m in range(7) if finite_difference(coef, "i", m).is_zero())
    second = finite_difference(coef, "i", 2)
    degenerate = omega_scan(module_build("Aab", vir, {"a": "sym", "b": "0"}), "LL", 6).min_m
    ok = (
        scan.min_m == 3
        and scan.confirmed is True
        and bool(scan.residuals.get(2))
        and not second.is_zero()
        and oracle == 3
        and degenerate == 2
    )
    detail = f"min_m={scan.min_m}, oracle={oracle}, m=2 residual {scan.residuals.get(2)}, b=0 -> {degenerate}"
    record_criterion(3, "Virasoro-type Omega order", ok, detail)
    assert ok


def test_odd_omega_orders_and_identities(record_criterion):
    spec = module_build("HalfS", ORW, SYM)
    gl, gg = omega_scan(spec, "GL", 6), omega_scan(spec, "GG", 6)
    odd = [d for d in range(-8, 9) if d % 2]
    even = [d for d in range(-8, 9) if d % 2 == 0]
    n2 = n3 = 0
    bad = []
    for m in range(5):
        for r2 in odd:
            for s2 in even:
                for t2 in odd:
                    n2 += 1
                    if not verify_omega2_identity(ORW, m, HalfInt(r2), HalfInt(s2), HalfInt(t2)).passed:
                        bad.append(("omega2", m, r2, s2, t2))
            for u2 in odd:
                for s1, s2 in combinations(even, 2):
                    n3 += 1
                    if not verify_omega3_combination(ORW, m, HalfInt(r2), HalfInt(u2), HalfInt(s1), HalfInt(s2)).passed:
                        bad.append(("omega3", m, r2, u2, s1, s2))
    ok = gl.min_m == 3 and gg.min_m == 0 and not bad
    detail = f"GL min_m={gl.min_m}, GG min_m={gg.min_m}, {n2} + {n3} PBW identities, {len(bad)} failures"
    record_criterion(4, "odd Omega orders and PBW identities", ok, detail)
    assert ok


def test_exterior_nilpotency(record_criterion):
    failing = []
    n = 0
    for m in (0, 1, 2):
        for k in (1, 2, 3, 4):
            rep = verify_lemma33(m, k, "1/2", with_certificates=True)
            n += rep.n_checked
            if not rep.passed:
                failing.append((m, k))
    # certificates expand exactly, re-checked from scratch on one window
    ideal = ideal_build((-3, 11), 1, 3)
    certs_ok = True
    for mono in combinations((1, 3, 5, 7, 9), 3):
        res = member(ExtElement({mono: 1}), ideal)
        certs_ok &= res.is_member and expand_certificate(res.certificate) == ExtElement({mono: 1})
    # sharpness at m = 1: look for a non-member of degree m + 1 = 2
    witness = None
    for window2 in ((-3, 11), (-9, 9), (1, 15)):
        ideal = ideal_build(window2, 1, 2)
        idx = ideal.indices2
        for mono in combinations(idx, 2):
            if not member(ExtElement({mono: 1}), ideal).is_member:
                witness = (window2, mono)
                break
        if witness:
            break
    sharp = witness is not None
    ok = not failing and certs_ok and sharp
    detail = (
        f"{n} monomials over (m,k) grid, failing {failing}; certificates exact: {certs_ok}; "
        f"m=1 degree-2 non-member: {witness if sharp else 'none (every degree-2 monomial lies in the ideal)'}"
    )
    record_criterion(5, "exterior nilpotency", ok, detail)
    assert ok


def test_odd_part_acts_trivially(record_criterion):
    halfs = module_build("HalfS", ORW, SYM)
    nontrivial = not g_trivial(halfs)
    found = []
    for a, b in (("0", "0"), ("1/2", "1/3"), ("2", "-3/7")):
        spec = module_build("HalfS", ORW, {"a": a, "b": b})
        wm = WindowModule(spec, (-20, 20), 3)
        odd = [f"{sec}[{i}]" for sec, i in wm.basis(wm.inner_window2) if sec == "y"]
        found.append(any(w["basis"] == odd for w in submodule_scan(wm)))
    candidates = [
        module_build("Aab_trivial_ext", ORW, SYM),
        module_build("Aabc", catalog_build("q"), {**SYM, "c": "sym"}),
        module_build("Aab_trivial_ext", catalog_build("bms3"), SYM),
    ]
    trivial = [g_trivial(s) for s in candidates]
    ok = nontrivial and all(found) and all(trivial)
    detail = f"HalfS odd action nonzero: {nontrivial}; odd-sector witness at 3 points: {found}; trivial: {trivial}"
    record_criterion(6, "odd part acts trivially on simple candidates", ok, detail)
    assert ok


def _witnesses(name, A, params, pin=False):
    spec = module_build(name, A, params)
    if pin:
        spec, _ = pin_sign_convention(spec, WINDOW)
    wm = WindowModule(spec, (-20, 20), 3)
    return wm, submodule_scan(wm)


def test_simplicity_boundary(record_criterion):
    vir, ns = catalog_build("vir"), catalog_build("ns")
    results = {}
    _, w = _witnesses("Aab", vir, {"a": "0", "b": "0"})
    results["A(0,0) span{v0}"] = any(x["basis"] == ["v[0]"] for x in w)
    wm, w = _witnesses("Aab", vir, {"a": "0", "b": "1"})
    rest = [f"v[{i}]" for _, i in wm.basis(wm.inner_window2) if i.doubled]
    results["A(0,1) complement of v0"] = any(x["basis"] == rest for x in w)
    _, w = _witnesses("Sab", ns, {"a": "0", "b": "0"}, pin=True)
    results["S(0,0) witness"] = bool(w)
    _, w = _witnesses("Sab", ns, {"a": "0", "b": "1/2"}, pin=True)
    results["S(0,1/2) witness"] = bool(w)
    _, w = _witnesses("Aab", vir, {"a": "1/2", "b": "1/3"})
    results["A(1/2,1/3) none"] = not w
    _, w = _witnesses("Sab", ns, {"a": "1/3", "b": "1/5"}, pin=True)
    results["S(1/3,1/5) none"] = not w
    ok = all(results.values())
    detail = ", ".join(f"{k}: {'ok' if v else 'MISSING'}" for k, v in results.items())
    record_criterion(7, "simplicity boundary witnesses", ok, detail)
    assert ok


def _random_element(rng, A, letters):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        word = tuple(rng.choice(letters) for _ in range(rng.randint(1, 4)))
        terms[word] = terms.get(word, 0) + Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return EnvElement(A, terms)


def test_pbw_soundness(record_criterion):
    start = time.perf_counter()
    algebras = [
        catalog_build("vir"),
        ORW,
        catalog_build("ns"),
        catalog_build("q"),
        catalog_build("bms3"),
        catalog_build("sw22", {"convention": "corrected"}),
    ]
    problems = []
    n_pairs = 0
    for A in algebras:
        gens = A.generators(WINDOW)
        for x in gens:
            for y in gens:
                n_pairs += 1
                xy = EnvElement.word(A, (x, y))
                nxy = normal_form(A, xy)
                if normal_form(A, nxy) != nxy:
                    problems.append(("idempotence", A.name, str(x), str(y)))
                sign = -1 if A.parity(x) * A.parity(y) else 1
                rel = xy - EnvElement.word(A, (y, x)).scale(sign)
                br = EnvElement(A, {(g,): c for g, c in A.bracket_combo(x, y).items()})
                if normal_form(A, rel - br):
                    problems.append(("relation", A.name, str(x), str(y)))
            if A.parity(x):
                half = EnvElement(A, {(g,): c / 2 for g, c in A.bracket_combo(x, x).items()})
                if normal_form(A, EnvElement.word(A, (x, x)) - half):
                    problems.append(("odd square", A.name, str(x)))
    rng = random.Random(20240611)
    halfs = module_build("HalfS", ORW, SYM)
    letters = [g for g in ORW.generators(WINDOW) if not ORW.is_central(g)]
    n_random = 1000
    for _ in range(n_random):
        x, y = _random_element(rng, ORW, letters), _random_element(rng, ORW, letters)
        c = Fraction(rng.randint(-3, 3), rng.randint(1, 4))
        nx, ny = normal_form(ORW, x), normal_form(ORW, y)
        if normal_form(ORW, nx) != nx or normal_form(ORW, x + y.scale(c)) != nx + ny.scale(c):
            problems.append(("random", str(x)))
        elif symbolic_act(halfs, x, "x") != symbolic_act(halfs, nx, "x"):
            problems.append(("action", str(x)))
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 30
    detail = f"{n_pairs} generator pairs over {len(algebras)} algebras, {n_random} random elements, {elapsed:.1f}s, {len(problems)} problems"
    record_criterion(8, "PBW engine soundness", ok, detail)
    assert ok, problems[:5]


def test_determinism(record_criterion, tmp_path):
    outs = []
    for n in (1, 2):
        path = tmp_path / f"report{n}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "orw.cli", "suite", "all", "--out", str(path)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode in (0, 1), proc.stderr
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    record_criterion(9, "deterministic suite report", ok, f"{len(outs[0])} bytes, identical: {outs[0] == outs[1]}")
    assert ok
