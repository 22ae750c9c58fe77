"""``orw`` command line interface.

Every command prints a JSON document.  Exit status is 0 when all checks
pass, 1 when any check fails and 2 on configuration or usage errors.
"""

from __future__ import annotations

import json
import sys

import click

from . import driver, grassmann, pbw, superalg, weightmod
from .pbw import ParseError

DEFAULT_MODULE_ALGEBRA = {
    "Aab": {"algebra": "vir"},
    "Flambda": {"algebra": "witt"},
    "Aabc": {"algebra": "q"},
    "Sab": {"algebra": "ns"},
    "PiSab": {"algebra": "ns"},
    "Aab_trivial_ext": dict(driver.ORW_STD),
    "HalfS": dict(driver.ORW_STD),
}


class ConfigFailure(click.ClickException):
    exit_code = 2


def _emit(payload: dict, passed: bool, out: str | None = None) -> None:
    text = driver.dump_report(payload)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    sys.exit(0 if passed else 1)


def _merge(flags: dict, config: str | None, section: str | None = None) -> dict:
    """Flags overlaid by the config file (a section of it, if present)."""
    merged = {k: v for k, v in flags.items() if v is not None}
    if config:
        try:
            data = driver.load_config_file(config)
        except (OSError, ValueError) as exc:
            raise ConfigFailure(f"cannot read config {config}: {exc}") from None
        if section and isinstance(data.get(section), dict):
            data = data[section]
        merged.update(data)
    return merged


def _algebra_cfg(opts: dict, default: dict | None = None) -> dict:
    if "table" in opts:
        return opts
    name = opts.get("algebra")
    if name is None:
        if default is None:
            raise ConfigFailure("no algebra selected")
        return dict(default)
    cfg = {"algebra": name}
    for key in ("lambda", "epsilon", "convention"):
        if opts.get(key) is not None:
            cfg[key] = opts[key]
    return cfg


def _build_algebra(cfg: dict):
    try:
        return superalg.algebra_from_config(cfg)
    except (KeyError, ValueError) as exc:
        raise ConfigFailure(str(exc)) from None


def _window(text) -> tuple[int, int]:
    try:
        return superalg.parse_window(text) if isinstance(text, str) else tuple(text)
    except ValueError as exc:
        raise ConfigFailure(str(exc)) from None


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Exact verification toolkit for weight modules over graded Lie superalgebras."""


algebra_opts = [
    click.option("--algebra", help="Catalog name: vir, witt, orw, q, bms3, sw22, ns."),
    click.option("--lambda", "lam", help="orw parameter lambda (rational)."),
    click.option("--epsilon", help="orw parameter epsilon (0 or 1/2)."),
    click.option("--convention", help="sw22 variant: printed or corrected."),
]


def with_algebra_opts(fn):
    for opt in reversed(algebra_opts):
        fn = opt(fn)
    return fn


@main.group()
def algebra():
    """Bracket tables."""


@algebra.command("check")
@with_algebra_opts
@click.option("--window", default="-4..4", show_default=True, help="Degree window lo..hi.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False))
def algebra_check(algebra, lam, epsilon, convention, window, config):
    """Super-antisymmetry, super-Jacobi and degree additivity on a window."""
    opts = _merge(
        {"algebra": algebra, "lambda": lam, "epsilon": epsilon, "convention": convention, "window": window},
        config,
        "algebra",
    )
    cfg = _algebra_cfg(opts)
    _build_algebra(cfg)
    status, payload = driver.algebra_validity(cfg, list(_window(opts["window"])))
    _emit({"schema": driver.SCHEMA, "command": "algebra check", "status": status, **payload}, status == "pass")


def _module_setup(opts: dict, pin: bool, window2=(-8, 8)):
    name = opts.get("module")
    if name not in DEFAULT_MODULE_ALGEBRA:
        raise ConfigFailure(f"unknown module {name!r}; choose from {sorted(DEFAULT_MODULE_ALGEBRA)}")
    alg_cfg = _algebra_cfg(opts, DEFAULT_MODULE_ALGEBRA[name])
    A = _build_algebra(alg_cfg)
    mod_cfg = {"module": name, **{k: str(opts[k]) for k in ("a", "b", "c") if opts.get(k) is not None}}
    if opts.get("module_lambda") is not None:
        mod_cfg["lambda"] = str(opts["module_lambda"])
    try:
        spec = weightmod.module_from_config(mod_cfg, A)
    except ValueError as exc:
        raise ConfigFailure(str(exc)) from None
    pin_info = None
    if pin:
        raw = weightmod.axiom_check(spec, window2)
        if not raw.passed:
            try:
                spec, rep = weightmod.pin_sign_convention(spec, window2)
            except weightmod.SignConventionError as exc:
                pin_info = {"error": str(exc), **exc.report.info}
            else:
                pin_info = {k: rep.info[k] for k in ("pinned_twist", "pinned_twist_meaning", "candidates")}
        else:
            pin_info = {"pinned_twist": [], "note": "printed formulas pass as given"}
    return alg_cfg, mod_cfg, spec, pin_info


module_opts = [
    click.option("--module", required=True, help="Aab, Flambda, Aabc, Sab, PiSab, Aab_trivial_ext, HalfS."),
    click.option("--a", help="Rational or 'sym'."),
    click.option("--b", help="Rational or 'sym'."),
    click.option("--c", help="Rational or 'sym' (Aabc only)."),
    click.option("--module-lambda", help="Flambda weight; rational or 'sym'."),
]


def with_module_opts(fn):
    for opt in reversed(module_opts + algebra_opts):
        fn = opt(fn)
    return fn


@main.group()
def module():
    """Weight modules."""


@module.command("check")
@with_module_opts
@click.option("--window", default="-4..4", show_default=True)
@click.option("--pin/--no-pin", default=True, show_default=True, help="Search sign twists if the printed action fails.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False))
def module_check(module, a, b, c, module_lambda, algebra, lam, epsilon, convention, window, pin, config):
    """Module axioms checked symbolically in the basis index and parameters."""
    opts = _merge(
        dict(module=module, a=a, b=b, c=c, module_lambda=module_lambda, algebra=algebra,
             epsilon=epsilon, convention=convention, window=window),
        config,
        "module",
    )
    if lam is not None:
        opts.setdefault("lambda", lam)
    window2 = _window(opts["window"])
    _, _, spec, pin_info = _module_setup(opts, opts.get("pin", pin), window2)
    rep = weightmod.axiom_check(spec, window2)
    payload = {
        "schema": driver.SCHEMA,
        "command": "module check",
        "status": "pass" if rep.passed else "fail",
        "module": spec.describe(),
        "n_checked": rep.n_checked,
        "n_failures": rep.info["n_failures"],
        "failures": rep.failures,
    }
    if pin_info is not None:
        payload["sign_convention"] = pin_info
    _emit(payload, rep.passed)


@main.group()
def omega():
    """Omega annihilation scans."""


@omega.command("scan")
@click.option("--kind", required=True, type=click.Choice(pbw.OMEGA_KINDS))
@with_module_opts
@click.option("--max-m", default=6, show_default=True, type=int)
@click.option("--grid", default="-4..4", show_default=True, help="Degree grid for the operator indices.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False))
def omega_scan(kind, module, a, b, c, module_lambda, algebra, lam, epsilon, convention, max_m, grid, config):
    """Smallest m whose Omega operators annihilate the module."""
    opts = _merge(
        dict(kind=kind, module=module, a=a, b=b, c=c, module_lambda=module_lambda, algebra=algebra,
             epsilon=epsilon, convention=convention, max_m=max_m, grid=grid),
        config,
        "omega",
    )
    if lam is not None:
        opts.setdefault("lambda", lam)
    _, _, spec, _ = _module_setup(opts, pin=False)
    try:
        scan = weightmod.omega_scan(spec, opts["kind"], int(opts["max_m"]), _window(opts["grid"]))
    except ValueError as exc:
        raise ConfigFailure(str(exc)) from None
    ok = scan.min_m is not None and scan.confirmed is not False
    _emit({"schema": driver.SCHEMA, "command": "omega scan", "module": spec.describe(),
           "status": "pass" if ok else "fail", **scan.to_dict()}, ok)


@main.group("pbw")
def pbw_group():
    """Enveloping algebra normal forms."""


@pbw_group.command("eq")
@click.option("--lhs", required=True)
@click.option("--rhs", required=True)
@with_algebra_opts
def pbw_eq(lhs, rhs, algebra, lam, epsilon, convention):
    """Decide equality of two elements after PBW straightening."""
    cfg = _algebra_cfg({"algebra": algebra, "lambda": lam, "epsilon": epsilon, "convention": convention},
                       dict(driver.ORW_STD))
    A = _build_algebra(cfg)
    try:
        x, y = pbw.parse_element(lhs, A), pbw.parse_element(rhs, A)
    except (ParseError, ValueError) as exc:
        raise ConfigFailure(str(exc)) from None
    nx, ny = pbw.normal_form(A, x), pbw.normal_form(A, y)
    equal = nx == ny
    _emit(
        {
            "schema": driver.SCHEMA,
            "command": "pbw eq",
            "algebra": A.describe(),
            "status": "pass" if equal else "fail",
            "equal": equal,
            "lhs_normal_form": str(nx),
            "rhs_normal_form": str(ny),
            "difference": str(pbw.normal_form(A, x - y)),
        },
        equal,
    )


@main.group("grassmann")
def grassmann_group():
    """Exterior algebra ideal membership."""


@grassmann_group.command("lemma33")
@click.option("--m", "m", required=True, type=int)
@click.option("--k", "k", required=True, type=int)
@click.option("--s", "s", required=True, help="Half-odd integer, e.g. 1/2.")
@click.option("--certificates/--no-certificates", default=True, show_default=True)
def grassmann_lemma33(m, k, s, certificates):
    """All (m+2)-fold products of odd letters in a block lie in the Omega ideal."""
    try:
        rep = grassmann.verify_lemma33(m, k, s, with_certificates=certificates)
    except ValueError as exc:
        raise ConfigFailure(str(exc)) from None
    _emit({"schema": driver.SCHEMA, "command": "grassmann lemma33", "status": "pass" if rep.passed else "fail",
           "n_checked": rep.n_checked, "failures": rep.failures, **rep.info}, rep.passed)


@main.command("suite")
@click.argument("name", type=click.Choice(list(driver.SUITE_NAMES) + ["all"]))
@click.option("--out", type=click.Path(dir_okay=False), help="Write the report here instead of stdout.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False))
@click.option("--workers", type=int, help="Worker processes.")
@click.option("--timings/--no-timings", default=None, help="Include wall times (breaks byte-determinism).")
def suite(name, out, config, workers, timings):
    """Run a named check battery and write a JSON report."""
    opts = _merge({"workers": workers, "timings": timings, "out": out}, config, "suite")
    try:
        cfg = driver.SuiteConfig.from_mapping(opts)
    except (driver.ConfigError, ValueError, TypeError) as exc:
        raise ConfigFailure(str(exc)) from None
    report = driver.run_suite(name, cfg)
    _emit(report, report["status"] == "pass", cfg.out)


if __name__ == "__main__":
    main()
