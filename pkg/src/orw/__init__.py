"""Exact computer algebra for weight modules over graded Lie superalgebras."""

from .driver import CheckResult, SuiteConfig, run_suite
from .grassmann import ExtElement, ideal_build, member, verify_lemma33
from .pbw import EnvElement, build_omega, element_equal, normal_form, parse_element
from .scalar import Poly, finite_difference, parse_rational
from .superalg import (
    AlgebraPresentation,
    GeneratorRef,
    HalfInt,
    catalog_build,
    check_antisymmetry,
    check_super_jacobi,
    table_algebra,
)
from .weightmod import (
    WindowModule,
    axiom_check,
    g_trivial,
    module_build,
    omega_min_m,
    omega_scan,
    pin_sign_convention,
    submodule_scan,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraPresentation", "CheckResult", "EnvElement", "ExtElement", "GeneratorRef", "HalfInt", "Poly",
    "SuiteConfig", "WindowModule", "axiom_check", "build_omega", "catalog_build", "check_antisymmetry",
    "check_super_jacobi", "element_equal", "finite_difference", "g_trivial", "ideal_build", "member",
    "module_build", "normal_form", "omega_min_m", "omega_scan", "parse_element", "parse_rational",
    "pin_sign_convention", "run_suite", "submodule_scan", "table_algebra", "verify_lemma33",
]
