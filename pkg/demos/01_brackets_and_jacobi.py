"""Bracket tables of the catalog algebras and their consistency checks.

Run with ``python3 demos/01_brackets_and_jacobi.py``.
"""

from orw.superalg import catalog_build, check_antisymmetry, check_super_jacobi, format_combo, gen

vir = catalog_build("vir")
print("[L_2, L_-2] in Vir:", format_combo(vir.bracket_combo(gen("L", 2), gen("L", -2))))

orw = catalog_build("orw", {"lambda": "-1/2", "epsilon": "1/2"})
print("[L_3, G_1/2] at lambda=-1/2:", format_combo(orw.bracket_combo(gen("L", 3), gen("G", "1/2"))) or "0")

ns = catalog_build("ns")
print("[G_1/2, G_-1/2] in NS:", format_combo(ns.bracket_combo(gen("G", "1/2"), gen("G", "-1/2"))))

window = (-8, 8)  # degrees -4..4, stored doubled
for name, params in [("vir", {}), ("q", {}), ("bms3", {}), ("ns", {}), ("sw22", {}), ("sw22", {"convention": "corrected"})]:
    A = catalog_build(name, params)
    anti, jac = check_antisymmetry(A, window), check_super_jacobi(A, window)
    line = f"{name:5s} {params or ''}: antisymmetry {anti.passed}, Jacobi {jac.passed} ({jac.n_checked} triples)"
    if not jac.passed:
        f = jac.failures[0]
        line += f"; first violation ({f['x']}, {f['y']}, {f['z']}) leaves {f['residual']}"
    print(line)
