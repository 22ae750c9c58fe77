"""Looking for invariant subspaces of truncated weight modules.

A window scan only ever proves reducibility; an empty result is not a
proof of simplicity.
"""

from orw.superalg import catalog_build
from orw.weightmod import WindowModule, g_trivial, module_build, pin_sign_convention, submodule_scan

vir = catalog_build("vir")
ns = catalog_build("ns")
orw = catalog_build("orw", {"lambda": "-1/2", "epsilon": "1/2"})


def show(label, spec):
    found = submodule_scan(WindowModule(spec, (-20, 20), 3))
    smallest = found[0]["basis"] if found else None
    print(f"{label:14s} {len(found)} witnesses; smallest {smallest}")


for a, b in [("0", "0"), ("0", "1"), ("1/2", "1/3")]:
    show(f"A({a},{b})", module_build("Aab", vir, {"a": a, "b": b}))

for a, b in [("0", "0"), ("0", "1/2"), ("1/3", "1/5")]:
    spec, _ = pin_sign_convention(module_build("Sab", ns, {"a": a, "b": b}))
    show(f"S({a},{b})", spec)

halfs = module_build("HalfS", orw, {"a": "1/2", "b": "1/3"})
print("HalfS odd part acts trivially:", g_trivial(halfs))
show("HalfS(1/2,1/3)", halfs)
