"""Module axioms, sign-convention pinning and Omega annihilation orders."""

from orw.superalg import catalog_build
from orw.weightmod import axiom_check, module_build, omega_scan, pin_sign_convention

window = (-8, 8)
vir = catalog_build("vir")
aab = module_build("Aab", vir, {"a": "sym", "b": "sym"})
print("Aab over Vir, axioms:", axiom_check(aab, window).passed)

scan = omega_scan(aab, "LL", 6)
print("smallest m killing Aab:", scan.min_m)
print("  residual at m=2:", scan.residuals[2])

ns = catalog_build("ns")
sab = module_build("Sab", ns, {"a": "sym", "b": "sym"})
print("Sab over NS as printed:", axiom_check(sab, window).passed)
pinned, rep = pin_sign_convention(sab, window)
print("  pinned twist:", rep.info["pinned_twist"], "->", axiom_check(pinned, window).passed)

orw = catalog_build("orw", {"lambda": "-1/2", "epsilon": "1/2"})
halfs = module_build("HalfS", orw, {"a": "sym", "b": "sym"})
for kind in ("GL", "GG"):
    print(f"HalfS {kind}: min m = {omega_scan(halfs, kind, 6).min_m}")
