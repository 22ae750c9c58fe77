"""Straightening words in the enveloping algebra and the Omega operators."""

from orw.pbw import build_omega, normal_form, parse_element, verify_omega2_identity, verify_omega3_combination
from orw.superalg import catalog_build

A = catalog_build("orw", {"lambda": "-1/2", "epsilon": "1/2"})

for text in ["L[1] L[0]", "G[3/2] G[1/2]", "G[1/2] G[1/2]", "G[5/2] L[-1] G[1/2]"]:
    e = parse_element(text, A)
    print(f"NF({text}) = {normal_form(A, e)}")

om = build_omega(A, "GG", "5/2", "1/2", 1)
print("Omega_GG(5/2, 1/2; m=1) =", om, "->", normal_form(A, om))

# anticommuting an odd letter through the GL operator leaves a GG combination
for m in range(4):
    rep = verify_omega2_identity(A, m, "3/2", 1, "1/2")
    print(f"m={m}: G_t Omega + Omega G_t identity holds: {rep.passed}")
print("GG difference identity:", verify_omega3_combination(A, 2, "5/2", "3/2", 0, 2).passed)
