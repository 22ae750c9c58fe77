"""Products of odd generators modulo the GG relations in the exterior algebra."""

import json

from orw.grassmann import certificate_json, degree_threshold, ext_monomial, ideal_build, member, verify_lemma33

ideal = ideal_build((-1, 7), 1, 3)
x = ext_monomial("1/2", "3/2", "5/2")
res = member(x, ideal)
print(f"{x} in ideal: {res.is_member}")
print(json.dumps(certificate_json(res.certificate), indent=1))

for m, k in [(1, 1), (1, 3), (2, 2)]:
    rep = verify_lemma33(m, k, "1/2")
    print(f"m={m} k={k}: {rep.n_checked} products of degree {m + 2}, all members: {rep.passed}")

# non-member counts per degree on the window -9/2..9/2
for m in range(4):
    print(f"m={m}:", degree_threshold((-9, 9), m, m + 2))
