"""The KZ associator to degree 5 and the relations it satisfies.

    python demos/kz_associator.py
"""

import mpmath

from ellassoc.assoc import check_associator, phi_kz, rational_associator

N = 5
P = phi_kz(N, precision=30)

# log Phi_KZ starts with -zeta(2)[A,B], then zeta(3) times two degree-3 brackets
print("log Phi_KZ, leading Lyndon coefficients:")
for key in sorted(P.log.terms, key=lambda k: (len(k), k))[:5]:
    word = "".join("AB"[i] for i in key)
    print(f"  {word:6s} {mpmath.nstr(P.log.terms[key].real, 20)}")
print(f"  zeta(2) = {mpmath.nstr(mpmath.zeta(2), 20)}, zeta(3) = {mpmath.nstr(mpmath.zeta(3), 20)}")

print("\nrelations at degree", N)
print(check_associator(P).table())

# with mu = 1 and the degree-3 part removed, the degree-4 truncation has rational coefficients
Q = rational_associator(4)
print("\nrational associator (mu = 1):", {"".join("AB"[i] for i in k): str(c) for k, c in Q.log.terms.items()})
print(check_associator(Q).table())
