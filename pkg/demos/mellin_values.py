"""Iterated Mellin transforms of Eisenstein series and the SL_2(Z) relations they satisfy.

    python demos/mellin_values.py
"""

import mpmath

from ellassoc.mellin import (
    check_sl2z_relations, eisenstein_q, l_sharp, l_star, shuffle_check,
)
from ellassoc.scalars import rational_reconstruct

E4, E6 = eisenstein_q(1), eisenstein_q(2)

# L* does not depend on the base point used to split the integral
for t0 in ("0.7", "1.0", "1.3"):
    v = l_star([E4, E6], [3, 5], t0=t0)
    print(f"L*_(E4,E6)(3,5) at t0 = {t0}: {mpmath.nstr(v.value, 25)}")

with mpmath.workdps(40):
    a = l_sharp([1], [0]).value
    print("\nL#_1(1) + 240 zeta(3) =", mpmath.nstr(a + 240 * mpmath.zeta(3), 3))
    q = l_sharp([1], [1]).value / (2j * mpmath.pi) ** 3
    print("L#_1(2) / (2 pi i)^3 =", rational_reconstruct(q.real, 10 ** 4))

print("\ndepth-two shuffle identities:")
print(shuffle_check().table())

print("\ntheta~ and psi~ against the SL_2(Z) relations, weight <= 8:")
print(check_sl2z_relations(8, 30).table())
