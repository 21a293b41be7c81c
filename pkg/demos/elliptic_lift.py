"""Lift an associator to an elliptic associator and move it around the torsor.

    python demos/elliptic_lift.py
"""

from ellassoc.assoc import (
    GRTEllElement, GRTElement, check_elliptic, lift_grt, rational_associator, sigma_lift,
    solve_torsor, torsor_act,
)
from ellassoc.lie import LieSeries
from ellassoc.membership import check_membership, f2, solve_component
from ellassoc.scalars import QQ, mpq

N = 4
e = sigma_lift(rational_associator(N))
print("sigma(1, Phi) in exact arithmetic:")
print(check_elliptic(e).table())
print("abelianization of log A_+, log A_-:", e.abelianization())

# sigma_3 spans grt_1 in degree 3; lift exp(sigma_3 / 2) to GRT_ell
(s3,) = solve_component("grt1", 3).basis[0]
g = GRTElement(LieSeries(f2(N), s3.terms, QQ, N).scale(mpq(1, 2)))
lifted = lift_grt(g)
print("\nlifted element lies in GRT_ell:",
      check_membership("grt_ell_group", (lifted.log_g, lifted.u_plus, lifted.u_minus)).ok)

moved = torsor_act("grt_ell_on_Ell", lifted, e)
print("moved elliptic associator still passes:", check_elliptic(moved).passed)

# solve_torsor recovers the automorphism part once the associator parts agree
x1 = e.log_plus.alg.generator("x1", QQ, N)
y1 = e.log_plus.alg.generator("y1", QQ, N)
base = torsor_act("grt_ell_on_Ell", GRTEllElement(lifted.log_g, x1, y1), e)
up, um = solve_torsor(base, moved)
print("round trip exact:", (up - lifted.u_plus).is_zero() and (um - lifted.u_minus).is_zero())
