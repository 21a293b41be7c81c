"""The extended GL_2(Z) acting on the free group F_2 = <X, Y>.

    python demos/gl2z_words.py
"""

from ellassoc.freegroup import (
    PSI, THETA, antidiagonal_transpose, gl2z_matrix, gl2z_tilde_image, verify_presentation,
)

print("Theta =", THETA)
print("Psi   =", PSI)
print("Psi * Theta =", PSI * THETA)
print("Theta^4 =", THETA ** 4, "(conjugation by the commutator (X, Y))")
print()
print(verify_presentation().table())

w = "Theta Psi eps Theta"
endo = gl2z_tilde_image(w)
print(f"\n{w}: matrix {gl2z_matrix(w)}, abelianized image {endo.abelianization()}")
print("abelianization reverses the order:", endo.abelianization() == antidiagonal_transpose(gl2z_matrix(w)))
