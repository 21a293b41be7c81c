"""Associators, elliptic associators and their symmetries in truncated graded Lie algebras.

Submodules: ``lie`` (free Lie algebras, BCH), ``presentations`` (t_n, t_{1,n}
and insertion maps), ``special`` (delta_2m, e_+-), ``membership`` (grt and
r_ell relations), ``mzv``, ``assoc`` (KZ and elliptic associators, GT/GRT
actions), ``mellin`` (iterated Mellin transforms, theta~ and psi~),
``freegroup`` and ``cli``.
"""

__version__ = "0.1.0"
