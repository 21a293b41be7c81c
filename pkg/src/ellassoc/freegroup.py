"""Words in the free group F_2 = <X, Y> and the image of the extended GL_2(Z) in End(F_2)^op.

Words are strings of the letters X, Y, x, y; a lowercase letter is the
inverse of its uppercase partner.  The text form separates letters by spaces
("X Y x y") and the empty word is written "1".

Composition order.  An endomorphism is stored as the pair (image of X,
image of Y).  End(F_2)^op multiplies by substitution into the left factor:

    (f * g)(X) = f_+(g_+, g_-),    i.e.  f * g = g o f  as maps.

Worked example with Psi = (X, YX) and Theta = (Y^-1, Y X Y^-1):

    Psi * Theta = (Y^-1,  Y X Y^-1 . Y^-1)  = (y, Y X y y)
    Theta * Psi = ((YX)^-1, YX . X . (YX)^-1) = (x y, Y X X x y) = (x y, Y X y)

The letters Theta, Psi, eps and their inverses theta, psi, eps are mapped by
:func:`gl2z_tilde_image`; eps is an involution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .report import Check, Report

_LETTERS = "XYxy"


def _reduce(letters) -> str:
    out: list[str] = []
    for c in letters:
        if c not in _LETTERS:
            raise ValueError(f"unknown letter {c!r}")
        if out and out[-1] == c.swapcase():
            out.pop()
        else:
            out.append(c)
    return "".join(out)


@dataclass(frozen=True)
class FGWord:
    """A reduced word in F_2."""

    letters: str = ""

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def parse(cls, text: str) -> "FGWord":
        text = text.strip()
        if text in ("", "1"):
            return cls("")
        return cls("".join(text.split()))

    def __str__(self) -> str:
        return " ".join(self.letters) if self.letters else "1"

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "FGWord") -> "FGWord":
        return FGWord(self.letters + other.letters)

    def inverse(self) -> "FGWord":
        return FGWord("".join(c.swapcase() for c in reversed(self.letters)))

    def __pow__(self, n: int) -> "FGWord":
        base = self if n >= 0 else self.inverse()
        return FGWord(base.letters * abs(n))

    def substitute(self, endo: "FGEndo") -> "FGWord":
        """The word with X, Y replaced by the images under ``endo``."""
        ims = {"X": endo.x.letters, "Y": endo.y.letters,
               "x": endo.x.inverse().letters, "y": endo.y.inverse().letters}
        return FGWord("".join(ims[c] for c in self.letters))

    def abelianization(self) -> tuple:
        """Exponent sums (in X, in Y)."""
        return (self.letters.count("X") - self.letters.count("x"),
                self.letters.count("Y") - self.letters.count("y"))

    def cyclic_reduction(self) -> "FGWord":
        w = self.letters
        while len(w) > 1 and w[0] == w[-1].swapcase():
            w = w[1:-1]
        return FGWord(w)

    def is_conjugate(self, other: "FGWord") -> bool:
        """Conjugacy in F_2: cyclic reductions agree up to rotation."""
        a = self.cyclic_reduction().letters
        b = other.cyclic_reduction().letters
        return len(a) == len(b) and (a == b or b in a + a)


X = FGWord("X")
Y = FGWord("Y")


def commutator(g: FGWord, h: FGWord) -> FGWord:
    """(g, h) = g h g^-1 h^-1."""
    return g * h * g.inverse() * h.inverse()


@dataclass(frozen=True)
class FGEndo:
    """Endomorphism X -> x, Y -> y of F_2 with a sign tag lam."""

    x: FGWord
    y: FGWord
    lam: int = 1

    @classmethod
    def identity(cls) -> "FGEndo":
        return cls(X, Y, 1)

    def __mul__(self, other: "FGEndo") -> "FGEndo":
        """Product in End(F_2)^op: substitute ``other`` into ``self``."""
        return FGEndo(self.x.substitute(other), self.y.substitute(other), self.lam * other.lam)

    def __pow__(self, n: int) -> "FGEndo":
        if n < 0:
            raise ValueError("negative powers need an automorphism inverse; use the letter inverses")
        r = FGEndo.identity()
        for _ in range(n):
            r = r * self
        return r

    def __call__(self, w: FGWord) -> FGWord:
        return w.substitute(self)

    def same_map(self, other: "FGEndo") -> bool:
        return self.x == other.x and self.y == other.y

    def abelianization(self) -> tuple:
        """Integer matrix whose columns are the abelianized images of X and Y."""
        (a, c), (b, d) = self.x.abelianization(), self.y.abelianization()
        return ((a, b), (c, d))

    def __str__(self) -> str:
        tag = "" if self.lam == 1 else f", lam={self.lam}"
        return f"(X -> {self.x}, Y -> {self.y}{tag})"


PSI = FGEndo(FGWord("X"), FGWord("YX"))
THETA = FGEndo(FGWord("y"), FGWord("YXy"))
EPS = FGEndo(FGWord("Y"), FGWord("X"), -1)
# inverses, checked in the tests against PSI and THETA
PSI_INV = FGEndo(FGWord("X"), FGWord("Yx"))
THETA_INV = FGEndo(FGWord("XYx"), FGWord("x"))

_GENERATORS = {"Theta": THETA, "theta": THETA_INV, "Psi": PSI, "psi": PSI_INV, "eps": EPS}


def parse_gl2z_word(word) -> list:
    """A word over Theta, Psi, eps (lowercase for inverses) as a list of letter names."""
    if isinstance(word, str):
        word = word.split()
    word = list(word)
    for c in word:
        if c not in _GENERATORS:
            raise ValueError(f"unknown letter {c!r}; expected one of {sorted(_GENERATORS)}")
    return word


def gl2z_tilde_image(word) -> FGEndo:
    """Image in End(F_2)^op of a word such as "Theta Psi eps" (product left to right)."""
    r = FGEndo.identity()
    for c in parse_gl2z_word(word):
        r = r * _GENERATORS[c]
    return r


_MATRICES = {"Theta": ((0, 1), (-1, 0)), "theta": ((0, -1), (1, 0)),
             "Psi": ((1, 1), (0, 1)), "psi": ((1, -1), (0, 1)), "eps": ((0, 1), (1, 0))}


def _mat_mul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2))
                 for i in range(2))


def gl2z_matrix(word) -> tuple:
    """Image in GL_2(Z): Theta -> (0 1; -1 0), Psi -> (1 1; 0 1), eps -> (0 1; 1 0)."""
    r = ((1, 0), (0, 1))
    for c in parse_gl2z_word(word):
        r = _mat_mul(r, _MATRICES[c])
    return r


def antidiagonal_transpose(m) -> tuple:
    """J m^T J with J = (0 1; 1 0).

    This anti-automorphism of GL_2(Z) fixes the three generator matrices.
    Abelianization reverses products taken in End(F_2)^op, so the
    abelianized image of a word w equals antidiagonal_transpose(gl2z_matrix(w)).
    """
    (a, b), (c, d) = m
    return ((d, b), (c, a))


def preserves_commutator_class(endo: FGEndo) -> bool:
    """endo((Y, X)) is conjugate to (Y, X)^lam."""
    c = commutator(Y, X)
    return endo(c).is_conjugate(c ** endo.lam)


def verify_presentation() -> Report:
    """Every defining relation of the extended GL_2(Z), as exact equalities in End(F_2)^op."""
    T, P, E = THETA, PSI, EPS
    one = FGEndo.identity()
    T2, T4 = T ** 2, T ** 4
    rep = Report("gl2z")

    def eq(name, lhs, rhs):
        ok = lhs.same_map(rhs) and lhs.lam == rhs.lam
        rep.add(Check(name, Fraction(0 if ok else 1), 0, exact=True))

    eq("(Theta^2,Psi)=1", T2 * P * (THETA_INV ** 2) * PSI_INV, one)
    eq("(Theta Psi)^3=Theta^4", (T * P) ** 3, T4)
    eq("(eps Psi Theta)^2=1", (E * P * T) ** 2, one)
    eq("(eps Theta)^2=1", (E * T) ** 2, one)
    eq("eps^2=1", E ** 2, one)
    eq("Theta Theta^-1=1", T * THETA_INV, one)
    eq("Psi Psi^-1=1", P * PSI_INV, one)
    c = commutator(X, Y)
    inner = FGEndo(c.inverse() * X * c, c.inverse() * Y * c)
    eq("Theta^4=Ad((X,Y)^-1)", T4, inner)
    rep.values["Theta^4"] = str(T4)
    return rep
