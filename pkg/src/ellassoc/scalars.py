"""Coefficient rings.

Two rings are provided. ``QQ`` holds exact rationals (gmpy2 ``mpq``, always
in lowest terms with positive denominator). ``CC`` holds complex numbers at a
fixed working precision in decimal digits, backed by a private mpmath context
so that precision never leaks through global state.

Error bounds for complex computations are carried by the series objects and
by :class:`Ball`, not by the raw numbers.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import gmpy2
import mpmath

mpq = gmpy2.mpq


class Ring:
    """Interface shared by the two coefficient rings."""

    exact: bool
    name: str

    def coerce(self, x: Any) -> Any:  # pragma: no cover - interface
        raise NotImplementedError

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def is_zero(self, x) -> bool:
        return x == 0

    def norm(self, x) -> float:
        return abs(x)

    def eps(self) -> Any:
        return 0


class RationalField(Ring):
    exact = True
    name = "QQ"

    def coerce(self, x):
        if isinstance(x, type(mpq())):
            return x
        if isinstance(x, (int, Fraction)) or isinstance(x, numbers.Rational):
            return mpq(x)
        if isinstance(x, str):
            return mpq(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} to an exact rational")

    def norm(self, x):
        return abs(x)

    def to_json(self, x) -> str:
        x = mpq(x)
        return f"{x.numerator}/{x.denominator}"

    def from_json(self, s: str):
        return mpq(Fraction(s))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class ComplexField(Ring):
    """Complex numbers with ``dps`` significant decimal digits."""

    exact = False

    def __init__(self, dps: int = 50):
        if dps < 5:
            raise ValueError("precision must be at least 5 digits")
        self.dps = int(dps)
        self.ctx = mpmath.MPContext()
        self.ctx.dps = self.dps
        self.name = f"CC{self.dps}"
        self._eps = self.ctx.mpf(10) ** (-self.dps)
        self.pi = self.ctx.pi
        self.I = self.ctx.mpc(0, 1)
        self.two_pi_i = 2 * self.ctx.pi * self.I

    def coerce(self, x):
        ctx = self.ctx
        if isinstance(x, ctx.mpc):
            return x
        if isinstance(x, type(mpq())) or isinstance(x, Fraction):
            return ctx.mpc(ctx.mpf(int(x.numerator)) / int(x.denominator))
        if isinstance(x, (int, float, complex, str)):
            return ctx.mpc(x)
        if isinstance(x, ctx.mpf):
            return ctx.mpc(x)
        # values from another mpmath context
        if hasattr(x, "real") and hasattr(x, "imag"):
            return ctx.mpc(ctx.mpf(x.real), ctx.mpf(x.imag))
        raise TypeError(f"cannot coerce {x!r} to {self.name}")

    def norm(self, x):
        return self.ctx.fabs(x)

    def eps(self):
        return self._eps

    def to_json(self, x, err=0) -> dict:
        x = self.coerce(x)
        return {
            # extra digits make the decimal round trip exact at this precision
            "re": self.ctx.nstr(x.real, self.dps + 10, strip_zeros=False),
            "im": self.ctx.nstr(x.imag, self.dps + 10, strip_zeros=False),
            "prec": self.dps,
            "err": self.ctx.nstr(self.ctx.mpf(err), 5),
        }

    def from_json(self, d: dict):
        return self.ctx.mpc(self.ctx.mpf(d["re"]), self.ctx.mpf(d["im"]))

    def __eq__(self, other):
        return isinstance(other, ComplexField) and other.dps == self.dps

    def __hash__(self):
        return hash(("CC", self.dps))

    def __repr__(self):
        return f"CC({self.dps})"


_CC_CACHE: dict[int, ComplexField] = {}


def CC(dps: int = 50) -> ComplexField:
    """Shared complex field at ``dps`` digits (contexts are immutable in use)."""
    if dps not in _CC_CACHE:
        _CC_CACHE[dps] = ComplexField(dps)
    return _CC_CACHE[dps]


@dataclass(frozen=True)
class Ball:
    """A complex value together with an absolute error bound."""

    value: Any
    err: Any

    def __add__(self, other):
        if isinstance(other, Ball):
            return Ball(self.value + other.value, self.err + other.err)
        return Ball(self.value + other, self.err)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Ball):
            return Ball(self.value - other.value, self.err + other.err)
        return Ball(self.value - other, self.err)

    def __neg__(self):
        return Ball(-self.value, self.err)

    def __mul__(self, other):
        if isinstance(other, Ball):
            v = self.value * other.value
            e = (abs(self.value) * other.err + abs(other.value) * self.err
                 + self.err * other.err)
            return Ball(v, e)
        return Ball(self.value * other, self.err * abs(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Ball):
            d = abs(other.value) - other.err
            if d <= 0:
                raise ZeroDivisionError("ball division by a ball containing 0")
            v = self.value / other.value
            e = (self.err + abs(v) * other.err) / d
            return Ball(v, e)
        return Ball(self.value / other, self.err / abs(other))


def rational_reconstruct(x: float | Any, max_den: int) -> Fraction:
    """Best rational approximation with denominator at most ``max_den``."""
    if hasattr(x, "real") and not isinstance(x, (int, float)):
        x = x.real
    return Fraction(mpmath.nstr(mpmath.mpf(x), 60)).limit_denominator(max_den)
