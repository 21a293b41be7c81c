"""Residual checks with error bounds, shared by the verifiers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath

# complex-mode residuals pass when below this multiple of the propagated bound
BOUND_FACTOR = 1000


def _num(x) -> float:
    try:
        return float(abs(x))
    except TypeError:  # pragma: no cover - exotic scalar types
        return float(mpmath.mpf(abs(x)))


def _fmt(x) -> str:
    if x is None:
        return "none"
    if isinstance(x, (int,)) or getattr(x, "denominator", None) is not None:
        return str(x)
    return mpmath.nstr(mpmath.mpf(abs(x)) if not isinstance(x, mpmath.mpc) else x, 6)


@dataclass
class Check:
    """One verified relation: its residual, the error bound and the decision.

    A complex-mode check passes when the residual is at most BOUND_FACTOR times
    the propagated bound and, if a tolerance is given, also below it.
    """

    name: str
    residual: object
    bound: object = 0
    tolerance: object = None
    exact: bool = False

    @property
    def passed(self) -> bool:
        if self.exact:
            return self.residual == 0
        r = _num(self.residual)
        if self.tolerance is not None and r >= _num(self.tolerance):
            return False
        return r <= BOUND_FACTOR * _num(self.bound)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "residual": _fmt(self.residual),
            "bound": _fmt(self.bound),
            "tolerance": _fmt(self.tolerance),
            "pass": self.passed,
        }


def check_from_series(name: str, s, tolerance=None) -> Check:
    """Check built from a residual series: max-norm of its coordinates and its error bound."""
    return Check(name, s.max_norm(), s.err, tolerance, exact=s.ring.exact)


@dataclass
class Report:
    """A list of checks; the report passes iff every check passes."""

    title: str
    checks: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name) -> bool:
        return any(c.name == name for c in self.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def residuals(self) -> dict:
        return {c.name: c.residual for c in self.checks}

    def to_json(self) -> dict:
        return {"title": self.title, "pass": self.passed,
                "checks": [c.to_json() for c in self.checks],
                "values": {k: _fmt(v) if not isinstance(v, (str, list, dict)) else v
                           for k, v in self.values.items()}}

    def table(self) -> str:
        w = max([len(c.name) for c in self.checks] + [5])
        lines = [f"{'check':<{w}}  {'residual':>12}  {'bound':>12}  pass"]
        for c in self.checks:
            lines.append(f"{c.name:<{w}}  {_fmt(c.residual):>12}  {_fmt(c.bound):>12}  "
                         f"{'yes' if c.passed else 'NO'}")
        return "\n".join(lines)
