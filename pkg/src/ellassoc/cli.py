"""Command-line entry point.

Every command prints one JSON document on stdout and a readable table on
stderr.  Exit codes: 0 all checks pass, 1 some check fails, 2 usage error,
3 cache or file failure.

    ellassoc verify pentagon --degree 4 --precision 30
    ellassoc lsharp --l 1 --k 1
    ellassoc basis --algebra t1_2 --degree 8
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction

import mpmath

from . import cache
from .report import Check, Report

log = logging.getLogger("ellassoc")

VERIFY_NAMES = ("pentagon", "hexagon", "duality", "elliptic-sigma", "delta-rell", "cuspform",
                "gl2z", "lie-rell", "shuffle", "sl2z", "theta-action", "kz-twist")

# defaults per verify verb; --degree means t_{1,2}-degree, weight or relation degree as noted
VERIFY_DEGREE = {"pentagon": 4, "hexagon": 4, "duality": 4, "elliptic-sigma": 4,
                 "delta-rell": 5, "cuspform": 12, "gl2z": 0, "lie-rell": 6, "shuffle": 0,
                 "sl2z": 8, "theta-action": 4, "kz-twist": 4}

_CONFIG_TYPES = {"degree": int, "precision": int, "jobs": int, "out": str, "t0": str,
                 "weight": int, "cache_dir": str, "algebra": str, "kind": str}


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(p, default):
    p.add_argument("--out", default=default, help="also write the JSON report to this file")
    p.add_argument("--jobs", type=int, default=default,
                   help="worker processes for independent values")
    p.add_argument("--config", default=default, help="file of key=value lines used as flag defaults")
    p.add_argument("--cache-dir", dest="cache_dir", default=default,
                   help="cache root (overrides $ELLASSOC_CACHE)")
    p.add_argument("-v", "--verbose", action="store_true", default=default or False)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ellassoc", description=__doc__.splitlines()[0])
    _common(p, None)
    # the same flags are accepted after the command; SUPPRESS keeps the earlier value
    shared = argparse.ArgumentParser(add_help=False)
    _common(shared, argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[shared], **k)

    b = sub.add_parser("basis", help="graded dimensions of t_3, t_4, t_{1,2}, t_{1,3}")
    b.add_argument("--algebra", choices=("t3", "t4", "t1_2", "t1_3"), required=True)
    b.add_argument("--degree", type=int)

    k = sub.add_parser("phikz", help="log of the KZ associator")
    k.add_argument("--degree", type=int)
    k.add_argument("--precision", type=int)

    m = sub.add_parser("mellin", help="iterated Mellin transform of Eisenstein series")
    m.add_argument("--forms", type=_int_list, required=True,
                   help="l_1,l_2,...: the series E_{2l+2}")
    m.add_argument("--args", type=_int_list, required=True, help="s_1,s_2,...")
    m.add_argument("--kind", choices=("L*", "F", "G"))
    m.add_argument("--t0")
    m.add_argument("--precision", type=int)

    s = sub.add_parser("lsharp", help="normalized value L#_{l}(k+1)")
    s.add_argument("--l", type=_int_list, required=True)
    s.add_argument("--k", type=_int_list, required=True, help="string indices, 0 <= k_i <= 2 l_i")
    s.add_argument("--precision", type=int)

    t = sub.add_parser("theta", help="theta~ or psi~ truncated at a weight")
    t.add_argument("--weight", type=int)
    t.add_argument("--precision", type=int)
    t.add_argument("--kind", choices=("theta", "psi"))
    t.add_argument("--conjugate", action="store_true")

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("name", choices=VERIFY_NAMES)
    v.add_argument("--degree", type=int)
    v.add_argument("--precision", type=int)

    c = sub.add_parser("cache", help="inspect or clear the caches")
    c.add_argument("action", choices=("list", "invalidate"))
    c.add_argument("--kind", choices=("mzv", "basis", "mellin"))
    return p


def read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            key, val = (x.strip() for x in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in _CONFIG_TYPES:
                raise UsageError(f"{path}:{n}: unknown key {key!r}")
            try:
                out[key] = _CONFIG_TYPES[key](val)
            except ValueError:
                raise UsageError(f"{path}:{n}: bad value for {key}: {val!r}")
    return out


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------


def _tol(precision: int, fraction: Fraction):
    return mpmath.mpf(10) ** (-int(precision * fraction))


def _exact(name: str, ok: bool) -> Check:
    return Check(name, Fraction(0 if ok else 1), 0, exact=True)


def cmd_basis(a) -> Report:
    from .lyndon import witt_dimension
    from .membership import t12_free
    from .presentations import table

    N = a.degree or 6
    rep = Report(f"basis {a.algebra}")
    if a.algebra == "t1_2":
        L = t12_free(N)
        dims = [len(L.basis(d)) for d in range(1, N + 1)]
        expected = [witt_dimension(2, d) for d in range(1, N + 1)]
    else:
        kind, n = {"t3": ("t", 3), "t4": ("t", 4), "t1_3": ("t_ell", 3)}[a.algebra]
        dims = table(kind, n, N).dims()
        t3 = [witt_dimension(2, d) + (d == 1) for d in range(1, N + 1)]
        expected = {"t3": t3, "t4": [witt_dimension(3, d) + t3[d - 1] for d in range(1, N + 1)],
                    "t1_3": None}[a.algebra]
    rep.values["dims"] = dims
    if expected is not None:
        rep.values["expected"] = expected
        rep.add(_exact("dimensions", dims == expected))
    return rep


def cmd_phikz(a) -> Report:
    from .assoc import check_associator, phi_kz
    from .expr import series_to_json

    N, P = a.degree or 4, a.precision or 30
    assoc = phi_kz(N, P)
    rep = check_associator(assoc, pentagon=False)
    rep.title = "phikz"
    rep.values["log_phi"] = series_to_json(assoc.log)
    return rep


def _mellin_json(v) -> dict:
    return v.to_json()


def cmd_mellin(a) -> Report:
    from .mellin import eisenstein_q, iterated_integral, l_star

    P = a.precision or 30
    forms = [eisenstein_q(l) for l in a.forms]
    kind = a.kind or "L*"
    t0 = a.t0 or "1"
    if kind == "L*":
        v = l_star(forms, a.args, P, t0=t0)
    else:
        v = iterated_integral(kind, forms, a.args, t0=t0, precision=P)
    rep = Report("mellin")
    rep.values["value"] = _mellin_json(v)
    if kind == "L*":
        d = v.check["t0_difference"]
        rep.add(Check("t0_independence", d, v.err + v.err, _tol(P, Fraction(1, 3))))
    return rep


def cmd_lsharp(a) -> Report:
    from .mellin import l_sharp

    v = l_sharp(a.l, a.k, a.precision or 30)
    rep = Report("lsharp")
    rep.values["value"] = _mellin_json(v)
    return rep


def cmd_theta(a) -> Report:
    from .mellin import assemble_series

    W, P = a.weight or 6, a.precision or 30
    ts = assemble_series(a.kind or "theta", W, P, conjugate=a.conjugate, jobs=a.jobs or 1)
    rep = Report(ts.kind)
    rep.add(Check("grouplike", ts.series.grouplike_residual(), ts.series.err,
                  _tol(P, Fraction(1, 5))))
    rep.values["series"] = ts.to_json()
    return rep


def verify(name: str, degree: int | None = None, precision: int | None = None,
           jobs: int = 1) -> Report:
    """Run one named suite and return its report."""
    N = degree if degree is not None else VERIFY_DEGREE[name]
    P = precision or 30
    if name in ("pentagon", "hexagon", "duality"):
        from .assoc import check_associator, phi_kz

        full = check_associator(phi_kz(N, P), pentagon=name == "pentagon")
        rep = Report(name)
        for c in full.checks:
            if c.name in (name, "grouplike"):
                c.tolerance = _tol(P, Fraction(2, 3))
                rep.add(c)
        return rep
    if name == "elliptic-sigma":
        from .assoc import check_elliptic, phi_kz, sigma_lift

        rep = check_elliptic(sigma_lift(phi_kz(N, P)))
        for c in rep.checks:
            if not c.exact:
                c.tolerance = _tol(P, Fraction(3, 5))
        return rep
    if name == "delta-rell":
        from .membership import check_membership
        from .special import ad_t12, delta

        rep = Report(name)
        d0, ad = delta(0, 2, 3), ad_t12(2, 3)
        diff = max((a - b).max_norm() for a, b in zip(d0.images, ad.images))
        rep.add(Check("delta_0 = ad t12", Fraction(diff), 0, exact=True))
        for n in range(0, (N - 1) // 2 + 1):
            D = delta(n, 2, 2 * n + 3)
            m = check_membership("rell_gr", (D.images[0], D.images[1]), M=2 * n + 3)
            rep.add(Check(f"delta_{2 * n} in rell_gr", Fraction(m.max_residual()), 0, exact=True))
        return rep
    if name == "cuspform":
        from .special import delta_quadratic_relations

        rep = Report(name)
        for W in range(6, N + 1, 2):
            q = delta_quadratic_relations(W)
            rep.values[f"relations at weight {W}"] = q.dimension
            if W <= 12:
                rep.add(_exact(f"weight {W}", q.dimension == (1 if W == 12 else 0)))
            if q.proportionality() is not None:
                rep.values[f"[d2,d8]/[d4,d6] at {W}"] = str(q.proportionality())
        return rep
    if name == "gl2z":
        from .freegroup import verify_presentation

        return verify_presentation()
    if name == "lie-rell":
        from .assoc import b3_generators, check_lie_rell

        rep = Report(name)
        for tag, (ap, am) in zip(("u_+", "u_-"), b3_generators(N)):
            for c in check_lie_rell(ap, am).checks:
                c.name = f"{tag} {c.name}"
                rep.add(c)
        return rep
    if name == "shuffle":
        from .mellin import shuffle_check

        return shuffle_check(precision=P)
    if name == "sl2z":
        from .mellin import check_sl2z_relations

        return check_sl2z_relations(N, P, jobs=jobs)
    if name == "theta-action":
        from .mellin import check_theta_action

        return check_theta_action(N, P)
    if name == "kz-twist":
        from .assoc import kz_twist_check

        rep = kz_twist_check(N, P)
        for c in rep.checks:
            c.tolerance = _tol(P, Fraction(3, 5))
        return rep
    raise UsageError(f"unknown verify suite {name!r}")  # pragma: no cover


def cmd_verify(a) -> Report:
    return verify(a.name, a.degree, a.precision, a.jobs or 1)


def cmd_cache(a) -> Report:
    rep = Report("cache")
    kinds = [a.kind] if a.kind else ["mzv", "basis", "mellin"]
    rep.values["root"] = str(cache.root())
    if a.action == "invalidate":
        rep.values["removed"] = {k: cache.invalidate(k) for k in kinds}
    else:
        rep.values["files"] = {k: sorted(p.name for p in (cache.root() / k).glob("*.json"))
                               if (cache.root() / k).exists() else [] for k in kinds}
    return rep


COMMANDS = {"basis": cmd_basis, "phikz": cmd_phikz, "mellin": cmd_mellin, "lsharp": cmd_lsharp,
            "theta": cmd_theta, "verify": cmd_verify, "cache": cmd_cache}


def _cache_versions() -> dict:
    from .mellin import MELLIN_VERSION
    from .mzv import MZV_VERSION
    from .presentations import TABLE_VERSION

    return {"cache": cache.CACHE_VERSION, "mzv": MZV_VERSION, "basis": TABLE_VERSION,
            "mellin": MELLIN_VERSION}


def run(argv) -> tuple[dict, int, str]:
    """(JSON document, exit code, table) for an argument list."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError(parser.format_usage().strip())
    if args.config:
        try:
            conf = read_config(args.config)
        except OSError as exc:
            raise OSError(f"cannot read config: {exc}") from exc
        for key, val in conf.items():
            if getattr(args, key, None) is None and hasattr(args, key):
                setattr(args, key, val)
    if args.cache_dir:
        cache.set_root(args.cache_dir)
    start = time.perf_counter()
    try:
        rep = COMMANDS[args.command](args)
    except (ValueError, ArithmeticError) as exc:
        if isinstance(exc, cache.CacheError):  # pragma: no cover - CacheError is an OSError
            raise
        raise UsageError(f"{type(exc).__name__}: {exc}") from exc
    doc = rep.to_json()
    doc["command"] = list(argv)
    doc["timing_s"] = round(time.perf_counter() - start, 3)
    doc["cache_versions"] = _cache_versions()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
    return doc, 0 if rep.passed else 1, rep.table() if rep.checks else ""


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(level=logging.INFO if "-v" in argv or "--verbose" in argv
                        else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        doc, code, table = run(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ellassoc: I/O failure: {exc}", file=sys.stderr)
        return 3
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    if table:
        print(table, file=sys.stderr)
    print(f"{'PASS' if code == 0 else 'FAIL'} ({doc['timing_s']} s)", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
