"""Command line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage or input error,
3 out of bound or eigenvalue extraction failure.  Errors are reported on
stderr as one JSON object.  Compute modules are imported after argument
parsing so that ``--threads`` can cap the BLAS thread pools.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _triple(parser_args) -> tuple[int, int, int]:
    a, b, c = parser_args
    return int(a), int(b), int(c)


def _character(text: str):
    """'trivial:N' or 'kronecker:D:N'."""
    from .exact import RealCharacter

    parts = text.split(":")
    try:
        if parts[0] == "trivial" and len(parts) == 2:
            return RealCharacter.trivial(int(parts[1]))
        if parts[0] == "kronecker" and len(parts) == 3:
            return RealCharacter.kronecker_symbol(int(parts[1]), int(parts[2]))
    except ValueError as err:
        raise UsageError(str(err)) from err
    raise UsageError(f"bad character {text!r}; use trivial:N or kronecker:D:N")


def _base(text: str):
    return "2I" if text.upper() == "2I" else int(text)


def _emit(args, data) -> None:
    from .store import dump_json

    if getattr(args, "out", None):
        dump_json(args.out, data)
    else:
        print(json.dumps(data, indent=1, sort_keys=True))


def _cached(args, generator: str, build, **params):
    from .store import CACHE_ENV, ExpansionCache, cache_key

    root = args.cache_dir or os.environ.get(CACHE_ENV)
    if not root:
        return build()
    return ExpansionCache(root).get_or_build(cache_key(generator, **params), build)


# ---------------------------------------------------------------------------
# commands


def cmd_theta(args) -> int:
    from .generators import EvenLattice, e8_lattice, scaled_cubic_lattice, theta_series
    from .store import save_expansion

    extra = [_triple(t.split(",")) for t in args.extra or []]
    if args.builtin:
        lat = e8_lattice() if args.builtin == "e8" else scaled_cubic_lattice()
        gram = lat.gram
    else:
        with open(args.gram, encoding="utf-8") as fh:
            gram = tuple(tuple(int(x) for x in row) for row in json.load(fh))
        lat = EvenLattice(gram, "gram")
    f = _cached(args, "theta", lambda: theta_series(lat, args.bound, extra_classes=extra),
                gram=[list(r) for r in gram], bound=args.bound, extra=sorted(extra))
    save_expansion(args.out, f)
    return EXIT_OK


def cmd_chi10(args) -> int:
    from .generators import igusa_chi10
    from .store import save_expansion

    f = _cached(args, "igusa-chi10", lambda: igusa_chi10(args.bound), bound=args.bound)
    save_expansion(args.out, f)
    return EXIT_OK


def cmd_hecke(args) -> int:
    from .hecke import apply_operator
    from .store import load_expansion_file, save_expansion

    f = load_expansion_file(args.inp)
    save_expansion(args.out, apply_operator(f, args.op, args.p).expansion)
    return EXIT_OK


def cmd_eigen(args) -> int:
    from .relations import eigen_report
    from .store import load_expansion_file

    f = load_expansion_file(args.inp)
    value, report = eigen_report(f, args.op, args.p)
    _emit(args, report.to_json())
    return EXIT_OK if value is not None else EXIT_BOUND


def cmd_verify(args) -> int:
    from . import relations as rel
    from .store import load_expansion_file

    f = load_expansion_file(args.inp)
    need = {"thm11a": ("p",), "thm11b": ("p", "r"), "prop33": ("p", "r"), "prop32": ("p", "r"),
            "thm11c": ("n",), "thm12": ("p0", "n")}[args.identity]
    missing = [k for k in need if getattr(args, k) is None]
    if missing:
        raise UsageError(f"--{' --'.join(missing)} required for {args.identity}")
    m = args.m
    if args.identity == "thm11a":
        reports = rel.verify_thm11a(f, args.p, m)
    elif args.identity == "thm11b":
        reports = [rel.verify_thm11b(f, args.p, args.r, m)]
    elif args.identity == "prop33":
        reports = [rel.verify_prop33(f, args.p, args.r, m)]
    elif args.identity == "prop32":
        reports = rel.verify_prop32(f, args.p, m, args.r, base=_base(args.base))
    elif args.identity == "thm11c":
        reports = [rel.verify_thm11c(f, m, args.n)]
    else:
        reports = [rel.verify_thm12(f, args.p0, m, args.n)]
    data = {"identity": args.identity, "passed": all(r.passed for r in reports),
            "reports": [r.to_json() for r in reports]}
    if args.report:
        from .store import dump_json

        dump_json(args.report, data)
    print(json.dumps(data, indent=1, sort_keys=True))
    return EXIT_OK if data["passed"] else EXIT_FAIL


def cmd_reduce(args) -> int:
    from .binform import reduce

    key, g = reduce(_triple(args.form), proper=args.proper)
    print(*key.form)
    print(json.dumps({"form": list(key.form), "proper": key.proper, "transform": [list(r) for r in g]}))
    return EXIT_OK


def cmd_sublattices(args) -> int:
    from .lattice import sublattices_1_p, superlattices_1overp_1

    t = _triple(args.form)
    data = {"children": [{"tag": s.tag, "basis": [list(r) for r in s.basis], "child": list(s.child)}
                         for s in sublattices_1_p(t, args.p)],
            "integral_superlattices": [list(s) for s in superlattices_1overp_1(t, args.p)]}
    _emit(args, data)
    return EXIT_OK


def cmd_alpha(args) -> int:
    from .lattice import alpha

    print(alpha(_triple(args.form), args.p))
    return EXIT_OK


def cmd_eta_kappa(args) -> int:
    from fractions import Fraction

    from .relations import build_eta_kappa

    lam1 = None if args.lam1 is None else Fraction(args.lam1)
    table = build_eta_kappa(args.p, args.R, args.k, _character(args.chi), Fraction(args.lam), lam1, _base(args.base))
    _emit(args, table.to_json())
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="siegel-hecke", description="Hecke operators on degree-2 Siegel modular forms.")
    parser.add_argument("--threads", type=int, help="cap BLAS/OpenMP threads")
    parser.add_argument("--cache-dir", help="expansion cache (default: $SIEGEL_HECKE_CACHE)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("theta", help="theta series of an even lattice")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=("e8", "2i8"))
    src.add_argument("--gram", help="JSON file holding the Gram matrix")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--extra", action="append", help="extra class a,b,c beyond the bound (repeatable)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("igusa-chi10", help="the Igusa cusp form chi10")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_chi10)

    p = sub.add_parser("hecke", help="apply a Hecke operator")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--op", choices=("tp", "t1tilde", "t1", "t2level"), required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_hecke)

    p = sub.add_parser("eigen", help="extract an eigenvalue")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--op", choices=("tp", "t1tilde"), required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("verify", help="check a coefficient relation")
    p.add_argument("--identity", choices=("thm11a", "thm11b", "thm11c", "prop32", "prop33", "thm12"), required=True)
    p.add_argument("--in", dest="inp", required=True)
    for name in ("p", "r", "n", "p0"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--base", default="2I", help="2I or an odd prime p0 (prop32 only)")
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", help="reduce a binary form")
    p.add_argument("form", nargs=3, metavar="N", help="form coefficients a b c")
    p.add_argument("--proper", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("sublattices", help="index-p sublattices and integral superlattices")
    p.add_argument("form", nargs=3, metavar="N", help="form coefficients a b c")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sublattices)

    p = sub.add_parser("alpha", help="isotropic line count mod p")
    p.add_argument("form", nargs=3, metavar="N", help="form coefficients a b c")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("eta-kappa", help="eta and kappa tables")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--chi", default="trivial:1", help="trivial:N or kronecker:D:N")
    p.add_argument("--lam", required=True)
    p.add_argument("--lam1")
    p.add_argument("--base", default="2I")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eta_kappa)
    return parser


def _fail(code: int, err: BaseException) -> int:
    print(json.dumps({"error": type(err).__name__, "message": str(err), "exit": code}), file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.threads is not None:
            if args.threads < 1:
                raise UsageError("--threads must be positive")
            for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
                os.environ[var] = str(args.threads)
        from .errors import BoundTooSmall, NotEigenform, OutOfBound, SiegelHeckeError

        try:
            return args.func(args)
        except (OutOfBound, BoundTooSmall, NotEigenform) as err:
            return _fail(EXIT_BOUND, err)
        except (SiegelHeckeError, ValueError, OSError) as err:
            return _fail(EXIT_USAGE, err)
    except UsageError as err:
        return _fail(EXIT_USAGE, err)


if __name__ == "__main__":
    sys.exit(main())
