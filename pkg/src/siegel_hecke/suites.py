"""Named verification suites over the built-in eigenforms.

Each suite is a dict ``name -> check`` where a check maps an expansion to
one or more :class:`RelationReport` objects.  Checks extract their own
eigenvalues, so they can be rerun on corrupted copies of an expansion.
"""

from __future__ import annotations

import random
from functools import partial

from .binform import BinQF, transform
from .errors import OutOfBound
from .generators import e8_lattice, igusa_chi10, theta_series
from .relations import (
    RelationReport,
    eigen_report,
    verify_duality,
    verify_prop32,
    verify_thm11a,
    verify_thm11b,
    verify_thm11c,
    verify_thm12,
)
from .series import FourierExpansion, random_unimodular

E8_BOUND = 9
# classes beyond the window that verify_thm11b needs at (p, r, m) = (5, 1, 1)
E8_EXTRA = (BinQF(25, 0, 25), BinQF(1, 0, 25), BinQF(2, 10, 25))
CHI10_BOUND = 30

PROP32_PARAMS = ((2, 1, 2), (3, 1, 2), (5, 1, 1), (2, 3, 1))  # (p, m, R)
THM11B_PARAMS = ((2, 1, 1), (2, 2, 1), (3, 1, 1), (5, 1, 1))  # (p, r, m)
THM12_PARAMS = ((2, 3), (2, 5))  # (m, n) with p0 = 3


def e8_expansion(bound: int = E8_BOUND) -> FourierExpansion:
    return theta_series(e8_lattice(), bound, extra_classes=E8_EXTRA)


def chi10_expansion(bound: int = CHI10_BOUND) -> FourierExpansion:
    return igusa_chi10(bound)


def duality_samples(f: FourierExpansion, count: int = 100, primes=(2, 3, 5), seed: int = 2024) -> list:
    """(T, p, r) with T a random non-reduced positive definite class whose check fits the bound."""
    rng = random.Random(seed)
    classes = f.classes()
    out = []
    while len(out) < count:
        t = transform(rng.choice(classes), random_unimodular(rng))
        p, r = rng.choice(primes), rng.choice((1, 2))
        if (tuple(t), p, r) in out:
            continue
        try:
            verify_duality(f, t, p, r)
        except OutOfBound:
            continue
        out.append((tuple(t), p, r))
    return out


def suite_prop32(f: FourierExpansion) -> dict:
    checks = {f"prop32 p={p} m={m} R={R}": partial(lambda F, p, m, R: verify_prop32(F, p, m, R), p=p, m=m, R=R)
              for p, m, R in PROP32_PARAMS}
    for t, p, r in duality_samples(f):
        checks[f"duality T={t} p={p} r={r}"] = partial(lambda F, t, p, r: verify_duality(F, t, p, r), t=t, p=p, r=r)
    return checks


def suite_thm11b(f: FourierExpansion) -> dict:
    return {f"thm11b p={p} r={r} m={m}": partial(lambda F, p, r, m: verify_thm11b(F, p, r, m), p=p, r=r, m=m)
            for p, r, m in THM11B_PARAMS}


def suite_thm11c(f: FourierExpansion) -> dict:
    return {"thm11c m=2 n=3": lambda F: verify_thm11c(F, 2, 3)}


def cuspidality(f: FourierExpansion) -> RelationReport:
    nonzero = {n: v for n, v in f.degenerate.items() if v}
    rep = RelationReport("cuspidality", {"bound": f.bound}, lhs=sum(abs(v) for v in nonzero.values()), rhs=0)
    rep.status = "PASS" if not nonzero and f.degenerate else "FAIL"
    return rep


def suite_chi10(f: FourierExpansion) -> dict:
    checks = {"cuspidality": cuspidality}
    for p in (2, 3, 5):
        checks[f"eigen T({p})"] = partial(lambda F, p: eigen_report(F, "tp", p)[1], p=p)
    for p in (2, 3):
        checks[f"thm11a p={p} m=1"] = partial(lambda F, p: verify_thm11a(F, p, 1), p=p)
    return checks


def suite_thm12(f: FourierExpansion) -> dict:
    return {f"thm12 p0=3 m={m} n={n}": partial(lambda F, m, n: verify_thm12(F, 3, m, n), m=m, n=n)
            for m, n in THM12_PARAMS}


def e8_checks(f: FourierExpansion) -> dict:
    """Suites 4 to 6 (they run on the E8 theta series)."""
    return {**suite_prop32(f), **suite_thm11b(f), **suite_thm11c(f)}


def chi10_checks(f: FourierExpansion) -> dict:
    """Suites 7 and 8 (they run on chi10)."""
    return {**suite_chi10(f), **suite_thm12(f)}
