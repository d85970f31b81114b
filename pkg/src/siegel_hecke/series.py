"""Truncated Fourier expansions of degree-2 Siegel modular forms.

Coefficients are stored on GL2(Z)-reduced triples (0 <= b <= a <= c) with
c <= bound, plus an optional sparse table ``extra`` of individually
computed classes beyond the bound.  Any other positive definite index is reached through the
transformation law a(G^t T G) = chi(det G) (det G)^k a(T); when
chi(-1)(-1)^k = -1 the expansion is *oriented* and the sign matters.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Optional

from .binform import BinQF, Matrix, det, has_improper_automorphism, reduce, reduced_classes, transform
from .errors import OutOfBound
from .exact import RealCharacter, char_eval
from .lattice import scale


@dataclass
class FourierExpansion:
    weight: int
    level: int
    character: RealCharacter
    bound: int
    coeffs: dict[BinQF, int]
    degenerate: dict[int, int] = field(default_factory=dict)
    extra: dict[BinQF, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("bound must be nonnegative")
        self.coeffs = {BinQF(*k): int(v) for k, v in self.coeffs.items()}
        self.degenerate = {int(k): int(v) for k, v in self.degenerate.items()}
        missing = [t for t in reduced_classes(self.bound) if t not in self.coeffs]
        if missing:
            raise ValueError(f"{len(missing)} reduced classes missing, e.g. {tuple(missing[0])}")
        extra = [t for t in self.coeffs if not _is_key(t) or t.c > self.bound]
        if extra:
            raise ValueError(f"non-canonical or out-of-bound key {tuple(extra[0])}")
        self.extra = {BinQF(*k): int(v) for k, v in self.extra.items()}
        bad = [t for t in self.extra if not _is_key(t) or t.c <= self.bound]
        if bad:
            raise ValueError(f"extra class {tuple(bad[0])} must be reduced and beyond the bound")

    @property
    def oriented(self) -> bool:
        return self.parity == -1

    @property
    def parity(self) -> int:
        """chi(-1) (-1)^k."""
        return char_eval(self.character, -1) * (-1) ** self.weight

    def sign(self, g: Matrix) -> int:
        d = det(g)
        return char_eval(self.character, d) * d ** self.weight

    def classes(self) -> list[BinQF]:
        return reduced_classes(self.bound)

    def items(self) -> Iterator[tuple[BinQF, int]]:
        for t in self.classes():
            yield t, self.coeffs[t]

    def like(self, coeffs: Mapping, bound: int, degenerate: Optional[Mapping] = None) -> "FourierExpansion":
        """A new expansion with the same weight, level and character."""
        return FourierExpansion(self.weight, self.level, self.character, bound, dict(coeffs), dict(degenerate or {}))

    def __add__(self, other: "FourierExpansion") -> "FourierExpansion":
        _check_compatible(self, other)
        b = min(self.bound, other.bound)
        return self.like({t: self.coeffs[t] + other.coeffs[t] for t in reduced_classes(b)}, b)

    def __sub__(self, other: "FourierExpansion") -> "FourierExpansion":
        return self + other.scaled(-1)

    def scaled(self, s: int) -> "FourierExpansion":
        f = self.like({t: s * v for t, v in self.coeffs.items()}, self.bound,
                      {n: s * v for n, v in self.degenerate.items()})
        f.extra = {t: s * v for t, v in self.extra.items()}
        return f

    def restrict(self, bound: int) -> "FourierExpansion":
        if bound > self.bound:
            raise OutOfBound(f"cannot restrict bound {self.bound} up to {bound}")
        return self.like({t: self.coeffs[t] for t in reduced_classes(bound)}, bound)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FourierExpansion):
            return NotImplemented
        return (self.weight, self.level, self.character, self.bound, self.coeffs, self.degenerate, self.extra) == (
            other.weight, other.level, other.character, other.bound, other.coeffs, other.degenerate, other.extra)

    # serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "level": self.level,
            "character": self.character.to_json(),
            "oriented": self.oriented,
            "bound": self.bound,
            "coeffs": [[t.a, t.b, t.c, str(v)] for t, v in self.items()],
            "degenerate": [[n, str(v)] for n, v in sorted(self.degenerate.items())],
            "extra": [[t.a, t.b, t.c, str(v)] for t, v in sorted(self.extra.items(), key=lambda kv: (kv[0].c, kv[0].a, kv[0].b))],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FourierExpansion":
        f = cls(
            int(data["weight"]),
            int(data["level"]),
            RealCharacter.from_json(data["character"]),
            int(data["bound"]),
            {BinQF(int(a), int(b), int(c)): int(v) for a, b, c, v in data["coeffs"]},
            {int(n): int(v) for n, v in data.get("degenerate", [])},
            {BinQF(int(a), int(b), int(c)): int(v) for a, b, c, v in data.get("extra", [])},
        )
        if "oriented" in data and bool(data["oriented"]) != f.oriented:
            raise ValueError("orientation flag disagrees with weight and character")
        return f

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def loads(cls, text: str) -> "FourierExpansion":
        return cls.from_json(json.loads(text))

    def checksum(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()


def _is_key(t: BinQF) -> bool:
    return 0 <= t.b <= t.a <= t.c and t.a > 0


def _check_compatible(f: FourierExpansion, g: FourierExpansion) -> None:
    if (f.weight, f.level, f.character) != (g.weight, g.level, g.character):
        raise ValueError("expansions have different weight, level or character")


def coeff(f: FourierExpansion, t) -> int:
    """a(T) for any positive definite T whose reduced class lies in the bound."""
    key, g = reduce(t)
    if key.form.c > f.bound:
        if key.form in f.extra:
            return f.sign(g) * f.extra[key.form]
        raise OutOfBound(f"class {tuple(key.form)} of {tuple(t)} exceeds bound {f.bound}")
    # G^t T G = R, so a(R) = s a(T) with s = +-1
    return f.sign(g) * f.coeffs[key.form]


def coeff_scaled(f: FourierExpansion, t, num: int, den: int = 1) -> int:
    """Coefficient of the lattice scaled by num/den; 0 if not even integral."""
    s = scale(t, num, den)
    return 0 if s is None else coeff(f, s)


# ---------------------------------------------------------------------------
# consistency checks


@dataclass
class ConsistencyReport:
    identity: str
    passed: bool
    checked: int
    skipped: int
    failures: list[dict]

    def to_json(self) -> dict:
        return {"identity": self.identity, "passed": self.passed, "checked": self.checked,
                "skipped": self.skipped, "failures": self.failures}


def random_unimodular(rng: random.Random, steps: int = 4) -> Matrix:
    """A random element of GL2(Z) as a short word in the standard generators."""
    gens = [((1, 1), (0, 1)), ((1, -1), (0, 1)), ((1, 0), (1, 1)), ((1, 0), (-1, 1)),
            ((0, -1), (1, 0)), ((1, 0), (0, -1))]
    from .binform import matmul
    g = ((1, 0), (0, 1))
    for _ in range(steps):
        g = matmul(g, rng.choice(gens))
    return g


def assert_class_consistency(
    f: FourierExpansion,
    evaluator: Optional[Callable[[BinQF], Optional[int]]] = None,
    samples: int = 3,
    seed: int = 0,
    classes: Optional[Iterable[BinQF]] = None,
) -> ConsistencyReport:
    """Check the stored data against the transformation law.

    Structural checks always run: ambiguous classes must store 0 in an
    oriented expansion.  When ``evaluator`` can compute a(T) for arbitrary
    T (returning None when it cannot), each class is also compared with
    the raw value at ``samples`` random equivalent matrices.
    """
    rng = random.Random(seed)
    failures = []
    checked = skipped = 0
    for t in (f.classes() if classes is None else classes):
        stored = f.coeffs[t]
        if f.oriented and has_improper_automorphism(t):
            checked += 1
            if stored:
                failures.append({"class": list(t), "rule": "ambiguous-zero", "residual": str(stored)})
        if evaluator is None:
            continue
        for _ in range(samples):
            g = random_unimodular(rng, rng.randint(1, 6))
            t2 = transform(t, g)
            raw = evaluator(t2)
            if raw is None:
                skipped += 1
                continue
            checked += 1
            # a(G^t T G) = chi(det G) (det G)^k a(T)
            residual = raw - f.sign(g) * stored
            if residual:
                failures.append({"class": list(t), "transformed": list(t2), "rule": "transformation-law",
                                 "residual": str(residual)})
    return ConsistencyReport("class-consistency", not failures, checked, skipped, failures)


# ---------------------------------------------------------------------------
# raw sparse series (possibly fractional indices)


@dataclass
class RawSeries:
    """A sparse series sum v * e(Tr(T Z)) with T = (A, B, C) / den.

    Used for theta constants, whose indices are not half-integral.  Terms
    are keyed by integer triples (A, B, C); zero values are dropped.
    """

    den: int
    terms: dict[tuple[int, int, int], int]
    trace_bound: Optional[int] = None  # exact for (A + C) / den <= trace_bound

    def coefficient(self, a, b, c) -> int:
        """Coefficient at the half-integral index (a, b, c)."""
        return self.terms.get((a * self.den, b * self.den, c * self.den), 0)


def one_series(den: int = 1, trace_bound: Optional[int] = None) -> RawSeries:
    return RawSeries(den, {(0, 0, 0): 1}, trace_bound)


def multiply(f1: RawSeries, f2: RawSeries, trace_bound: Optional[int] = None) -> RawSeries:
    """Truncated Cauchy product.

    The result is exact on indices of trace at most the smallest of the
    requested bound and the factors' own bounds; terms beyond it are
    discarded.
    """
    if f1.den != f2.den:
        raise ValueError("series have different index denominators")
    bounds = [b for b in (trace_bound, f1.trace_bound, f2.trace_bound) if b is not None]
    bound = min(bounds) if bounds else None
    limit = None if bound is None else bound * f1.den
    out: dict[tuple[int, int, int], int] = {}
    items2 = sorted(f2.terms.items(), key=lambda kv: kv[0][0] + kv[0][2])
    for (a1, b1, c1), v1 in f1.terms.items():
        t1 = a1 + c1
        for (a2, b2, c2), v2 in items2:
            if limit is not None and t1 + a2 + c2 > limit:
                break
            key = (a1 + a2, b1 + b2, c1 + c2)
            out[key] = out.get(key, 0) + v1 * v2
    return RawSeries(f1.den, {k: v for k, v in out.items() if v}, bound)
