"""Positive definite binary quadratic forms.

A form is an integer triple ``(a, b, c)`` standing for the half-integral
matrix ``T = [[a, b/2], [b/2, c]]``; the attached even lattice has Gram
matrix ``2T = [[2a, b], [b, 2c]]``.  Unimodular matrices act on the right,
``T -> G^t T G``, and are stored row-major as ``((g11, g12), (g21, g22))``.
"""

from __future__ import annotations

from functools import lru_cache
from math import isqrt
from typing import NamedTuple, Optional

from .errors import NotPositiveDefinite

Matrix = tuple[tuple[int, int], tuple[int, int]]

IDENTITY: Matrix = ((1, 0), (0, 1))
MIRROR: Matrix = ((1, 0), (0, -1))


class BinQF(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        """4ac - b^2, i.e. 4 det T."""
        return 4 * self.a * self.c - self.b * self.b

    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.disc > 0

    def is_positive_semidefinite(self) -> bool:
        return self.a >= 0 and self.c >= 0 and self.disc >= 0

    def value(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y


class ClassKey(NamedTuple):
    """Canonical class representative; ``proper`` marks SL2(Z) reduction."""

    form: BinQF
    proper: bool


def det(g: Matrix) -> int:
    return g[0][0] * g[1][1] - g[0][1] * g[1][0]


def matmul(g: Matrix, h: Matrix) -> Matrix:
    return (
        (g[0][0] * h[0][0] + g[0][1] * h[1][0], g[0][0] * h[0][1] + g[0][1] * h[1][1]),
        (g[1][0] * h[0][0] + g[1][1] * h[1][0], g[1][0] * h[0][1] + g[1][1] * h[1][1]),
    )


def inverse(g: Matrix) -> Matrix:
    d = det(g)
    if d not in (1, -1):
        raise ValueError(f"matrix {g} is not unimodular")
    return ((g[1][1] * d, -g[0][1] * d), (-g[1][0] * d, g[0][0] * d))


def transform(t, g: Matrix) -> BinQF:
    """Return G^t T G as a triple."""
    a, b, c = t
    (p, q), (r, s) = g
    return BinQF(
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


def _check_pd(t) -> BinQF:
    t = BinQF(*t)
    if not t.is_positive_definite():
        raise NotPositiveDefinite(f"{tuple(t)} is not positive definite")
    return t


@lru_cache(maxsize=1 << 18)
def _reduce_cached(t: BinQF, proper: bool) -> tuple[BinQF, Matrix]:
    a, b, c = t
    g = IDENTITY
    while True:
        if c < a:
            # S = [[0, -1], [1, 0]] sends (a, b, c) to (c, -b, a)
            a, b, c = c, -b, a
            g = matmul(g, ((0, -1), (1, 0)))
        # translate b into (-a, a]
        n = (a - b) // (2 * a)
        if n:
            b, c = b + 2 * a * n, a * n * n + b * n + c
            g = matmul(g, ((1, n), (0, 1)))
        if c >= a:
            break
    if a == c and b < 0:
        a, b, c = c, -b, a
        g = matmul(g, ((0, -1), (1, 0)))
    if not proper and b < 0:
        b = -b
        g = matmul(g, MIRROR)
    return BinQF(a, b, c), g


def reduce(t, proper: bool = False) -> tuple[ClassKey, Matrix]:
    """Reduce a positive definite form.

    Returns the canonical representative and G with G^t T G equal to it.
    With ``proper=False`` the representative satisfies 0 <= b <= a <= c;
    with ``proper=True`` det G = 1 and -a < b <= a <= c, b >= 0 when a = c.
    """
    t = _check_pd(t)
    form, g = _reduce_cached(t, bool(proper))
    return ClassKey(form, bool(proper)), g


def reduced_form(t, proper: bool = False) -> BinQF:
    return reduce(t, proper)[0].form


def equivalent(t1, t2, proper: bool = False) -> Optional[Matrix]:
    """A matrix G with G^t T1 G = T2, or None if the forms are inequivalent."""
    k1, g1 = reduce(t1, proper)
    k2, g2 = reduce(t2, proper)
    if k1.form != k2.form:
        return None
    return matmul(g1, inverse(g2))


def vectors_up_to(t, bound: int) -> list[tuple[int, int]]:
    """All (x, y) != 0 with T[x, y] <= bound, found by completing the square."""
    a, b, c = _check_pd(t)
    d = 4 * a * c - b * b
    out = []
    # 4a Q = (2ax + by)^2 + d y^2
    ymax = isqrt(4 * a * bound // d)
    for y in range(-ymax, ymax + 1):
        rest = 4 * a * bound - d * y * y
        if rest < 0:
            continue
        r = isqrt(rest)
        lo = -((r + b * y) // (2 * a))
        hi = (r - b * y) // (2 * a)
        for x in range(lo - 1, hi + 2):
            if (x or y) and a * x * x + b * x * y + c * y * y <= bound:
                out.append((x, y))
    return out


def automorphisms(t) -> list[Matrix]:
    """The finite group O(T) = {G : G^t T G = T}."""
    t = _check_pd(t)
    a, b, c = t
    vecs = vectors_up_to(t, max(a, c))
    first = [v for v in vecs if t.value(*v) == a]
    second = [v for v in vecs if t.value(*v) == c]
    group = []
    for p, r in first:
        for q, s in second:
            g = ((p, q), (r, s))
            if det(g) in (1, -1) and transform(t, g) == t:
                group.append(g)
    return sorted(group)


def has_improper_automorphism(t) -> bool:
    return any(det(g) == -1 for g in automorphisms(t))


def reduced_classes(bound: int) -> list[BinQF]:
    """All GL2(Z)-reduced positive definite forms with c <= bound, sorted by (c, a, b)."""
    return [BinQF(a, b, c) for c in range(1, bound + 1) for a in range(1, c + 1) for b in range(0, a + 1)]
