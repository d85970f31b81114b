"""Index-p sublattices and superlattices of rank-2 even lattices.

For a lattice with basis {x, y} and Gram matrix 2T the p + 1 sublattices
with invariant factors (1, p) are spanned by the columns of

    H_u = [[1, 0], [u, p]]  (basis x + u y, p y),  0 <= u < p,
    H_inf = [[p, 0], [0, 1]] (basis p x, y).

Superlattices with invariant factors (1/p, 1) are the sublattices scaled
by 1/p, i.e. the forms (H^t T H) / p^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .binform import BinQF, Matrix, _check_pd, transform
from .exact import require_prime

INFINITY = "inf"
Tag = Union[int, str]


@dataclass(frozen=True)
class SublatticeStep:
    parent: BinQF
    basis: Matrix
    child: BinQF
    tag: Tag


def child_bases(p: int) -> list[tuple[Tag, Matrix]]:
    return [(u, ((1, 0), (u, p))) for u in range(p)] + [(INFINITY, ((p, 0), (0, 1)))]


def sublattices_1_p(t, p: int) -> list[SublatticeStep]:
    """The p + 1 index-p sublattices, in u-order with the infinite line last."""
    require_prime(p)
    t = _check_pd(t)
    return [SublatticeStep(t, h, transform(t, h), tag) for tag, h in child_bases(p)]


def scale(t, num: int, den: int = 1) -> Optional[BinQF]:
    """(num/den) T if it is still integral (an even lattice), else None."""
    if num <= 0 or den <= 0:
        raise ValueError("scaling factors must be positive")
    a, b, c = (x * num for x in t)
    if a % den or b % den or c % den:
        return None
    return BinQF(a // den, b // den, c // den)


def superlattices_1overp_1(t, p: int) -> list[BinQF]:
    """Even integral lattices containing T with invariant factors (1/p, 1)."""
    out = []
    for step in sublattices_1_p(t, p):
        f = scale(step.child, 1, p * p)
        if f is not None:
            out.append(f)
    return out


def superlattice_forms(t, p: int) -> list[tuple[Tag, tuple[Fraction, Fraction, Fraction]]]:
    """All p + 1 index-p superlattices as rational forms.

    Built directly from the lines of L/pL: the line through x + u y gives
    the superlattice Z (x + u y)/p + Z y, and the line through y gives
    Z x + Z y/p.  Integrality is not required.
    """
    require_prime(p)
    a, b, c = _check_pd(t)
    out = []
    for u in range(p):
        # basis ((x + u y)/p, y)
        qa = Fraction(a + b * u + c * u * u, p * p)
        qb = Fraction(b + 2 * c * u, p)
        out.append((u, (qa, qb, Fraction(c))))
    out.append((INFINITY, (Fraction(a), Fraction(b, p), Fraction(c, p * p))))
    return out


def alpha(t, p: int) -> int:
    """Number of isotropic lines of a x^2 + b x y + c y^2 on F_p^2."""
    require_prime(p)
    a, b, c = t
    count = 1 if c % p == 0 else 0  # the line through (0, 1)
    for u in range(p):
        if (a + b * u + c * u * u) % p == 0:
            count += 1
    return count
