"""Exact integer helpers and real Dirichlet characters.

Everything in the package is exact: coefficients are Python ints and
eigenvalues are :class:`fractions.Fraction`.  Characters take values in
{-1, 0, 1} only, which keeps all coefficient arithmetic integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from sympy import factorint, isprime

from .errors import CompositeP

__all__ = [
    "Fraction",
    "RealCharacter",
    "char_eval",
    "epsilon",
    "factorize",
    "is_prime",
    "kronecker",
    "require_prime",
]


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


def require_prime(p: int) -> int:
    if not is_prime(p):
        raise CompositeP(f"{p} is not prime")
    return p


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer as ``{p: e}``."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    return {int(p): int(e) for p, e in sorted(factorint(n).items())}


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d | n) for arbitrary integers d, n."""
    if n == 0:
        return 1 if d in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    # factor out 2 using (d|2) = 0 for even d, else +-1 by d mod 8
    v = (n & -n).bit_length() - 1
    n >>= v
    if v:
        if d % 2 == 0:
            return 0
        if v % 2 and d % 8 in (3, 5):
            result = -result
    # n is now odd and positive: Jacobi symbol (d mod n | n)
    a = d % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class RealCharacter:
    """A real Dirichlet character modulo ``modulus``.

    ``kind`` is ``"trivial"`` (principal character mod N) or ``"kronecker"``
    (n -> (d|n), forced to 0 on integers sharing a factor with N).
    """

    modulus: int
    kind: str = "trivial"
    d: Optional[int] = None

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        if self.kind not in ("trivial", "kronecker"):
            raise ValueError(f"unknown character kind {self.kind!r}")
        if self.kind == "kronecker":
            if self.d is None or self.d == 0:
                raise ValueError("kronecker character needs a nonzero d")
            if self.d % 4 not in (0, 1):
                raise ValueError("d must be a discriminant (0 or 1 mod 4)")
            # unit values must be periodic mod N (conductor divides N)
            span = 2 * self.modulus * abs(self.d)
            for n in range(1, span + 1):
                if gcd(n, self.modulus) == 1 and kronecker(self.d, n) != kronecker(self.d, n + self.modulus):
                    raise ValueError(f"({self.d}|.) is not a character mod {self.modulus}")
        elif self.d is not None:
            raise ValueError("trivial character takes no d")

    @classmethod
    def trivial(cls, modulus: int = 1) -> "RealCharacter":
        return cls(modulus, "trivial")

    @classmethod
    def kronecker_symbol(cls, d: int, modulus: Optional[int] = None) -> "RealCharacter":
        return cls(abs(d) if modulus is None else modulus, "kronecker", d)

    def __call__(self, n: int) -> int:
        return char_eval(self, n)

    def to_json(self) -> dict:
        if self.kind == "trivial":
            return {"modulus": self.modulus, "kind": "trivial"}
        return {"modulus": self.modulus, "kind": "kronecker", "d": self.d}

    @classmethod
    def from_json(cls, data: dict) -> "RealCharacter":
        if data["kind"] == "trivial":
            return cls(int(data["modulus"]), "trivial")
        return cls(int(data["modulus"]), "kronecker", int(data["d"]))


def char_eval(chi: RealCharacter, n: int) -> int:
    if gcd(n, chi.modulus) != 1:
        return 0
    if chi.kind == "trivial":
        return 1
    return kronecker(chi.d, n)


def epsilon(chi: RealCharacter, k: int) -> int:
    """The parity constant 1 + chi(-1)(-1)^k, which is 0 or 2."""
    if k < 0:
        raise ValueError("weight must be nonnegative")
    return 1 + char_eval(chi, -1) * (-1) ** k
