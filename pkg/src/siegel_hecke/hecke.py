"""Hecke operators T(p), T~1(p^2), T1(p^2) and T2(p^2) = T(p)^2 (p | N).

Operators act only through their formulas on lattice coefficients.  An
output coefficient at Lambda needs input classes whose reduced c is at
most p c(Lambda) for T(p) and p^2 c(Lambda) for T~1(p^2), which fixes the
narrowed bounds B // p and B // p^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .binform import reduced_classes
from .errors import AllCoefficientsZero, BoundTooSmall, PNotDividingLevel, UnsupportedWeight
from .exact import char_eval, require_prime
from .lattice import alpha, child_bases, transform
from .series import FourierExpansion, coeff, coeff_scaled

OPERATORS = ("tp", "t1tilde", "t1", "t2level")


@dataclass
class HeckeOutcome:
    expansion: FourierExpansion
    op: str
    p: int

    @property
    def bound(self) -> int:
        return self.expansion.bound


def _narrow(f: FourierExpansion, p: int, power: int) -> int:
    require_prime(p)
    if f.weight < 2:
        raise UnsupportedWeight(f"weight {f.weight} < 2 is not supported")
    bound = f.bound // p ** power
    if bound < 1:
        raise BoundTooSmall(f"bound {f.bound} leaves an empty window for p^{power} = {p ** power}")
    return bound


def tp_coefficient(f: FourierExpansion, t, p: int) -> int:
    """The Lambda-th coefficient of F|T(p)."""
    k = f.weight
    chi_p = char_eval(f.character, p)
    total = coeff_scaled(f, t, p, 1)
    if chi_p:
        total += p ** (2 * k - 3) * coeff_scaled(f, t, 1, p)  # chi(p^2) = 1 here
        total += chi_p * p ** (k - 2) * sum(coeff_scaled(f, transform(t, h), 1, p) for _, h in child_bases(p))
    return total


def t1tilde_coefficient(f: FourierExpansion, t, p: int) -> int:
    """The Lambda-th coefficient of F|T~1(p^2)."""
    k = f.weight
    chi_p = char_eval(f.character, p)
    children = [transform(t, h) for _, h in child_bases(p)]
    total = sum(coeff(f, w) for w in children)
    if chi_p:
        # superlattices with invariant factors (1/p, 1) are children / p^2
        total += p ** (2 * k - 3) * sum(coeff_scaled(f, w, 1, p * p) for w in children)
        total += chi_p * p ** (k - 2) * alpha(t, p) * coeff(f, t)
    return total


def apply_T_p(f: FourierExpansion, p: int) -> HeckeOutcome:
    bound = _narrow(f, p, 1)
    out = {t: tp_coefficient(f, t, p) for t in reduced_classes(bound)}
    return HeckeOutcome(f.like(out, bound), "tp", p)


def apply_T1tilde_p2(f: FourierExpansion, p: int) -> HeckeOutcome:
    bound = _narrow(f, p, 2)
    out = {t: t1tilde_coefficient(f, t, p) for t in reduced_classes(bound)}
    return HeckeOutcome(f.like(out, bound), "t1tilde", p)


def apply_T1_p2(f: FourierExpansion, p: int) -> HeckeOutcome:
    """T1(p^2) = T~1(p^2) - chi(p) p^(k-3) (p + 1)."""
    if f.weight < 3:
        raise UnsupportedWeight("T1(p^2) needs weight >= 3 for integral coefficients")
    tilde = apply_T1tilde_p2(f, p).expansion
    shift = char_eval(f.character, p) * p ** (f.weight - 3) * (p + 1)
    out = {t: v - shift * f.coeffs[t] for t, v in tilde.coeffs.items()}
    return HeckeOutcome(f.like(out, tilde.bound), "t1", p)


def apply_T2_p2_level(f: FourierExpansion, p: int) -> HeckeOutcome:
    """T2(p^2), which equals T(p) applied twice when p divides the level."""
    require_prime(p)
    if f.level % p:
        raise PNotDividingLevel(f"{p} does not divide the level {f.level}")
    once = apply_T_p(f, p).expansion
    twice = apply_T_p(once, p).expansion
    return HeckeOutcome(twice, "t2level", p)


def apply_operator(f: FourierExpansion, op: str, p: int) -> HeckeOutcome:
    dispatch = {"tp": apply_T_p, "t1tilde": apply_T1tilde_p2, "t1": apply_T1_p2, "t2level": apply_T2_p2_level}
    if op not in dispatch:
        raise ValueError(f"unknown operator {op!r}; expected one of {OPERATORS}")
    return dispatch[op](f, p)


def proportionality(f: FourierExpansion, g: FourierExpansion) -> tuple[Optional[Fraction], Optional[dict]]:
    """(rho, None) if g = rho f on g's window, else (None, first mismatch)."""
    rho = None
    classes = reduced_classes(g.bound)
    for t in classes:
        if f.coeffs[t]:
            rho = Fraction(g.coeffs[t], f.coeffs[t])
            break
    if rho is None:
        raise AllCoefficientsZero(f"F vanishes on the whole window c <= {g.bound}")
    for t in classes:
        residual = g.coeffs[t] - rho * f.coeffs[t]
        if residual:
            return None, {"class": list(t), "image": g.coeffs[t], "input": f.coeffs[t],
                          "ratio": str(rho), "residual": str(residual)}
    return rho, None


def extract_eigenvalue(f: FourierExpansion, outcome: HeckeOutcome) -> Optional[Fraction]:
    """The eigenvalue rho with outcome = rho F on the outcome window, or None."""
    rho, _ = proportionality(f, outcome.expansion)
    return rho
