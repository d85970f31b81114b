"""Concrete Siegel modular forms built from scratch.

* degree-2 theta series of even positive definite lattices, whose
  coefficient at T counts pairs (v1, v2) with Gram matrix 2T;
* the Igusa cusp form chi10 as the product of the squares of the ten even
  genus-2 theta constants, normalised so that a((1, 1, 1)) = 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Optional

import numpy as np
import sympy

from .binform import BinQF, reduce, reduced_classes
from .errors import NormalizationFailure, OddCharacteristic, RankUnsupported
from .exact import RealCharacter, factorize
from .series import FourierExpansion, RawSeries

log = logging.getLogger(__name__)

MAX_RANK = 16


@dataclass(frozen=True)
class EvenLattice:
    """An even positive definite lattice given by its Gram matrix.

    ``coords`` optionally embeds the basis in Euclidean space with
    Gram = coords_factor * coords coords^t.  ``symmetry`` names a coordinate group
    known to preserve the lattice ("signed-permutations" or
    "even-sign-permutations"); it only speeds up pair counting.
    """

    gram: tuple[tuple[int, ...], ...]
    name: str = "lattice"
    coords: Optional[tuple[tuple[int, ...], ...]] = None
    coords_factor: Fraction = Fraction(1)
    symmetry: Optional[str] = None
    _derived: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        g = sympy.Matrix(self.gram)
        n = g.rows
        if n % 2 or n == 0 or n > MAX_RANK or g.cols != n:
            raise RankUnsupported(f"rank {n} is not an even rank <= {MAX_RANK}")
        if g != g.T or any(g[i, i] % 2 for i in range(n)):
            raise ValueError("Gram matrix must be symmetric with even diagonal")
        if not all(g[:i, :i].det() > 0 for i in range(1, n + 1)):
            raise ValueError("Gram matrix is not positive definite")
        if self.coords is not None:
            m = sympy.Matrix(self.coords)
            f = sympy.Rational(self.coords_factor.numerator, self.coords_factor.denominator)
            if m * m.T * f != g:
                raise ValueError("coordinates do not reproduce the Gram matrix")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def weight(self) -> int:
        return self.rank // 2

    @property
    def determinant(self) -> int:
        return int(sympy.Matrix(self.gram).det())

    @property
    def level(self) -> int:
        """Least L such that L times the inverse Gram matrix is even integral."""
        if "level" not in self._derived:
            inv = sympy.Matrix(self.gram).inv()
            n = self.rank
            den = sympy.ilcm(*[sympy.fraction(inv[i, j])[1] for i in range(n) for j in range(n)])
            level = int(den)
            while not all((level * inv[i, i]) % 2 == 0 for i in range(n)):
                level += int(den)
            self._derived["level"] = level
        return self._derived["level"]

    @property
    def character(self) -> RealCharacter:
        d = (-1) ** (self.rank // 2) * self.determinant
        root = isqrt(d) if d > 0 else 0
        if root * root == d and all(self.level % p == 0 for p in factorize(root)):
            return RealCharacter.trivial(self.level)
        return RealCharacter.kronecker_symbol(d, self.level)


def e8_lattice() -> EvenLattice:
    """E8 as D8 plus the glue vector (1/2, ..., 1/2), in doubled coordinates."""
    rows = [[4, 0, 0, 0, 0, 0, 0, 0]]  # 2 e1
    for i in range(6):
        r = [0] * 8
        r[i], r[i + 1] = -2, 2  # e_{i+2} - e_{i+1}
        rows.append(r)
    rows.append([1] * 8)  # glue
    m = sympy.Matrix(rows)
    gram = m * m.T / 4
    lat = EvenLattice(tuple(tuple(int(x) for x in gram.row(i)) for i in range(8)), "E8",
                      tuple(tuple(r) for r in rows), Fraction(1, 4), "even-sign-permutations")
    if lat.determinant != 1:
        raise AssertionError("E8 Gram matrix must be unimodular")
    return lat


def scaled_cubic_lattice(n: int = 8, s: int = 2) -> EvenLattice:
    """Z^n with the form s * sum x_i^2 (s even), e.g. the level-4 lattice 2I_8."""
    gram = tuple(tuple(s if i == j else 0 for j in range(n)) for i in range(n))
    coords = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return EvenLattice(gram, f"{s}I{n}", coords, Fraction(s), "signed-permutations")


def _coordinate_matrix(lat: EvenLattice) -> Optional[np.ndarray]:
    return None if lat.coords is None else np.array(lat.coords, dtype=np.int64)


# ---------------------------------------------------------------------------
# short vector enumeration


def _fincke_pohst_form(gram) -> list[list[Fraction]]:
    """Exact q with Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2."""
    n = len(gram)
    q = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def enumerate_vectors(lat: EvenLattice, max_norm: int, norms: Optional[set[int]] = None,
                      chunk: int = 1 << 16) -> dict[int, np.ndarray]:
    """All v != 0 with v^t Gram v <= max_norm, grouped by norm.

    Fincke-Pohst over the exact triangular decomposition, expanded one
    coordinate at a time on blocks of at most ``chunk`` partial vectors so
    memory stays bounded.  Floating point is used only for pruning (with
    slack); every returned vector is re-checked with integer arithmetic.
    If ``norms`` is given only those shells are kept.
    """
    if max_norm <= 0:
        return {}
    n = lat.rank
    q = _fincke_pohst_form(lat.gram)
    diag = np.array([float(q[i][i]) for i in range(n)])
    mu = np.array([[float(q[i][j]) if j > i else 0.0 for j in range(n)] for i in range(n)])
    bound = float(max_norm) + 1e-7 * (1 + max_norm)
    gram = np.array(lat.gram, dtype=np.int64)
    found: dict[int, list[np.ndarray]] = {}

    def expand(xs, partial, i):
        center = -(xs @ mu[i])
        radius = np.sqrt(np.maximum(bound - partial, 0.0) / diag[i])
        lo = np.ceil(center - radius - 1e-9).astype(np.int64)
        hi = np.floor(center + radius + 1e-9).astype(np.int64)
        counts = np.maximum(hi - lo + 1, 0)
        rows = np.repeat(np.arange(len(xs)), counts)
        offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        xi = lo[rows] + offsets
        xs = xs[rows]
        xs[:, i] = xi
        partial = partial[rows] + diag[i] * (xi - center[rows]) ** 2
        keep = partial <= bound
        return xs[keep], partial[keep]

    stack = [(np.zeros((1, n), dtype=np.int64), np.zeros(1), n - 1)]
    while stack:
        xs, partial, i = stack.pop()
        xs, partial = expand(xs, partial, i)
        if i > 0:
            for s in range(((len(xs) - 1) // chunk) * chunk, -1, -chunk):
                stack.append((xs[s:s + chunk], partial[s:s + chunk], i - 1))
            continue
        vals = np.einsum("ij,jk,ik->i", xs, gram, xs)
        keep = (vals > 0) & (vals <= max_norm)
        if norms is not None:
            keep &= np.isin(vals, list(norms))
        for v in np.unique(vals[keep]):
            found.setdefault(int(v), []).append(xs[keep & (vals == v)])
    out = {}
    for v in sorted(found):
        xs = np.concatenate(found[v])
        out[v] = xs[np.lexsort(xs.T[::-1])]
    return out


# ---------------------------------------------------------------------------
# pair counting


def _orbit_keys(lat: EvenLattice, vecs: np.ndarray) -> np.ndarray:
    """Integer row keys constant on orbits of the known symmetry group."""
    m = _coordinate_matrix(lat)
    if lat.symmetry is None or m is None:
        # only v -> -v: pick the lexicographically larger of v, -v
        first = np.argmax(vecs != 0, axis=1)
        sgn = np.sign(vecs[np.arange(len(vecs)), first])
        return vecs * sgn[:, None]
    y = vecs @ m
    key = -np.sort(-np.abs(y), axis=1)
    if lat.symmetry == "even-sign-permutations":
        odd = (np.sum(y < 0, axis=1) % 2).astype(np.int64)
        flag = np.where(np.any(y == 0, axis=1), 0, 1 + odd)
        key = np.column_stack([key, flag])
    elif lat.symmetry != "signed-permutations":
        raise ValueError(f"unknown symmetry {lat.symmetry!r}")
    return key


def _orbits(lat: EvenLattice, vecs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orbit representatives and orbit sizes."""
    keys = _orbit_keys(lat, vecs)
    _, first, counts = np.unique(keys, axis=0, return_index=True, return_counts=True)
    return vecs[first], counts


def _count_inner_products(reps: np.ndarray, weights: np.ndarray, other: np.ndarray,
                          gram: np.ndarray, top: int, chunk: int = 1 << 22) -> np.ndarray:
    """counts[b] = sum_r weights[r] * #{w in other : r^t G w = b}, 0 <= b <= top."""
    counts = np.zeros(top + 1, dtype=np.int64)
    if len(reps) == 0 or len(other) == 0:
        return counts
    left = (reps @ gram).astype(np.float64)
    right = other.astype(np.float64).T
    step = max(1, chunk // len(other))
    for s in range(0, len(left), step):
        ip = np.rint(left[s:s + step] @ right).astype(np.int64)
        rows = np.broadcast_to(np.arange(ip.shape[0])[:, None], ip.shape)
        mask = (ip >= 0) & (ip <= top)
        hist = np.bincount(rows[mask] * (top + 1) + ip[mask], minlength=ip.shape[0] * (top + 1))
        counts += weights[s:s + step] @ hist.reshape(ip.shape[0], top + 1)
    return counts


def theta_coefficients(lat: EvenLattice, classes, vectors: Optional[dict[int, np.ndarray]] = None) -> dict[BinQF, int]:
    """Theta coefficients at individual classes, enumerating only the shells they need."""
    keys = sorted({reduce(t)[0].form for t in classes}, key=lambda t: (t.c, t.a, t.b))
    vectors = dict(vectors or {})
    need = {2 * n for t in keys for n in (t.a, t.c)} - set(vectors)
    if need:
        vectors.update(enumerate_vectors(lat, max(need), norms=need))
    gram = np.array(lat.gram, dtype=np.int64)
    empty = np.zeros((0, lat.rank), dtype=np.int64)
    orbits: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    out = {}
    for t in keys:
        small, big = vectors.get(2 * t.a, empty), vectors.get(2 * t.c, empty)
        if t.a not in orbits:
            orbits[t.a] = _orbits(lat, small)
        counts = _count_inner_products(*orbits[t.a], big, gram, t.a)
        out[t] = int(counts[t.b])
    return out


def theta_series(lat: EvenLattice, bound: int, vectors: Optional[dict[int, np.ndarray]] = None,
                 extra_classes=()) -> FourierExpansion:
    """Degree-2 theta series of ``lat`` on all reduced classes with c <= bound.

    ``extra_classes`` are evaluated individually and kept in the sparse
    table of the expansion when they lie beyond the bound.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    if vectors is None:
        vectors = enumerate_vectors(lat, 2 * bound)
    gram = np.array(lat.gram, dtype=np.int64)
    empty = np.zeros((0, lat.rank), dtype=np.int64)
    shells = {n: vectors.get(2 * n, empty) for n in range(1, bound + 1)}
    orbits = {n: _orbits(lat, s) for n, s in shells.items()}
    coeffs = {}
    for c in range(1, bound + 1):
        for a in range(1, c + 1):
            # orbit-reduce whichever side is cheaper
            cost_a = len(orbits[a][0]) * len(shells[c])
            cost_c = len(orbits[c][0]) * len(shells[a])
            if cost_a <= cost_c:
                counts = _count_inner_products(*orbits[a], shells[c], gram, a)
            else:
                counts = _count_inner_products(*orbits[c], shells[a], gram, a)
            for b in range(a + 1):
                coeffs[BinQF(a, b, c)] = int(counts[b])
        log.debug("theta %s: finished c=%d", lat.name, c)
    degenerate = {0: 1}
    degenerate.update({n: len(shells[n]) for n in range(1, bound + 1)})
    beyond = [t for t in extra_classes if reduce(t)[0].form.c > bound]
    extra = theta_coefficients(lat, beyond, vectors) if beyond else {}
    return FourierExpansion(lat.weight, lat.level, lat.character, bound, coeffs, degenerate, extra)


def pair_count(vectors: dict[int, np.ndarray], gram, t) -> Optional[int]:
    """Direct count of pairs with Gram matrix 2T, or None if a shell is missing."""
    a, b, c = t
    if a <= 0 or c <= 0:
        return None
    if 2 * a not in vectors and 2 * a > max(vectors, default=0):
        return None
    if 2 * c not in vectors and 2 * c > max(vectors, default=0):
        return None
    s1 = vectors.get(2 * a)
    s2 = vectors.get(2 * c)
    if s1 is None or s2 is None:
        return 0
    g = np.array(gram, dtype=np.int64)
    ip = (s1 @ g) @ s2.T
    return int(np.count_nonzero(ip == b))


# ---------------------------------------------------------------------------
# theta constants and chi10


@dataclass(frozen=True)
class ThetaCharacteristic:
    """Characteristic (a, b) with a, b in {0, 1/2}^2, stored as bits (2a, 2b)."""

    a1: int
    a2: int
    b1: int
    b2: int

    @property
    def even(self) -> bool:
        return (self.a1 * self.b1 + self.a2 * self.b2) % 2 == 0


def even_characteristics() -> list[ThetaCharacteristic]:
    out = []
    for bits in range(16):
        m = ThetaCharacteristic(bits >> 3 & 1, bits >> 2 & 1, bits >> 1 & 1, bits & 1)
        if m.even:
            out.append(m)
    return out


CHI10_DEN = 8


def _theta_terms(m: ThetaCharacteristic, box: int) -> list[tuple[int, int, int, int]]:
    """Terms (A, B, C, sign) of theta_m with A, C <= box, indices times 8.

    With y = 2(n + a) the exponent pi i (n+a)^t Z (n+a) has half-integral
    index T = y y^t / 8, i.e. 8T = (y1^2, 2 y1 y2, y2^2); the sign is
    exp(2 pi i (n+a)^t b) = i^(y . 2b), and y . 2b is even for an even
    characteristic.
    """
    if not m.even:
        raise OddCharacteristic(f"characteristic {m} is odd")
    r = isqrt(box)
    ys1 = [y for y in range(-r - 1, r + 2) if y % 2 == m.a1 and y * y <= box]
    ys2 = [y for y in range(-r - 1, r + 2) if y % 2 == m.a2 and y * y <= box]
    return [(y1 * y1, 2 * y1 * y2, y2 * y2, -1 if (y1 * m.b1 + y2 * m.b2) % 4 else 1)
            for y1 in ys1 for y2 in ys2]


def theta_constant(m: ThetaCharacteristic, trace_bound: int) -> RawSeries:
    """theta_m(Z) as a raw series with index denominator 8, truncated by trace."""
    limit = trace_bound * CHI10_DEN
    terms: dict[tuple[int, int, int], int] = {}
    for a, b, c, s in _theta_terms(m, limit):
        if a + c <= limit:
            terms[(a, b, c)] = terms.get((a, b, c), 0) + s
    return RawSeries(CHI10_DEN, {k: v for k, v in terms.items() if v}, trace_bound)


def _primes_above(start: int, count: int) -> list[int]:
    out, p = [], start
    while len(out) < count:
        p = int(sympy.nextprime(p))
        out.append(p)
    return out


class _DenseProduct:
    """Product of theta constants on a stride-4 grid, several moduli at once.

    Every factor's terms share one residue class mod 4 in each of A, B, C,
    so each partial product lives on a single coset of (4Z)^3.
    """

    def __init__(self, box: int, moduli: Optional[list[int]], dtype=np.int64):
        self.box = box  # A, C <= box (units of 1/8)
        self.na = box // 4 + 1
        self.nb = box + 1  # B in [offB - 2 box, offB + 2 box]
        self.j0 = box // 2
        self.moduli = moduli
        depth = len(moduli) if moduli else 1
        self.data = np.zeros((depth, self.na, self.nb, self.na), dtype=dtype)
        self.data[:, 0, self.j0, 0] = 1
        self.off = (0, 0, 0)

    def mul_terms(self, terms, absolute: bool = False) -> None:
        ra, rb, rc = terms[0][0] % 4, terms[0][1] % 4, terms[0][2] % 4
        oa, ob, oc = self.off
        na_, nb_, nc_ = (oa + ra) % 4, (ob + rb) % 4, (oc + rc) % 4
        new = np.zeros_like(self.data)
        for da, db, dc, s in terms:
            ka, kb, kc = (oa + da - na_) // 4, (ob + db - nb_) // 4, (oc + dc - nc_) // 4
            if ka >= self.na or kc >= self.na or abs(kb) >= self.nb:
                continue
            src = self.data[:, : self.na - ka, max(0, -kb): self.nb - max(0, kb), : self.na - kc]
            dst = new[:, ka:, max(0, kb): self.nb - max(0, -kb), kc:]
            if s > 0 or absolute:
                dst += src
            else:
                dst -= src
        if self.moduli:
            new %= np.array(self.moduli, dtype=np.int64)[:, None, None, None]
        self.data = new
        self.off = (na_, nb_, nc_)

    def index(self, a8: int, b8: int, c8: int) -> Optional[tuple[int, int, int]]:
        oa, ob, oc = self.off
        if (a8 - oa) % 4 or (b8 - ob) % 4 or (c8 - oc) % 4:
            return None
        i, j, l = (a8 - oa) // 4, (b8 - ob) // 4 + self.j0, (c8 - oc) // 4
        if 0 <= i < self.na and 0 <= j < self.nb and 0 <= l < self.na:
            return i, j, l
        return None


def chi10_raw(bound: int) -> dict[tuple[int, int, int], int]:
    """Unnormalised product of the squared even theta constants.

    Returns exact coefficients on every index (a, b, c) with a, c <= bound
    (true half-integral units), plus an integrality check that nothing
    survives off the lattice of half-integral indices.
    """
    box = CHI10_DEN * bound
    factors = []
    for m in even_characteristics():
        terms = _theta_terms(m, box)
        factors += [terms, terms]
    # magnitude bound from the product of absolute values
    mag = _DenseProduct(box, None, dtype=np.float64)
    for terms in factors:
        mag.mul_terms(terms, absolute=True)
    limit = float(mag.data.max()) * 1.001 + 1
    moduli, span = [], 1
    for p in _primes_above(1 << 50, 8):
        if span > 2 * limit:
            break
        moduli.append(p)
        span *= p
    if span <= 2 * limit:
        raise NormalizationFailure("coefficient magnitudes exceed the residue span")
    log.debug("chi10 raw product: bound %d, %d moduli, magnitude <= %.3g", bound, len(moduli), limit)
    dense = _DenseProduct(box, moduli)
    for terms in factors:
        dense.mul_terms(terms)
    if dense.off != (0, 0, 0):
        raise NormalizationFailure(f"product lives on coset {dense.off}, expected (0, 0, 0)")
    data = dense.data
    nonzero = np.argwhere(np.any(data != 0, axis=0))
    for i, j, l in nonzero:
        a8, b8, c8 = 4 * i, 4 * (j - dense.j0), 4 * l
        if a8 % 8 or b8 % 8 or c8 % 8:
            raise NormalizationFailure(f"nonzero coefficient at non-integral index {(a8, b8, c8)}/8")
    residues = data.reshape(len(moduli), -1)
    out = {}
    for i, j, l in nonzero:
        flat = np.ravel_multi_index((i, j, l), data.shape[1:])
        value = _crt([int(r) for r in residues[:, flat]], moduli)
        out[(int(i) // 2, int(j - dense.j0) // 2, int(l) // 2)] = value
    return out


def _crt(residues: list[int], moduli: list[int]) -> int:
    x, m = 0, 1
    for r, p in zip(residues, moduli):
        t = ((r - x) * pow(m, -1, p)) % p
        x, m = x + m * t, m * p
    return x - m if x > m // 2 else x


def igusa_chi10(bound: int) -> FourierExpansion:
    """chi10 on all reduced classes with c <= bound, normalised by a((1,1,1)) = 1."""
    if bound < 3:
        raise ValueError("chi10 needs bound >= 3")
    raw = chi10_raw(bound)
    pivot = raw.get((1, 1, 1), 0)
    if pivot == 0:
        raise NormalizationFailure("raw coefficient at (1, 1, 1) vanishes")
    coeffs = {}
    for t in reduced_classes(bound):
        v = raw.get(tuple(t), 0)
        if v % pivot:
            raise NormalizationFailure(f"coefficient at {tuple(t)} not divisible by the pivot {pivot}")
        coeffs[t] = v // pivot
    degenerate = {}
    for n in range(bound + 1):
        v = raw.get((n, 0, 0), 0)
        if v:
            raise NormalizationFailure(f"nonzero degenerate coefficient at ({n}, 0, 0): not a cusp form")
        degenerate[n] = 0
    return FourierExpansion(10, 1, RealCharacter.trivial(1), bound, coeffs, degenerate)


def chi10_sparse(trace_bound: int) -> RawSeries:
    """The same raw product via sparse truncated multiplication (slow; for cross-checks)."""
    from .series import multiply, one_series

    out = one_series(CHI10_DEN, trace_bound)
    for m in even_characteristics():
        th = theta_constant(m, trace_bound)
        out = multiply(multiply(out, th), th)
    return out
