"""Arithmetic in F2[x] and the ring of circulants F2[x]/(x^l - 1).

Polynomials are Python ints with bit i holding the coefficient of x^i.
The factorization of x^l - 1 is computed from the cyclotomic cosets of 2
modulo the odd part of l: each coset is the exponent orbit of one
irreducible factor, whose coefficients are assembled in GF(2^m) and land
in F2.  Residue fields F2[x]/(f_i) carry the per-factor rank
computations used for quasi-cyclic matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BothZero, EvenCirculant, NotAFactor, SizeMismatch
from .gf2 import BitMatrix


# ---------------------------------------------------------------------------
# plain F2[x] arithmetic on int bitsets


def poly_degree(p: int) -> int:
    """Degree of p, with deg 0 = -1."""
    return p.bit_length() - 1


def poly_mul(p: int, q: int) -> int:
    out = 0
    while q:
        low = q & -q
        out ^= p << (low.bit_length() - 1)
        q ^= low
    return out


def poly_divmod(p: int, q: int) -> tuple[int, int]:
    if q == 0:
        raise ZeroDivisionError("polynomial division by zero")
    dq = poly_degree(q)
    quo = 0
    while p.bit_length() - 1 >= dq:
        shift = p.bit_length() - 1 - dq
        quo |= 1 << shift
        p ^= q << shift
    return quo, p


def poly_mod(p: int, q: int) -> int:
    return poly_divmod(p, q)[1]


def poly_gcd_int(p: int, q: int) -> int:
    if p == 0 and q == 0:
        raise BothZero("gcd(0, 0) is undefined")
    while q:
        p, q = q, poly_mod(p, q)
    return p


def poly_from_exponents(exps) -> int:
    out = 0
    for e in exps:
        out |= 1 << int(e)
    return out


def poly_exponents(p: int) -> list[int]:
    return [i for i in range(p.bit_length()) if (p >> i) & 1]


def poly_weight(p: int) -> int:
    return bin(p).count("1")


def poly_str(p: int) -> str:
    """Ascending-exponent comma syntax, e.g. '0,1,6' for 1 + x + x^6."""
    if p == 0:
        return "-"
    return ",".join(str(e) for e in poly_exponents(p))


def parse_exponents(text: str) -> list[int]:
    """Parse 'e0,e1,...' requiring strictly ascending, non-negative entries."""
    parts = [t.strip() for t in text.split(",") if t.strip()]
    if not parts:
        raise ValueError("empty exponent list")
    exps = [int(t) for t in parts]
    if any(e < 0 for e in exps):
        raise ValueError(f"negative exponent in {text!r}")
    if any(b <= a for a, b in zip(exps, exps[1:])):
        raise ValueError(f"exponents must be strictly ascending: {text!r}")
    return exps


@dataclass(frozen=True)
class DensePoly:
    """Element of F2[x] (a non-cyclic polynomial)."""

    bits: int

    @classmethod
    def from_exponents(cls, exps) -> "DensePoly":
        return cls(poly_from_exponents(exps))

    @property
    def degree(self) -> int:
        return poly_degree(self.bits)

    @property
    def weight(self) -> int:
        return poly_weight(self.bits)

    def is_zero(self) -> bool:
        return self.bits == 0

    def exponents(self) -> list[int]:
        return poly_exponents(self.bits)

    def __mul__(self, other: "DensePoly") -> "DensePoly":
        return DensePoly(poly_mul(self.bits, other.bits))

    def __mod__(self, other: "DensePoly") -> "DensePoly":
        return DensePoly(poly_mod(self.bits, other.bits))

    def __str__(self) -> str:
        return poly_str(self.bits)


def poly_gcd(p: DensePoly, q: DensePoly) -> DensePoly:
    """Monic gcd over F2[x] (monic is automatic in characteristic 2)."""
    return DensePoly(poly_gcd_int(p.bits, q.bits))


# ---------------------------------------------------------------------------
# ring of circulants R_l = F2[x]/(x^l - 1)


@dataclass(frozen=True)
class RingPoly:
    """Element of F2[x]/(x^l - 1); the coefficient vector of a circulant."""

    l: int
    bits: int

    def __post_init__(self):
        if self.bits >> self.l:
            raise ValueError("coefficients exceed the circulant size")

    @classmethod
    def zero(cls, l: int) -> "RingPoly":
        return cls(l, 0)

    @classmethod
    def one(cls, l: int) -> "RingPoly":
        return cls(l, 1)

    @classmethod
    def from_exponents(cls, l: int, exps) -> "RingPoly":
        exps = list(exps)
        if any(e >= l for e in exps):
            raise ValueError(f"exponent >= l={l}")
        return cls(l, poly_from_exponents(exps))

    @property
    def weight(self) -> int:
        return poly_weight(self.bits)

    def is_zero(self) -> bool:
        return self.bits == 0

    def exponents(self) -> list[int]:
        return poly_exponents(self.bits)

    def dense(self) -> DensePoly:
        return DensePoly(self.bits)

    def coeffs(self) -> np.ndarray:
        out = np.zeros(self.l, dtype=np.uint8)
        for e in self.exponents():
            out[e] = 1
        return out

    def __add__(self, other: "RingPoly") -> "RingPoly":
        if self.l != other.l:
            raise SizeMismatch(f"circulant sizes {self.l} vs {other.l}")
        return RingPoly(self.l, self.bits ^ other.bits)

    def __str__(self) -> str:
        return poly_str(self.bits)


def cyclic_mul(a: RingPoly, b: RingPoly) -> RingPoly:
    """a(x) b(x) mod x^l - 1 (cyclic convolution)."""
    if a.l != b.l:
        raise SizeMismatch(f"circulant sizes {a.l} vs {b.l}")
    prod = poly_mul(a.bits, b.bits)
    mask = (1 << a.l) - 1
    while prod >> a.l:
        prod = (prod & mask) ^ (prod >> a.l)
    return RingPoly(a.l, prod)


def transpose_poly(c: RingPoly) -> RingPoly:
    """The ring automorphism c(x) -> c(x^-1): coefficient i moves to l - i."""
    out = 0
    for e in c.exponents():
        out |= 1 << ((c.l - e) % c.l)
    return RingPoly(c.l, out)


def circulant_expand(c: RingPoly) -> BitMatrix:
    """l x l circulant whose first column is the coefficient vector of c."""
    col0 = c.coeffs()
    dense = np.empty((c.l, c.l), dtype=np.uint8)
    for j in range(c.l):
        dense[:, j] = np.roll(col0, j)
    return BitMatrix.from_dense(dense)


# ---------------------------------------------------------------------------
# factorization of x^l - 1 via cyclotomic cosets


class _F2m:
    """GF(2^m) on int bitsets modulo an irreducible polynomial."""

    def __init__(self, modulus: int):
        self.modulus = modulus
        self.m = poly_degree(modulus)

    def mul(self, a: int, b: int) -> int:
        return poly_mod(poly_mul(a, b), self.modulus)

    def pow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out


def _poly_powmod_x(exp: int, modulus: int) -> int:
    """x^exp mod modulus via square-and-multiply on exponent bits."""
    result = 1
    base = 2  # the polynomial x
    while exp:
        if exp & 1:
            result = poly_mod(poly_mul(result, base), modulus)
        base = poly_mod(poly_mul(base, base), modulus)
        exp >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(f: int) -> bool:
    m = poly_degree(f)
    if m <= 0:
        return False
    # Rabin: x^(2^m) == x mod f, and x^(2^(m/q)) - x coprime to f
    if _poly_powmod_x(1 << m, f) != 2:
        return False
    for q in _prime_factors(m):
        h = _poly_powmod_x(1 << (m // q), f) ^ 2
        if poly_gcd_int(h if h else f, f) != 1:
            return False
    return True


def _find_irreducible(m: int) -> int:
    if m == 1:
        return 0b10  # x
    for low in range(1, 1 << m, 2):
        f = (1 << m) | low
        if _is_irreducible(f):
            return f
    raise RuntimeError(f"no irreducible polynomial of degree {m} found")


def _cyclotomic_cosets(l: int) -> list[list[int]]:
    seen = [False] * l
    cosets = []
    for j in range(l):
        if seen[j]:
            continue
        coset = []
        u = j
        while not seen[u]:
            seen[u] = True
            coset.append(u)
            u = (2 * u) % l
        cosets.append(sorted(coset))
    return cosets


def _mult_order(a: int, mod: int) -> int:
    if mod == 1:
        return 1
    order = 1
    v = a % mod
    while v != 1:
        v = (v * a) % mod
        order += 1
    return order


@dataclass(frozen=True)
class Factor:
    poly: DensePoly
    degree: int
    multiplicity: int


@dataclass(frozen=True)
class Factorization:
    """x^l - 1 = prod f_i^(2^e) with f_i irreducible and l = 2^e * odd."""

    l: int
    odd_part: int
    e: int
    factors: tuple[Factor, ...]

    def degrees(self) -> list[int]:
        return [f.degree for f in self.factors]


@lru_cache(maxsize=None)
def factor_xl_minus_1(l: int) -> Factorization:
    """Irreducible factorization of x^l - 1 over F2 by cyclotomic cosets."""
    if l < 1:
        raise ValueError("l must be positive")
    e = 0
    odd = l
    while odd % 2 == 0:
        odd //= 2
        e += 1
    cosets = _cyclotomic_cosets(odd)
    polys: list[int] = []
    big = [c for c in cosets if c != [0]]
    if big:
        m = _mult_order(2, odd)
        field = _F2m(_find_irreducible(m))
        # deterministic scan for an element of multiplicative order `odd`
        group = (1 << m) - 1
        primes = _prime_factors(odd)
        alpha = 0
        for g in range(2, 1 << m):
            cand = field.pow(g, group // odd)
            if cand == 1:
                continue
            if all(field.pow(cand, odd // q) != 1 for q in primes):
                alpha = cand
                break
        if not alpha:
            raise RuntimeError(f"no element of order {odd} in GF(2^{m})")
    for coset in cosets:
        if coset == [0]:
            polys.append(0b11)  # x + 1
            continue
        # prod over the coset of (y - alpha^u); coefficients close under
        # Frobenius, hence land in F2
        coeffs = [1]
        for u in coset:
            root = field.pow(alpha, u)
            nxt = [0] * (len(coeffs) + 1)
            for i, cf in enumerate(coeffs):
                nxt[i + 1] ^= cf
                nxt[i] ^= field.mul(cf, root)
            coeffs = nxt
        assert all(cf in (0, 1) for cf in coeffs), "coset product left GF(2)"
        polys.append(sum(cf << i for i, cf in enumerate(coeffs)))
    order = sorted(range(len(polys)), key=lambda i: (poly_degree(polys[i]), polys[i]))
    factors = tuple(Factor(DensePoly(polys[i]), poly_degree(polys[i]), 1 << e)
                    for i in order)
    # reconstruction check: the factor product must equal x^l - 1 exactly
    prod = 1
    for f in factors:
        for _ in range(f.multiplicity):
            prod = poly_mul(prod, f.poly.bits)
    assert prod == (1 << l) | 1, "factorization reconstruction failed"
    return Factorization(l, odd, e, factors)


def xl_minus_1(l: int) -> DensePoly:
    return DensePoly((1 << l) | 1)


# ---------------------------------------------------------------------------
# residue fields and quasi-cyclic rank


@dataclass(frozen=True)
class ResidueField:
    """F_i = F2[x]/(f_i) for an irreducible factor f_i of x^l - 1."""

    modulus: DensePoly

    @property
    def degree(self) -> int:
        return self.modulus.degree

    def mul(self, a: int, b: int) -> int:
        return poly_mod(poly_mul(a, b), self.modulus.bits)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a residue field")
        # extended Euclid on (modulus, a)
        r0, r1 = self.modulus.bits, a
        t0, t1 = 0, 1
        while r1:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, t0 ^ poly_mul(q, t1)
        assert r0 == 1
        return t0


@dataclass
class ResidueMatrix:
    field: ResidueField
    entries: list[list[int]]  # field elements as int bitsets

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)


@dataclass(frozen=True)
class QcMatrix:
    """m x n block matrix over F2[x]/(x^l - 1)."""

    m: int
    n: int
    l: int
    entries: tuple[tuple[RingPoly, ...], ...]

    @classmethod
    def from_polys(cls, l: int, rows) -> "QcMatrix":
        ents = tuple(tuple(p if isinstance(p, RingPoly) else RingPoly(l, p)
                           for p in row) for row in rows)
        m = len(ents)
        n = len(ents[0]) if m else 0
        if any(len(r) != n for r in ents):
            raise ValueError("ragged block matrix")
        if any(p.l != l for r in ents for p in r):
            raise SizeMismatch("mixed circulant sizes")
        return cls(m, n, l, ents)

    def expand(self) -> BitMatrix:
        """Binary expansion with each entry as an l x l circulant block."""
        dense = np.zeros((self.m * self.l, self.n * self.l), dtype=np.uint8)
        for i in range(self.m):
            for j in range(self.n):
                p = self.entries[i][j]
                if p.is_zero():
                    continue
                blk = circulant_expand(p).to_dense()
                dense[i * self.l:(i + 1) * self.l,
                      j * self.l:(j + 1) * self.l] = blk
        return BitMatrix.from_dense(dense)

    def conjugate_transpose(self) -> "QcMatrix":
        """Blockwise transpose with each entry sent through c -> c*."""
        rows = tuple(tuple(transpose_poly(self.entries[i][j])
                           for i in range(self.m)) for j in range(self.n))
        return QcMatrix(self.n, self.m, self.l, rows)


def reduce_mod_factor(a: QcMatrix, f: DensePoly) -> ResidueMatrix:
    """Entry-wise remainder mod an irreducible factor f of x^l - 1."""
    if poly_mod((1 << a.l) | 1, f.bits) != 0:
        raise NotAFactor(f"{f} does not divide x^{a.l} - 1")
    field = ResidueField(f)
    ents = [[poly_mod(a.entries[i][j].bits, f.bits) for j in range(a.n)]
            for i in range(a.m)]
    return ResidueMatrix(field, ents)


def residue_rank(mat: ResidueMatrix) -> int:
    """Rank over the residue field by Gaussian elimination with inversion."""
    field = mat.field
    rows = [list(r) for r in mat.entries]
    nrows, ncols = mat.shape
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, nrows) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = field.inv(rows[rank][c])
        rows[rank] = [field.mul(inv, v) for v in rows[rank]]
        for r in range(nrows):
            if r != rank and rows[r][c]:
                coef = rows[r][c]
                rows[r] = [v ^ field.mul(coef, w)
                           for v, w in zip(rows[r], rows[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def qc_rank(a: QcMatrix) -> int:
    """Binary rank of the expansion via the per-residue-field ranks.

    Valid only for odd l, where x^l - 1 is square-free and the circulant
    ring splits into a product of fields.
    """
    if a.l % 2 == 0:
        raise EvenCirculant(f"l={a.l} is even; use the binary expansion rank")
    fact = factor_xl_minus_1(a.l)
    total = 0
    for f in fact.factors:
        total += f.degree * residue_rank(reduce_mod_factor(a, f.poly))
    return total
