"""Pauli vectors, binary images, syndromes, and depolarizing sampling.

Single-qubit Paulis are encoded as integers 0=I, 1=X, 2=Y, 3=Z.  The
binary image b interleaves per-qubit (x, z) bits; the starred image b*
swaps each pair so that b(H) b(e) computes the symplectic commutation
syndrome.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OddLength, SizeMismatch
from .gf2 import BitMatrix, BitVector

PAULI_CHARS = "IXYZ"

# x/z bit per code: I=00, X=10, Y=11, Z=01
_X_BIT = np.array([0, 1, 1, 0], dtype=np.uint8)
_Z_BIT = np.array([0, 0, 1, 1], dtype=np.uint8)
_CODE_FROM_XZ = np.array([[0, 3], [1, 2]], dtype=np.uint8)  # [x][z]


class PauliVector:
    """Length-n vector over {I, X, Y, Z}, phases dropped."""

    __slots__ = ("n", "x_bits", "z_bits")

    def __init__(self, n: int, x_bits: BitVector, z_bits: BitVector):
        if x_bits.n != n or z_bits.n != n:
            raise SizeMismatch("x/z bit vectors must have length n")
        self.n = n
        self.x_bits = x_bits
        self.z_bits = z_bits

    @classmethod
    def identity(cls, n: int) -> "PauliVector":
        return cls(n, BitVector(n), BitVector(n))

    @classmethod
    def from_codes(cls, codes) -> "PauliVector":
        codes = np.asarray(codes, dtype=np.uint8)
        return cls(len(codes),
                   BitVector.from_dense(_X_BIT[codes]),
                   BitVector.from_dense(_Z_BIT[codes]))

    @classmethod
    def from_string(cls, s: str) -> "PauliVector":
        return cls.from_codes([PAULI_CHARS.index(ch) for ch in s])

    def codes(self) -> np.ndarray:
        return _CODE_FROM_XZ[self.x_bits.to_dense(), self.z_bits.to_dense()]

    def weight(self) -> int:
        return int(np.count_nonzero(self.x_bits.to_dense()
                                    | self.z_bits.to_dense()))

    def __mul__(self, other: "PauliVector") -> "PauliVector":
        """Phase-free group product (bitwise xor of the images)."""
        if self.n != other.n:
            raise SizeMismatch("length mismatch")
        return PauliVector(self.n, self.x_bits ^ other.x_bits,
                           self.z_bits ^ other.z_bits)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PauliVector) and self.n == other.n
                and self.x_bits == other.x_bits and self.z_bits == other.z_bits)

    def __str__(self) -> str:
        return "".join(PAULI_CHARS[c] for c in self.codes())

    def __repr__(self) -> str:
        return f"PauliVector({self.n}, weight={self.weight()})"


@dataclass
class Syndrome:
    bits: BitVector

    @property
    def m(self) -> int:
        return self.bits.n

    def is_zero(self) -> bool:
        return self.bits.is_zero()

    def __eq__(self, other) -> bool:
        return isinstance(other, Syndrome) and self.bits == other.bits


@dataclass(frozen=True)
class ChannelModel:
    """Depolarizing channel: each qubit independently X/Y/Z with p/3."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"error rate {self.p} outside [0, 1]")

    def prior(self) -> np.ndarray:
        """(p_I, p_X, p_Y, p_Z) prior for a single qubit."""
        return np.array([1.0 - self.p, self.p / 3, self.p / 3, self.p / 3])


def _interleave(x: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.empty(2 * len(x), dtype=np.uint8)
    out[0::2] = x
    out[1::2] = z
    return out


def pauli_to_binary(v: PauliVector) -> BitVector:
    """b(v) = (x_1, z_1, x_2, z_2, ...)."""
    return BitVector.from_dense(_interleave(v.x_bits.to_dense(),
                                            v.z_bits.to_dense()))


def binary_to_pauli(bits: BitVector) -> PauliVector:
    if bits.n % 2:
        raise OddLength(f"binary image length {bits.n} is odd")
    dense = bits.to_dense()
    return PauliVector(bits.n // 2,
                       BitVector.from_dense(dense[0::2]),
                       BitVector.from_dense(dense[1::2]))


def stabilizer_to_binary(rows: list[PauliVector]) -> BitMatrix:
    """b(H): each stabilizer row h becomes b*(h) = (z_1, x_1, z_2, x_2, ...).

    The swap realizes the symplectic inner product, so b(H) b(e) is the
    commutation syndrome of the error e.
    """
    if not rows:
        return BitMatrix.zeros(0, 0)
    n = rows[0].n
    dense = np.zeros((len(rows), 2 * n), dtype=np.uint8)
    for i, h in enumerate(rows):
        dense[i] = _interleave(h.z_bits.to_dense(), h.x_bits.to_dense())
    return BitMatrix.from_dense(dense)


def stabilizer_rows_image(rows: list[PauliVector]) -> BitMatrix:
    """Plain b-images of stabilizer rows (for row-space membership)."""
    if not rows:
        return BitMatrix.zeros(0, 0)
    n = rows[0].n
    dense = np.zeros((len(rows), 2 * n), dtype=np.uint8)
    for i, h in enumerate(rows):
        dense[i] = _interleave(h.x_bits.to_dense(), h.z_bits.to_dense())
    return BitMatrix.from_dense(dense)


def syndrome_of(h_bin: BitMatrix, e: PauliVector) -> Syndrome:
    """s = b(H) b(e) over GF(2) for a stabilizer matrix in b(H) form."""
    if h_bin.cols != 2 * e.n:
        raise SizeMismatch(f"{h_bin.cols} columns vs 2n = {2 * e.n}")
    from .gf2 import matvec
    return Syndrome(matvec(h_bin, pauli_to_binary(e)))


def pauli_weight(x: BitVector) -> int:
    """|x|_P: qubit positions whose (x, z) bit pair is non-zero."""
    if x.n % 2:
        raise OddLength(f"length {x.n} is odd")
    dense = x.to_dense()
    return int(np.count_nonzero(dense[0::2] | dense[1::2]))


def sample_depolarizing(n: int, model: ChannelModel,
                        rng: np.random.Generator) -> PauliVector:
    """I.i.d. per-qubit depolarizing draw; exactly two rng draws per qubit."""
    hit = rng.random(n) < model.p
    kind = rng.integers(1, 4, size=n)
    return PauliVector.from_codes(np.where(hit, kind, 0).astype(np.uint8))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based per-trial stream; independent of worker layout."""
    return np.random.Generator(np.random.Philox(key=np.array(
        [seed & 0xFFFFFFFFFFFFFFFF, trial & 0xFFFFFFFFFFFFFFFF],
        dtype=np.uint64)))
