"""CSS code constructions: generalized bicycle, generalized hypergraph
product, hypergraph product, plus the registry of benchmark codes.

Conventions fixed across the package: a ring polynomial expands to the
circulant whose first column is its coefficient vector, and the starred
matrix A* has entry (i, j) equal to the transposed polynomial of
A[j][i], so the block identities A b + b A = 0 hold verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels, gf2, rings
from .errors import (MissingExternalMatrix, NotAFactor, SizeMismatch,
                     UnknownId)
from .gf2 import BitMatrix, BitVector, RowSpace
from .pauli import PauliVector
from .rings import (DensePoly, QcMatrix, RingPoly, circulant_expand,
                    factor_xl_minus_1, poly_gcd, poly_mod, transpose_poly,
                    xl_minus_1)


# ---------------------------------------------------------------------------
# CSS codes


@dataclass
class TannerStats:
    w_r: int
    w_c: tuple[int, ...]
    girth: int | None  # None: no cycle of length <= cap found
    girth_cap: int


class CssCode:
    """CSS code (H_X, H_Z) with cached derived structure.

    layers_x / layers_z assign each check row to a scheduling layer
    (block rows of the construction); decoders group check updates by
    these ids.
    """

    def __init__(self, hx: BitMatrix, hz: BitMatrix,
                 known_distance: int | None = None,
                 layers_x: np.ndarray | None = None,
                 layers_z: np.ndarray | None = None,
                 name: str = ""):
        if hx.cols != hz.cols:
            raise SizeMismatch("H_X and H_Z must share the qubit count")
        self.hx = hx
        self.hz = hz
        self.n = hx.cols
        self.known_distance = known_distance
        self.name = name
        self.layers_x = (layers_x if layers_x is not None
                         else np.zeros(hx.rows, dtype=np.int64))
        self.layers_z = (layers_z if layers_z is not None
                         else np.full(hz.rows, 1, dtype=np.int64))
        self._k: int | None = None
        self._stats: TannerStats | None = None
        self._syndrome_matrix: BitMatrix | None = None
        self._stab_rowspace: RowSpace | None = None

    @property
    def k(self) -> int:
        if self._k is None:
            self._k = self.n - gf2.rank(self.hx) - gf2.rank(self.hz)
        return self._k

    @property
    def m(self) -> int:
        return self.hx.rows + self.hz.rows

    def check_commutativity(self) -> bool:
        if self.hx.rows == 0 or self.hz.rows == 0:
            return True
        return not _kernels.overlap_parity_any(self.hx.data, self.hz.data)

    def stabilizer_paulis(self) -> list[PauliVector]:
        """Rows of H_X as X-type and H_Z as Z-type Pauli vectors."""
        zero = BitVector(self.n)
        out = [PauliVector(self.n, self.hx.row(i), zero.copy())
               for i in range(self.hx.rows)]
        out += [PauliVector(self.n, zero.copy(), self.hz.row(i))
                for i in range(self.hz.rows)]
        return out

    def syndrome_matrix(self) -> BitMatrix:
        """b(H) for the stacked stabilizer rows (X rows first)."""
        if self._syndrome_matrix is None:
            n = self.n
            dense = np.zeros((self.m, 2 * n), dtype=np.uint8)
            dense[: self.hx.rows, 1::2] = self.hx.to_dense()
            dense[self.hx.rows:, 0::2] = self.hz.to_dense()
            self._syndrome_matrix = BitMatrix.from_dense(dense)
        return self._syndrome_matrix

    def stabilizer_rowspace(self) -> RowSpace:
        """Row space of the plain b-images, for degeneracy tests."""
        if self._stab_rowspace is None:
            n = self.n
            dense = np.zeros((self.m, 2 * n), dtype=np.uint8)
            dense[: self.hx.rows, 0::2] = self.hx.to_dense()
            dense[self.hx.rows:, 1::2] = self.hz.to_dense()
            self._stab_rowspace = RowSpace(BitMatrix.from_dense(dense))
        return self._stab_rowspace

    def syndrome(self, e: PauliVector):
        """[s_X, s_Z] with s_X = H_X e_z and s_Z = H_Z e_x."""
        from .pauli import Syndrome
        sx = gf2.matvec(self.hx, e.z_bits)
        sz = gf2.matvec(self.hz, e.x_bits)
        return Syndrome(BitVector.from_dense(
            np.concatenate([sx.to_dense(), sz.to_dense()])))

    def tanner_stats(self, girth_cap: int = 8) -> TannerStats:
        if self._stats is None or self._stats.girth_cap != girth_cap:
            self._stats = tanner_stats(self, girth_cap)
        return self._stats

    def params(self) -> tuple[int, int]:
        return (self.n, self.k)

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"CssCode{label}[[{self.n}, {self.k}]]"


def check_commutativity(code: CssCode) -> bool:
    return code.check_commutativity()


def _bipartite_girth(h: BitMatrix, cap: int) -> int:
    """Girth of the Tanner graph of one check matrix, or cap + 1."""
    dense = h.to_dense()
    chk, var = np.nonzero(dense)
    if len(chk) == 0:
        return cap + 1
    n = h.cols
    nv = n + h.rows
    deg = np.zeros(nv, dtype=np.int64)
    np.add.at(deg, var, 1)
    np.add.at(deg, n + chk, 1)
    ptr = np.zeros(nv + 1, dtype=np.int64)
    np.cumsum(deg, out=ptr[1:])
    adj = np.empty(2 * len(chk), dtype=np.int64)
    fill = ptr[:-1].copy()
    for c, v in zip(chk, var):
        adj[fill[v]] = n + c
        fill[v] += 1
        adj[fill[n + c]] = v
        fill[n + c] += 1
    return int(_kernels.girth_bfs(ptr, adj, cap))


def tanner_stats(code: CssCode, girth_cap: int = 8) -> TannerStats:
    """Row/column weight extremes and girth, per CSS matrix.

    Girth is the minimum over the H_X and H_Z Tanner graphs.  The
    stacked graph always closes X-Z 4-cycles through shared qubits, so
    the per-matrix number is the one that reflects message-passing
    quality (and the one tabulated for the benchmark codes).
    """
    if girth_cap < 4:
        raise ValueError("girth_cap must be at least 4")
    wr = 0
    wcs: set[int] = set()
    g = girth_cap + 1
    for h in (code.hx, code.hz):
        if h.rows == 0:
            continue
        wr = max(wr, int(h.row_weights().max()))
        wcs.update(int(w) for w in np.unique(h.col_weights()))
        g = min(g, _bipartite_girth(h, girth_cap))
    wcs.discard(0)
    girth = g if g <= girth_cap else None
    return TannerStats(wr, tuple(sorted(wcs)), girth, girth_cap)


# ---------------------------------------------------------------------------
# constructions


@dataclass(frozen=True)
class GbSpec:
    l: int
    a: RingPoly
    b: RingPoly

    def __post_init__(self):
        if self.a.is_zero() or self.b.is_zero():
            raise ValueError("generalized bicycle polynomials must be nonzero")
        if self.a.l != self.l or self.b.l != self.l:
            raise SizeMismatch("polynomial circulant size mismatch")

    @classmethod
    def from_exponents(cls, l: int, a_exps, b_exps) -> "GbSpec":
        return cls(l, RingPoly.from_exponents(l, a_exps),
                   RingPoly.from_exponents(l, b_exps))


@dataclass(frozen=True)
class GhpSpec:
    l: int
    a: QcMatrix
    b: RingPoly

    def __post_init__(self):
        if self.a.l != self.l or self.b.l != self.l:
            raise SizeMismatch("circulant size mismatch")


@dataclass(frozen=True)
class HpSpec:
    a: BitMatrix
    b: BitMatrix

    @classmethod
    def from_cyclic(cls, l: int, h_exps) -> "HpSpec":
        """Both factors equal to the circulant of the parity polynomial."""
        h = circulant_expand(RingPoly.from_exponents(l, h_exps))
        return cls(h, h)


def build_gb(spec: GbSpec, name: str = "") -> CssCode:
    """H_X = [A, B], H_Z = [B^T, A^T] from two commuting circulants."""
    a = circulant_expand(spec.a)
    b = circulant_expand(spec.b)
    hx = gf2.hstack([a, b])
    hz = gf2.hstack([b.transpose(), a.transpose()])
    return CssCode(hx, hz,
                   layers_x=np.zeros(spec.l, dtype=np.int64),
                   layers_z=np.ones(spec.l, dtype=np.int64),
                   name=name)


def gb_dimension(spec: GbSpec) -> int:
    """k = 2 deg gcd(a, b, x^l - 1); valid for every circulant size."""
    g = poly_gcd(poly_gcd(spec.a.dense(), spec.b.dense()), xl_minus_1(spec.l))
    return 2 * g.degree


def build_ghp(spec: GhpSpec, name: str = "") -> CssCode:
    """H_X = [A, b I_m], H_Z = [b^T I_n, A*] over the ring of circulants."""
    l, m, n = spec.l, spec.a.m, spec.a.n
    a_bin = spec.a.expand().to_dense()
    b_bin = circulant_expand(spec.b).to_dense()
    eye_m = np.eye(m, dtype=np.uint8)
    eye_n = np.eye(n, dtype=np.uint8)
    hx = np.hstack([a_bin, np.kron(eye_m, b_bin)])
    astar = spec.a.conjugate_transpose().expand().to_dense()
    hz = np.hstack([np.kron(eye_n, b_bin.T), astar])
    layers_x = np.repeat(np.arange(m, dtype=np.int64), l)
    layers_z = np.repeat(np.arange(m, m + n, dtype=np.int64), l)
    return CssCode(BitMatrix.from_dense(hx), BitMatrix.from_dense(hz),
                   layers_x=layers_x, layers_z=layers_z, name=name)


def ghp_dimension(spec: GhpSpec) -> int:
    """K = sum over factors of gcd(b, x^l-1) of d_i (m + n - 2 rk phi_i(A))."""
    from .errors import EvenCirculant
    if spec.l % 2 == 0:
        raise EvenCirculant("dimension formula requires odd circulant size")
    g = poly_gcd(spec.b.dense(), xl_minus_1(spec.l))
    total = 0
    for f in factor_xl_minus_1(spec.l).factors:
        if poly_mod(g.bits, f.poly.bits) != 0:
            continue
        r = rings.residue_rank(rings.reduce_mod_factor(spec.a, f.poly))
        total += f.degree * (spec.a.m + spec.a.n - 2 * r)
    return total


def build_hp(spec: HpSpec, name: str = "") -> CssCode:
    """Kronecker hypergraph product of two binary parity-check matrices."""
    a = spec.a.to_dense()
    b = spec.b.to_dense()
    ma, na = a.shape
    mb, nb = b.shape
    hx = np.hstack([np.kron(a, np.eye(mb, dtype=np.uint8)),
                    np.kron(np.eye(ma, dtype=np.uint8), b)])
    hz = np.hstack([np.kron(np.eye(na, dtype=np.uint8), b.T),
                    np.kron(a.T, np.eye(nb, dtype=np.uint8))])
    layers_x = np.repeat(np.arange(ma, dtype=np.int64), mb)
    layers_z = np.repeat(np.arange(ma, ma + na, dtype=np.int64), nb)
    return CssCode(BitMatrix.from_dense(hx), BitMatrix.from_dense(hz),
                   layers_x=layers_x, layers_z=layers_z, name=name)


def hp_dimension(spec: HpSpec) -> int:
    ma, na = spec.a.rows, spec.a.cols
    mb, nb = spec.b.rows, spec.b.cols
    ka = na - gf2.rank(spec.a)
    kb = nb - gf2.rank(spec.b)
    return 2 * ka * kb - ka * (nb - mb) - kb * (na - ma)


def syndrome_code_membership(spec: GbSpec, g: DensePoly) -> bool:
    """True iff a and b are codewords of the cyclic code generated by g."""
    if poly_mod((1 << spec.l) | 1, g.bits) != 0:
        raise NotAFactor(f"{g} does not divide x^{spec.l} - 1")
    return (poly_mod(spec.a.bits, g.bits) == 0
            and poly_mod(spec.b.bits, g.bits) == 0)


def search_gb_polynomials(l: int, g: DensePoly, weight: int, count: int,
                          budget: int, rng: np.random.Generator) -> list[GbSpec]:
    """Rejection-sample weight-`weight` polynomial pairs inside C_g.

    Draws random weight-w ring polynomials until `count` member pairs
    are assembled or `budget` draws are exhausted.
    """
    if poly_mod((1 << l) | 1, g.bits) != 0:
        raise NotAFactor(f"{g} does not divide x^{l} - 1")
    members: list[RingPoly] = []
    specs: list[GbSpec] = []
    for _ in range(budget):
        if len(specs) >= count:
            break
        exps = rng.choice(l, size=weight, replace=False)
        p = RingPoly.from_exponents(l, sorted(int(e) for e in exps))
        if poly_mod(p.bits, g.bits) == 0:
            members.append(p)
            if len(members) >= 2:
                specs.append(GbSpec(l, members[-2], members[-1]))
                members.pop()
    return specs[:count]


# ---------------------------------------------------------------------------
# bitmat v1 files


def write_bitmat(path, m: BitMatrix) -> None:
    dense = m.to_dense()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{m.rows} {m.cols}\n")
        for row in dense:
            fh.write("".join("1" if b else "0" for b in row) + "\n")


def read_bitmat(path) -> BitMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: bad bitmat v1 header")
        rows, cols = int(header[0]), int(header[1])
        dense = np.zeros((rows, cols), dtype=np.uint8)
        for i in range(rows):
            line = fh.readline().strip()
            if len(line) != cols or set(line) - {"0", "1"}:
                raise ValueError(f"{path}: bad bitmat row {i}")
            dense[i] = np.frombuffer(line.encode(), dtype=np.uint8) - ord("0")
    return BitMatrix.from_dense(dense)


def code_from_matrices(hx: BitMatrix, hz: BitMatrix,
                       known_distance: int | None = None,
                       name: str = "") -> CssCode:
    return CssCode(hx, hz, known_distance=known_distance, name=name)


# ---------------------------------------------------------------------------
# code-spec files (UTF-8, line oriented, key=value)


def _parse_qc_cell(cell: str, l: int) -> RingPoly:
    cell = cell.strip()
    if cell == "-":
        return RingPoly.zero(l)
    exps = sorted(int(t) for t in cell.split("+"))
    return RingPoly.from_exponents(l, exps)


def parse_code_spec(text: str):
    """Parse a code-spec file into a GbSpec, GhpSpec, or HpSpec."""
    kv: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad spec line: {line!r}")
        key, val = line.split("=", 1)
        kv[key.strip()] = val.strip()
    family = kv.get("family")
    if family == "gb":
        l = int(kv["l"])
        return GbSpec.from_exponents(l, rings.parse_exponents(kv["a"]),
                                     rings.parse_exponents(kv["b"]))
    if family == "ghp":
        l = int(kv["l"])
        rows = [[_parse_qc_cell(c, l) for c in row.split(",")]
                for row in kv["A"].split(";")]
        return GhpSpec(l, QcMatrix.from_polys(l, rows),
                       RingPoly.from_exponents(l, rings.parse_exponents(kv["b"])))
    if family == "hp":
        if "h" in kv:
            return HpSpec.from_cyclic(int(kv["l"]),
                                      rings.parse_exponents(kv["h"]))
        return HpSpec(read_bitmat(kv["a_file"]), read_bitmat(kv["b_file"]))
    raise ValueError(f"unknown family {family!r}")


def build(spec, name: str = "") -> CssCode:
    if isinstance(spec, GbSpec):
        return build_gb(spec, name)
    if isinstance(spec, GhpSpec):
        return build_ghp(spec, name)
    if isinstance(spec, HpSpec):
        return build_hp(spec, name)
    raise TypeError(f"not a code spec: {spec!r}")


# ---------------------------------------------------------------------------
# registry of benchmark codes


@dataclass
class RegistryEntry:
    id: str
    family: str
    spec: object | None
    n: int
    k: int
    d: int | None
    rate: float
    w_r: int
    w_c: tuple[int, ...]
    girth: int
    note: str = ""

    def build(self, matrix_dir=None) -> CssCode:
        if self.spec is None:
            if matrix_dir is None:
                raise MissingExternalMatrix(
                    f"{self.id} needs {self.id}.hx/.hz matrix files")
            base = Path(matrix_dir)
            hx_path = base / f"{self.id}.hx"
            hz_path = base / f"{self.id}.hz"
            if not hx_path.exists() or not hz_path.exists():
                raise MissingExternalMatrix(
                    f"{self.id} needs {hx_path} and {hz_path}")
            return code_from_matrices(read_bitmat(hx_path),
                                      read_bitmat(hz_path),
                                      known_distance=self.d, name=self.id)
        code = build(self.spec, name=self.id)
        code.known_distance = self.d
        return code

    def matches(self, code: CssCode) -> bool:
        return code.n == self.n and code.k == self.k


def _ghp_circulant_rows(l: int, first_row: list, size: int) -> QcMatrix:
    """Block-circulant A whose block rows cyclically shift the first row."""
    cells = [_parse_qc_cell(str(c), l) if not isinstance(c, RingPoly) else c
             for c in first_row]
    rows = []
    for i in range(size):
        rows.append([cells[(j - i) % size] for j in range(size)])
    return QcMatrix.from_polys(l, rows)


def _mono(l: int, e: int) -> RingPoly:
    return RingPoly.from_exponents(l, [e])


def _zero(l: int) -> RingPoly:
    return RingPoly.zero(l)


def _registry() -> dict[str, RegistryEntry]:
    entries: list[RegistryEntry] = []

    def gb(id_, l, a, b, n, k, d, rate, wr, wc, girth):
        entries.append(RegistryEntry(id_, "gb",
                                     GbSpec.from_exponents(l, a, b),
                                     n, k, d, rate, wr, (wc,), girth))

    gb("A1", 127, [0, 15, 20, 28, 66], [0, 58, 59, 100, 121],
       254, 28, None, 0.110, 10, 5, 6)
    gb("A2", 63, [0, 1, 14, 16, 22], [0, 3, 13, 20, 42],
       126, 28, 8, 0.222, 10, 5, 4)
    gb("A3", 24, [0, 2, 8, 15], [0, 2, 12, 17],
       48, 6, 8, 0.125, 8, 4, 4)
    gb("A4", 23, [0, 5, 8, 12], [0, 1, 5, 7],
       46, 2, 9, 0.043, 8, 4, 4)
    gb("A5", 90, [0, 28, 80, 89], [0, 2, 21, 25],
       180, 10, None, 0.056, 8, 4, 6)
    gb("A6", 450, [0, 97, 372, 425], [0, 50, 265, 390],
       900, 50, None, 0.056, 8, 4, 6)

    # B1: block-circulant 7x7 over l=63, first block row (x^27, 0, 0, 0, 0, 1, x^54)
    l = 63
    b1_a = _ghp_circulant_rows(l, ["27", "-", "-", "-", "-", "0", "54"], 7)
    entries.append(RegistryEntry(
        "B1", "ghp", GhpSpec(l, b1_a, RingPoly.from_exponents(l, [0, 1, 6])),
        882, 24, None, 0.027, 6, (3,), 6))

    # B2: first block row (x^27, 0, 0, 1, x^18, x^27, 1)
    b2_a = _ghp_circulant_rows(l, ["27", "-", "-", "0", "18", "27", "0"], 7)
    entries.append(RegistryEntry(
        "B2", "ghp", GhpSpec(l, b2_a, RingPoly.from_exponents(l, [0, 1, 6])),
        882, 48, None, 0.054, 8, (3, 5), 6))

    # B3: explicit 5x5 block matrix over l=127
    l = 127
    z = _zero(l)
    b3_rows = [
        [_mono(l, 0), z, _mono(l, 51), _mono(l, 52), z],
        [z, _mono(l, 0), z, _mono(l, 111), _mono(l, 20)],
        [_mono(l, 0), z, _mono(l, 98), z, _mono(l, 122)],
        [_mono(l, 0), _mono(l, 80), z, _mono(l, 119), z],
        [z, _mono(l, 0), _mono(l, 5), z, _mono(l, 106)],
    ]
    entries.append(RegistryEntry(
        "B3", "ghp", GhpSpec(l, QcMatrix.from_polys(l, b3_rows),
                             RingPoly.from_exponents(l, [0, 1, 7])),
        1270, 28, None, 0.022, 6, (3,), 6))

    entries.append(RegistryEntry(
        "C1", "hp", HpSpec.from_cyclic(63, [0, 3, 34, 41, 57]),
        7938, 578, 16, 0.073, 10, (5,), 6))
    # C2's defining matrix is distributed as an external file upstream; a
    # weight-3 parity polynomial whose gcd with x^31 - 1 has degree 5
    # reproduces every published parameter of the [[1922, 50, 16]] code.
    entries.append(RegistryEntry(
        "C2", "hp", HpSpec.from_cyclic(31, [0, 2, 5]),
        1922, 50, 16, 0.026, 6, (3,), 6,
        note="reconstructed parity polynomial"))

    entries.append(RegistryEntry(
        "D1", "import", None, 1024, 30, None, 0.029, 8, (4,), 4,
        note="cubic code on the 8x8x8 lattice; supply D1.hx/D1.hz"))
    entries.append(RegistryEntry(
        "E1", "import", None, 900, 50, 14, 0.056, 8, (4,), 4,
        note="hyperbicycle code; supply E1.hx/E1.hz"))
    entries.append(RegistryEntry(
        "F1", "import", None, 49, 1, 9, 0.020, 8, (6, 8), 4,
        note="homological product code; supply F1.hx/F1.hz"))
    return {e.id: e for e in entries}


_REGISTRY_CACHE: dict[str, RegistryEntry] | None = None


def registry(id_: str) -> RegistryEntry:
    global _REGISTRY_CACHE
    if _REGISTRY_CACHE is None:
        _REGISTRY_CACHE = _registry()
    if id_ not in _REGISTRY_CACHE:
        raise UnknownId(f"unknown registry id {id_!r}")
    return _REGISTRY_CACHE[id_]


def registry_ids() -> list[str]:
    global _REGISTRY_CACHE
    if _REGISTRY_CACHE is None:
        _REGISTRY_CACHE = _registry()
    return list(_REGISTRY_CACHE)
