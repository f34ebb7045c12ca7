"""Dense linear algebra over GF(2) on bit-packed integers.

Vectors and matrix rows are Python ints used as bitsets: bit ``i`` of the
payload is coordinate ``i`` (0-based).  All row operations are therefore
single wide XORs.  Hex and byte conversions at the wire boundary use
big-endian bit order within bytes, so coordinate 0 is the most significant
bit of byte 0 and rows pad on the right up to a whole byte.

Values are immutable after construction; every operation returns a fresh
object, which keeps sharing across worker processes safe.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "BitVector",
    "BitMatrix",
    "Permutation",
    "IndexSet",
    "SingularSelectionError",
    "mat_vec_mul",
    "mat_mul",
    "rank",
    "inverse",
    "systematic_form",
    "front_permutation",
    "permutation_apply",
    "random_permutation",
    "random_matrix",
    "random_nonsingular",
]


class SingularSelectionError(ValueError):
    """The selected columns do not reduce to an identity block."""


def _pack_positions(n: int, positions: Iterable[int]) -> int:
    bits = 0
    for i in positions:
        if not 0 <= i < n:
            raise ValueError(f"position {i} outside [0, {n})")
        if bits >> i & 1:
            raise ValueError(f"duplicate position {i}")
        bits |= 1 << i
    return bits


def _bits_to_bytes(bits: int, n: int) -> bytes:
    out = bytearray((n + 7) // 8)
    for i in range(n):
        if bits >> i & 1:
            out[i >> 3] |= 0x80 >> (i & 7)
    return bytes(out)


def _bytes_to_bits(data: bytes, n: int) -> int:
    if len(data) < (n + 7) // 8:
        raise ValueError(f"{len(data)} bytes cannot hold {n} bits")
    bits = 0
    for i in range(n):
        if data[i >> 3] >> (7 - (i & 7)) & 1:
            bits |= 1 << i
    return bits


@dataclass(frozen=True)
class BitVector:
    """Immutable vector over GF(2), length ``n``, payload ``bits``."""

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError("payload does not fit the stated length")

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(n, 0)

    @classmethod
    def from_support(cls, n: int, positions: Iterable[int]) -> "BitVector":
        return cls(n, _pack_positions(n, positions))

    @classmethod
    def from_bits(cls, values: Sequence[int]) -> "BitVector":
        bits = 0
        for i, v in enumerate(values):
            if v not in (0, 1):
                raise ValueError("entries must be 0 or 1")
            bits |= v << i
        return cls(len(values), bits)

    @classmethod
    def random(cls, n: int, rng: random.Random) -> "BitVector":
        return cls(n, rng.getrandbits(n) if n else 0)

    @classmethod
    def from_bytes(cls, data: bytes, n: int) -> "BitVector":
        return cls(n, _bytes_to_bits(data, n))

    @classmethod
    def from_hex(cls, text: str, n: int) -> "BitVector":
        return cls.from_bytes(bytes.fromhex(text.strip()), n)

    def weight(self) -> int:
        return self.bits.bit_count()

    def get(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return self.bits >> i & 1

    def support(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.bits >> i & 1)

    def flip(self, i: int) -> "BitVector":
        if not 0 <= i < self.n:
            raise IndexError(i)
        return BitVector(self.n, self.bits ^ (1 << i))

    def slice(self, start: int, stop: int) -> "BitVector":
        if not 0 <= start <= stop <= self.n:
            raise IndexError((start, stop))
        mask = (1 << (stop - start)) - 1
        return BitVector(stop - start, self.bits >> start & mask)

    def concat(self, other: "BitVector") -> "BitVector":
        return BitVector(self.n + other.n, self.bits | other.bits << self.n)

    def to_bytes(self) -> bytes:
        return _bits_to_bytes(self.bits, self.n)

    def to_hex(self) -> str:
        return self.to_bytes().hex()

    def to01(self) -> str:
        return "".join(str(self.bits >> i & 1) for i in range(self.n))

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        return BitVector(self.n, self.bits ^ other.bits)

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class BitMatrix:
    """Immutable row-major matrix over GF(2); each row is a packed int."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("negative shape")
        if len(self.rows) != self.nrows:
            raise ValueError("row count does not match shape")
        limit = 1 << self.ncols
        for r in self.rows:
            if not 0 <= r < limit:
                raise ValueError("row payload does not fit the stated width")

    @classmethod
    def from_rows(cls, ncols: int, rows: Iterable[int]) -> "BitMatrix":
        rows = tuple(rows)
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[int]]) -> "BitMatrix":
        rows = tuple(BitVector.from_bits(row).bits for row in entries)
        ncols = len(entries[0]) if entries else 0
        return cls(len(entries), ncols, rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(nrows, ncols, (0,) * nrows)

    def row(self, i: int) -> BitVector:
        return BitVector(self.ncols, self.rows[i])

    def entry(self, i: int, j: int) -> int:
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return self.rows[i] >> j & 1

    def columns(self) -> tuple[int, ...]:
        """Column payloads: bit ``r`` of column ``j`` is entry (r, j)."""
        cols = [0] * self.ncols
        for r, bits in enumerate(self.rows):
            while bits:
                low = bits & -bits
                cols[low.bit_length() - 1] |= 1 << r
                bits ^= low
        return tuple(cols)

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.ncols, self.nrows, self.columns())

    def permute_cols(self, perm: "Permutation") -> "BitMatrix":
        if perm.n != self.ncols:
            raise ValueError("permutation size does not match column count")
        return BitMatrix(
            self.nrows, self.ncols, tuple(perm.apply_bits(r) for r in self.rows)
        )

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        rows = tuple(
            a | b << self.ncols for a, b in zip(self.rows, other.rows)
        )
        return BitMatrix(self.nrows, self.ncols + other.ncols, rows)

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return BitMatrix(
            self.nrows + other.nrows, self.ncols, self.rows + other.rows
        )

    def to_text(self) -> str:
        """Serialize as a header line ``rows cols`` then one hex row per line."""
        lines = [f"{self.nrows} {self.ncols}"]
        for r in self.rows:
            lines.append(_bits_to_bytes(r, self.ncols).hex())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty matrix text")
        try:
            nrows, ncols = (int(tok) for tok in lines[0].split())
        except Exception as exc:
            raise ValueError(f"bad matrix header: {lines[0]!r}") from exc
        if len(lines) != 1 + nrows:
            raise ValueError(f"expected {nrows} rows, found {len(lines) - 1}")
        rows = tuple(
            _bytes_to_bits(bytes.fromhex(ln.strip()), ncols) for ln in lines[1:]
        )
        return cls(nrows, ncols, rows)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return mat_mul(self, other)


@dataclass(frozen=True)
class Permutation:
    """Permutation of ``n`` coordinates; ``images[i]`` is where ``i`` lands."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("images are not a permutation of 0..n-1")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def apply_bits(self, bits: int) -> int:
        out = 0
        while bits:
            low = bits & -bits
            out |= 1 << self.images[low.bit_length() - 1]
            bits ^= low
        return out

    def apply(self, v: BitVector) -> BitVector:
        """Row-vector action: coordinate ``i`` of ``v`` moves to ``images[i]``."""
        if v.n != self.n:
            raise ValueError("length mismatch")
        return BitVector(self.n, self.apply_bits(v.bits))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def matrix(self) -> BitMatrix:
        """The matrix P with ``v.apply == v @ P`` for row vectors."""
        return BitMatrix(
            self.n, self.n, tuple(1 << j for j in self.images)
        )


@dataclass(frozen=True)
class IndexSet:
    """Sorted set of distinct coordinate indices inside [0, n)."""

    n: int
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        ms = self.members
        if any(not 0 <= i < self.n for i in ms):
            raise ValueError("member outside [0, n)")
        if any(ms[i] >= ms[i + 1] for i in range(len(ms) - 1)):
            raise ValueError("members must be strictly increasing")

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "IndexSet":
        return cls(n, tuple(sorted(members)))

    def complement(self) -> tuple[int, ...]:
        inside = set(self.members)
        return tuple(i for i in range(self.n) if i not in inside)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def front_permutation(cols: Sequence[int], n: int) -> Permutation:
    """Permutation sending ``cols[j]`` to position ``j``.

    The remaining coordinates keep their relative order behind the moved
    block, e.g. cols (2, 0) on four coordinates (a, b, c, d) -> (c, a, b, d).
    """
    seen = _pack_positions(n, cols)
    images = [0] * n
    for j, c in enumerate(cols):
        images[c] = j
    nxt = len(cols)
    for i in range(n):
        if not seen >> i & 1:
            images[i] = nxt
            nxt += 1
    return Permutation(tuple(images))


def random_permutation(n: int, rng: random.Random) -> Permutation:
    images = list(range(n))
    rng.shuffle(images)
    return Permutation(tuple(images))


def permutation_apply(p: Permutation, v: BitVector) -> BitVector:
    """Free-function form of :meth:`Permutation.apply`."""
    return p.apply(v)


def mat_vec_mul(m: BitMatrix, v: BitVector) -> BitVector:
    """Syndrome map ``v -> m @ v^T`` (``v`` read as a column on the right)."""
    if m.ncols != v.n:
        raise ValueError(f"shape mismatch: {m.ncols} columns vs length {v.n}")
    bits = 0
    for i, row in enumerate(m.rows):
        bits |= ((row & v.bits).bit_count() & 1) << i
    return BitVector(m.nrows, bits)


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.ncols != b.nrows:
        raise ValueError(f"shape mismatch: {a.ncols} vs {b.nrows}")
    out = []
    for bits in a.rows:
        acc = 0
        while bits:
            low = bits & -bits
            acc ^= b.rows[low.bit_length() - 1]
            bits ^= low
        out.append(acc)
    return BitMatrix(a.nrows, b.ncols, tuple(out))


def rank(m: BitMatrix) -> int:
    rows = [r for r in m.rows if r]
    rk = 0
    while rows:
        pivot = rows.pop()
        rk += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rk


def inverse(m: BitMatrix) -> BitMatrix:
    """Inverse of a square matrix; raises ValueError when singular."""
    if m.nrows != m.ncols:
        raise ValueError("matrix is not square")
    n = m.nrows
    work = [m.rows[i] | 1 << (n + i) for i in range(n)]
    for col in range(n):
        pivot = next(
            (i for i in range(col, n) if work[i] >> col & 1), None
        )
        if pivot is None:
            raise ValueError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        for i in range(n):
            if i != col and work[i] >> col & 1:
                work[i] ^= work[col]
    return BitMatrix(n, n, tuple(r >> n for r in work))


def random_matrix(nrows: int, ncols: int, rng: random.Random) -> BitMatrix:
    return BitMatrix(
        nrows,
        ncols,
        tuple(rng.getrandbits(ncols) if ncols else 0 for _ in range(nrows)),
    )


def random_nonsingular(n: int, rng: random.Random) -> BitMatrix:
    """Uniform nonsingular n x n matrix by rejection (density > 0.28)."""
    while True:
        m = random_matrix(n, n, rng)
        if rank(m) == n:
            return m


def random_full_rank(nrows: int, ncols: int, rng: random.Random) -> BitMatrix:
    while True:
        m = random_matrix(nrows, ncols, rng)
        if rank(m) == min(nrows, ncols):
            return m


def systematic_form(
    h: BitMatrix, cols: Sequence[int], l: int | None = None
) -> tuple[BitMatrix, BitMatrix, BitMatrix]:
    """Row-reduce ``h`` so the selected columns become an identity block.

    ``cols`` lists r - l column indices (r = number of rows of ``h``); after
    moving them to the front with :func:`front_permutation`, a nonsingular U
    with ``U @ h_perm == [[I, hp], [0, hpp]]`` is computed.  ``l`` is the
    number of zero-block rows and must equal r - len(cols) when given.

    Returns:
        (U, hp, hpp) where hp has r - l rows and hpp has l rows, both with
        ncols - len(cols) columns.

    Raises:
        SingularSelectionError: the selected columns have column rank below
            len(cols); the caller is expected to resample the selection.
        ValueError: ``h`` itself is rank deficient (detected via hpp).
    """
    r = h.nrows
    front = len(cols)
    if l is None:
        l = r - front
    if l != r - front or l < 0:
        raise ValueError(f"need len(cols) == nrows - l, got {front} != {r} - {l}")
    wnd = h.ncols - front
    perm = front_permutation(cols, h.ncols)
    hp_rows = [perm.apply_bits(row) for row in h.rows]
    work = [hp_rows[i] | 1 << (h.ncols + i) for i in range(r)]
    for col in range(front):
        pivot = next(
            (i for i in range(col, r) if work[i] >> col & 1), None
        )
        if pivot is None:
            raise SingularSelectionError(
                f"column selection singular at pivot {col}"
            )
        work[col], work[pivot] = work[pivot], work[col]
        for i in range(r):
            if i != col and work[i] >> col & 1:
                work[i] ^= work[col]
    u = BitMatrix(r, r, tuple(row >> h.ncols for row in work))
    mask = (1 << wnd) - 1
    hp = BitMatrix(front, wnd, tuple(work[i] >> front & mask for i in range(front)))
    hpp = BitMatrix(l, wnd, tuple(work[i] >> front & mask for i in range(front, r)))
    if rank(hpp) < l:
        raise ValueError("parity-check matrix is rank deficient")
    return u, hp, hpp
