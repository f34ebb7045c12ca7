"""Binary linear codes, exact syndrome-weight distributions, and
statistical distance on finite distributions.

Exact distributions are tallied with integer counts and normalized into
``fractions.Fraction`` masses at the end, so equality checks (for example
against an explicit mixture) are exact rather than float-tolerant.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .f2 import BitMatrix, BitVector, mat_vec_mul, rank

__all__ = [
    "ParityCheckCode",
    "UUVCode",
    "DiscreteDistribution",
    "random_parity_check",
    "uuv_parity_check",
    "syndrome",
    "syndrome_weight_distribution",
    "stat_distance",
    "product_distance_bound",
]


class ParityCheckCode:
    """An [n, k] code given by a full-rank (n-k) x n parity-check matrix."""

    def __init__(self, matrix: BitMatrix):
        if rank(matrix) != matrix.nrows:
            raise ValueError("parity-check matrix must have full row rank")
        self.matrix = matrix

    @property
    def n(self) -> int:
        return self.matrix.ncols

    @property
    def k(self) -> int:
        return self.matrix.ncols - self.matrix.nrows

    def contains(self, word: BitVector) -> bool:
        return mat_vec_mul(self.matrix, word).weight() == 0

    def __repr__(self) -> str:
        return f"ParityCheckCode(n={self.n}, k={self.k})"


def random_parity_check(n: int, k: int, rng: random.Random) -> ParityCheckCode:
    """Uniform full-rank (n-k) x n parity check, drawn by rejection."""
    if not 0 < k < n:
        raise ValueError("need 0 < k < n")
    from .f2 import random_full_rank

    return ParityCheckCode(random_full_rank(n - k, n, rng))


class UUVCode(ParityCheckCode):
    """Code of words (u, u+v) with u in U and v in V, via block parity check.

    With H_U and H_V parity checks of U and V, the stacked matrix
    ``[[H_U, 0], [H_V, H_V]]`` checks membership: the top block forces the
    left half into U and the bottom block forces the half-sum into V.
    """

    def __init__(self, h_u: BitMatrix, h_v: BitMatrix):
        if h_u.ncols != h_v.ncols:
            raise ValueError("U and V must share the same length")
        if rank(h_u) != h_u.nrows or rank(h_v) != h_v.nrows:
            raise ValueError("component parity checks must have full rank")
        half = h_u.ncols
        top = h_u.hstack(BitMatrix.zeros(h_u.nrows, half))
        bottom = h_v.hstack(h_v)
        super().__init__(top.vstack(bottom))
        self.h_u = h_u
        self.h_v = h_v


def uuv_parity_check(h_u: BitMatrix, h_v: BitMatrix) -> UUVCode:
    return UUVCode(h_u, h_v)


def syndrome(code: ParityCheckCode | BitMatrix, e: BitVector) -> BitVector:
    matrix = code.matrix if isinstance(code, ParityCheckCode) else code
    return mat_vec_mul(matrix, e)


class DiscreteDistribution:
    """Probability distribution on m-bit outcomes with exact rational mass."""

    def __init__(self, bits: int, mass: Mapping[int, Fraction]):
        if bits < 0:
            raise ValueError("negative outcome width")
        total = Fraction(0)
        clean: dict[int, Fraction] = {}
        limit = 1 << bits
        for outcome, p in mass.items():
            if not 0 <= outcome < limit:
                raise ValueError(f"outcome {outcome} outside {bits}-bit space")
            p = Fraction(p)
            if p < 0:
                raise ValueError("negative mass")
            if p:
                clean[outcome] = p
            total += p
        if total != 1:
            raise ValueError(f"masses sum to {total}, not 1")
        self.bits = bits
        self.mass = clean

    @classmethod
    def uniform(cls, bits: int) -> "DiscreteDistribution":
        p = Fraction(1, 1 << bits)
        return cls(bits, {x: p for x in range(1 << bits)})

    @classmethod
    def point(cls, bits: int, outcome: int) -> "DiscreteDistribution":
        return cls(bits, {outcome: Fraction(1)})

    @classmethod
    def from_counts(cls, bits: int, counts: Mapping[int, int]) -> "DiscreteDistribution":
        total = sum(counts.values())
        if total <= 0:
            raise ValueError("empty count table")
        return cls(bits, {x: Fraction(c, total) for x, c in counts.items() if c})

    def prob(self, outcome: int) -> Fraction:
        return self.mass.get(outcome, Fraction(0))

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.mass))

    def mixture(self, other: "DiscreteDistribution", weight: Fraction) -> "DiscreteDistribution":
        """Convex combination: weight * self + (1 - weight) * other."""
        if self.bits != other.bits:
            raise ValueError("outcome spaces differ")
        w = Fraction(weight)
        if not 0 <= w <= 1:
            raise ValueError("mixture weight outside [0, 1]")
        out: dict[int, Fraction] = {}
        for x, p in self.mass.items():
            out[x] = w * p
        for x, p in other.mass.items():
            out[x] = out.get(x, Fraction(0)) + (1 - w) * p
        return DiscreteDistribution(self.bits, out)

    def to_text(self) -> str:
        """One ``hex probability`` line per outcome, 17 significant digits."""
        width = (self.bits + 7) // 8 * 2
        lines = []
        for x in self.support():
            key = BitVector(self.bits, x).to_hex() if self.bits else "00"
            lines.append(f"{key or '':<{max(width, 2)}} {float(self.mass[x]):.17g}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DiscreteDistribution)
            and self.bits == other.bits
            and self.mass == other.mass
        )

    def __repr__(self) -> str:
        return f"DiscreteDistribution(bits={self.bits}, support={len(self.mass)})"


def _count_shard(
    rows: tuple[int, ...], n: int, w: int, shard: int, nshards: int
) -> dict[int, int]:
    """Tally syndromes of weight-w words whose lowest support index is
    congruent to ``shard`` modulo ``nshards`` (the whole range when w = 0)."""
    matrix = BitMatrix(len(rows), n, rows)
    cols = matrix.columns()
    counts: dict[int, int] = {}
    if w == 0:
        if shard == 0:
            counts[0] = 1
        return counts
    for first in range(shard, n - w + 1, nshards):
        base = cols[first]
        for rest in combinations(range(first + 1, n), w - 1):
            s = base
            for i in rest:
                s ^= cols[i]
            counts[s] = counts.get(s, 0) + 1
    return counts


def syndrome_weight_distribution(
    code: ParityCheckCode | BitMatrix,
    w: int,
    max_patterns: int = 1 << 24,
    workers: int = 1,
) -> DiscreteDistribution:
    """Exact distribution of ``H e^T`` over uniform weight-w words ``e``.

    Enumerates all C(n, w) supports, so the guard ``max_patterns`` refuses
    jobs that would not finish at desk scale.  With ``workers > 1`` the
    support range is sharded by lowest index and the integer counts merged;
    the result is independent of the shard count.
    """
    matrix = code.matrix if isinstance(code, ParityCheckCode) else code
    n = matrix.ncols
    if not 0 <= w <= n:
        raise ValueError("weight outside [0, n]")
    if math.comb(n, w) > max_patterns:
        raise ValueError(
            f"C({n}, {w}) = {math.comb(n, w)} exceeds the enumeration guard"
        )
    nshards = max(1, min(workers, n - w + 1) if w else 1)
    args = [(matrix.rows, n, w, shard, nshards) for shard in range(nshards)]
    if nshards == 1:
        tallies = [_count_shard(*args[0])]
    else:
        with ProcessPoolExecutor(max_workers=nshards) as pool:
            tallies = list(pool.map(_count_shard, *zip(*args)))
    counts: dict[int, int] = {}
    for t in tallies:
        for s, c in t.items():
            counts[s] = counts.get(s, 0) + c
    return DiscreteDistribution.from_counts(matrix.nrows, counts)


def stat_distance(d0: DiscreteDistribution, d1: DiscreteDistribution) -> Fraction:
    """Total variation distance, exact: half the L1 gap over the joint support."""
    if d0.bits != d1.bits:
        raise ValueError("outcome spaces differ")
    keys = set(d0.mass) | set(d1.mass)
    gap = sum((abs(d0.prob(x) - d1.prob(x)) for x in keys), Fraction(0))
    return gap / 2


def product_distance_bound(
    pairs: Iterable[tuple[DiscreteDistribution, DiscreteDistribution]]
) -> Fraction:
    """Union bound on the distance between product distributions:
    the distance of the tuples is at most the sum of per-slot distances."""
    return sum((stat_distance(a, b) for a, b in pairs), Fraction(0))
