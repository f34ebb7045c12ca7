"""Information-set decoding attacks and their success-rate predictors.

The generalized attack reduces the parity check to
``U H_perm = [[I, hp], [0, hpp]]`` for a random size-(n-k-l) column
selection, enumerates the weight-p window words solving the l-bit
subsyndrome by a meet-in-the-middle split, and accepts when the forced part
has weight w - p.  The multi-target variant amortizes one reduction across
many syndromes.

Trials are driven by 64-bit child seeds drawn in trial order from the
caller's rng, so results are reproducible and independent of the worker
count: a parallel run returns exactly the success with the lowest trial
index, as a sequential run would.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from itertools import combinations
from typing import Any, Callable, Sequence

from .f2 import (
    BitMatrix,
    BitVector,
    SingularSelectionError,
    front_permutation,
    mat_vec_mul,
    random_full_rank,
    systematic_form,
)

__all__ = [
    "IsdParams",
    "SolutionCount",
    "SuccessEstimate",
    "SearchResult",
    "DoomSolution",
    "WindowEnumerator",
    "m_solutions",
    "prange_success",
    "isd_success",
    "doom_success",
    "prange_attack",
    "generalized_isd",
    "doom_attack",
    "default_doom_targets",
    "plant_instance",
]


@dataclass(frozen=True)
class IsdParams:
    """Window weight p, window extension l, and the trial budget."""

    p: int
    l: int
    max_iterations: int = 1000

    def __post_init__(self) -> None:
        if self.p < 0 or self.l < 0 or self.max_iterations < 0:
            raise ValueError("parameters must be nonnegative")

    def check(self, n: int, k: int, w: int) -> None:
        if self.l > n - k:
            raise ValueError(f"l = {self.l} exceeds n - k = {n - k}")
        if self.p > w:
            raise ValueError(f"p = {self.p} exceeds w = {w}")
        if self.p > k + self.l:
            raise ValueError(f"p = {self.p} exceeds the window k + l")
        if w - self.p > n - k - self.l:
            raise ValueError(
                f"w - p = {w - self.p} cannot fit the {n - k - self.l} selected columns"
            )


@dataclass(frozen=True)
class SolutionCount:
    """Expected number of weight-w solutions per syndrome: C(n,w)/2^(n-k)."""

    exact: Fraction
    log2: float


@dataclass(frozen=True)
class SuccessEstimate:
    """Per-iteration success chance; the exact 1-(1-hit)^expected form and
    the min(1, expected * hit) surrogate are both reported."""

    hit_prob: float
    hit_prob_log2: float
    exact: float
    surrogate: float
    surrogate_log2: float


@dataclass(frozen=True)
class SearchResult:
    solution: Any
    iterations: int
    target_index: int | None = None

    @property
    def found(self) -> bool:
        return self.solution is not None


@dataclass(frozen=True)
class DoomSolution:
    """Error vector plus the hash preimage whose syndrome it decodes."""

    e: BitVector
    preimage: Any

    @classmethod
    def checked(
        cls,
        h: BitMatrix,
        hash_fn: Callable[[Any], BitVector],
        w: int,
        e: BitVector,
        preimage: Any,
    ) -> "DoomSolution":
        if e.weight() != w:
            raise ValueError(f"weight {e.weight()} != {w}")
        if mat_vec_mul(h, e) != hash_fn(preimage):
            raise ValueError("syndrome does not match the hashed preimage")
        return cls(e, preimage)


# --- predictors ---------------------------------------------------------------


def m_solutions(n: int, k: int, w: int) -> SolutionCount:
    exact = Fraction(math.comb(n, w), 1 << (n - k))
    return SolutionCount(exact, math.log2(math.comb(n, w)) - (n - k))


def _estimate(hit: Fraction, expected_log2: float) -> SuccessEstimate:
    hit_f = float(hit)
    hit_log2 = (
        math.log2(hit.numerator) - math.log2(hit.denominator)
        if hit > 0
        else -math.inf
    )
    surrogate_log2 = min(0.0, expected_log2 + hit_log2)
    surrogate = 2.0**surrogate_log2
    if hit_f >= 1.0:
        exact = 1.0
    elif hit == 0:
        exact = 0.0
    elif expected_log2 + hit_log2 > 9:  # expected hits >> 1: saturated
        exact = 1.0
    else:
        exact = -math.expm1(2.0**expected_log2 * math.log1p(-hit_f))
    return SuccessEstimate(hit_f, hit_log2, exact, surrogate, surrogate_log2)


def prange_success(n: int, k: int, w: int) -> SuccessEstimate:
    """Per-iteration success of plain information-set decoding."""
    hit = Fraction(math.comb(n - k, w), math.comb(n, w))
    return _estimate(hit, m_solutions(n, k, w).log2)


def isd_success(n: int, k: int, w: int, p: int, l: int) -> SuccessEstimate:
    """Per-iteration success of the generalized attack: the weight split
    (p on the window, w-p on the selection) must hold for some solution."""
    IsdParams(p, l).check(n, k, w)
    hit = Fraction(
        math.comb(k + l, p) * math.comb(n - k - l, w - p), math.comb(n, w)
    )
    return _estimate(hit, m_solutions(n, k, w).log2)


def doom_success(n: int, k: int, w: int, p: int, l: int, q: int) -> SuccessEstimate:
    """Multi-target variant: q independent syndromes multiply the expected
    number of decodable solutions."""
    if q < 1:
        raise ValueError("need at least one target")
    IsdParams(p, l).check(n, k, w)
    hit = Fraction(
        math.comb(k + l, p) * math.comb(n - k - l, w - p), math.comb(n, w)
    )
    return _estimate(hit, m_solutions(n, k, w).log2 + math.log2(q))


# --- window enumeration ---------------------------------------------------------


class WindowEnumerator:
    """All weight-p window words e'' with ``hpp e''^T = target``.

    Meet-in-the-middle join: left-half patterns are tabulated by their
    subsyndrome once, right-half patterns probe the table, so repeated
    targets (the multi-target attack) reuse the tables.
    """

    def __init__(self, hpp: BitMatrix, p: int):
        self.window = hpp.ncols
        self.p = p
        if p > self.window:
            raise ValueError("window weight exceeds window size")
        self.cols = hpp.columns()
        self.half = self.window // 2
        self.tables: dict[int, dict[int, list[int]]] = {}
        for p_left in range(
            max(0, p - (self.window - self.half)), min(p, self.half) + 1
        ):
            table: dict[int, list[int]] = {}
            for combo in combinations(range(self.half), p_left):
                key = 0
                mask = 0
                for i in combo:
                    key ^= self.cols[i]
                    mask |= 1 << i
                table.setdefault(key, []).append(mask)
            self.tables[p_left] = table

    def solutions(self, target: int) -> list[int]:
        out: list[int] = []
        for p_left, table in self.tables.items():
            for combo in combinations(range(self.half, self.window), self.p - p_left):
                key = target
                mask = 0
                for i in combo:
                    key ^= self.cols[i]
                    mask |= 1 << i
                for left in table.get(key, ()):
                    out.append(left | mask)
        return out


# --- attack driver ----------------------------------------------------------------


def _isd_trial(
    payload: tuple[tuple[int, ...], int, tuple[int, ...], int, int, int],
    child_seed: int,
) -> tuple[int, int] | None:
    """One information-set trial; returns (target index, error bits) or None."""
    rows, ncols, targets, w, p, l = payload
    r = len(rows)
    rng = random.Random(child_seed)
    cols = sorted(rng.sample(range(ncols), r - l))
    h = BitMatrix(r, ncols, rows)
    try:
        u, hp, hpp = systematic_form(h, cols, l)
    except SingularSelectionError:
        return None
    perm_inv = front_permutation(cols, ncols).inverse()
    enum = WindowEnumerator(hpp, p)
    front = r - l
    window = ncols - front
    front_mask = (1 << front) - 1
    for ti, s_bits in enumerate(targets):
        transformed = mat_vec_mul(u, BitVector(r, s_bits)).bits
        sp = transformed & front_mask
        spp = transformed >> front
        for e2 in enum.solutions(spp):
            e1 = sp ^ mat_vec_mul(hp, BitVector(window, e2)).bits
            if e1.bit_count() == w - p:
                e_bits = perm_inv.apply_bits(e1 | e2 << front)
                return ti, e_bits
    return None


def _search(
    payload: tuple,
    budget: int,
    rng: random.Random,
    workers: int,
) -> tuple[tuple[int, int] | None, int]:
    trial = partial(_isd_trial, payload)
    if workers <= 1:
        for idx in range(budget):
            got = trial(rng.getrandbits(64))
            if got is not None:
                return got, idx + 1
        return None, budget
    block = max(8 * workers, 16)
    done = 0
    with ProcessPoolExecutor(max_workers=workers) as pool:
        while done < budget:
            count = min(block, budget - done)
            seeds = [rng.getrandbits(64) for _ in range(count)]
            for i, got in enumerate(pool.map(trial, seeds)):
                if got is not None:
                    return got, done + i + 1
            done += count
    return None, budget


def generalized_isd(
    h: BitMatrix,
    s: BitVector,
    w: int,
    params: IsdParams,
    rng: random.Random,
    workers: int = 1,
) -> SearchResult:
    """Search for e with ``h e^T = s`` and ``|e| = w``; a None solution in
    the result means the budget ran out, not that no solution exists."""
    n, k = h.ncols, h.ncols - h.nrows
    if s.n != h.nrows:
        raise ValueError("syndrome length mismatch")
    params.check(n, k, w)
    payload = (h.rows, n, (s.bits,), w, params.p, params.l)
    got, used = _search(payload, params.max_iterations, rng, workers)
    if got is None:
        return SearchResult(None, used)
    return SearchResult(BitVector(n, got[1]), used)


def prange_attack(
    h: BitMatrix,
    s: BitVector,
    w: int,
    budget: int,
    rng: random.Random,
    workers: int = 1,
) -> SearchResult:
    """Plain information-set decoding: the p = 0, l = 0 specialization."""
    return generalized_isd(h, s, w, IsdParams(0, 0, budget), rng, workers)


def default_doom_targets(q: int) -> list[bytes]:
    return [i.to_bytes(8, "big") for i in range(q)]


def doom_attack(
    h: BitMatrix,
    hash_fn: Callable[[bytes], BitVector],
    w: int,
    params: IsdParams,
    q_limit: int,
    rng: random.Random,
    targets: Sequence[bytes] | None = None,
    workers: int = 1,
) -> SearchResult:
    """Decode any one of q hashed targets; one reduction per trial is shared
    across all target syndromes."""
    n, k = h.ncols, h.ncols - h.nrows
    params.check(n, k, w)
    if targets is None:
        targets = default_doom_targets(q_limit)
    else:
        targets = list(targets)[:q_limit]
    syndromes = []
    for t in targets:
        s = hash_fn(t)
        if s.n != h.nrows:
            raise ValueError("hash output width does not match the matrix")
        syndromes.append(s.bits)
    payload = (h.rows, n, tuple(syndromes), w, params.p, params.l)
    got, used = _search(payload, params.max_iterations, rng, workers)
    if got is None:
        return SearchResult(None, used)
    ti, e_bits = got
    solution = DoomSolution.checked(
        h, hash_fn, w, BitVector(n, e_bits), targets[ti]
    )
    return SearchResult(solution, used, target_index=ti)


def plant_instance(
    n: int, k: int, w: int, rng: random.Random
) -> tuple[BitMatrix, BitVector, BitVector]:
    """Random full-rank instance with a known weight-w solution planted."""
    h = random_full_rank(n - k, n, rng)
    e = BitVector.from_support(n, rng.sample(range(n), w))
    return h, mat_vec_mul(h, e), e
