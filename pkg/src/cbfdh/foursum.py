"""Four-set sum formulation of one window-enumeration step.

For a fixed column selection, finding a weight-p window word whose
subsyndrome matches one of many hashed targets is cast as a 4-sum problem
over G = F_2^{l/2} x F_2^{l/2}: the window splits into three equal thirds
carrying weight p/3 each (sets V1, V2, V3 of window masks, mapped through
the reduced block hpp), while V4 is a set of hash preimages mapped to the
l-bit tail of their reduced syndrome.  A quadruple summing to zero means
the combined window word solves the subsyndrome for that preimage; the
predicate g accepts when the completed error vector has full weight w, and
then the completion is a valid multi-target decoding solution.

The classical solver joins V1 x V2 against V3 x V4 on the first l/2 group
coordinates and filters the collisions, returning every solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Any, Callable, Sequence

from .f2 import BitMatrix, BitVector, Permutation, front_permutation, mat_vec_mul, systematic_form
from .isd import DoomSolution

__all__ = [
    "FourSumInstance",
    "snap_foursum_params",
    "build_foursum_instance",
    "solve_foursum",
    "lift_foursum_solution",
]


def snap_foursum_params(k: int, l: int, p: int) -> tuple[int, int]:
    """Nearest (l, p) with l even, 3 | (k + l) and 3 | p.

    The construction needs the window k + l to split into equal thirds and
    the weight to split across them; callers with arbitrary parameters snap
    them here first.
    """
    if l < 0 or p < 0:
        raise ValueError("parameters must be nonnegative")
    best_l = min(
        (cand for cand in range(max(0, l - 6), l + 7) if cand % 2 == 0 and (k + cand) % 3 == 0),
        key=lambda cand: (abs(cand - l), cand),
    )
    best_p = 3 * round(p / 3)
    return best_l, best_p


@dataclass
class FourSumInstance:
    """The four sets with their maps into F_2^l, plus completion data."""

    h: BitMatrix
    hash_fn: Callable[[Any], BitVector]
    cols: tuple[int, ...]
    p: int
    l: int
    w: int
    u: BitMatrix
    hp: BitMatrix
    hpp: BitMatrix
    perm_inv: Permutation
    v1: tuple[int, ...]
    v2: tuple[int, ...]
    v3: tuple[int, ...]
    v4: tuple[Any, ...]
    _f4_cache: dict[Any, tuple[int, int]] = field(default_factory=dict, repr=False)

    @property
    def window(self) -> int:
        return self.h.ncols - len(self.cols)

    @property
    def set_size(self) -> int:
        return len(self.v1)

    def window_syndrome(self, mask: int) -> int:
        return mat_vec_mul(self.hpp, BitVector(self.window, mask)).bits

    def _reduced_target(self, preimage: Any) -> tuple[int, int]:
        """(front part, window part) of U @ hash(preimage)."""
        got = self._f4_cache.get(preimage)
        if got is None:
            s = self.hash_fn(preimage)
            if s.n != self.h.nrows:
                raise ValueError("hash output width does not match the matrix")
            bits = mat_vec_mul(self.u, s).bits
            front = self.h.nrows - self.l
            got = (bits & ((1 << front) - 1), bits >> front)
            self._f4_cache[preimage] = got
        return got

    def f4(self, preimage: Any) -> int:
        """The l-bit tail of the reduced target syndrome."""
        return self._reduced_target(preimage)[1]

    def complete(self, window_mask: int, preimage: Any) -> BitVector:
        """Error vector whose window part is ``window_mask`` and whose forced
        part closes the syndrome of ``preimage``."""
        sp, _ = self._reduced_target(preimage)
        e1 = sp ^ mat_vec_mul(self.hp, BitVector(self.window, window_mask)).bits
        front = self.h.nrows - self.l
        return BitVector(
            self.h.ncols, self.perm_inv.apply_bits(e1 | window_mask << front)
        )

    def g(self, v1: int, v2: int, v3: int, preimage: Any) -> bool:
        """Accept when the completed error vector has full weight w."""
        return self.complete(v1 ^ v2 ^ v3, preimage).weight() == self.w


def _third_masks(offset: int, size: int, weight: int) -> tuple[int, ...]:
    out = []
    for combo in combinations(range(offset, offset + size), weight):
        mask = 0
        for i in combo:
            mask |= 1 << i
        out.append(mask)
    return tuple(out)


def build_foursum_instance(
    h: BitMatrix,
    hash_fn: Callable[[Any], BitVector],
    cols: Sequence[int],
    p: int,
    l: int,
    w: int,
    preimages: Sequence[Any] | None = None,
) -> FourSumInstance:
    """Build the instance for one column selection of size n - k - l.

    Requires l even, p and the window size k + l divisible by 3 (see
    :func:`snap_foursum_params`).  ``preimages`` defaults to counter byte
    strings; exactly C((k+l)/3, p/3) of them are used so all four sets have
    equal size.
    """
    if l % 2:
        raise ValueError("l must be even to split the group in halves")
    if len(cols) != h.nrows - l:
        raise ValueError("need n - k - l selected columns")
    window = h.ncols - len(cols)
    if window % 3 or p % 3:
        raise ValueError("window and weight must split into thirds")
    if p > window or p > w:
        raise ValueError("infeasible window weight")
    third, p3 = window // 3, p // 3
    if p3 > third:
        raise ValueError("third weight exceeds third size")
    u, hp, hpp = systematic_form(h, cols, l)
    size = math.comb(third, p3)
    if preimages is None:
        preimages = [i.to_bytes(8, "big") for i in range(size)]
    else:
        preimages = list(preimages)
        if len(preimages) < size:
            raise ValueError(f"need at least {size} preimages")
        preimages = preimages[:size]
    return FourSumInstance(
        h=h,
        hash_fn=hash_fn,
        cols=tuple(cols),
        p=p,
        l=l,
        w=w,
        u=u,
        hp=hp,
        hpp=hpp,
        perm_inv=front_permutation(cols, h.ncols).inverse(),
        v1=_third_masks(0, third, p3),
        v2=_third_masks(third, third, p3),
        v3=_third_masks(2 * third, third, p3),
        v4=tuple(preimages),
    )


def solve_foursum(
    inst: FourSumInstance, budget: int | None = None
) -> list[tuple[int, int, int, Any]]:
    """All quadruples (v1, v2, v3, preimage) with matching subsyndromes and
    g = 1, via a meet-in-the-middle join on the first l/2 group coordinates.

    Every collision is expanded (no sampling).  ``budget`` caps the number
    of expanded collisions; hitting the cap returns the solutions found so
    far, so an empty list only means none were found within budget.
    """
    half_mask = (1 << (inst.l // 2)) - 1
    table: dict[int, list[tuple[int, int, int]]] = {}
    for v1, v2 in product(inst.v1, inst.v2):
        val = inst.window_syndrome(v1 ^ v2)
        table.setdefault(val & half_mask, []).append((v1, v2, val))
    out: list[tuple[int, int, int, Any]] = []
    expanded = 0
    for v3, preimage in product(inst.v3, inst.v4):
        val = inst.window_syndrome(v3) ^ inst.f4(preimage)
        for v1, v2, lhs in table.get(val & half_mask, ()):
            expanded += 1
            if budget is not None and expanded > budget:
                return out
            if lhs == val and inst.g(v1, v2, v3, preimage):
                out.append((v1, v2, v3, preimage))
    return out


def lift_foursum_solution(
    inst: FourSumInstance, sol: tuple[int, int, int, Any]
) -> DoomSolution:
    """Turn a solver output into a checked multi-target decoding solution.

    Raises ValueError when the tuple is not a solution of this instance
    (precondition), and RuntimeError when the completion fails its final
    checks, which would indicate an instance or solver bug.
    """
    v1, v2, v3, preimage = sol
    if v1 not in inst.v1 or v2 not in inst.v2 or v3 not in inst.v3:
        raise ValueError("window parts are not members of the three sets")
    if preimage not in inst.v4:
        raise ValueError("preimage is not a member of the fourth set")
    window_word = v1 ^ v2 ^ v3
    if inst.window_syndrome(window_word) != inst.f4(preimage):
        raise ValueError("quadruple does not sum to zero")
    if not inst.g(v1, v2, v3, preimage):
        raise ValueError("completion does not reach the target weight")
    e = inst.complete(window_word, preimage)
    try:
        return DoomSolution.checked(inst.h, inst.hash_fn, inst.w, e, preimage)
    except ValueError as exc:
        raise RuntimeError(f"lift failed an internal check: {exc}") from exc
