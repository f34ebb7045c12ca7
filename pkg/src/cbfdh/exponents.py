"""Asymptotic security exponents for syndrome decoding at rate R and
relative weight omega.

All costs are base-2 exponents per code length n, using the standard
entropy approximation log2 C(an, bn) ~ n * a * h(b/a).  The multi-target
quantum exponent models a quantum-walk search whose window enumeration is
pinned to the group size of a four-set sum subroutine: with
beta = log2(window set size)/n, the balance constraint is beta = (5/8) *
lambda_rel, the walk costs (6/5) * beta, and a Grover factor halves the
(capped) per-iteration success exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import minimize_scalar

__all__ = [
    "RatePoint",
    "ExponentResult",
    "entropy",
    "entropy_inv",
    "gv_relative_weight",
    "gv_bound",
    "prange_exponent_classical",
    "prange_exponent_quantum",
    "doom_quantum_objective",
    "doom_quantum_exponent",
]


@dataclass(frozen=True)
class RatePoint:
    """Asymptotic operating point: rate R and relative weight omega."""

    rate: float
    omega: float

    def __post_init__(self) -> None:
        if not 0 < self.rate < 1:
            raise ValueError("rate must lie in (0, 1)")
        if not 0 <= self.omega <= (1 - self.rate) / 2:
            raise ValueError("relative weight must lie in [0, (1-R)/2]")


@dataclass(frozen=True)
class ExponentResult:
    """Minimized exponent with the optimizer's argmin and diagnostics."""

    exponent: float
    lambda_rel: float
    pi_rel: float
    residual: float


def entropy(x: float) -> float:
    """Binary entropy h(x) in bits; h(0) = h(1) = 0."""
    if not 0 <= x <= 1:
        raise ValueError(f"entropy argument {x} outside [0, 1]")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def entropy_inv(y: float, tol: float = 1e-12) -> float:
    """Inverse of h on [0, 1/2] by bisection to absolute tolerance."""
    if not 0 <= y <= 1:
        raise ValueError(f"entropy value {y} outside [0, 1]")
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def gv_relative_weight(rate: float) -> float:
    """Gilbert-Varshamov relative weight h^{-1}(1 - R)."""
    if not 0 < rate < 1:
        raise ValueError("rate must lie in (0, 1)")
    return entropy_inv(1 - rate)


def gv_bound(n: int, k: int) -> float:
    """Gilbert-Varshamov distance n * h^{-1}(1 - k/n), as a real number."""
    if not 0 < k < n:
        raise ValueError("need 0 < k < n")
    return n * gv_relative_weight(k / n)


def prange_exponent_classical(pt: RatePoint) -> float:
    """Per-bit cost exponent of plain information-set decoding:
    (1 - R) * (1 - h(omega / (1 - R)))."""
    rest = 1 - pt.rate
    return rest * (1 - entropy(pt.omega / rest))


def prange_exponent_quantum(pt: RatePoint) -> float:
    """Grover-accelerated information-set decoding: half the classical cost."""
    return prange_exponent_classical(pt) / 2


def doom_quantum_objective(pt: RatePoint, lambda_rel: float) -> tuple[float, float] | None:
    """Objective value and window weight pi at a given lambda_rel.

    lambda_rel is the window extension l/n.  The window holds R + lambda_rel
    of the coordinates, the set-size exponent is beta = ((R + lambda) / 3) *
    h(pi / (R + lambda)) with pi the relative window weight, and pi is pinned
    by the balance constraint beta = (5/8) * lambda (solved by bisection).
    Returns None when the constraint or weight split is infeasible.
    """
    r, omega = pt.rate, pt.omega
    if not 0 <= lambda_rel < 1 - r:
        return None
    win = r + lambda_rel
    rest = 1 - r - lambda_rel
    target = 15 / 8 * lambda_rel / win  # h(pi / win) needed for balance
    if target > 1:
        return None
    pi = win * entropy_inv(target)
    if pi > omega or omega - pi > rest:
        return None
    beta = 5 / 8 * lambda_rel
    # per-iteration success exponent, capped at 0 (probabilities <= 1):
    # C(win*n, pi*n) * C(rest*n, (omega-pi)*n) * 2^{beta*n} / 2^{(1-R)*n}
    p_exp = (
        win * entropy(pi / win)
        + (rest * entropy((omega - pi) / rest) if rest > 0 else 0.0)
        + beta
        - (1 - r)
    )
    value = 6 / 5 * beta - min(0.0, p_exp) / 2
    return value, pi


def doom_quantum_exponent(pt: RatePoint, grid_step: float = 1e-3) -> ExponentResult:
    """Minimize the multi-target quantum decoding exponent over lambda_rel.

    Coarse grid over [0, 1 - R) followed by a bounded scalar polish around
    the best grid point.  The residual reports how tightly the balance
    constraint beta = (5/8) * lambda holds at the reported argmin.
    """
    r = pt.rate
    grid_n = max(2, int(round((1 - r) / grid_step)))
    best_lam, best_val = None, math.inf
    for i in range(grid_n):
        lam = i * (1 - r) / grid_n
        got = doom_quantum_objective(pt, lam)
        if got is not None and got[0] < best_val:
            best_val, best_lam = got[0], lam
    if best_lam is None:
        raise ValueError("no feasible lambda for this rate point")
    step = (1 - r) / grid_n
    lo = max(0.0, best_lam - 2 * step)
    hi = min((1 - r) * (1 - 1e-12), best_lam + 2 * step)

    def penalized(lam: float) -> float:
        got = doom_quantum_objective(pt, lam)
        return got[0] if got is not None else math.inf

    res = minimize_scalar(penalized, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    lam = float(res.x)
    got = doom_quantum_objective(pt, lam)
    if got is None or got[0] > best_val:
        lam = best_lam
        got = doom_quantum_objective(pt, lam)
    assert got is not None
    value, pi = got
    win = r + lam
    beta_check = win / 3 * entropy(pi / win) if win else 0.0
    return ExponentResult(
        exponent=value,
        lambda_rel=lam,
        pi_rel=pi,
        residual=abs(beta_check - 5 / 8 * lam),
    )
