#!/usr/bin/env python3
"""Regenerate the asymptotic attack-cost tables.

Sweeps the two reference operating points plus an optional rate grid and
prints, for each (R, omega), the classical and Grover Prange exponents and
the multi-target quantum decoding exponent, annotating rows below the GV
weight where a random syndrome has at most one preimage on average.
"""

import argparse

from cbfdh.exponents import (
    RatePoint,
    doom_quantum_exponent,
    gv_relative_weight,
    prange_exponent_classical,
    prange_exponent_quantum,
)

REFERENCE_ROWS = ((0.5, 0.11), (0.5, 0.190899))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--grid",
        type=int,
        default=0,
        metavar="STEPS",
        help="also sweep STEPS rates in (0,1) at the GV weight",
    )
    args = parser.parse_args()

    rows = list(REFERENCE_ROWS)
    for i in range(1, args.grid + 1):
        rate = i / (args.grid + 1)
        rows.append((rate, gv_relative_weight(rate)))

    header = f"{'R':>8} {'omega':>10} {'prange':>10} {'prange-Q':>10} {'doom-Q':>10}"
    print(header)
    print("-" * len(header))
    for rate, omega in rows:
        pt = RatePoint(rate, omega)
        doom = doom_quantum_exponent(pt)
        mark = "  (unique-solution regime)" if omega < gv_relative_weight(rate) else ""
        print(
            f"{rate:8.4f} {omega:10.6f} "
            f"{prange_exponent_classical(pt):10.6f} "
            f"{prange_exponent_quantum(pt):10.6f} "
            f"{doom.exponent:10.6f}{mark}"
        )


if __name__ == "__main__":
    main()
