#!/usr/bin/env python3
"""Run the full game ladder against the planted omniscient forger.

Prints one stats line per game, the final-hop ratio freq(S5)/freq(S4) with
its expected value of one half, and the extraction rate of multi-target
decoding solutions from winning final-game transcripts.
"""

import argparse
import random
import warnings

from cbfdh.reduction import (
    GameConfig,
    OmniscientAdversary,
    extract_doom_solution,
    run_game,
)
from cbfdh.scheme import SchemeParams


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=12)
    parser.add_argument("--k", type=int, default=6)
    parser.add_argument("--w", type=int, default=4)
    parser.add_argument("--lam", type=int, default=8)
    parser.add_argument("--lam0", type=int, default=24)
    parser.add_argument("--trials", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        params = SchemeParams(
            n=args.n, k=args.k, w=args.w, lam=args.lam, lam0=args.lam0
        )
    config = GameConfig(params)
    adversary = OmniscientAdversary(params)

    freq = {}
    for game_id in range(6):
        rng = random.Random(args.seed * 1_000_003 + game_id)
        stats = run_game(
            game_id,
            adversary,
            config,
            args.trials,
            rng,
            keep_transcripts=game_id == 5,
            workers=args.workers,
        )
        freq[game_id] = stats.frequency(game_id)
        for line in stats.lines():
            print(line)
        if game_id == 5:
            wins = [t for t in stats.transcripts if t.win]
            extracted = sum(
                1 for t in wins if extract_doom_solution(t) is not None
            )
            print(
                f"g5_wins={len(wins)} g5_extracted={extracted} "
                f"g5_extraction_rate={extracted / len(wins):.6f}"
                if wins
                else "g5_wins=0"
            )
    if freq[4] > 0:
        print(f"ratio_g5_g4={freq[5] / freq[4]:.6f} (expected 0.5)")


if __name__ == "__main__":
    main()
