"""Compare Postnikov's tuple count with the Chow-ring volume on random Minkowski weights."""

import argparse
import random
from dataclasses import dataclass

from chow_engine import from_boolean
from chow_engine.volume import eval_volume, minkowski_to_support, postnikov_volume


@dataclass
class Config:
    sizes: tuple[int, ...] = (3, 4, 5)
    trials: int = 50
    max_support: int = 4
    max_weight: int = 6
    seed: int = 7


def main(cfg: Config) -> int:
    rng = random.Random(cfg.seed)
    failures = 0
    for n in cfg.sizes:
        M = from_boolean(n)
        agree = 0
        for _ in range(cfg.trials):
            support = rng.sample(range(1, 1 << n), rng.randint(1, cfg.max_support))
            y = {G: rng.randint(0, cfg.max_weight) for G in support}
            tuples = postnikov_volume(n, y)
            degree = eval_volume(M, minkowski_to_support(n, y))
            agree += tuples == degree
        failures += cfg.trials - agree
        print(f"n = {n}: {agree}/{cfg.trials} agree")
    return failures


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=list(Config.sizes))
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    raise SystemExit(1 if main(Config(tuple(a.sizes), a.trials, seed=a.seed)) else 0)
