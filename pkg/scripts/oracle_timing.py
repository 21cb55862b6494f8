"""Closed-form degrees versus the two quotient-ring oracles on Boolean matroids."""

import argparse
import time
from dataclasses import dataclass

from chow_engine import from_boolean
from chow_engine.oracle import build_graded, count_chain_monomials, oracle_degree, random_top_monomials
from chow_engine.psi import deg_monomial


@dataclass
class Config:
    sizes: tuple[int, ...] = (3, 4, 5, 6)
    samples: int = 200
    seed: int = 0


def _clock(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def main(cfg: Config) -> None:
    print(f"{'n':>3}{'chains':>9}{'build s':>10}{'closed ms':>11}{'linear ms':>11}{'rewrite ms':>12}")
    for n in cfg.sizes:
        M = from_boolean(n)
        monomials = random_top_monomials(M, cfg.samples, cfg.seed)
        _, build = _clock(lambda: build_graded(M, M.r))
        fast, t_fast = _clock(lambda: [deg_monomial(M, m) for m in monomials])
        linear, t_lin = _clock(lambda: [oracle_degree(M, m) for m in monomials])
        rewrite, t_rw = _clock(lambda: [oracle_degree(M, m, method="rewrite") for m in monomials])
        assert fast == linear == rewrite
        per = 1000 / len(monomials)
        print(f"{n:>3}{count_chain_monomials(M, M.r):>9}{build:>10.2f}"
              f"{t_fast * per:>11.3f}{t_lin * per:>11.3f}{t_rw * per:>12.3f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=list(Config.sizes))
    p.add_argument("--samples", type=int, default=Config.samples)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    main(Config(tuple(a.sizes), a.samples, a.seed))
