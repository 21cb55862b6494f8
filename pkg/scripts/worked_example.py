"""Degree of D{0,1}^3 D{0..4}^2 D{0..5} in the Boolean matroid on 7 elements, three ways."""

import argparse
import time
from dataclasses import dataclass

from chow_engine import bitset, from_boolean
from chow_engine.oracle import oracle_degree
from chow_engine.psi import DivisorMonomial, deg_expanded, deg_flag_mixed, deg_monomial, expand_monomial


@dataclass
class Config:
    n: int = 7
    sizes: tuple[int, ...] = (2, 5, 6)
    exponents: tuple[int, ...] = (3, 2, 1)


def main(cfg: Config) -> None:
    M = from_boolean(cfg.n)
    mono = DivisorMonomial.from_pairs(
        (bitset.mask_of(range(s)), d) for s, d in zip(cfg.sizes, cfg.exponents))
    print(f"monomial: {mono.text(M)}  (r = {M.r})")
    for term in expand_monomial(M, mono):
        print(f"  coef {term.coefficient:+d}  a+ {term.plus}  a- {term.minus}  -> {deg_flag_mixed(M, term):+d}")
    for label, fn in [("closed form", deg_monomial), ("expansion", deg_expanded),
                      ("rewrite oracle", lambda M, m: oracle_degree(M, m, method="rewrite"))]:
        start = time.perf_counter()
        value = fn(M, mono)
        print(f"{label:>15}: {value}  ({1000 * (time.perf_counter() - start):.1f} ms)")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=Config.n)
    p.add_argument("--sizes", type=int, nargs="+", default=list(Config.sizes))
    p.add_argument("--exponents", type=int, nargs="+", default=list(Config.exponents))
    a = p.parse_args()
    main(Config(a.n, tuple(a.sizes), tuple(a.exponents)))
