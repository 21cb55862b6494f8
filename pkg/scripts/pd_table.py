"""Poincaré pairing certificates across the builtin catalog."""

import argparse
from dataclasses import dataclass, field

from chow_engine.catalog import builtin
from chow_engine.oracle import build_graded, pairing_matrix


@dataclass
class Config:
    names: list[str] = field(default_factory=lambda: [
        "boolean_3", "boolean_4", "uniform_2_4", "uniform_3_4", "uniform_3_5", "k4", "fano",
        "non_fano", "k5_minus_edge"])
    oracle_fraction: float = 0.1
    seed: int = 0


def main(cfg: Config) -> None:
    print(f"{'matroid':<15}{'k':>3}{'size':>6}{'rank':>6}{'det':>5}  triangular  diagonal")
    for name in cfg.names:
        M = builtin(name)
        for k in range(M.r + 1):
            cert = pairing_matrix(M, k, cfg.oracle_fraction, cfg.seed)
            rank = build_graded(M, k).rank
            diag = "".join("+" if d > 0 else "-" for d in cert.diag)
            print(f"{name:<15}{k:>3}{len(cert.rows):>6}{rank:>6}{cert.det:>5}  {str(cert.triangular):<10}  {diag}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--names", nargs="+", default=Config().names)
    p.add_argument("--oracle-fraction", type=float, default=Config.oracle_fraction)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    main(Config(a.names, a.oracle_fraction, a.seed))
