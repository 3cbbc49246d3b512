"""Dimensions of the filtration F_0 > F_1 > ... attached to each fundamental module.

    python scripts/filtration_report.py --family A --n 4
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from qaffine.rootdata import AffineType
from qaffine.verify import check_conj2, index_range


@dataclass
class FiltrationConfig:
    family: str = "C"
    n: int = 2


def run(cfg: FiltrationConfig) -> bool:
    t = AffineType(cfg.family, cfg.n)
    ok = True
    print(f"{'i':>3}  {'F dims':<16} pass")
    for i in index_range(t):
        rep = check_conj2(t, i)
        ok &= rep["pass"]
        print(f"{i:>3}  {str(rep['F_dims']):<16} {rep['pass']}")
    return ok


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--family", choices=("A", "C"), default="C")
    p.add_argument("--n", type=int, default=2)
    return 0 if run(FiltrationConfig(**vars(p.parse_args()))) else 1


if __name__ == "__main__":
    raise SystemExit(main())
