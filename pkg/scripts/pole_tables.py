"""Print the denominator table of every fundamental pair, solved vs closed form.

    python scripts/pole_tables.py --family A --ns 2 3 4 5
    python scripts/pole_tables.py --family C --ns 2 3 --json poles_C.json
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from qaffine.rootdata import AffineType
from qaffine.verify import budget_pairs, format_pole_table, pole_table


@dataclass
class PoleTableConfig:
    family: str = "A"
    ns: list[int] = field(default_factory=lambda: [2, 3, 4])
    max_dim: int = 400
    json_path: str | None = None


def run(cfg: PoleTableConfig) -> dict:
    tables = {}
    for n in cfg.ns:
        t = AffineType(cfg.family, n)
        start = time.perf_counter()
        table = pole_table(t, budget_pairs(t, cfg.max_dim))
        print(f"# {t.family}{n}  ({time.perf_counter() - start:.1f}s)")
        print(format_pole_table(table))
        tables[f"{t.family}{n}"] = table
    return {"config": asdict(cfg), "tables": tables,
            "pass": all(t["pass"] for t in tables.values())}


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--family", choices=("A", "C"), default="A")
    p.add_argument("--ns", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--max-dim", type=int, default=400)
    p.add_argument("--json", dest="json_path")
    cfg = PoleTableConfig(**vars(p.parse_args()))
    out = run(cfg)
    if cfg.json_path:
        with open(cfg.json_path, "w") as fh:
            json.dump(out, fh, indent=2, sort_keys=True, default=str)
    return 0 if out["pass"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
