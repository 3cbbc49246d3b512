"""Run the invariant self-test and print a per-section summary.

    python scripts/run_selftest.py --budget full --out selftest_full.json
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass

from qaffine.verify import selftest


@dataclass
class SelftestConfig:
    budget: str = "small"
    out: str | None = None


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--budget", choices=("small", "full"), default="small")
    p.add_argument("--out")
    cfg = SelftestConfig(**vars(p.parse_args()))
    start = time.perf_counter()
    report = selftest(cfg.budget)
    for name, section in report["sections"].items():
        status = "ok" if section["pass"] else "FAIL"
        print(f"{name:<20} {len(section['items']):>4} items  {status}")
    print(f"total {time.perf_counter() - start:.1f}s, pass={report['pass']}")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True, default=str)
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
