#!/usr/bin/env python3
"""Re-run the extended-precision selector fits and report the anchors."""

import argparse
import json
from pathlib import Path

from valentiner.selectors import default_cache_dir, fit_selectors


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dps", type=int, default=70)
    ap.add_argument("--cache-dir")
    args = ap.parse_args()
    cache = Path(args.cache_dir) if args.cache_dir else default_cache_dir()
    cache.mkdir(parents=True, exist_ok=True)
    for case in ("special", "general"):
        table = fit_selectors(case, dps=args.dps, progress=lambda s: print(f"[{case}] {s}"))
        with open(cache / f"selector_{case}.json", "w") as f:
            json.dump(table.to_json_dict(), f)
        print(f"{case}: residual {table.fit_residual:.2e}, "
              f"root constant {table.sel_const:.6e}")
        for name, pair in table.anchor_report().items():
            print(f"  anchor {name}: fitted {pair['fitted']:.6e}, "
                  f"published {pair['printed']:.6e}")


if __name__ == "__main__":
    main()
