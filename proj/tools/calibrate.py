#!/usr/bin/env python3
"""Grid sweep over scenario parameters, reporting the death-spiral detector per ablation cell.

Example:
    tools/calibrate.py scenarios/stepn_saturation.json \
        --grid '{"economy.supply_ref": [50, 100, 200]}' \
        --cells '{"full_on": {}, "no_sse": {"supply_scaled_entropy": false}}'

Grid keys are dotted paths into the fixture; integer segments index lists
(e.g. "agents.2.count"). Each cell maps toggle names to overrides on top of
all-on. Every run goes through `oge run --config`, so results match the CLI.
"""

import argparse
import copy
import csv
import itertools
import json
import subprocess
import sys
import tempfile
from pathlib import Path

ALL_ON = {
    "identity_enforced": True,
    "asymmetric_decay": True,
    "single_slot": True,
    "entropy_enabled": True,
    "supply_scaled_entropy": True,
}


def set_path(doc, path, value):
    keys = path.split(".")
    for key in keys[:-1]:
        doc = doc[int(key)] if key.isdigit() else doc.setdefault(key, {})
    last = keys[-1]
    if last.isdigit():
        doc[int(last)] = value
    else:
        doc[last] = value


def detect(rows, drawdown=0.9, floor=0.1, window=10):
    """Same rule as the library detector, plus the margins used to pick fixtures."""
    price_peak = liquidity_peak = float("-inf")
    run = 0
    fired = False
    min_liquidity = float("inf")
    for row in rows:
        price = float(row["spot_price"])
        liquidity = float(row["liquidity"])
        price_peak = max(price_peak, price)
        liquidity_peak = max(liquidity_peak, liquidity)
        min_liquidity = min(min_liquidity, liquidity / liquidity_peak)
        collapsed = price <= (1.0 - drawdown) * price_peak
        drained = liquidity < floor * liquidity_peak
        run = run + 1 if collapsed and drained else 0
        fired = fired or run >= window
    return {
        "fired": fired,
        "final_over_peak": float(rows[-1]["spot_price"]) / price_peak,
        "min_liquidity": min_liquidity,
        "retention": float(rows[-1]["retention"]),
    }


def run_cell(oge, config, workdir):
    path = workdir / "config.json"
    path.write_text(json.dumps(config))
    out = workdir / "out"
    result = subprocess.run([oge, "run", "--config", str(path), "--out", str(out)], capture_output=True, text=True)
    if result.returncode != 0:
        sys.exit(f"oge failed ({result.returncode}): {result.stderr.strip()}")
    with open(out / "metrics.csv", newline="") as f:
        return detect(list(csv.DictReader(f)))


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("fixture", type=Path)
    parser.add_argument("--grid", default="{}", help="JSON object: dotted path -> list of values")
    parser.add_argument("--cells", default='{"full_on": {}}', help="JSON object: cell name -> toggle overrides")
    parser.add_argument("--oge", default=str(Path(__file__).resolve().parent.parent / "build" / "tools" / "oge"))
    args = parser.parse_args()

    base = json.loads(args.fixture.read_text())
    grid = json.loads(args.grid)
    cells = json.loads(args.cells)
    keys = list(grid)
    with tempfile.TemporaryDirectory(prefix="oge_calibrate_") as tmp:
        workdir = Path(tmp)
        for combo in itertools.product(*(grid[k] for k in keys)):
            parts = []
            for name, overrides in cells.items():
                config = copy.deepcopy(base)
                for key, value in zip(keys, combo):
                    set_path(config, key, value)
                config["toggles"] = {**ALL_ON, **overrides}
                r = run_cell(args.oge, config, workdir)
                parts.append(
                    f"{name}: {'FIRES' if r['fired'] else 'stable'} final/peak={r['final_over_peak']:.4f} "
                    f"min_liq={r['min_liquidity']:.3f} retention={r['retention']:.3f}"
                )
            print(dict(zip(keys, combo)), " | ".join(parts), flush=True)


if __name__ == "__main__":
    main()
