#!/usr/bin/env python3
"""
Acceptance sweep: run every verification suite on a list of levels and write a
JSON summary (passes / failures per suite and level).

    python evaluation/evaluate_tables.py --levels evaluation/levels.json --output evaluation_results
"""

import os
import sys
import json
import time
import argparse
from datetime import datetime
from typing import Dict, List

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src"))

from app import RunConfig, suite_rows
from database.repositories import ClassSetRepository
from utils.config import CACHE_DIR, VERIFY_SUITES
from utils.errors import CohenEisensteinError
from utils.theta32 import closed_form_series, cohen_H
from utils.verify import main_identity_check

LEVELS_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "levels.json")
OUTPUT_DIR = "evaluation_results"


def load_levels(filepath: str) -> List[Dict]:
    with open(filepath, "r") as f:
        return json.load(f)


def row_ok(row) -> bool:
    return row["ok"] if isinstance(row, dict) else row.ok


def evaluate_level(entry: Dict, cache_dir: str) -> Dict:
    run = RunConfig(
        ramified=entry["ramified"],
        M=entry.get("M", 1),
        d_max=entry.get("d_max", 300),
        m_max=entry.get("m_max", 20),
        p_max=entry.get("p_max", 50),
        l=entry.get("l"),
        cache_dir=cache_dir,
    )
    level = run.validate()
    classes = ClassSetRepository.get_or_build(level, directory=cache_dir)
    result = {"level": str(level), "classes": classes.n, "suites": {}}

    start = time.time()
    rows = main_identity_check(cohen_H(classes, run.d_max), closed_form_series(level, run.d_max))
    failures = sum(1 for r in rows if not r.ok)
    result["suites"]["hseries"] = {"checks": len(rows), "failures": failures, "seconds": round(time.time() - start, 2)}
    print(f"   {'✅' if failures == 0 else '❌'} hseries: {len(rows) - failures}/{len(rows)}")

    for suite in VERIFY_SUITES:
        if suite == "congruence" and run.l is None:
            continue
        start = time.time()
        try:
            rows = suite_rows(suite, run, level, classes)
        except CohenEisensteinError as e:
            result["suites"][suite] = {"error": f"{type(e).__name__}: {e}"}
            print(f"   ⚠️  {suite}: {e}")
            continue
        failures = sum(1 for r in rows if not row_ok(r))
        result["suites"][suite] = {
            "checks": len(rows),
            "failures": failures,
            "seconds": round(time.time() - start, 2),
        }
        print(f"   {'✅' if failures == 0 else '❌'} {suite}: {len(rows) - failures}/{len(rows)}")
    return result


def main():
    parser = argparse.ArgumentParser(description="Run all verification suites over a set of levels")
    parser.add_argument("--levels", default=LEVELS_FILE)
    parser.add_argument("--cache-dir", default=CACHE_DIR)
    parser.add_argument("--output", default=OUTPUT_DIR)
    args = parser.parse_args()

    levels = load_levels(args.levels)
    os.makedirs(args.output, exist_ok=True)
    results = []
    for i, entry in enumerate(levels, 1):
        print("=" * 80)
        print(f"[{i}/{len(levels)}] ramified={entry['ramified']} M={entry.get('M', 1)}")
        print("=" * 80)
        results.append(evaluate_level(entry, args.cache_dir))

    failed = sum(
        1
        for r in results
        for s in r["suites"].values()
        if "error" in s or s["failures"]
    )
    stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    path = os.path.join(args.output, f"summary_{stamp}.json")
    with open(path, "w") as f:
        json.dump({"levels": results, "failed_suites": failed}, f, indent=2)
    print(f"\nSummary saved to {path} ({failed} failing suites)")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
