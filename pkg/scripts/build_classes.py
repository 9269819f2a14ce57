#!/usr/bin/env python3
"""
Build and cache left ideal class sets for a batch of levels.

Each level runs in its own process; the class set, its neighbour graph and the
mass certificate are written to the cache directory.

    python scripts/build_classes.py --levels 2 3 11 2,3,11 2,3,7:5 --workers 4
"""

import os
import sys
import argparse
from datetime import datetime
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Dict, List, Tuple

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src"))

from database.repositories import ClassSetRepository
from utils.config import CACHE_DIR
from utils.errors import CohenEisensteinError
from utils.order import build_class_set
from utils.qform import LevelConfig, mass


def parse_level(text: str) -> Tuple[List[int], int]:
    """'2,3,7:5' -> ramified [2, 3, 7], M = 5"""
    ramified, _, M = text.partition(":")
    return [int(p) for p in ramified.split(",")], int(M or 1)


def build_one(ramified: List[int], M: int, directory: str) -> Dict:
    cfg = LevelConfig.from_primes(ramified, M)
    start = datetime.now()
    classes = build_class_set(cfg)
    ClassSetRepository.save(classes, directory)
    stats = classes.graph.get_statistics() if classes.graph is not None else {}
    return {
        "level": str(cfg),
        "N": cfg.N,
        "classes": classes.n,
        "w": list(classes.w),
        "mass": str(mass(cfg)),
        "connected": stats.get("is_connected"),
        "seconds": (datetime.now() - start).total_seconds(),
    }


def main():
    parser = argparse.ArgumentParser(description="Build cached ideal class sets")
    parser.add_argument("--levels", nargs="+", required=True, help="ramified[:M], e.g. 2,3,11 or 2,3,7:5")
    parser.add_argument("--cache-dir", default=CACHE_DIR)
    parser.add_argument("--workers", "-w", type=int, default=2)
    args = parser.parse_args()

    levels = [parse_level(t) for t in args.levels]
    print("=" * 80)
    print(f"BUILDING {len(levels)} CLASS SETS ({args.workers} workers) -> {args.cache_dir}")
    print("=" * 80)

    start = datetime.now()
    failed = 0
    with ProcessPoolExecutor(max_workers=args.workers) as executor:
        futures = {executor.submit(build_one, r, M, args.cache_dir): (r, M) for r, M in levels}
        for future in as_completed(futures):
            ramified, M = futures[future]
            try:
                result = future.result()
            except CohenEisensteinError as e:
                failed += 1
                print(f"❌ ramified={ramified} M={M}: {type(e).__name__}: {e}")
                continue
            print(f"✅ {result['level']}: n={result['classes']} w={result['w']} "
                  f"mass={result['mass']} connected={result['connected']} ({result['seconds']:.1f}s)")

    elapsed = (datetime.now() - start).total_seconds()
    print("=" * 80)
    print(f"Done in {elapsed:.1f}s, {len(levels) - failed} built, {failed} failed")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
