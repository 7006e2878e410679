"""Long random-walk campaign: the bracket must survive regular moves and the
normalized bracket must survive all moves, on fixtures and fresh random diagrams."""
from __future__ import annotations

import argparse
import json
import time

from pseudolinks.cli import verify_report
from pseudolinks.fixtures import fixture_names, load_fixture
from pseudolinks.generate import random_diagram


def corpus(n_random: int, seed: int, max_crossings: int):
    out = [(n, load_fixture(n)) for n in fixture_names() if load_fixture(n).n_crossings <= max_crossings]
    surfaces = ["plane", "annulus", "torus"]
    for i in range(n_random):
        n = 1 + i % max_crossings
        d = random_diagram(surfaces[i % 3], n, (seed + i) % (n + 1), seed + i)
        out.append((f"random_{surfaces[i % 3]}_{i}", d))
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-steps", type=int, default=12)
    ap.add_argument("--random-diagrams", type=int, default=30)
    ap.add_argument("--max-crossings", type=int, default=6)
    ap.add_argument("--failures", help="write failing traces to this JSON file")
    args = ap.parse_args()

    items = corpus(args.random_diagrams, args.seed, args.max_crossings)
    all_failures = []
    for moves in ("regular", "full"):
        start = time.perf_counter()
        report = verify_report(items, moves, args.trials, args.seed, args.max_steps)
        seconds = time.perf_counter() - start
        print(f"{moves:8s} {report['passed']}/{report['trials']} passed on {len(items)} diagrams "
              f"in {seconds:.1f} s")
        all_failures += report["failures"]
    if args.failures:
        with open(args.failures, "w", encoding="utf-8") as fh:
            json.dump(all_failures, fh, indent=1)
    raise SystemExit(1 if all_failures else 0)


if __name__ == "__main__":
    main()
