"""State-sum timing against crossing count, and the effect of worker threads."""
from __future__ import annotations

import argparse
import time

from pseudolinks.bracket import bracket
from pseudolinks.generate import random_diagram


def timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--surface", default="plane", choices=["plane", "annulus", "torus"])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12, 14, 16, 18, 20])
    ap.add_argument("--threads", type=int, nargs="+", default=[1, 2, 8])
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    print(f"{'crossings':>9} {'threads':>7} {'seconds':>9} {'terms':>6}")
    for n in args.sizes:
        d = random_diagram(args.surface, n, n * 3 // 10, args.seed)
        first = None
        for t in args.threads:
            p, seconds = timed(lambda: bracket(d, threads=t))
            first = p if first is None else first
            assert p == first, "thread count changed the result"
            print(f"{n:>9} {t:>7} {seconds:>9.3f} {len(p.items()):>6}", flush=True)


if __name__ == "__main__":
    main()
