"""Fuel spent by recover_iso per query, for each named permutation and sample size.

    python3 scripts/recovery_fuel.py [--seed N]
"""

import argparse
import time

from compstruct.cli import recover_check
from compstruct.core import PERMUTATIONS


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'perm':<9}{'samples':>8}{'wrong':>7}{'max fuel':>10}{'seconds':>9}")
    for name in sorted(PERMUTATIONS):
        for k in (25, 100):
            start = time.perf_counter()
            codes, wrong, bad, used = recover_check(name, k, args.seed, 10**5)
            print(f"{name:<9}{len(codes):>8}{len(wrong) + bad:>7}{used:>10}{time.perf_counter() - start:>9.2f}")


if __name__ == "__main__":
    main()
