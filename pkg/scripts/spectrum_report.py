"""Run the union demo over several set choices and depths, printing one table per run.

    python3 scripts/spectrum_report.py [--json]
"""

import argparse

from compstruct.spectra import format_report, report_json, union_spectrum_demo

RUNS = [
    (["evens", "squares", "primes"], 2),
    (["primes", "evens", "squares"], 2),
    (["squares", "primes"], 3),
]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--decode-bound", type=int, default=25)
    args = ap.parse_args()
    bad = 0
    for sets, depth in RUNS:
        rows = union_spectrum_demo(sets, depth=depth, decode_bound=args.decode_bound)
        bad += sum(not r.ok for r in rows)
        if args.json:
            print(report_json(rows), end="")
        else:
            print(f"# sets={','.join(sets)} depth={depth}")
            print(format_report(rows))
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
