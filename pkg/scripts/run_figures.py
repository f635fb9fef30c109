"""Write the output bundle of every figure preset (or a chosen subset)."""

import argparse
import time

from apollonian_jch.scenarios import PRESET_IDS, run_preset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("figures", nargs="*", default=list(PRESET_IDS), choices=PRESET_IDS)
    ap.add_argument("--out", default="jch_output")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    args = ap.parse_args()
    for fig in args.figures:
        t0 = time.perf_counter()
        bundles = run_preset(fig, args.out, args.format)
        nfiles = sum(len(b.files) + 1 for b in bundles)
        print(f"{fig}: {len(bundles)} bundle(s), {nfiles} files, {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
