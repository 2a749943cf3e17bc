"""Half-side constants and the sampled separation check in complex hyperbolic space."""
import argparse
import json

from repcert.pu21 import separation_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--genus", type=int, default=3)
    ap.add_argument("--samples", type=int, default=10 ** 6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()
    print(json.dumps(separation_report(args.genus, args.samples, args.seed, threads=args.threads),
                     indent=2))


if __name__ == "__main__":
    main()
