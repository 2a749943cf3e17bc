"""Exhaustive degree-law check over alternating words of the bent family."""
import argparse
import json
import time

from repcert.goldman import batch_degree_law, default_family


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-syllables", type=int, default=3)
    ap.add_argument("--syllable-len", type=int, default=2)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()
    start = time.perf_counter()
    rep = batch_degree_law(default_family(), args.max_syllables, args.syllable_len,
                           threads=args.threads)
    doc = rep.to_json()
    doc["seconds"] = round(time.perf_counter() - start, 2)
    print(json.dumps(doc, indent=2))


if __name__ == "__main__":
    main()
