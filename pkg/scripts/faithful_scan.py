"""Faithfulness scan of the bent family with symbolic t."""
import argparse
import json

from repcert.goldman import default_family, faithful_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-syllables", type=int, default=2)
    ap.add_argument("--syllable-len", type=int, default=2)
    ap.add_argument("--kill-test-length", type=int, default=4)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()
    fam = default_family()
    rep = faithful_scan(fam, args.max_syllables, args.syllable_len, args.kill_test_length,
                        [fam.presentation.relator], threads=args.threads)
    print(json.dumps(rep.to_json(), indent=2))


if __name__ == "__main__":
    main()
