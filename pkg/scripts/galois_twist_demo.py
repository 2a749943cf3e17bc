"""Print the quadrilateral group data before and after the Galois twist."""
import json

from repcert.galois import section4_demo


def main():
    rep = section4_demo()
    keys = ["trace_h", "trace_h_sigma", "class_h", "class_h_sigma",
            "euler", "euler_sigma", "w2", "w2_sigma", "conventions_validating", "cover"]
    print(json.dumps({k: rep[k] for k in keys}, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
