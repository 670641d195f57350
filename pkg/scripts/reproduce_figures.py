"""Write CSV and SVG data for the step, wavelet-spectrum and leakage figures."""
import argparse
from pathlib import Path

from hilbertpair import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures")
    ap.add_argument("--which", choices=["1", "2", "3", "all"], default="all")
    args = ap.parse_args()

    argv = ["figures", "--out", args.out]
    if args.which != "all":
        argv += ["--which", args.which]
    code = cli.main(argv)
    for p in sorted(Path(args.out).iterdir()):
        print(p)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
