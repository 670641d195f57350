"""Print the grid of Sobolev exponents and optionally write it as CSV."""
import argparse

from hilbertpair import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--Lmax", type=int, default=8)
    ap.add_argument("--Mmax", type=int, default=8)
    ap.add_argument("--out", default=None, help="CSV path; stdout only if omitted")
    args = ap.parse_args()

    rows = cli.table1_rows(args.Lmax, args.Mmax)
    print("M\\L " + " ".join(f"{L:>6d}" for L in range(1, args.Lmax + 1)))
    for row in rows:
        print(f"{row[0]:>3} " + " ".join(f"{c:>6}" for c in row[1:]))
    if args.out:
        cli.main(["table1", "--Lmax", str(args.Lmax), "--Mmax", str(args.Mmax), "--out", args.out])
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
