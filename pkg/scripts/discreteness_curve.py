"""CSV of d_+(lambda_m, 0), d_xi(lambda_m, 0) and |rho_-(lambda_m)|_1 against m on hyp23."""
import argparse
import csv
import sys

from masure.io import decimal_str, frac_str
from masure.masure_sim import Masure, make_config
from masure.metrics import discreteness_probe
from masure.rootsys import preset


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--preset", default="hyp23")
    p.add_argument("--levels", type=int, default=5)
    p.add_argument("--height-bound", type=int, default=200)
    p.add_argument("--out", default="-")
    args = p.parse_args()
    m = Masure(make_config(preset(args.preset), args.height_bound, 2, 4))
    rep = discreteness_probe(m, args.levels)
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["m", "root", "d_plus", "d_mixed", "rho_minus_l1", "d_plus_decimal"])
    for i, s in enumerate(rep["levels"], 1):
        root = " ".join(str(c) for c in s["root"])
        w.writerow([i, root, frac_str(s["d_plus"]), frac_str(s["d_mixed"]), frac_str(s["coroot_norm"]), decimal_str(s["d_plus"], 5)])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
