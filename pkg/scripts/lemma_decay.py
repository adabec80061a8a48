"""Decay of the limited-aperture arc integral around (beta - alpha) J_0(kr).

Prints the sup over separation directions of the error at each kr and the
fitted power law C (kr)^p.
"""

import argparse
import math

from submig.verify import check_lemma_decay


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=math.pi / 4)
    ap.add_argument("--beta", type=float, default=3 * math.pi / 4)
    ap.add_argument("--kr", type=float, nargs="+", default=[10, 20, 40, 80, 160, 320, 640])
    args = ap.parse_args()

    rep = check_lemma_decay(args.alpha, args.beta, args.kr)
    for kr, err in rep.samples:
        print(f"kr={kr:8.1f}  error={err:.6e}")
    print(f"fit: error ~ {rep.constant:.3f} * kr^{rep.fitted_exponent:.3f}")


if __name__ == "__main__":
    main()
