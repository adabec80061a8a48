"""Compare migration maps with their Bessel predictions for one crack.

Sweeps the number of directions for full and limited view at the highest
wavenumber, then the number of frequencies for the multi-frequency map.
"""

import math

from submig.forward import wavenumbers
from submig.scene import SearchGrid, make_direction_set, reference_scene
from submig.verify import check_theorem_multi, check_theorem_single

FULL = (0.0, 2 * math.pi)
LIMITED = (math.pi / 4, 3 * math.pi / 4)


def main():
    scene, grid = reference_scene().subset([0]), SearchGrid()
    kF = 2 * math.pi / 0.2
    print("single frequency, rms vs sum J_0^2")
    for N in (4, 8, 12, 24, 64):
        full = check_theorem_single(scene, make_direction_set(N, *FULL), kF, grid)
        lim = check_theorem_single(scene, make_direction_set(N, *LIMITED), kF, grid)
        print(f"  N={N:3d}  full={full:.4f}  limited={lim:.4f}")
    print("multi frequency (full view, N=64), rms vs closed form")
    d = make_direction_set(64, *FULL)
    for F in (2, 5, 10, 20):
        res = check_theorem_multi(scene, d, wavenumbers(0.2, 0.6, F), grid)
        print(f"  F={F:3d}  rms={res.rms:.4f}  neglected/kept at r=1: {res.neglected_ratio:.2f}")


if __name__ == "__main__":
    main()
