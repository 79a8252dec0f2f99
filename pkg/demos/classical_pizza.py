"""Cut a disc with equally spaced lines and compare alternating areas.

Run with ``python demos/classical_pizza.py``.
"""
import numpy as np

from pizza.coxeter import build_type
from pizza.geometry import region_ball
from pizza.integrate import pizza_exact_2d, pizza_mc, sector_areas_2d


def main():
    a, R = (0.3, 0.1), 1.0
    print("lines  exact            monte carlo")
    for m in (2, 3, 4, 5, 6, 8):
        A = build_type("A1xA1" if m == 2 else f"I2({m})").base
        ex = pizza_exact_2d(A, a, R)
        est = pizza_mc(A, region_ball(a, R), 1_000_000, seed=1)
        print(f"{m:5d}  {ex:+.3e}       {est.value:+.3e} ± {est.stderr:.1e}")
    print("\nFour or more lines in even number give zero. Two lines give 4 a1 a2 = 0.12,")
    print("and odd counts give small nonzero values.")

    A = build_type("I2(6)").base
    areas = np.array(sector_areas_2d(A, (0.2, 0.3), 1.0))
    print("\nSix lines, twelve sectors; every third sector summed:")
    for r in range(3):
        print(f"  share {r}: {areas[r::3].sum():.12f}  (pi/3 = {np.pi / 3:.12f})")


if __name__ == "__main__":
    main()
