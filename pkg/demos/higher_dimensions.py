"""Pizza quantities of balls and cubes for arrangements in R^3.

Run with ``python demos/higher_dimensions.py``.
"""
import numpy as np

from pizza.coxeter import build_type
from pizza.formulas import classify_f, even_polynomial, pizza_ball_coxeter
from pizza.geometry import region_ball, region_cube, region_shifted
from pizza.integrate import pizza_mc
from pizza.restriction import is_even_arrangement
from pizza.verify import seven_plane_arrangement


def main():
    a = np.array([0.2, 0.1, 0.3])
    print("type       even   closed form      monte carlo")
    for spec in ("B3", "H3", "A3", "A1xA1xA1"):
        CA = build_type(spec)
        fv = pizza_ball_coxeter(CA, a, 1.0)
        est = pizza_mc(CA.base, region_ball(a, 1.0), 1_000_000, seed=2)
        print(f"{spec:9s}  {str(is_even_arrangement(CA.base)):5s}  {fv:+.6e}    "
              f"{est.value:+.4e} ± {est.stderr:.1e}   {classify_f(CA)[0]}")

    cube = region_shifted(region_cube(3), (0.2, 0.3, 0.4))
    est = pizza_mc(build_type("A1xA1xA1").base, cube, 1_000_000, seed=3)
    print(f"\nshifted cube, coordinate planes: {est.value:.4f} ± {est.stderr:.1e}  (8 abc = 0.192)")

    A = seven_plane_arrangement()
    f = even_polynomial(A)
    b = np.array([0.3, 0.25, 0.2])
    est = pizza_mc(A, region_ball(b, 1.0), 2_000_000, seed=4)
    print("\nseven planes x=0, x=±0.7y, y=0, z=±1.3y, z=0:")
    print(f"  f(a) = c * a1 a2 a3 with c = {f(b) / np.prod(b):.12f} ({f.n_terms} sequence classes)")
    print(f"  unit ball at {b}: formula {f(b):+.5f}, monte carlo {est.value:+.5f} ± {est.stderr:.1e}")


if __name__ == "__main__":
    main()
