"""How the pizza quantity of a ball depends on its radius.

With the parity condition the value is a polynomial in R with only even
powers, and constant when the arrangement has exactly dim V hyperplanes;
without it the value dies off as R grows.

Run with ``python demos/radius_behaviour.py``.
"""
import numpy as np

from pizza.coxeter import build_type
from pizza.formulas import pizza_ball_coxeter
from pizza.integrate import pizza_exact_2d


def main():
    radii = np.geomspace(1, 64, 7)
    A2, I25 = build_type("A2").base, build_type("I2(5)").base
    A2E1 = build_type("A2xE1")
    print("R        A2 (decays)     I2(5) (decays)   A2xE1 (constant)")
    for R in radii:
        print(f"{R:6.2f}   {pizza_exact_2d(A2, (0.4, 0.1), R):+.4e}     "
              f"{pizza_exact_2d(I25, (0.4, 0.1), R):+.4e}      "
              f"{pizza_ball_coxeter(A2E1, (0.2, 0.1, 0.3), R):+.6e}")


if __name__ == "__main__":
    main()
