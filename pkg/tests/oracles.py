"""Independent reference computations used only by the tests."""
import math

import numpy as np
from shapely.geometry import Point, Polygon

from pizza import arrangement as arr


def polygon_pizza_2d(A, a, R, segments=2**14):
    """Pizza quantity of a disc by polygon clipping.

    The disc is a fine polygon; each sector between consecutive lines is a
    large wedge polygon, signed by the chamber sign at its mid-angle.
    """
    disc = Point(*a).buffer(R, quad_segs=segments)
    angles = np.arctan2(A.normals[:, 0], -A.normals[:, 1]) % math.pi
    br = np.sort(np.concatenate([angles, angles + math.pi]))
    br = np.append(br, br[0] + 2 * math.pi)
    big = 10 * (R + float(np.linalg.norm(a)))
    total = 0.0
    for t0, t1 in zip(br[:-1], br[1:]):
        ts = np.linspace(t0, t1, 64)
        wedge = Polygon([(0.0, 0.0)] + [(big * math.cos(t), big * math.sin(t)) for t in ts])
        mid = 0.5 * (t0 + t1)
        s = arr.chamber_sign(A, (math.cos(mid), math.sin(mid)))
        total += s * disc.intersection(wedge).area
    return total


def random_lines(seed, m=None, min_gap=0.1):
    """Random central line arrangement in the plane, auto-oriented."""
    r = np.random.default_rng(seed)
    m = m or int(r.integers(2, 7))
    while True:
        ang = np.sort(r.uniform(0, math.pi, m))
        gaps = np.diff(np.concatenate([ang, [ang[0] + math.pi]]))
        if np.min(gaps) > min_gap:
            break
    return arr.build(np.column_stack([-np.sin(ang), np.cos(ang)]), auto_orient=True)
