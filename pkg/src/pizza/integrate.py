"""Numerical engines for alternating volume sums.

* :func:`pizza_mc` - Monte Carlo estimate of ``sum_T (-1)^T Vol(K ∩ T)``.
* :func:`pizza_exact_2d` - quadrature oracle for discs in the plane.
* :func:`surface_alt_sum_mc` - the same alternating sum over a sphere.
* :func:`simplex_integral` - nested quadrature on the order simplex.
* :func:`reduction_rhs` - right-hand side of the translation identity that
  expresses ``P(K + a) - P(K)`` through the even restricted arrangements.

Chamber signs are always evaluated pointwise; chambers are never listed.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .arrangement import Arrangement, chamber_signs
from .errors import PreconditionError
from .geometry import Region, as_point, slice_region, sphere_area
from .restriction import even_restricted
from .streams import batch_sizes, derive_seed, mean_and_stderr, run_batches

CHUNK = 1 << 15
NODE_CAP = 4_000_000
MAX_BISECTIONS = 40


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo value with its batch-means standard error."""

    value: float
    stderr: float
    n_samples: int
    seed: int
    workers: int = 1

    def __sub__(self, other: "MCEstimate") -> "MCEstimate":
        return MCEstimate(
            self.value - other.value,
            math.hypot(self.stderr, other.stderr),
            self.n_samples + other.n_samples,
            self.seed,
            self.workers,
        )

    def zscore(self, target: float = 0.0) -> float:
        if self.stderr == 0:
            return 0.0 if self.value == target else math.inf
        return abs(self.value - target) / self.stderr


@dataclass(frozen=True)
class QuadratureConfig:
    base_order: int = 16
    max_refinements: int = 6
    rel_tol: float = 1e-8

    def __post_init__(self):
        if self.base_order < 1 or self.max_refinements < 0 or not self.rel_tol > 0:
            raise PreconditionError("quadrature settings must be positive")


@lru_cache(maxsize=64)
def gauss_legendre01(order: int):
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _signed_draws(A: Arrangement, draw, rng, size):
    """``size`` points from ``draw`` with their chamber signs; wall hits redrawn."""
    X = draw(rng, size)
    s = chamber_signs(A, X)
    hits = np.flatnonzero(s == 0)
    while hits.size:
        Y = draw(rng, hits.size)
        X[hits] = Y
        s[hits] = chamber_signs(A, Y)
        hits = hits[s[hits] == 0]
    return X, s


def pizza_mc(A: Arrangement, K: Region, N: int, seed: int = 42, workers: int = 1) -> MCEstimate:
    """Monte Carlo pizza quantity ``P(A, K)``.

    With a direct sampler the estimate is ``Vol(K)`` times the mean chamber
    sign.  Otherwise points are drawn in the bounding box and the estimate is
    ``Vol(box)`` times the mean of ``1_K(x) * sign(x)``.  Points that land on
    a hyperplane are redrawn.  The standard error comes from 64 batch means.
    """
    if K.dim != A.dim:
        raise PreconditionError(f"region lives in R^{K.dim}, arrangement in R^{A.dim}")
    if A.dim == 0:
        inside = bool(K.contains(np.zeros((1, 0)))[0])
        return MCEstimate(float(inside), 0.0, int(N), int(seed), int(workers))
    lo, hi = np.asarray(K.lo, dtype=float), np.asarray(K.hi, dtype=float)
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise PreconditionError("region must be bounded")
    direct = K.sampler is not None and K.volume_hint is not None

    if direct:
        def task(rng, size):
            total = 0.0
            for start in range(0, size, CHUNK):
                _, s = _signed_draws(A, K.sampler, rng, min(CHUNK, size - start))
                total += float(np.sum(s, dtype=np.int64))
            return np.array([total, size])
        scale = float(K.volume_hint)
    else:
        width = hi - lo

        def box(rng, size):
            return lo + width * rng.random((size, lo.shape[0]))

        def task(rng, size):
            total, accepted = 0.0, 0
            for start in range(0, size, CHUNK):
                m = min(CHUNK, size - start)
                X = box(rng, m)
                inside = K.contains(X)
                s = chamber_signs(A, X)
                hits = np.flatnonzero(inside & (s == 0))
                while hits.size:
                    Y = box(rng, hits.size)
                    X[hits] = Y
                    inside[hits] = K.contains(Y)
                    s[hits] = chamber_signs(A, Y)
                    hits = hits[inside[hits] & (s[hits] == 0)]
                total += float(np.sum(s[inside], dtype=np.int64))
                accepted += int(np.count_nonzero(inside))
            return np.array([total, accepted])
        scale = float(np.prod(width))

    sums = run_batches(task, N, seed, workers)
    sizes = batch_sizes(N)
    if not direct and sum(float(s[1]) for s in sums) == 0:
        raise PreconditionError("no sample fell inside the region; it may be empty or tiny")
    mean, se = mean_and_stderr([s[:1] for s in sums], sizes)
    return MCEstimate(scale * float(mean[0]), scale * float(se[0]), int(N), int(seed), int(workers))


def surface_alt_sum_mc(A: Arrangement, a, R: float, N: int, seed: int = 42, workers: int = 1) -> MCEstimate:
    """Alternating sum of the areas ``Vol_{n-1}(S(a, R) ∩ T)`` by Monte Carlo."""
    a = as_point(a, A.dim)
    if not R > 0:
        raise PreconditionError("sphere radius must be positive")
    n = A.dim

    def draw(rng, size):
        g = rng.standard_normal((size, n))
        return a + R * g / np.linalg.norm(g, axis=1)[:, None]

    def task(rng, size):
        total = 0.0
        for start in range(0, size, CHUNK):
            _, s = _signed_draws(A, draw, rng, min(CHUNK, size - start))
            total += float(np.sum(s, dtype=np.int64))
        return np.array([total])

    sums = run_batches(task, N, seed, workers)
    mean, se = mean_and_stderr(sums, batch_sizes(N))
    area = sphere_area(n, R)
    return MCEstimate(area * float(mean[0]), area * float(se[0]), int(N), int(seed), int(workers))


# --- exact planar oracle ---------------------------------------------------


def _adaptive_gl(f, lo, hi, abs_tol, order=16, depth=0):
    x, w = gauss_legendre01(order)
    whole = (hi - lo) * float(np.dot(w, f(lo + (hi - lo) * x)))
    mid = 0.5 * (lo + hi)
    left = (mid - lo) * float(np.dot(w, f(lo + (mid - lo) * x)))
    right = (hi - mid) * float(np.dot(w, f(mid + (hi - mid) * x)))
    if abs(left + right - whole) <= abs_tol or depth >= MAX_BISECTIONS:
        return left + right
    return _adaptive_gl(f, lo, mid, abs_tol / 2, order, depth + 1) + _adaptive_gl(
        f, mid, hi, abs_tol / 2, order, depth + 1
    )


def line_breakpoints(A: Arrangement) -> np.ndarray:
    """Sorted angles in [0, 2 pi) of the rays that make up the lines of ``A``."""
    ang = []
    for e in A.normals:
        base = math.atan2(e[1], e[0]) + math.pi / 2
        ang.extend([base % (2 * math.pi), (base + math.pi) % (2 * math.pi)])
    return np.sort(np.array(ang))


def pizza_exact_2d(A: Arrangement, a, R: float, cfg: Optional[QuadratureConfig] = None) -> float:
    """Pizza quantity of the disc ``B(a, R)`` by quadrature in polar angle.

    The lines cut the plane into sectors of constant chamber sign.  Because
    the origin lies in the disc, the part of sector ``[t0, t1]`` inside the
    disc has area ``int rho(t)^2 / 2 dt`` where ``rho`` is the distance from
    the origin to the circle in direction ``t``.
    """
    cfg = cfg or QuadratureConfig()
    if A.dim != 2:
        raise PreconditionError("the exact disc engine needs a planar arrangement")
    a = as_point(a, 2)
    if not R >= np.linalg.norm(a) * (1 - 1e-12):
        raise PreconditionError("the disc must contain the origin (R >= |a|)")
    c = R * R - float(np.dot(a, a))

    def half_rho2(t):
        p = a[0] * np.cos(t) + a[1] * np.sin(t)
        rho = p + np.sqrt(np.maximum(c + p * p, 0.0))
        return 0.5 * rho * rho

    if len(A) == 0:
        return _adaptive_gl(half_rho2, 0.0, 2 * math.pi, cfg.rel_tol * R * R, cfg.base_order)
    br = line_breakpoints(A)
    edges = np.append(br, br[0] + 2 * math.pi)
    total = 0.0
    for t0, t1 in zip(edges[:-1], edges[1:]):
        if t1 - t0 <= 1e-15:
            continue
        tm = 0.5 * (t0 + t1)
        s = int(chamber_signs(A, np.array([[math.cos(tm), math.sin(tm)]]))[0])
        part = _adaptive_gl(half_rho2, t0, t1, cfg.rel_tol * R * R * (t1 - t0), cfg.base_order)
        total += s * part
    return total


def sector_areas_2d(A: Arrangement, a, R: float, cfg: Optional[QuadratureConfig] = None):
    """Areas of ``B(a, R)`` in each angular sector, starting at the base chamber.

    Returns a list of areas ordered counter-clockwise with index 0 the
    sector containing the base-chamber witness.
    """
    cfg = cfg or QuadratureConfig()
    a = as_point(a, 2)
    if not R >= np.linalg.norm(a) * (1 - 1e-12):
        raise PreconditionError("the disc must contain the origin (R >= |a|)")
    c = R * R - float(np.dot(a, a))

    def half_rho2(t):
        p = a[0] * np.cos(t) + a[1] * np.sin(t)
        rho = p + np.sqrt(np.maximum(c + p * p, 0.0))
        return 0.5 * rho * rho

    br = line_breakpoints(A)
    edges = np.append(br, br[0] + 2 * math.pi)
    areas = [
        _adaptive_gl(half_rho2, t0, t1, cfg.rel_tol * R * R * (t1 - t0), cfg.base_order)
        for t0, t1 in zip(edges[:-1], edges[1:])
    ]
    start = sector_index(A, A.witness)
    return areas[start:] + areas[:start]


def sector_index(A: Arrangement, x) -> int:
    """Index of the sector (between consecutive breakpoints) containing ``x``."""
    br = line_breakpoints(A)
    t = math.atan2(x[1], x[0]) % (2 * math.pi)
    k = int(np.searchsorted(br, t, side="right")) - 1
    return k % len(br)


# --- nested simplex quadrature ---------------------------------------------


def _simplex_rule(r: int, order: int):
    """Nodes and weights on ``0 <= t_r <= ... <= t_1 <= 1``.

    Uses ``t_1 = s_1`` and ``t_i = t_{i-1} s_i`` with a tensor Gauss-Legendre
    rule in ``s``; the Jacobian is ``prod_i t_{i-1}``.
    """
    x, w = gauss_legendre01(order)
    grids = np.meshgrid(*([x] * r), indexing="ij")
    S = np.stack([g.reshape(-1) for g in grids], axis=1)
    W = np.ones(S.shape[0])
    for g in np.meshgrid(*([w] * r), indexing="ij"):
        W = W * g.reshape(-1)
    T = np.cumprod(S, axis=1)
    if r > 1:
        W = W * np.prod(T[:, :-1], axis=1)
    return T, W


def simplex_integral(c, p: float, R: float, cfg: Optional[QuadratureConfig] = None) -> float:
    """``int (R^2 - sum_i c_i t_i^2)^p dt`` over ``0 <= t_r <= ... <= t_1 <= 1``.

    ``p`` is a nonnegative integer or half-integer.  The tensor rule order is
    doubled until two successive values agree to ``rel_tol``.
    """
    cfg = cfg or QuadratureConfig()
    c = np.asarray(c, dtype=float).reshape(-1)
    if np.any(c < 0):
        raise PreconditionError("coefficients must be nonnegative")
    if p < 0 or abs(2 * p - round(2 * p)) > 1e-12:
        raise PreconditionError("p must be a nonnegative integer or half-integer")
    r = c.shape[0]
    R2 = float(R) ** 2
    if R2 - float(np.sum(c)) < -1e-12 * max(1.0, R2):
        raise PreconditionError("negative radicand: sum of coefficients exceeds R^2")
    if r == 0:
        return max(R2, 0.0) ** p

    def rule_value(order):
        T, W = _simplex_rule(r, order)
        rad = R2 - (T * T) @ c
        rad = np.where(rad < 0, 0.0, rad)  # roundoff at |a| = R
        return float(np.dot(W, rad**p))

    order = cfg.base_order
    prev = rule_value(order)
    for _ in range(cfg.max_refinements):
        nxt = 2 * order
        if nxt**r > NODE_CAP:
            break
        cur = rule_value(nxt)
        if abs(cur - prev) <= cfg.rel_tol * max(abs(cur), 1e-300):
            return cur
        order, prev = nxt, cur
    if not (p == int(p)):
        warnings.warn(f"simplex_integral stopped at order {order} before reaching rel_tol", RuntimeWarning)
    return prev


# --- translation identity ----------------------------------------------------


def reduction_rhs(
    A: Arrangement,
    K: Region,
    a,
    N_inner: int,
    cfg: Optional[QuadratureConfig] = None,
    seed: int = 42,
    workers: int = 1,
) -> MCEstimate:
    """Right-hand side ``2 sum_e z0(e) <a, e> int_0^1 P(A_e, (K + t a) ∩ H_e) dt``.

    The inner pizza quantities are Monte Carlo estimates on the even
    restricted arrangements, each paired with the sign of its own child base
    chamber; the outer integral uses a fixed Gauss-Legendre rule because the
    integrand is noisy.  The returned standard error combines all inner ones.
    """
    cfg = cfg or QuadratureConfig()
    a = as_point(a, A.dim)
    nodes, weights = gauss_legendre01(cfg.base_order)
    value, var = 0.0, 0.0
    for i, e in enumerate(A.normals):
        ae = float(np.dot(a, e))
        if abs(ae) <= 1e-12:
            continue
        step = even_restricted(A, i)
        child = step.child
        integral, ivar = 0.0, 0.0
        for j, (t, w) in enumerate(zip(nodes, weights)):
            region = slice_region(K, step.child_basis, shift=t * a)
            est = pizza_mc(child, region, N_inner, seed=derive_seed(seed, 7, i, j), workers=workers)
            integral += w * est.value
            ivar += (w * est.stderr) ** 2
        coef = 2.0 * step.z0_sign * ae
        value += coef * integral
        var += coef * coef * ivar
    return MCEstimate(float(value), math.sqrt(var), int(N_inner), int(seed), int(workers))
