"""Vectors, subspace bases, quadratic forms, regions and uniform samplers.

Points are plain 1-D numpy arrays; batches of points are ``(m, n)`` arrays.
Every sampler takes an explicit :class:`numpy.random.Generator`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import GeometryError

TOL_UNIT = 1e-12
TOL_ORTHO = 1e-10
TOL_HYPERPLANE = 1e-9

SYMMETRY_TAGS = ("none", "central", "coxeter-stable")


def as_point(x, dim=None) -> np.ndarray:
    p = np.asarray(x, dtype=float).reshape(-1)
    if not np.all(np.isfinite(p)):
        raise GeometryError(f"non-finite coordinates: {p}")
    if dim is not None and p.shape[0] != dim:
        raise GeometryError(f"expected a point of dimension {dim}, got {p.shape[0]}")
    return p


def inner(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise GeometryError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return float(np.dot(u, v))


def normalize(v) -> np.ndarray:
    """Return ``v / |v|``; raises :class:`GeometryError` on a (near) zero vector."""
    v = as_point(v)
    norm = float(np.linalg.norm(v))
    if norm <= 1e-12:
        raise GeometryError("cannot normalize a zero vector")
    out = v / norm
    # a second pass absorbs the last ulp of rounding so normalize is idempotent
    return out / np.linalg.norm(out)


def gamma_half(x: float) -> float:
    """Gamma function at a positive integer or half-integer, by recurrence.

    Exact up to floating point rounding of the running product; no series
    or Lanczos approximation is involved.
    """
    twice = round(2 * x)
    if twice <= 0 or abs(2 * x - twice) > 1e-12:
        raise GeometryError(f"gamma_half needs a positive (half-)integer, got {x}")
    if twice % 2 == 0:
        value, y = 1.0, 1.0
    else:
        value, y = math.sqrt(math.pi), 0.5
    while y < x - 1e-12:
        value *= y
        y += 1.0
    return value


def ball_volume(n: int, R: float = 1.0) -> float:
    """Volume of the ``n``-ball of radius ``R``: pi^(n/2) R^n / Gamma(n/2 + 1)."""
    if n == 0:
        return 1.0
    return math.pi ** (n / 2) * R**n / gamma_half(n / 2 + 1)


def sphere_area(n: int, R: float = 1.0) -> float:
    """(n-1)-dimensional area of the sphere of radius ``R`` in R^n."""
    if n == 0:
        return 0.0
    return 2 * math.pi ** (n / 2) * R ** (n - 1) / gamma_half(n / 2)


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Orthonormal basis of a subspace of R^n, stored as rows.

    ``coords`` maps ambient points to subspace coordinates and ``embed``
    maps coordinates back.
    """

    vectors: np.ndarray  # shape (k, n)
    ambient_dim: int

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def coords(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.vectors.T

    def embed(self, y) -> np.ndarray:
        return np.asarray(y, dtype=float) @ self.vectors

    def projector(self) -> np.ndarray:
        return self.vectors.T @ self.vectors


def _gram_schmidt_step(v, basis):
    for _ in range(2):
        for b in basis:
            v = v - np.dot(v, b) * b
    return v


def subspace_basis(normals, dim: Optional[int] = None) -> OrthonormalBasis:
    """Orthonormal basis of the orthogonal complement of ``span(normals)``.

    Deterministic: standard basis vectors are swept greedily, always taking
    the one with the largest residual (lowest index on ties), so
    ``subspace_basis([(1, 0)])`` is ``{(0, 1)}``.
    """
    N = np.asarray(normals, dtype=float)
    if N.size == 0:
        if dim is None:
            raise GeometryError("dim is required when no normals are given")
        return OrthonormalBasis(np.eye(dim), dim)
    N = np.atleast_2d(N)
    n = N.shape[1]
    if dim is not None and dim != n:
        raise GeometryError(f"normals live in R^{n}, not R^{dim}")
    r = N.shape[0]
    if r > n:
        raise GeometryError(f"{r} normals in R^{n} cannot be independent")
    # Cholesky pivots of the Gram matrix are the squared Gram-Schmidt residuals
    span = []
    for v in N:
        w = _gram_schmidt_step(v.copy(), span)
        pivot = float(np.dot(w, w))
        if pivot <= 1e-10:
            raise GeometryError("normals are linearly dependent")
        span.append(w / math.sqrt(pivot))
    out = []
    candidates = list(range(n))
    for _ in range(n - r):
        best, best_norm, best_vec = None, -1.0, None
        for i in candidates:
            e = np.zeros(n)
            e[i] = 1.0
            w = _gram_schmidt_step(e, span + out)
            wn = float(np.linalg.norm(w))
            if wn > best_norm + 1e-12:
                best, best_norm, best_vec = i, wn, w
        candidates.remove(best)
        out.append(best_vec / best_norm)
    vectors = np.array(out) if out else np.zeros((0, n))
    return OrthonormalBasis(vectors, n)


@dataclass(frozen=True, eq=False)
class QuadForm:
    """Positive definite quadratic form ``q(x) = x^T M x``."""

    matrix: np.ndarray
    chol: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        if M.shape[0] != M.shape[1]:
            raise GeometryError("quadratic form matrix must be square")
        if np.max(np.abs(M - M.T), initial=0.0) > 1e-12:
            raise GeometryError("quadratic form matrix must be symmetric")
        try:
            L = np.linalg.cholesky(M)
        except np.linalg.LinAlgError as exc:
            raise GeometryError("quadratic form must be positive definite") from exc
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "chol", L)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.einsum("...i,ij,...j->...", x, self.matrix, x)

    def det(self) -> float:
        return float(np.prod(np.diag(self.chol)) ** 2)


# --- samplers -------------------------------------------------------------


def _directions(rng, size, n):
    g = rng.standard_normal((size, n))
    norms = np.linalg.norm(g, axis=1)
    # a zero Gaussian draw has probability zero; redraw defensively
    bad = norms == 0
    while np.any(bad):
        g[bad] = rng.standard_normal((int(bad.sum()), n))
        norms = np.linalg.norm(g, axis=1)
        bad = norms == 0
    return g / norms[:, None]


def _check_radius(R):
    if not (R >= 0 and math.isfinite(R)):
        raise GeometryError(f"radius must be a finite nonnegative number, got {R}")


def sample_sphere(a, R, rng, size=None):
    """Uniform points on the sphere of radius ``R`` centred at ``a``."""
    a = as_point(a)
    _check_radius(R)
    m = 1 if size is None else size
    pts = a + R * _directions(rng, m, a.shape[0])
    return pts[0] if size is None else pts


def sample_ball(a, R, rng, size=None):
    """Uniform points in the closed ball ``B(a, R)`` (polar method)."""
    a = as_point(a)
    _check_radius(R)
    n = a.shape[0]
    m = 1 if size is None else size
    d = _directions(rng, m, n)
    rad = R * rng.random(m) ** (1.0 / n)
    pts = a + d * rad[:, None]
    return pts[0] if size is None else pts


def sample_box(lo, hi, rng, size=None):
    lo = as_point(lo)
    hi = as_point(hi, lo.shape[0])
    if np.any(hi <= lo):
        raise GeometryError("box needs lo < hi componentwise")
    m = 1 if size is None else size
    pts = lo + (hi - lo) * rng.random((m, lo.shape[0]))
    return pts[0] if size is None else pts


def sample_ellipsoid(q: QuadForm, a, R, rng, size=None):
    """Uniform points in ``{x : q(x - a) <= R^2}``.

    With ``M = L L^T`` the map ``y -> a + L^{-T} y`` sends the round ball of
    radius ``R`` onto the ellipsoid and has constant Jacobian.
    """
    a = as_point(a, q.dim)
    _check_radius(R)
    y = sample_ball(np.zeros(q.dim), R, rng, size=1 if size is None else size)
    x = a + np.linalg.solve(q.chol.T, y.T).T
    return x[0] if size is None else x


# --- regions ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Region:
    """A bounded measurable body given by a vectorised membership test.

    ``contains`` maps an ``(m, n)`` array to a boolean ``(m,)`` array.
    ``sampler(rng, size)`` draws uniform points of the body when a direct
    method exists; otherwise engines fall back to box rejection.
    """

    contains: Callable[[np.ndarray], np.ndarray]
    lo: np.ndarray
    hi: np.ndarray
    volume_hint: Optional[float] = None
    symmetry_tag: str = "none"
    sampler: Optional[Callable[[np.random.Generator, int], np.ndarray]] = None
    name: str = "region"

    @property
    def dim(self) -> int:
        return int(np.asarray(self.lo).shape[0])

    def membership(self, x) -> bool:
        return bool(self.contains(np.atleast_2d(np.asarray(x, dtype=float)))[0])

    def box_volume(self) -> float:
        return float(np.prod(np.asarray(self.hi) - np.asarray(self.lo)))


def region_ball(a, R) -> Region:
    a = as_point(a)
    _check_radius(R)
    n = a.shape[0]
    R2 = R * R

    def contains(x):
        d = np.asarray(x, dtype=float) - a
        return np.einsum("ij,ij->i", d, d) <= R2

    return Region(
        contains=contains,
        lo=a - R,
        hi=a + R,
        volume_hint=ball_volume(n, R),
        symmetry_tag="central" if not np.any(a) else "none",
        sampler=lambda rng, size: sample_ball(a, R, rng, size),
        name=f"ball(R={R:g})",
    )


def region_ellipsoid(q: QuadForm, a, R) -> Region:
    a = as_point(a, q.dim)
    _check_radius(R)
    R2 = R * R
    # support of {q(x) <= R^2} along axis i is R * sqrt((M^-1)_ii)
    half = R * np.sqrt(np.diag(np.linalg.inv(q.matrix)))

    def contains(x):
        return q(np.asarray(x, dtype=float) - a) <= R2

    return Region(
        contains=contains,
        lo=a - half,
        hi=a + half,
        volume_hint=ball_volume(q.dim, R) / math.sqrt(q.det()),
        symmetry_tag="central" if not np.any(a) else "none",
        sampler=lambda rng, size: sample_ellipsoid(q, a, R, rng, size),
        name=f"ellipsoid(R={R:g})",
    )


def region_box(lo, hi) -> Region:
    lo = as_point(lo)
    hi = as_point(hi, lo.shape[0])
    if np.any(hi <= lo):
        raise GeometryError("box needs lo < hi componentwise")

    def contains(x):
        x = np.asarray(x, dtype=float)
        return np.all((x >= lo) & (x <= hi), axis=1)

    return Region(
        contains=contains,
        lo=lo,
        hi=hi,
        volume_hint=float(np.prod(hi - lo)),
        symmetry_tag="central" if np.allclose(lo, -hi) else "none",
        sampler=lambda rng, size: sample_box(lo, hi, rng, size),
        name="box",
    )


def region_cube(n: int, half: float = 1.0) -> Region:
    return region_box(-half * np.ones(n), half * np.ones(n))


def region_slab_polytope(normals, h: float = 1.0, name="slab-polytope") -> Region:
    """The polytope ``{x : |<x, e>| <= h for every e}``.

    Taking all roots of a Coxeter arrangement gives a body stable under the
    Coxeter group, since the group permutes the roots up to sign.
    """
    N = np.atleast_2d(np.asarray(normals, dtype=float))
    n = N.shape[1]
    if np.linalg.matrix_rank(N) < n:
        raise GeometryError("slab polytope is unbounded unless the normals span R^n")

    def contains(x):
        return np.all(np.abs(np.asarray(x, dtype=float) @ N.T) <= h, axis=1)

    # |x_i| is bounded by the LP value max x_i over the polytope; a safe bound
    # comes from the pseudo-inverse: x = N^+ (N x) with |N x|_inf <= h.
    pinv = np.linalg.pinv(N)
    half = h * np.sum(np.abs(pinv), axis=1)
    return Region(contains=contains, lo=-half, hi=half, symmetry_tag="central", name=name)


def region_shifted(K: Region, a) -> Region:
    """The translate ``K + a``."""
    a = as_point(a, K.dim)
    base_contains = K.contains
    base_sampler = K.sampler
    sampler = None
    if base_sampler is not None:
        sampler = lambda rng, size: base_sampler(rng, size) + a  # noqa: E731
    return Region(
        contains=lambda x: base_contains(np.asarray(x, dtype=float) - a),
        lo=np.asarray(K.lo) + a,
        hi=np.asarray(K.hi) + a,
        volume_hint=K.volume_hint,
        symmetry_tag=K.symmetry_tag if not np.any(a) else "none",
        sampler=sampler,
        name=f"{K.name}+a",
    )


def region_transformed(K: Region, U) -> Region:
    """The image ``U(K)`` of ``K`` under an orthogonal matrix ``U``."""
    U = np.asarray(U, dtype=float)
    if np.max(np.abs(U.T @ U - np.eye(U.shape[0]))) > TOL_ORTHO:
        raise GeometryError("matrix is not orthogonal")
    base_contains = K.contains
    base_sampler = K.sampler
    corners = _box_corners(np.asarray(K.lo), np.asarray(K.hi)) @ U.T
    sampler = None
    if base_sampler is not None:
        sampler = lambda rng, size: base_sampler(rng, size) @ U.T  # noqa: E731
    return Region(
        contains=lambda x: base_contains(np.asarray(x, dtype=float) @ U),
        lo=corners.min(axis=0),
        hi=corners.max(axis=0),
        volume_hint=K.volume_hint,
        symmetry_tag=K.symmetry_tag,
        sampler=sampler,
        name=f"U({K.name})",
    )


def _box_corners(lo, hi):
    n = lo.shape[0]
    if n > 12:
        raise GeometryError("corner enumeration limited to n <= 12")
    idx = np.array(np.meshgrid(*[[0, 1]] * n, indexing="ij")).reshape(n, -1).T
    return np.where(idx == 0, lo, hi)


def slice_region(K: Region, basis: OrthonormalBasis, shift=None) -> Region:
    """The section ``(K + shift) ∩ S`` in the coordinates of ``basis``.

    ``S`` is the linear subspace spanned by the rows of ``basis``; the result
    lives in R^k with ``k = basis.dim``.
    """
    n = K.dim
    b = np.zeros(n) if shift is None else as_point(shift, n)
    B = basis.vectors
    base_contains = K.contains
    lo = np.asarray(K.lo) + b
    hi = np.asarray(K.hi) + b
    # y = B x over the box [lo, hi]
    ylo = np.sum(np.minimum(B * lo, B * hi), axis=1)
    yhi = np.sum(np.maximum(B * lo, B * hi), axis=1)
    # degenerate extents would make box rejection impossible; pad slightly
    pad = 1e-12 + 1e-9 * np.maximum(np.abs(ylo), np.abs(yhi))
    return Region(
        contains=lambda y: base_contains(np.asarray(y, dtype=float) @ B - b),
        lo=ylo - pad,
        hi=yhi + pad,
        name=f"slice({K.name})",
    )
