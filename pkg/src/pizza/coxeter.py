"""Finite Coxeter arrangements, dominance and orthogonal root sequences.

Roots are unit vectors.  Each arrangement is realised essentially (its
normals span the ambient space) and its positive system is the set of
roots positive on the fixed generic vector ``(1, 1e-1, 1e-2, ...)``.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import nnls

from . import arrangement as arr
from .arrangement import Arrangement, generic_vector
from .errors import EnumerationCapError, GeometryError, PizzaError
from .geometry import TOL_HYPERPLANE, TOL_ORTHO, Region

DEDUP_TOL = 1e-9
CLOSURE_CAP = 10_000
SEQUENCE_CAP = 1_000_000


@dataclass(frozen=True)
class CoxeterFactor:
    kind: str  # one of A B D E F H I, or "E1" for the empty line factor
    rank: int
    m: Optional[int] = None  # dihedral order for I

    def __str__(self) -> str:
        if self.kind == "I":
            return f"I2({self.m})"
        if self.kind == "E1":
            return "E1"
        return f"{self.kind}{self.rank}"


@dataclass(frozen=True)
class CoxeterSpec:
    factors: Tuple[CoxeterFactor, ...]

    def __str__(self) -> str:
        return "x".join(str(f) for f in self.factors)

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors)


_FACTOR_RE = re.compile(r"^(?:(I)2\((\d+)\)|(E1)|([ABDEFH])(\d+))$")


def _validate(f: CoxeterFactor) -> None:
    ok = {
        "A": f.rank >= 1,
        "B": f.rank >= 2,
        "D": f.rank >= 4,
        "E": f.rank in (6, 7, 8),
        "F": f.rank == 4,
        "H": f.rank in (3, 4),
        "I": f.rank == 2 and f.m is not None and f.m >= 3,
        "E1": f.rank == 1,
    }[f.kind]
    if not ok:
        raise GeometryError(f"invalid Coxeter type {f}")


def parse_spec(text: str) -> CoxeterSpec:
    """Parse strings such as ``A3``, ``I2(6)``, ``B2xA1`` or ``A2xE1``.

    ``E1`` stands for the empty arrangement on a line.
    """
    parts = text.strip().split("x")
    if not text.strip() or any(not p for p in parts):
        raise GeometryError(f"cannot parse Coxeter spec {text!r}")
    factors = []
    for p in parts:
        m = _FACTOR_RE.match(p.strip())
        if not m:
            raise GeometryError(f"cannot parse Coxeter factor {p!r}")
        if m.group(1):
            f = CoxeterFactor("I", 2, int(m.group(2)))
        elif m.group(3):
            f = CoxeterFactor("E1", 1)
        else:
            f = CoxeterFactor(m.group(4), int(m.group(5)))
        _validate(f)
        factors.append(f)
    return CoxeterSpec(tuple(factors))


# --- root systems -----------------------------------------------------------


def _unit_rows(R):
    R = np.asarray(R, dtype=float)
    return R / np.linalg.norm(R, axis=1)[:, None]


def _dedup_lines(R):
    """Keep one representative per line (``r`` and ``-r`` identified)."""
    out: List[np.ndarray] = []
    for r in _unit_rows(R):
        if not any(abs(abs(np.dot(r, s)) - 1) <= DEDUP_TOL for s in out):
            out.append(r)
    return np.array(out)


def _span_basis(vectors, rank):
    basis: List[np.ndarray] = []
    for v in vectors:
        w = np.array(v, dtype=float)
        for _ in range(2):
            for b in basis:
                w = w - np.dot(w, b) * b
        nw = np.linalg.norm(w)
        if nw > 1e-9:
            basis.append(w / nw)
        if len(basis) == rank:
            break
    if len(basis) != rank:
        raise PizzaError("root span has unexpected rank")
    return np.array(basis)


def _roots_A(n):
    roots = []
    for i, j in itertools.combinations(range(n + 1), 2):
        v = np.zeros(n + 1)
        v[i], v[j] = 1.0, -1.0
        roots.append(v)
    simple_dirs = [np.eye(n + 1)[i] - np.eye(n + 1)[i + 1] for i in range(n)]
    Q = _span_basis(simple_dirs, n)
    return np.array(roots) @ Q.T


def _roots_D(n):
    roots = []
    for i, j in itertools.combinations(range(n), 2):
        for s in (1.0, -1.0):
            v = np.zeros(n)
            v[i], v[j] = 1.0, s
            roots.append(v)
    return np.array(roots)


def _roots_B(n):
    return np.vstack([np.eye(n), _roots_D(n)])


def _roots_F4():
    halves = np.array(list(itertools.product((0.5, -0.5), repeat=4)))
    return np.vstack([_roots_B(4), halves])


def _roots_E8():
    halves = [v for v in itertools.product((0.5, -0.5), repeat=8) if sum(x < 0 for x in v) % 2 == 0]
    return np.vstack([_roots_D(8), np.array(halves)])


def _roots_E(rank):
    R = _roots_E8()
    if rank == 8:
        return R
    if rank == 7:
        keep = np.abs(R @ np.full(8, 0.5)) <= 1e-12
    else:
        a = np.eye(8)[0] - np.eye(8)[1]
        b = np.eye(8)[1] - np.eye(8)[2]
        keep = (np.abs(R @ a) <= 1e-12) & (np.abs(R @ b) <= 1e-12)
    sub = R[keep]
    Q = _span_basis(sub, rank)
    return sub @ Q.T


def _close_under_reflections(simple):
    """All roots generated from ``simple`` by reflections, up to sign."""
    roots = [s / np.linalg.norm(s) for s in simple]
    frontier = list(roots)
    while frontier:
        new = []
        for r in frontier:
            for s in roots[: len(simple)]:
                v = r - 2 * np.dot(r, s) * s
                if not any(abs(abs(np.dot(v, u)) - 1) <= DEDUP_TOL for u in roots):
                    roots.append(v)
                    new.append(v)
                    if len(roots) > CLOSURE_CAP:
                        raise EnumerationCapError("reflection closure exceeded its cap")
        frontier = new
    return np.array(roots)


def _coxeter_gram(edges, rank):
    B = np.eye(rank)
    for i, j, m in edges:
        B[i, j] = B[j, i] = -math.cos(math.pi / m)
    return B


def _roots_H(rank):
    # Simple roots with prescribed angles are rows of a triangular square root
    # of the Coxeter bilinear form; cos(pi/5) brings in the golden ratio.
    edges = [(0, 1, 5), (1, 2, 3)] + ([(2, 3, 3)] if rank == 4 else [])
    L = np.linalg.cholesky(_coxeter_gram(edges, rank))
    return _close_under_reflections(list(L))


def _roots_I(m):
    ang = np.arange(m) * math.pi / m + math.pi / (2 * m)
    return np.column_stack([np.cos(ang), np.sin(ang)])


def factor_roots(f: CoxeterFactor) -> np.ndarray:
    """Unit roots of one irreducible factor, one per hyperplane, unoriented."""
    if f.kind == "A":
        R = _roots_A(f.rank)
    elif f.kind == "B":
        R = _roots_B(f.rank)
    elif f.kind == "D":
        R = _roots_D(f.rank)
    elif f.kind == "E":
        R = _roots_E(f.rank)
    elif f.kind == "F":
        R = _roots_F4()
    elif f.kind == "H":
        R = _roots_H(f.rank)
    elif f.kind == "I":
        R = _roots_I(f.m)
    else:
        return np.zeros((0, 1))
    return _dedup_lines(R)


@dataclass(frozen=True, eq=False)
class CoxeterArrangement:
    """A Coxeter arrangement with its simple roots and type."""

    base: Arrangement
    simple: Tuple[int, ...]
    spec: CoxeterSpec

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def normals(self) -> np.ndarray:
        return self.base.normals

    @property
    def simple_roots(self) -> np.ndarray:
        return self.base.normals[list(self.simple)]

    def __len__(self) -> int:
        return len(self.base)

    def __repr__(self) -> str:
        return f"CoxeterArrangement({self.spec}, size={len(self)})"


def _simple_indices(P: np.ndarray, rank: int) -> Tuple[int, ...]:
    simple = []
    for i in range(P.shape[0]):
        others = np.delete(P, i, axis=0)
        _, resid = nnls(others.T, P[i])
        if resid > 1e-9:
            simple.append(i)
    if len(simple) != rank:
        raise PizzaError(f"found {len(simple)} simple roots, expected {rank}")
    return tuple(simple)


def _build_factor(f: CoxeterFactor):
    if f.kind == "E1":
        return arr.empty(1), ()
    R = factor_roots(f)
    g = generic_vector(R.shape[1])
    vals = R @ g
    if np.min(np.abs(vals)) <= 1e-9:
        raise PizzaError(f"generic vector lies on a hyperplane of {f}")
    P = R * np.sign(vals)[:, None]
    simple = _simple_indices(P, f.rank)
    S = P[list(simple)]
    w = np.linalg.solve(S, np.ones(f.rank))
    w = w / np.linalg.norm(w)
    labels = [f"{f}:{i}" for i in range(P.shape[0])]
    return arr.build(P, witness=w, labels=labels), simple


def build_type(spec) -> CoxeterArrangement:
    """Construct the Coxeter arrangement named by ``spec`` (string or spec)."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    A, simple = None, ()
    for f in spec.factors:
        B, s = _build_factor(f)
        if A is None:
            A, simple = B, tuple(s)
        else:
            offset = len(A)
            A = arr.product(A, B)
            simple = simple + tuple(offset + i for i in s)
    return CoxeterArrangement(A, simple, spec)


def reflect(x, e) -> np.ndarray:
    """Orthogonal reflection of ``x`` in the hyperplane with unit normal ``e``."""
    x = np.asarray(x, dtype=float)
    e = np.asarray(e, dtype=float)
    return x - 2 * np.dot(x, e) * e


def make_dominant(CA: CoxeterArrangement, x, order: Optional[Sequence[int]] = None):
    """Move ``x`` into the closed fundamental chamber by simple reflections.

    Returns the dominant point and ``(-1)`` to the number of reflections,
    which is the determinant of the group element applied.
    """
    x = np.array(x, dtype=float)
    S = CA.simple_roots
    idx = list(range(S.shape[0])) if order is None else list(order)
    parity = 1
    cap = 100 * (len(CA) + 1) ** 2
    for _ in range(cap):
        vals = S @ x
        for i in idx:
            if vals[i] < -TOL_HYPERPLANE:
                x = x - 2 * vals[i] * S[i]
                parity = -parity
                break
        else:
            return x, parity
    raise PizzaError("dominance did not terminate")


def minus_id_in_group(CA: CoxeterArrangement, trials: int = 3, seed: int = 0) -> bool:
    """Whether ``-id`` belongs to the Coxeter group.

    ``-id`` is in the group iff the dominant representative of ``-v`` is
    ``v`` for a generic ``v`` of the open fundamental chamber.
    """
    if not arr.is_essential(CA.base):
        return False
    rng = np.random.default_rng(seed)
    S = CA.simple_roots
    answers = []
    for _ in range(trials):
        c = rng.uniform(0.5, 1.5, size=S.shape[0])
        v = np.linalg.solve(S, c)
        d, _ = make_dominant(CA, -v)
        answers.append(bool(np.max(np.abs(d - v)) <= 1e-9 * max(1.0, np.linalg.norm(v))))
    if len(set(answers)) != 1:
        raise PizzaError("inconsistent -id trials; tolerance problem")
    return answers[0]


def orthogonality_masks(normals: np.ndarray) -> List[int]:
    """Bitset per normal of the normals orthogonal to it."""
    O = np.abs(normals @ normals.T) <= TOL_ORTHO
    return [sum(1 << int(j) for j in np.flatnonzero(row)) for row in O]


def orthogonal_sequences(CA, r: int, cap: int = SEQUENCE_CAP) -> List[Tuple[int, ...]]:
    """All ordered ``r``-tuples of pairwise orthogonal positive roots.

    Accepts a :class:`CoxeterArrangement` or a plain :class:`Arrangement`.
    """
    A = CA.base if isinstance(CA, CoxeterArrangement) else CA
    if not 0 <= r <= A.dim:
        raise GeometryError(f"r must lie in [0, {A.dim}]")
    m = len(A)
    masks = orthogonality_masks(A.normals)
    out: List[Tuple[int, ...]] = []
    full = (1 << m) - 1

    def rec(prefix, allowed):
        if len(prefix) == r:
            out.append(tuple(prefix))
            if len(out) > cap:
                raise EnumerationCapError(f"more than {cap} orthogonal sequences")
            return
        bits = allowed
        while bits:
            low = bits & -bits
            j = low.bit_length() - 1
            bits ^= low
            rec(prefix + [j], allowed & masks[j])

    rec([], full)
    return out


def maximal_orthogonal_sizes(A: Arrangement) -> List[int]:
    """Sizes of all inclusion-maximal pairwise orthogonal subsets (exhaustive)."""
    m = len(A)
    masks = orthogonality_masks(A.normals)
    sizes = set()

    def rec(members, common, start):
        # candidates with index above the last member, orthogonal to all
        cand = common >> start << start
        if not cand:
            # maximal iff nothing (at any index) extends the set
            extra = common
            for j in members:
                extra &= ~(1 << j)
            if not extra:
                sizes.add(len(members))
            return
        bits = cand
        while bits:
            low = bits & -bits
            j = low.bit_length() - 1
            bits ^= low
            rec(members + [j], common & masks[j], j + 1)

    rec([], (1 << m) - 1, 0)
    return sorted(sizes)


def max_orthogonal_rank(CA) -> int:
    """The common size of all maximal orthogonal subsets of the roots."""
    A = CA.base if isinstance(CA, CoxeterArrangement) else CA
    if len(A) == 0:
        return 0
    sizes = maximal_orthogonal_sizes(A)
    if len(sizes) != 1:
        raise PizzaError(f"maximal orthogonal sets of different sizes {sizes}")
    return sizes[0]


def region_is_stable(CA: CoxeterArrangement, K: Region, trials: int, rng) -> bool:
    """Sampled test that every simple reflection maps ``K`` into itself."""
    X = _sample_region(K, trials, rng)
    for s in CA.simple_roots:
        Y = X - 2 * np.outer(X @ s, s)
        if not np.all(K.contains(Y)):
            return False
    return True


def _sample_region(K: Region, size: int, rng) -> np.ndarray:
    if K.sampler is not None:
        return np.atleast_2d(K.sampler(rng, size))
    lo, hi = np.asarray(K.lo), np.asarray(K.hi)
    out = []
    got = 0
    for _ in range(10_000):
        X = lo + (hi - lo) * rng.random((max(size, 64), lo.shape[0]))
        X = X[K.contains(X)]
        out.append(X)
        got += X.shape[0]
        if got >= size:
            return np.vstack(out)[:size]
    raise PizzaError("could not sample the region")
