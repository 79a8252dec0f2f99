"""Oriented central hyperplane arrangements.

An arrangement stores unit normals ``E`` (one row per hyperplane) already
oriented so that a common open chamber, the base chamber, lies on the
positive side of every hyperplane.  A witness point of that chamber is kept
on the value.  Chamber signs are evaluated pointwise from sign vectors; no
chamber enumeration is ever done.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ArrangementError, GeometryError, OnHyperplaneError
from .geometry import TOL_HYPERPLANE, TOL_ORTHO, as_point

PARALLEL_TOL = 1e-9
WITNESS_MARGIN = 1e-6
WITNESS_STARTS = 64
WITNESS_ITERS = 500


def generic_vector(n: int) -> np.ndarray:
    """The fixed tie-breaking vector ``(1, 1e-1, ..., 1e-(n-1))``."""
    return 10.0 ** -np.arange(n, dtype=float)


@dataclass(frozen=True, eq=False)
class Arrangement:
    """Oriented central arrangement in R^dim with a base-chamber witness."""

    dim: int
    normals: np.ndarray  # (m, dim), unit rows
    witness: np.ndarray  # strictly positive against every normal
    labels: Tuple[str, ...] = ()
    flipped: Tuple[int, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return self.normals.shape[0]

    @property
    def size(self) -> int:
        return self.normals.shape[0]

    def margin(self) -> float:
        """Smallest inner product of the witness with a normal."""
        if len(self) == 0:
            return float("inf")
        return float(np.min(self.normals @ self.witness))

    def __repr__(self) -> str:
        return f"Arrangement(dim={self.dim}, size={len(self)})"


def _check_normals(normals, dim=None) -> np.ndarray:
    if normals is None or len(normals) == 0:
        if dim is None:
            raise ArrangementError("dim is required for an empty arrangement")
        return np.zeros((0, dim))
    N = np.atleast_2d(np.asarray(normals, dtype=float))
    if dim is not None and N.shape[1] != dim:
        raise ArrangementError(f"normals have dimension {N.shape[1]}, expected {dim}")
    if not np.all(np.isfinite(N)):
        raise ArrangementError("normals must be finite")
    norms = np.linalg.norm(N, axis=1)
    if np.any(norms <= 1e-12):
        raise ArrangementError("zero normal vector")
    N = N / norms[:, None]
    G = np.abs(N @ N.T)
    np.fill_diagonal(G, 0.0)
    if N.shape[0] > 1 and np.max(G) >= 1 - PARALLEL_TOL:
        i, j = np.unravel_index(np.argmax(G), G.shape)
        raise ArrangementError(f"normals {min(i, j)} and {max(i, j)} are parallel")
    return N


def find_witness(normals: np.ndarray, extra_starts=(), seed: int = 0):
    """Maximise ``min_e <e, x>`` over the unit ball.

    Projected subgradient ascent from the normalised mean normal, any
    ``extra_starts`` and 64 seeded random starts.  Returns ``(x, margin)``
    for the best iterate seen.
    """
    N = np.asarray(normals, dtype=float)
    m, n = N.shape
    rng = np.random.default_rng(seed)
    starts = [N.sum(axis=0)] + [np.asarray(s, dtype=float) for s in extra_starts]
    X = np.vstack([np.array(starts).reshape(-1, n), rng.standard_normal((WITNESS_STARTS, n))])
    norms = np.linalg.norm(X, axis=1)
    X[norms == 0] = 1.0
    X = X / np.linalg.norm(X, axis=1)[:, None]
    best_m = np.full(X.shape[0], -np.inf)
    best_x = X.copy()
    rows = np.arange(X.shape[0])
    # all starts advance together; each keeps its own best iterate
    for k in range(WITNESS_ITERS):
        vals = X @ N.T
        i = np.argmin(vals, axis=1)
        cur = vals[rows, i]
        better = cur > best_m
        best_m[better] = cur[better]
        best_x[better] = X[better]
        X = X + (0.5 / np.sqrt(k + 1.0)) * N[i]
        nx = np.linalg.norm(X, axis=1)
        X = np.where((nx > 1.0)[:, None], X / nx[:, None], X)
    j = int(np.argmax(best_m))  # first maximum, so ties resolve deterministically
    x = best_x[j] / np.linalg.norm(best_x[j])
    return x, float(np.min(N @ x))


def _orient(N: np.ndarray, seed: int = 0):
    n = N.shape[1]
    g = generic_vector(n)
    vals = N @ g
    if np.any(np.abs(vals) <= 1e-9):
        g = np.random.default_rng(seed).standard_normal(n)
        vals = N @ g
        if np.any(np.abs(vals) <= 1e-9):
            raise ArrangementError("could not find a generic orientation vector")
    flips = tuple(int(i) for i in np.flatnonzero(vals < 0))
    N = N.copy()
    N[list(flips)] *= -1
    return N, flips, g


def build(normals, witness=None, labels: Optional[Sequence[str]] = None,
          auto_orient: bool = False, dim: Optional[int] = None) -> Arrangement:
    """Validate ``normals`` and return an oriented :class:`Arrangement`.

    Parameters
    ----------
    normals : array_like, shape (m, n)
        Nonzero, pairwise non-parallel vectors; they are normalised.
    witness : array_like, optional
        A point claimed to lie in the all-positive chamber.  Checked, not
        trusted.  When omitted it is searched for.
    auto_orient : bool
        Flip normals to be positive on a fixed generic vector first.  The
        flipped indices are recorded in ``Arrangement.flipped``.

    Raises
    ------
    ArrangementError
        On a parallel pair, or when no all-positive chamber is found.
    """
    N = _check_normals(normals, dim)
    n = N.shape[1]
    lab = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(N.shape[0]))
    if len(lab) != N.shape[0]:
        raise ArrangementError("labels and normals differ in length")
    flips: Tuple[int, ...] = ()
    extra = []
    if auto_orient and N.shape[0]:
        N, flips, g = _orient(N)
        extra.append(g)
    if N.shape[0] == 0:
        w = np.ones(n) / np.sqrt(n) if witness is None else as_point(witness, n)
        return Arrangement(n, N, w, lab, flips)
    if witness is not None:
        w = as_point(witness, n)
        if np.min(N @ w) > TOL_HYPERPLANE:
            return Arrangement(n, N, w, lab, flips)
        extra.append(w)
    w, margin = find_witness(N, extra)
    if margin <= WITNESS_MARGIN:
        raise ArrangementError(
            f"no all-positive chamber found for this orientation (best margin {margin:.3g})"
        )
    return Arrangement(n, N, w, lab, flips)


def empty(dim: int) -> Arrangement:
    return build([], dim=dim)


def sign_vector(A: Arrangement, x) -> np.ndarray:
    """Entries in {-1, 0, +1}; 0 inside the band ``|<e, x>| <= TOL_HYPERPLANE``."""
    x = as_point(x, A.dim)
    v = A.normals @ x
    s = np.sign(v).astype(int)
    s[np.abs(v) <= TOL_HYPERPLANE] = 0
    return s


def chamber_sign(A: Arrangement, x) -> int:
    """``(-1)`` to the number of hyperplanes separating ``x`` from the base chamber."""
    s = sign_vector(A, x)
    if np.any(s == 0):
        raise OnHyperplaneError("point lies on a hyperplane of the arrangement")
    return -1 if int(np.sum(s < 0)) % 2 else 1


def chamber_signs(A: Arrangement, X) -> np.ndarray:
    """Vectorised chamber signs of the rows of ``X``; 0 marks a wall hit."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if len(A) == 0:
        return np.ones(X.shape[0], dtype=np.int8)
    V = X @ A.normals.T
    odd = (np.count_nonzero(V < 0, axis=1) & 1).astype(np.int8)
    out = 1 - 2 * odd
    out[np.any(np.abs(V) <= TOL_HYPERPLANE, axis=1)] = 0
    return out


def product(A1: Arrangement, A2: Arrangement) -> Arrangement:
    """The product arrangement on ``R^(n1 + n2)``."""
    n1, n2 = A1.dim, A2.dim
    top = np.hstack([A1.normals, np.zeros((len(A1), n2))])
    bot = np.hstack([np.zeros((len(A2), n1)), A2.normals])
    N = np.vstack([top, bot])
    w = np.concatenate([A1.witness, A2.witness])
    return Arrangement(n1 + n2, N, w, A1.labels + A2.labels)


def apply_isometry(A: Arrangement, U) -> Arrangement:
    """Transport ``A`` by an orthogonal matrix ``U`` (normals ``U e``, witness ``U x``)."""
    U = np.asarray(U, dtype=float)
    if U.shape != (A.dim, A.dim):
        raise GeometryError("isometry has the wrong shape")
    if np.max(np.abs(U.T @ U - np.eye(A.dim))) > TOL_ORTHO:
        raise GeometryError("matrix is not orthogonal")
    return Arrangement(A.dim, A.normals @ U.T, U @ A.witness, A.labels)


def parity_condition(A: Arrangement) -> bool:
    """True when the number of hyperplanes has the parity of the dimension."""
    return len(A) % 2 == A.dim % 2


def irreducible_components(A: Arrangement) -> List[List[int]]:
    """Connected components of the non-orthogonality graph on the normals."""
    m = len(A)
    G = np.abs(A.normals @ A.normals.T) > TOL_ORTHO
    seen = [False] * m
    comps = []
    for s in range(m):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.flatnonzero(G[i]):
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        comps.append(sorted(comp))
    return comps


def is_essential(A: Arrangement) -> bool:
    return len(A) > 0 and np.linalg.matrix_rank(A.normals, tol=1e-9) == A.dim


# --- text format -----------------------------------------------------------


def dumps(A: Arrangement, comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    buf.write(f"dim {A.dim}\n")
    for e, lab in zip(A.normals, A.labels):
        buf.write(" ".join(f"{v:.17g}" for v in e))
        buf.write(f"  # {lab}\n" if lab else "\n")
    buf.write("witness " + " ".join(f"{v:.17g}" for v in A.witness) + "\n")
    return buf.getvalue()


def loads(text: str) -> Arrangement:
    dim = None
    normals, labels, witness = [], [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        body, _, comment = raw.partition("#")
        body = body.strip()
        if not body:
            continue
        toks = body.split()
        if toks[0] == "dim":
            if dim is not None or len(toks) != 2:
                raise ArrangementError(f"line {lineno}: bad dim line")
            dim = int(toks[1])
            continue
        if dim is None:
            raise ArrangementError(f"line {lineno}: expected 'dim n' first")
        if toks[0] == "witness":
            vals = toks[1:]
            if len(vals) != dim:
                raise ArrangementError(f"line {lineno}: witness needs {dim} coordinates")
            witness = [float(v) for v in vals]
            continue
        if witness is not None:
            raise ArrangementError(f"line {lineno}: normals after the witness line")
        if len(toks) != dim:
            raise ArrangementError(f"line {lineno}: expected {dim} coordinates")
        try:
            normals.append([float(v) for v in toks])
        except ValueError as exc:
            raise ArrangementError(f"line {lineno}: {exc}") from exc
        labels.append(comment.strip() or f"e{len(labels)}")
    if dim is None:
        raise ArrangementError("missing 'dim n' line")
    return build(normals, witness=witness, labels=labels, dim=dim)


def read(path) -> Arrangement:
    with open(path) as fh:
        return loads(fh.read())


def write(A: Arrangement, path, comments: Sequence[str] = ()) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(A, comments))
