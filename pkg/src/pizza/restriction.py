"""Even restricted arrangements and even restriction sequences.

Restricting to a hyperplane ``H_e`` groups the other hyperplanes by their
trace ``H_e ∩ H_f``.  A trace contained in ``s`` hyperplanes besides ``H_e``
has intersection multiplicity ``s + 1``; the even restricted arrangement
keeps the traces whose multiplicity is even.  Children are expressed in an
orthonormal basis of ``H_e`` so that every arrangement in a sequence is an
ordinary :class:`Arrangement` in its own coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .arrangement import Arrangement, find_witness, generic_vector
from .errors import ArrangementError, EnumerationCapError, PizzaError
from .geometry import OrthonormalBasis, subspace_basis

CLASS_TOL = 1e-9
SPAN_TOL = 1e-9
LEX_ZERO = 1e-10
WALL_CLEARANCE = 1e-7
PERTURB_SCALE = 1e-6
KEY_DECIMALS = 8
WITNESS_GOOD = 1e-3
CLASS_CAP = 1_000_000


def _index_of(A: Arrangement, e) -> int:
    if isinstance(e, (int, np.integer)):
        if not 0 <= int(e) < len(A):
            raise ArrangementError(f"no normal with index {e}")
        return int(e)
    e = np.asarray(e, dtype=float)
    e = e / np.linalg.norm(e)
    hits = np.flatnonzero(np.abs(A.normals @ e - 1) <= CLASS_TOL)
    if hits.size == 0:
        raise ArrangementError("vector is not a normal of the arrangement")
    return int(hits[0])


def intersection_multiplicity(A: Arrangement, e, f) -> int:
    """Number of hyperplanes of ``A`` containing ``H_e ∩ H_f``."""
    i, j = _index_of(A, e), _index_of(A, f)
    if i == j:
        raise ArrangementError("intersection multiplicity needs two distinct normals")
    Q, _ = np.linalg.qr(A.normals[[i, j]].T)
    resid = A.normals - (A.normals @ Q) @ Q.T
    return int(np.sum(np.linalg.norm(resid, axis=1) <= SPAN_TOL))


def trace_classes(A: Arrangement, i: int):
    """Group the normals ``f != e_i`` by their trace on ``H_{e_i}``.

    Returns ``(basis, classes)`` where ``basis`` spans ``H_{e_i}`` and each
    class is ``(unit normal in basis coordinates, member indices)``.
    """
    e = A.normals[i]
    basis = subspace_basis([e])
    classes: List[Tuple[np.ndarray, List[int]]] = []
    for j in range(len(A)):
        if j == i:
            continue
        c = basis.coords(A.normals[j])
        c = c / np.linalg.norm(c)
        for rep, members in classes:
            if abs(np.dot(rep, c)) >= 1 - CLASS_TOL:
                members.append(j)
                break
        else:
            classes.append((c, [j]))
    return basis, classes


def _clear_reference(y: np.ndarray, walls: np.ndarray) -> np.ndarray:
    """Nudge ``y`` deterministically until it avoids every wall."""
    d = y.shape[0]
    g = generic_vector(d)
    scale = max(1.0, float(np.linalg.norm(y)))
    cand = y
    for k in range(64):
        if walls.shape[0] == 0 or np.min(np.abs(walls @ cand)) > WALL_CLEARANCE * scale:
            return cand
        # rotate the nudge direction so that no wall can block every attempt
        direction = np.roll(g, k % d) * (1 + 0.37 * k)
        cand = y + PERTURB_SCALE * scale * direction
    raise PizzaError("could not move the reference point off the walls")


def lexicographic_sign(normals: np.ndarray, vectors: Sequence[np.ndarray]) -> int:
    """Chamber sign of ``v0 + eps v1 + eps^2 v2 + ...`` for infinitesimal ``eps``.

    The sign of each normal is the first entry of ``[<f, v0>, <f, v1>, ...]``
    outside the zero band.
    """
    N = np.asarray(normals, dtype=float)
    if N.shape[0] == 0:
        return 1
    V = np.array([np.asarray(v, dtype=float) for v in vectors])
    vals = N @ V.T  # (m, k)
    neg = 0
    for row in vals:
        nz = np.flatnonzero(np.abs(row) > LEX_ZERO)
        if nz.size == 0:
            raise PizzaError("lexicographic sign undetermined (all entries zero)")
        if row[nz[0]] < 0:
            neg += 1
    return -1 if neg % 2 else 1


@dataclass(frozen=True, eq=False)
class RestrictionStep:
    """One restriction ``A -> A_e`` with its base-chamber pairing sign.

    ``child_basis`` spans ``H_e`` in parent coordinates.  ``classes[k]`` holds
    the parent indices whose trace is child hyperplane ``k``.  ``z0_sign`` is
    the chamber sign of ``v + eps e`` for ``v = reference`` in the child base
    chamber.
    """

    chosen: int
    chosen_normal: np.ndarray
    parent_dim: int
    child_basis: OrthonormalBasis
    child: Arrangement
    z0_sign: int
    classes: Tuple[Tuple[int, ...], ...]
    reference: np.ndarray  # child coordinates


def even_restricted(A: Arrangement, e, reference=None) -> RestrictionStep:
    """The even restricted arrangement on ``H_e``.

    Parameters
    ----------
    A : Arrangement
    e : int or array_like
        Index of a normal of ``A`` or the normal itself.
    reference : array_like, optional
        Point of the parent space whose projection selects the child base
        chamber.  Defaults to the base-chamber witness of ``A``.
    """
    i = _index_of(A, e)
    basis, classes = trace_classes(A, i)
    ref = A.witness if reference is None else np.asarray(reference, dtype=float)
    y = basis.coords(ref)
    d = basis.dim
    all_walls = np.array([c for c, _ in classes]) if classes else np.zeros((0, d))
    if d > 0:
        if np.linalg.norm(y) <= 1e-12:
            # the reference projects to the origin; any generic point will do
            y = generic_vector(d)
        y = _clear_reference(y, all_walls)
    keep = [(c, tuple(m)) for c, m in classes if len(m) % 2 == 1]
    if keep:
        N = np.array([c for c, _ in keep])
        N = N * np.sign(N @ y)[:, None]
        w = y / np.linalg.norm(y)
        if np.min(N @ w) < WITNESS_GOOD:
            # the projected reference hugs a wall; search for a roomier witness
            w, margin = find_witness(N, extra_starts=[y])
            if margin <= 0:
                raise PizzaError("child base chamber has no interior witness")
    else:
        N = np.zeros((0, d))
        ny = np.linalg.norm(y)
        w = y / ny if ny > 0 else generic_vector(d)
    child = Arrangement(d, N, w, tuple(f"trace{k}" for k in range(len(keep))))
    if d > 0:
        v = basis.embed(y)
        z0 = lexicographic_sign(A.normals, [v / np.linalg.norm(v), A.normals[i]])
    else:
        z0 = lexicographic_sign(A.normals, [A.normals[i]])
    return RestrictionStep(
        chosen=i,
        chosen_normal=A.normals[i].copy(),
        parent_dim=A.dim,
        child_basis=basis,
        child=child,
        z0_sign=z0,
        classes=tuple(m for _, m in keep),
        reference=y,
    )


@dataclass(frozen=True, eq=False)
class RestrictionSequence:
    """An even restriction sequence starting from ``ambient``."""

    ambient: Arrangement
    steps: Tuple[RestrictionStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def current(self) -> Arrangement:
        return self.steps[-1].child if self.steps else self.ambient

    @property
    def dim(self) -> int:
        return self.current.dim

    def embedding(self, upto: Optional[int] = None) -> np.ndarray:
        """Rows map coordinates after ``upto`` steps into ambient coordinates."""
        k = len(self.steps) if upto is None else upto
        M = np.eye(self.ambient.dim)
        for step in self.steps[:k]:
            M = step.child_basis.vectors @ M
        return M

    def lifted_chosen(self) -> np.ndarray:
        """The chosen unit normals ``f_1, ..., f_r`` in ambient coordinates.

        ``f_i`` lies in the subspace reached after ``i - 1`` steps, so the
        rows are orthonormal.
        """
        rows = [step.chosen_normal @ self.embedding(k) for k, step in enumerate(self.steps)]
        return np.array(rows).reshape(-1, self.ambient.dim)

    def lifted_current(self) -> np.ndarray:
        """Normals of the current arrangement in ambient coordinates."""
        return self.current.normals @ self.embedding()

    def flag_key(self):
        return tuple(_subspace_key(self.embedding(k)) for k in range(1, len(self) + 1))


def extend(seq: RestrictionSequence, e, reference=None) -> RestrictionSequence:
    """Append the restriction to hyperplane ``e`` of the current arrangement."""
    cur = seq.current
    if len(cur) == 0:
        raise ArrangementError("the current arrangement has no hyperplanes to restrict to")
    step = even_restricted(cur, e, reference)
    return RestrictionSequence(seq.ambient, seq.steps + (step,))


def start(A: Arrangement) -> RestrictionSequence:
    return RestrictionSequence(A, ())


def is_maximal(seq: RestrictionSequence) -> bool:
    return len(seq.current) == 0


def _round(x):
    return np.round(np.asarray(x, dtype=float), KEY_DECIMALS) + 0.0


def _subspace_key(M: np.ndarray) -> bytes:
    return _round(M.T @ M).tobytes()


def _state_key(M: np.ndarray, lifted: np.ndarray):
    rows = []
    for f in lifted:
        nz = np.flatnonzero(np.abs(f) > 1e-7)
        if nz.size and f[nz[0]] < 0:
            f = -f
        rows.append(tuple(_round(f)))
    return _subspace_key(M), tuple(sorted(rows))


def is_even_arrangement(A: Arrangement) -> bool:
    """True iff every maximal even restriction sequence has length ``dim``."""
    memo: Dict[object, bool] = {}

    def rec(seq: RestrictionSequence) -> bool:
        cur = seq.current
        if len(cur) == 0:
            return cur.dim == 0
        key = _state_key(seq.embedding(), seq.lifted_current())
        if key in memo:
            return memo[key]
        ok = all(rec(extend(seq, j)) for j in range(len(cur)))
        memo[key] = ok
        return ok

    return rec(start(A))


def terminal_vector(seq: RestrictionSequence) -> Optional[np.ndarray]:
    """Deterministic generic vector of the terminal subspace, if nonzero."""
    d = seq.dim
    if d == 0:
        return None
    v = generic_vector(d) @ seq.embedding()
    return v / np.linalg.norm(v)


def sequence_sign(seq: RestrictionSequence) -> int:
    """Sign of the chamber containing ``v + eps f_r + ... + eps^r f_1``.

    ``f_i`` are the chosen unit normals lifted to the ambient space and
    ``v`` a generic vector of the terminal subspace (absent when it is 0).
    """
    if not is_maximal(seq):
        raise ArrangementError("sequence sign is defined for maximal sequences only")
    F = seq.lifted_chosen()
    vecs = [] if seq.dim == 0 else [terminal_vector(seq)]
    vecs += [F[k] for k in range(len(F) - 1, -1, -1)]
    if not vecs:
        return 1
    return lexicographic_sign(seq.ambient.normals, vecs)


def sequence_from_ambient(A: Arrangement, indices: Sequence[int]) -> RestrictionSequence:
    """Sequence whose ``k``-th subspace is ``H_{e_1} ∩ ... ∩ H_{e_k}``.

    Raises when some step is not a hyperplane of the current even
    restricted arrangement.
    """
    seq = start(A)
    for idx in indices:
        cur = seq.current
        if len(cur) == 0:
            raise ArrangementError("sequence extends past a maximal prefix")
        M = seq.embedding()
        p = M @ A.normals[idx]  # coordinates of the projection onto the subspace
        norm = np.linalg.norm(p)
        if norm <= 1e-9:
            raise ArrangementError(f"normal {idx} is orthogonal to the current subspace")
        hits = np.flatnonzero(np.abs(cur.normals @ (p / norm)) >= 1 - CLASS_TOL)
        if hits.size == 0:
            raise ArrangementError(f"normal {idx} does not cut an even trace here")
        seq = extend(seq, int(hits[0]))
    return seq


def canonical_classes(A, r: int, cap: int = CLASS_CAP) -> List[RestrictionSequence]:
    """One representative per class of length-``r`` even restriction sequences.

    For a Coxeter arrangement the representatives are the orthogonal root
    sequences; otherwise all sequences of child-hyperplane choices are
    enumerated depth first and deduplicated by their flags.
    """
    from .coxeter import CoxeterArrangement, orthogonal_sequences

    if isinstance(A, CoxeterArrangement):
        return [sequence_from_ambient(A.base, t) for t in orthogonal_sequences(A, r, cap)]
    out: List[RestrictionSequence] = []
    seen = set()

    def rec(seq):
        if len(seq) == r:
            key = seq.flag_key()
            if key not in seen:
                seen.add(key)
                out.append(seq)
                if len(out) > cap:
                    raise EnumerationCapError(f"more than {cap} restriction sequences")
            return
        for j in range(len(seq.current)):
            rec(extend(seq, j))

    rec(start(A))
    return out
