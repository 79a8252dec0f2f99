"""Closed-form pizza quantities.

For an even arrangement and a sufficiently symmetric body containing the
origin after translation, the pizza quantity of ``K + a`` is the degree-``n``
polynomial ``f_H(a)`` built from maximal even restriction sequences.  For a
Coxeter arrangement and a ball the same machinery gives a finite sum over
ordered tuples of pairwise orthogonal roots times a simplex integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .arrangement import Arrangement, generic_vector, parity_condition
from .coxeter import CoxeterArrangement, max_orthogonal_rank, orthogonal_sequences, SEQUENCE_CAP
from .errors import PreconditionError
from .geometry import as_point, gamma_half, region_ball, subspace_basis
from .integrate import QuadratureConfig, pizza_exact_2d, pizza_mc, simplex_integral
from .restriction import canonical_classes, is_even_arrangement, lexicographic_sign, sequence_sign


def _base(A) -> Arrangement:
    return A.base if isinstance(A, CoxeterArrangement) else A


@dataclass(frozen=True, eq=False)
class EvenPolynomial:
    """``f(a) = 2^n / n! * sum_k sign_k * prod_i <a, F_k[i]>``.

    Each ``F_k`` holds the orthonormal lifted normals of one class of
    maximal sequences, so the cascaded projections reduce to inner products.
    """

    dim: int
    signs: np.ndarray  # (k,)
    frames: np.ndarray  # (k, n, n)

    def __call__(self, a) -> float:
        a = as_point(a, self.dim)
        if self.signs.size == 0:
            return 0.0
        prods = np.prod(self.frames @ a, axis=1)
        return float(2.0**self.dim / math.factorial(self.dim) * np.dot(self.signs, prods))

    @property
    def n_terms(self) -> int:
        return int(self.signs.size)


def _coxeter_terms(CA: CoxeterArrangement, r: int, cap: int):
    N = CA.normals
    out = []
    for t in orthogonal_sequences(CA, r, cap):
        Es = N[list(t)]
        vecs = []
        if r < CA.dim:
            B = subspace_basis(Es)
            v = generic_vector(B.dim) @ B.vectors
            vecs.append(v / np.linalg.norm(v))
        vecs += [Es[k] for k in range(r - 1, -1, -1)]
        out.append((lexicographic_sign(N, vecs), Es))
    return out


def even_polynomial(A, path: str = "auto", cap: int = SEQUENCE_CAP) -> EvenPolynomial:
    """The polynomial ``f_H`` of an even arrangement.

    ``path="coxeter"`` sums over orthogonal root tuples, ``path="general"``
    over restriction-sequence classes; ``"auto"`` picks the first for
    Coxeter inputs.
    """
    base = _base(A)
    n = base.dim
    if not is_even_arrangement(base):
        raise PreconditionError("f_H is defined for even arrangements only")
    use_cox = isinstance(A, CoxeterArrangement) and path in ("auto", "coxeter")
    if path == "coxeter" and not isinstance(A, CoxeterArrangement):
        raise PreconditionError("the orthogonal-tuple path needs a Coxeter arrangement")
    if use_cox:
        terms = _coxeter_terms(A, n, cap)
    else:
        terms = [(sequence_sign(s), s.lifted_chosen()) for s in canonical_classes(base, n, cap)]
    signs = np.array([s for s, _ in terms], dtype=float)
    frames = np.array([F for _, F in terms]).reshape(-1, n, n)
    return EvenPolynomial(n, signs, frames)


def f_H(A, a, path: str = "auto") -> float:
    """Evaluate ``f_H(a)``."""
    return even_polynomial(A, path)(a)


def slice_ball_coefficient(d: int) -> float:
    """Volume of the unit ``d``-ball, ``pi^(d/2) / Gamma(d/2 + 1)``."""
    return math.pi ** (d / 2) / gamma_half(d / 2 + 1)


def pizza_ball_coxeter(
    CA: CoxeterArrangement,
    a,
    R: float,
    cfg: Optional[QuadratureConfig] = None,
    r: Optional[int] = None,
    cap: int = SEQUENCE_CAP,
) -> float:
    """Pizza quantity of ``B(a, R)`` for a Coxeter arrangement, ``|a| <= R``.

    ``P = 2^r * w_{n-r} * sum_{orthogonal tuples} sign * prod (a, e_i)
    * int (R^2 - sum t_i^2 (a, e_i)^2)^((n-r)/2) dt``, where ``w_d`` is the
    volume of the unit ``d``-ball (each slice is an ``(n-r)``-ball).
    """
    cfg = cfg or QuadratureConfig()
    a = as_point(a, CA.dim)
    if float(np.linalg.norm(a)) > R * (1 + 1e-12):
        raise PreconditionError("the ball formula needs |a| <= R")
    n = CA.dim
    r = max_orthogonal_rank(CA) if r is None else r
    if not np.any(a):
        return 0.0 if r > 0 else slice_ball_coefficient(n) * R**n
    p = (n - r) / 2
    total = 0.0
    for sign, Es in _coxeter_terms(CA, r, cap):
        ae = Es @ a
        prod = float(np.prod(ae))
        if prod == 0.0:
            continue
        total += sign * prod * simplex_integral(ae * ae, p, R, cfg)
    return 2.0**r * slice_ball_coefficient(n - r) * total


def classify_f(A, coxeter_sub: Optional[Sequence[int]] = None):
    """Shape of ``f_H``: ``("NotEven",)``, ``("Zero",)`` or ``("Monomial", indices)``.

    For a Coxeter arrangement the Coxeter subarrangement is the whole of it.
    For other arrangements pass the indices of a Coxeter subarrangement
    whose group preserves the arrangement; ``("Unknown",)`` is returned when
    it has fewer than ``n`` hyperplanes.
    """
    base = _base(A)
    if not is_even_arrangement(base):
        return ("NotEven",)
    sub = list(range(len(base))) if coxeter_sub is None else list(coxeter_sub)
    if coxeter_sub is None and not isinstance(A, CoxeterArrangement):
        raise PreconditionError("pass coxeter_sub for a non-Coxeter arrangement")
    if len(sub) > base.dim:
        return ("Zero",)
    if len(sub) == base.dim:
        return ("Monomial", tuple(sub))
    return ("Unknown",)


# --- radius sweeps -----------------------------------------------------------


ENGINES = ("mc", "formula", "exact2d")


def ball_value(A, a, R, method: str, N: int = 1_000_000, seed: int = 42, workers: int = 1,
               cfg: Optional[QuadratureConfig] = None):
    """``(value, stderr)`` of ``P(A, B(a, R))`` by the named engine.

    ``stderr`` is 0 for the deterministic engines.
    """
    base = _base(A)
    if method == "mc":
        est = pizza_mc(base, region_ball(a, R), N, seed, workers)
        return est.value, est.stderr
    if method == "exact2d":
        return pizza_exact_2d(base, a, R, cfg), 0.0
    if method == "formula":
        if not isinstance(A, CoxeterArrangement):
            raise PreconditionError("the ball formula engine needs a Coxeter arrangement")
        return pizza_ball_coxeter(A, a, R, cfg), 0.0
    raise PreconditionError(f"unknown method {method!r}")


def r_independence_check(A, a, radii, method: str = "mc", N: int = 1_000_000, seed: int = 42,
                         workers: int = 1, coxeter_sub: Optional[Sequence[int]] = None,
                         cfg: Optional[QuadratureConfig] = None) -> Dict:
    """Evaluate ``P(B(a, R))`` over ``radii`` and measure how much it moves.

    The report holds the values, the largest pairwise deviation with its
    combined standard error, and the constant ``c`` of ``P = c * prod <a, e>``
    fitted by inverse-variance weighting over the Coxeter subarrangement.
    """
    base = _base(A)
    a = as_point(a, base.dim)
    if float(np.linalg.norm(a)) > min(radii) * (1 + 1e-12):
        raise PreconditionError("every radius must be at least |a|")
    vals, errs = [], []
    for k, R in enumerate(radii):
        v, s = ball_value(A, a, R, method, N, seed + k, workers, cfg)
        vals.append(v)
        errs.append(s)
    # the worst pair is the one with the largest deviation in units of its noise
    pairs = []
    for i in range(len(radii)):
        for j in range(i + 1, len(radii)):
            dev = abs(vals[i] - vals[j])
            se = math.hypot(errs[i], errs[j])
            pairs.append((dev / se if se > 0 else dev, dev, se, (i, j)))
    _, worst, worst_se, worst_pair = max(pairs) if pairs else (0.0, 0.0, 0.0, (0, 0))
    sub = list(range(len(base))) if coxeter_sub is None else list(coxeter_sub)
    mono = float(np.prod(base.normals[sub] @ a))
    c = resid = None
    if abs(mono) > 1e-15:
        w = np.array([1.0 / s**2 if s > 0 else 1.0 for s in errs])
        c = float(np.dot(w, np.array(vals) / mono) / w.sum())
        resid = float(np.max(np.abs(np.array(vals) - c * mono)))
    return {
        "radii": [float(R) for R in radii],
        "values": vals,
        "stderrs": errs,
        "max_deviation": worst,
        "pair": worst_pair,
        "combined_stderr": worst_se,
        "c": c,
        "monomial": mono,
        "fit_residual": resid,
    }


def even_power_residual(CA: CoxeterArrangement, a, radii, cfg: Optional[QuadratureConfig] = None) -> float:
    """Largest odd-degree coefficient of ``R -> P(B(a, R))`` on a 7-point stencil.

    The degree-6 interpolant through the seven radii is computed in the
    scaled variable ``R / max(radii)``; only its odd coefficients are
    reported, relative to ``max(1, max |P|)``.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.shape[0] != 7:
        raise PreconditionError("the stencil uses exactly seven radii")
    vals = np.array([pizza_ball_coxeter(CA, a, R, cfg) for R in radii])
    x = radii / radii.max()
    coef = np.polynomial.polynomial.polyfit(x, vals, 6)
    return float(np.max(np.abs(coef[1::2])) / max(1.0, float(np.max(np.abs(vals)))))


def decay_probe(A, a, radii, method: str = "exact2d", N: int = 1_000_000, seed: int = 42,
                workers: int = 1, threshold: float = 1e-3, tail: int = 4,
                cfg: Optional[QuadratureConfig] = None) -> Dict:
    """Track ``|P(B(a, R))|`` over increasing radii for a parity-violating arrangement.

    Raises
    ------
    PreconditionError
        When the arrangement satisfies the parity condition or has at most
        ``n`` hyperplanes; then the quantity does not decay but is a fixed
        polynomial in ``a``.
    """
    base = _base(A)
    if parity_condition(base) or len(base) < base.dim + 1:
        raise PreconditionError("decay probe needs >= n+1 hyperplanes and a failed parity condition")
    radii = [float(R) for R in radii]
    if any(r2 <= r1 for r1, r2 in zip(radii, radii[1:])):
        raise PreconditionError("radii must increase")
    a = as_point(a, base.dim)
    if float(np.linalg.norm(a)) > radii[0]:
        raise PreconditionError("every radius must be at least |a|")
    rows = []
    for k, R in enumerate(radii):
        v, s = ball_value(A, a, R, method, N, seed + k, workers, cfg)
        rows.append((R, v, s))
    mags = [abs(v) for _, v, _ in rows]
    tail_mags = mags[-tail:]
    monotone = all(y < x for x, y in zip(tail_mags, tail_mags[1:]))
    return {
        "rows": rows,
        "monotone_tail": monotone,
        "final": mags[-1],
        "below_threshold": mags[-1] < threshold,
        "threshold": threshold,
    }
