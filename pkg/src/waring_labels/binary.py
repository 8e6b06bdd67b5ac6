"""Sylvester engine for real binary forms.

Catalecticants of binary forms are Hankel matrices in the scaled
coefficients; kernel elements, read as binary forms in the differential
operators, factor into the linear forms of an additive decomposition.  A
kernel form g = sum v_j X^{k-j} Y^j vanishes on the decomposition points:
the finite roots t of g(1, t) give points [1, t], a degree drop gives the
point [0, 1].  The convention is never trusted on its own; every
decomposition is certified by reconstruction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import (
    MEMBERSHIP_TOL,
    RANK_TOL,
    TAU_PAIR,
    TAU_REAL,
    TAU_SEP,
    EngineError,
    HomogeneousForm,
    ProjectivePoint,
    catalecticant,
    nullspace,
    pair_conjugate_roots,
    trim_trailing,
    univariate_roots,
)
from .labels import LabeledSet, SpanCertificate, label_of, span_membership


class RankSearchExhausted(EngineError):
    """No square-free apolar form found up to contraction degree d."""


class CubicClass(Enum):
    PAIR = "pair"
    REAL = "real"
    TANGENT_DEVELOPABLE = "tangent-developable"


def apolar_kernel(f: HomogeneousForm, k: int, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal kernel basis (columns) of the degree-k Hankel pairing.

    Columns are real vectors of length k+1, read as degree-k binary forms
    over the basis X^{k-j} Y^j.
    """
    if f.n != 1:
        raise ValueError("apolar_kernel expects a binary form")
    if not f.is_real:
        raise ValueError("apolar_kernel expects a real form")
    if not 1 <= k <= f.d:
        raise ValueError(f"contraction degree k={k} out of range [1, {f.d}]")
    return nullspace(catalecticant(f, k).matrix, rank_tol)


def _chordal(u: complex | None, w: complex | None) -> float:
    """Chordal distance on P^1; None encodes the point at infinity."""
    if u is None and w is None:
        return 0.0
    if u is None:
        return 1.0 / math.sqrt(1.0 + abs(w) ** 2)
    if w is None:
        return 1.0 / math.sqrt(1.0 + abs(u) ** 2)
    return abs(u - w) / math.sqrt((1.0 + abs(u) ** 2) * (1.0 + abs(w) ** 2))


def binary_form_roots(v: np.ndarray, rel_trim: float = 1e-10):
    """Projective roots of sum v_j X^{k-j} Y^j as parameter values.

    Returns (finite_roots, n_infinity): finite roots are the roots of the
    dehomogenization g(1, t); a degree drop of e contributes e roots at
    infinity (the point [0, 1]).
    """
    v = np.asarray(v, dtype=np.complex128)
    k = v.size - 1
    trimmed = trim_trailing(v, rel_trim)
    n_inf = k - (trimmed.size - 1)
    if trimmed.size == 1:
        return np.empty(0, dtype=np.complex128), n_inf
    return univariate_roots(trimmed), n_inf


def _roots_pairwise_separated(finite, n_inf: int, tau_sep: float) -> bool:
    pts = [None] * n_inf + list(finite)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if _chordal(pts[i], pts[j]) <= tau_sep:
                return False
    return True


def _low_discrepancy_directions(dim: int, budget: int) -> np.ndarray:
    """Deterministic Kronecker sequence mapped to the unit sphere S^{dim-1}."""
    if dim == 1:
        return np.ones((1, 1))
    # Additive recurrence with the generalized golden ratio: well spread,
    # reproducible, no RNG involved.
    phi = 1.0
    for _ in range(32):
        phi = (1.0 + phi) ** (1.0 / (dim))
    alphas = (1.0 / phi) ** np.arange(1, dim)
    idx = np.arange(1, budget + 1)[:, None]
    u = np.mod(0.5 + idx * alphas[None, :], 1.0)
    # Spherical angles: first dim-2 in (0, pi), last in (0, 2*pi).
    angles = u * np.pi
    if dim >= 2:
        angles[:, -1] = u[:, -1] * 2.0 * np.pi
    out = np.empty((budget, dim))
    for r in range(budget):
        vec = np.ones(dim)
        s = 1.0
        for i, th in enumerate(angles[r]):
            vec[i] = s * math.cos(th)
            s *= math.sin(th)
        vec[-1] = s
        out[r] = vec
    return out


def _kernel_candidates(V: np.ndarray, budget: int) -> np.ndarray:
    """Rows: coefficient vectors to try, basis vectors first."""
    m = V.shape[1]
    if m == 1:
        return V.T.copy()
    dirs = _low_discrepancy_directions(m, budget)
    cands = np.vstack([np.eye(m), dirs])
    return cands @ V.T


def complex_rank_binary(
    f: HomogeneousForm,
    rank_tol: float = RANK_TOL,
    tau_sep: float = TAU_SEP,
    budget: int = 256,
):
    """Smallest k whose apolar kernel contains a square-free form.

    Returns (rank, generator) where the generator is a real coefficient
    vector of length rank+1.  Multidimensional kernels are searched over a
    deterministic low-discrepancy sample of their unit sphere.
    """
    if f.n != 1:
        raise ValueError("complex_rank_binary expects a binary form")
    for k in range(1, f.d + 1):
        V = apolar_kernel(f, k, rank_tol)
        if V.shape[1] == 0:
            continue
        for v in _kernel_candidates(V, budget):
            finite, n_inf = binary_form_roots(v)
            if n_inf + finite.size != k:
                continue
            if _roots_pairwise_separated(finite, n_inf, tau_sep):
                return k, np.real(v)
    raise RankSearchExhausted(f"no square-free apolar form up to degree {f.d}")


def _points_from_roots(reals, pair_reps, n_inf: int):
    real_points = [ProjectivePoint([1.0, float(t)]) for t in reals]
    real_points += [ProjectivePoint([0.0, 1.0])] * n_inf
    pair_points = [ProjectivePoint([1.0, complex(z)]) for z in pair_reps]
    return real_points, pair_points


def sylvester_decompose(
    f: HomogeneousForm,
    rank_tol: float = RANK_TOL,
    tau_real: float = TAU_REAL,
    tau_pair: float = TAU_PAIR,
    tau_sep: float = TAU_SEP,
    tol: float = MEMBERSHIP_TOL,
    budget: int = 256,
):
    """Labeled additive decomposition of a real binary form.

    The label weight equals the complex rank; the certificate is produced by
    the span-membership solve and carries the reconstruction residual.
    """
    rank, v = complex_rank_binary(f, rank_tol, tau_sep, budget)
    finite, n_inf = binary_form_roots(v)
    reals, pair_reps, _ = pair_conjugate_roots(finite, tau_real, tau_pair)
    real_points, pair_points = _points_from_roots(reals, pair_reps, n_inf)
    orbit = real_points + [q for rep in pair_points for q in (rep, rep.conjugate())]
    S = label_of(orbit, tau_real, tau_pair)
    cert = span_membership(f, S, tol=tol, rank_tol=rank_tol)
    return S, cert


def _apolar_quadratic(f: HomogeneousForm, rel_tol: float = 1e-12) -> np.ndarray:
    """Kernel vector of the 2x3 Hankel pairing of a binary cubic.

    Uses the cross product of the two rows, which is exact and fast; falls
    back to the SVD kernel when the rows are (nearly) parallel.
    """
    H = catalecticant(f, 2).matrix
    v = np.cross(H[0], H[1])
    scale = np.linalg.norm(H[0]) * np.linalg.norm(H[1])
    if np.linalg.norm(v) <= rel_tol * max(scale, 1e-300):
        V = nullspace(H)
        v = V[:, -1]
    return np.real(v)


def classify_cubic(f: HomogeneousForm, tau_sep: float = TAU_SEP) -> CubicClass:
    """Three-way class of a real binary cubic.

    Tangent-developable when the apolar quadratic has a (near-)double root;
    otherwise the two roots are a conjugate pair (negative discriminant) or
    both real (positive discriminant).
    """
    if f.n != 1 or f.d != 3:
        raise ValueError("classify_cubic expects a binary cubic")
    v0, v1, v2 = _apolar_quadratic(f)
    scale = max(abs(v0), abs(v1), abs(v2))
    disc = v1 * v1 - 4.0 * v0 * v2
    if abs(v2) <= 1e-14 * scale:
        if abs(v1) <= 1e-14 * scale:
            return CubicClass.TANGENT_DEVELOPABLE  # double root at infinity
        t = -v0 / v1
        sep = _chordal(None, t)
        return CubicClass.TANGENT_DEVELOPABLE if sep <= tau_sep else CubicClass.REAL
    if disc < 0.0:
        rt = math.sqrt(-disc)
        t_re = -v1 / (2.0 * v2)
        t_im = rt / (2.0 * abs(v2))
        sep = _chordal(complex(t_re, t_im), complex(t_re, -t_im))
        return CubicClass.TANGENT_DEVELOPABLE if sep <= tau_sep else CubicClass.PAIR
    rt = math.sqrt(disc)
    t1 = (-v1 + rt) / (2.0 * v2)
    t2 = (-v1 - rt) / (2.0 * v2)
    sep = _chordal(t1, t2)
    return CubicClass.TANGENT_DEVELOPABLE if sep <= tau_sep else CubicClass.REAL


@dataclass(frozen=True)
class RealRankResult:
    """Certified real rank, or an honest Unknown with the proven lower bound."""

    value: int | None
    lower_bound: int

    @property
    def certified(self) -> bool:
        return self.value is not None


def _all_real_separated(v: np.ndarray, k: int, tau_real: float, tau_sep: float) -> bool:
    finite, n_inf = binary_form_roots(v)
    if finite.size + n_inf != k:
        return False
    if np.any(np.abs(finite.imag) > tau_real * (1.0 + np.abs(finite))):
        return False
    return _roots_pairwise_separated(finite.real.astype(complex), n_inf, tau_sep)


def _real_root_score(v: np.ndarray, k: int, tau_sep: float) -> float:
    """0 when v has k distinct real roots; positive otherwise."""
    finite, n_inf = binary_form_roots(v)
    if finite.size + n_inf != k:
        return 1.0
    score = 0.0
    if finite.size:
        score = float(np.max(np.abs(finite.imag) / (1.0 + np.abs(finite) ** 2)))
    pts = [None] * n_inf + list(finite.real.astype(complex))
    min_sep = min(
        (_chordal(pts[i], pts[j]) for i in range(len(pts)) for j in range(i + 1, len(pts))),
        default=1.0,
    )
    if min_sep <= tau_sep:
        score += tau_sep - min_sep + 1e-12
    return score


def _refine_real_rooted(V: np.ndarray, c0: np.ndarray, k: int, tau_sep: float, iters: int = 120):
    """Compass search on the kernel sphere minimizing the non-realness score."""
    m = V.shape[1]
    c = c0 / np.linalg.norm(c0)
    best = _real_root_score(V @ c, k, tau_sep)
    h = 0.25
    it = 0
    while it < iters and best > 0.0 and h > 1e-6:
        improved = False
        for i in range(m):
            for sgn in (1.0, -1.0):
                it += 1
                trial = c.copy()
                trial[i] += sgn * h
                trial /= np.linalg.norm(trial)
                s = _real_root_score(V @ trial, k, tau_sep)
                if s < best:
                    best, c, improved = s, trial, True
        if not improved:
            h *= 0.5
    return best, c


def real_rank_binary(
    f: HomogeneousForm,
    budget: int = 256,
    rank_tol: float = RANK_TOL,
    tau_real: float = TAU_REAL,
    tau_sep: float = TAU_SEP,
) -> RealRankResult:
    """Smallest k whose apolar kernel contains a form with k distinct real roots.

    One-dimensional kernels are decided exactly; multidimensional kernels are
    searched by deterministic sampling plus compass refinement.  When a level
    can be neither certified nor excluded the result is Unknown with the
    proven lower bound (a semi-decision procedure, by design).
    """
    rank, _ = complex_rank_binary(f, rank_tol, tau_sep, budget)
    for k in range(rank, f.d + 1):
        V = apolar_kernel(f, k, rank_tol)
        m = V.shape[1]
        if m == 0:
            continue
        if m == 1:
            if _all_real_separated(V[:, 0], k, tau_real, tau_sep):
                return RealRankResult(k, k)
            continue  # unique generator fails: level k excluded
        best_c = None
        best_s = np.inf
        for c in np.vstack([np.eye(m), _low_discrepancy_directions(m, budget)]):
            v = V @ c
            s = _real_root_score(v, k, tau_sep)
            if s == 0.0:
                return RealRankResult(k, k)
            if s < best_s:
                best_s, best_c = s, c
        s, c = _refine_real_rooted(V, best_c, k, tau_sep)
        if s == 0.0 and _all_real_separated(V @ c, k, tau_real, tau_sep):
            return RealRankResult(k, k)
        return RealRankResult(None, k)
    return RealRankResult(None, f.d + 1)


def max_weight_bound(degree: int) -> int:
    """Weight available to almost every point for degree-r rational curves."""
    return (degree + 5) // 2


def weight_within_curve_bound(f: HomogeneousForm, **kwargs) -> bool:
    """True iff the Sylvester label weight meets the curve weight bound."""
    S, _ = sylvester_decompose(f, **kwargs)
    return S.weight <= max_weight_bound(f.d)
