"""Weight-two labels for real points relative to a real hypersurface.

A real point q off a real hypersurface X is joined to X by a real line; a
transversal line meets X in deg(X) points forming a conjugation-invariant
set, and a 2-element invariant subset (two real points or one conjugate
pair) spans the line, hence contains q in its real span.  Points on X get
the singleton label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    MEMBERSHIP_TOL,
    TAU_PAIR,
    TAU_REAL,
    TAU_SEP,
    EngineError,
    HomogeneousForm,
    ProjectivePoint,
    evaluate,
    exponents,
    pair_conjugate_roots,
    univariate_roots,
)
from .labels import LabeledSet, SpanCertificate, label_of, span_membership_point


class RetriesExhausted(EngineError):
    """No transversal real line found within the retry budget."""


@dataclass(frozen=True)
class HypersurfaceInstance:
    """A real hypersurface (nonzero real form of degree >= 2) and a real point."""

    surface: HomogeneousForm
    point: ProjectivePoint

    def __post_init__(self):
        if not self.surface.is_real:
            raise ValueError("the hypersurface must be defined by a real form")
        if self.surface.d < 2:
            raise ValueError("degree-1 hypersurfaces are degenerate (span a hyperplane)")
        if not self.point.is_real:
            raise ValueError("the base point must be real")
        if self.point.dim != self.surface.n:
            raise ValueError("point and hypersurface live in different spaces")


def restrict_to_line(F: HomogeneousForm, q: ProjectivePoint, v: ProjectivePoint) -> HomogeneousForm:
    """Coefficients of F(t q + s v) as a real binary form in (t, s)."""
    if not (q.is_real and v.is_real):
        raise ValueError("line restriction expects real points")
    if q.distance(v) <= 1e-12:
        raise ValueError("the two points must be distinct")
    c = _restriction_coeffs(F, q.real_coords, v.real_coords)
    return HomogeneousForm(1, F.d, c)


def _binomial_power(qi: float, vi: float, e: int, binoms) -> np.ndarray:
    """(qi t + vi s)^e over the basis t^{e-j} s^j."""
    j = np.arange(e + 1)
    return binoms[e] * qi ** (e - j) * vi**j


def _restriction_coeffs(F: HomogeneousForm, q: np.ndarray, v: np.ndarray) -> np.ndarray:
    d = F.d
    binoms = [np.array([math.comb(e, j) for j in range(e + 1)], dtype=np.float64) for e in range(d + 1)]
    out = np.zeros(d + 1, dtype=np.float64)
    coeffs = F.coeffs.real
    for alpha, c in zip(exponents(F.n, d), coeffs):
        if c == 0.0:
            continue
        acc = None
        for i, e in enumerate(alpha):
            if e == 0:
                continue
            factor = _binomial_power(q[i], v[i], e, binoms)
            acc = factor if acc is None else np.convolve(acc, factor)
        out += c * acc
    return out


def _random_direction(rng, q_unit: np.ndarray) -> np.ndarray | None:
    g = rng.standard_normal(q_unit.size)
    g -= (g @ q_unit) * q_unit
    norm = np.linalg.norm(g)
    if norm < 1e-9:
        return None
    return g / norm


def _param_chordal(u, w) -> float:
    if u is None and w is None:
        return 0.0
    if u is None:
        return 1.0 / math.sqrt(1.0 + abs(w) ** 2)
    if w is None:
        return 1.0 / math.sqrt(1.0 + abs(u) ** 2)
    return abs(u - w) / math.sqrt((1.0 + abs(u) ** 2) * (1.0 + abs(w) ** 2))


def find_label_hypersurface(
    inst: HypersurfaceInstance,
    rng: np.random.Generator,
    max_retries: int = 20,
    prefer_pair: bool = False,
    tol: float = MEMBERSHIP_TOL,
    tau_real: float = TAU_REAL,
    tau_pair: float = TAU_PAIR,
    tau_sep: float = TAU_SEP,
):
    """Labeled set of weight <= 2 whose real span contains the base point.

    Points on the hypersurface get label (0, 1).  Otherwise random real
    directions are drawn until the line through the point is transversal
    (all intersection parameters separated beyond tau_sep); two real
    intersection points give (0, 2), a conjugate pair gives (1, 0).  The
    default prefers real intersections when both kinds exist.
    """
    F, q = inst.surface, inst.point
    norm_f = F.bombieri_norm()
    if abs(evaluate(F, q)) <= tol * norm_f:
        S = LabeledSet((q,), (), tau_real=tau_real)
        cert = SpanCertificate(np.array([1.0]), np.zeros(0, dtype=complex), 0.0)
        return S, cert
    q_unit = q.real_coords / np.linalg.norm(q.real_coords)
    d = F.d
    for _ in range(max_retries):
        v = _random_direction(rng, q_unit)
        if v is None:
            continue
        coeffs = _restriction_coeffs(F, q.real_coords, v)
        scale = float(np.max(np.abs(coeffs)))
        if scale == 0.0:
            continue  # the whole line lies on the hypersurface
        deg = d
        while deg > 0 and abs(coeffs[deg]) <= 1e-12 * scale:
            deg -= 1
        n_inf = d - deg
        if n_inf >= 2:
            continue  # multiple intersection at the direction point
        finite = univariate_roots(coeffs[: deg + 1]) if deg > 0 else np.empty(0, complex)
        params = [None] * n_inf + list(finite)
        separated = all(
            _param_chordal(params[i], params[j]) > tau_sep
            for i in range(len(params))
            for j in range(i + 1, len(params))
        )
        if not separated:
            continue
        try:
            reals, pair_reps, _ = pair_conjugate_roots(finite, tau_real, tau_pair)
        except EngineError:
            continue
        real_params: list = [None] * n_inf + [float(t) for t in reals]
        use_reals = len(real_params) >= 2 and not (prefer_pair and pair_reps.size > 0)
        if use_reals:
            chosen = real_params[-2:] if n_inf else real_params[:2]
            points = [_line_point(q.real_coords, v, u) for u in chosen]
        elif pair_reps.size > 0:
            order = np.lexsort((pair_reps.imag, pair_reps.real))
            z = complex(pair_reps[order[0]])
            p = _line_point(q.real_coords, v, z)
            points = [p, p.conjugate()]
        else:
            continue  # cannot happen for deg >= 2; defensive
        try:
            S = label_of(points, tau_real, tau_pair)
            cert = span_membership_point(q, S, tol=tol)
        except EngineError:
            continue
        return S, cert
    raise RetriesExhausted(f"no transversal line within {max_retries} retries")


def _line_point(q: np.ndarray, v: np.ndarray, u) -> ProjectivePoint:
    if u is None:
        return ProjectivePoint(v)
    return ProjectivePoint(q + u * v)
