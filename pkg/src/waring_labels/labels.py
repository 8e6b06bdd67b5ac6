"""Labels of conjugation-invariant finite point sets and span certificates.

A label is a pair (a, b) of natural numbers, not both zero: a counts
conjugate pairs, b counts real points, and the weight 2a + b is the
cardinality of the underlying set.  A labeled set stores one canonical
representative per conjugate pair; the partner is always the conjugate, so
realness of every reconstruction is structural, not numerical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    DISTINCT_TOL,
    MEMBERSHIP_TOL,
    RANK_TOL,
    TAU_PAIR,
    TAU_REAL,
    EngineError,
    HomogeneousForm,
    ProjectivePoint,
    _monomial_values,
    multinomials,
    numeric_rank,
    power_vector,
)


class NotSigmaInvariant(EngineError):
    """The point set is not closed under complex conjugation."""


class DuplicatePoint(EngineError):
    """Two points of the set coincide after normalization."""


class NotInSpan(EngineError):
    """Membership failed; carries the attained relative residual."""

    def __init__(self, residual: float, message: str | None = None):
        self.residual = float(residual)
        super().__init__(message or f"not in span (relative residual {residual:.3e})")


@dataclass(frozen=True, order=True)
class Label:
    """Counts (a, b) of conjugate pairs and real points; weight 2a + b."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or (self.a, self.b) == (0, 0):
            raise ValueError(f"invalid label ({self.a}, {self.b})")

    @property
    def weight(self) -> int:
        return 2 * self.a + self.b


def _point_sort_key(p: ProjectivePoint):
    return tuple(x for z in p.coords for x in (z.real, z.imag))


def _canonical_pair_representative(p: ProjectivePoint, tau_real: float) -> ProjectivePoint:
    """Of {p, conj(p)} keep the one whose first non-real coordinate has Im > 0."""
    for z in p.coords:
        if abs(z.imag) > tau_real:
            return p if z.imag > 0 else p.conjugate()
    return p


@dataclass(frozen=True, eq=False)
class LabeledSet:
    """A conjugation-invariant finite set, split into reals and pair reps."""

    real_points: tuple = ()
    pairs: tuple = ()
    tau_real: float = field(default=TAU_REAL, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "real_points", tuple(self.real_points))
        object.__setattr__(self, "pairs", tuple(self.pairs))
        if not self.real_points and not self.pairs:
            raise ValueError("a labeled set must be non-empty")
        for p in self.real_points:
            if not p.is_real_within(self.tau_real):
                raise NotSigmaInvariant(f"claimed real point {p} is not real")
        for q in self.pairs:
            if q.is_real_within(self.tau_real):
                raise NotSigmaInvariant(f"pair representative {q} is real")
        pts = self.all_points()
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if pts[i].distance(pts[j]) <= DISTINCT_TOL:
                    raise DuplicatePoint(f"points {i} and {j} coincide")

    @property
    def label(self) -> Label:
        return Label(len(self.pairs), len(self.real_points))

    @property
    def weight(self) -> int:
        return self.label.weight

    def all_points(self) -> tuple:
        """Real points, then each pair representative and its conjugate."""
        out = list(self.real_points)
        for q in self.pairs:
            out.append(q)
            out.append(q.conjugate())
        return tuple(out)


def label_of(points, tau_real: float = TAU_REAL, tau_pair: float = TAU_PAIR) -> LabeledSet:
    """Classify a finite point set into real points and conjugate pairs.

    Succeeds iff the set is conjugation-invariant within tolerance; raises
    NotSigmaInvariant otherwise and DuplicatePoint on coincident points.
    """
    points = [p if isinstance(p, ProjectivePoint) else ProjectivePoint(p) for p in points]
    if not points:
        raise ValueError("empty point set")
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if points[i].distance(points[j]) <= DISTINCT_TOL:
                raise DuplicatePoint(f"points {i} and {j} coincide")
    reals = [p for p in points if p.is_real_within(tau_real)]
    rest = [p for p in points if not p.is_real_within(tau_real)]
    rest.sort(key=_point_sort_key)
    pairs = []
    while rest:
        p = rest.pop(0)
        target = p.conjugate()
        if not rest:
            raise NotSigmaInvariant(f"{p} has no conjugate partner in the set")
        dists = [target.distance(q) for q in rest]
        j = int(np.argmin(dists))
        if dists[j] > tau_pair:
            raise NotSigmaInvariant(
                f"{p}: nearest conjugate candidate at distance {dists[j]:.3e}"
            )
        rest.pop(j)
        pairs.append(_canonical_pair_representative(p, tau_real))
    reals.sort(key=_point_sort_key)
    pairs.sort(key=_point_sort_key)
    return LabeledSet(tuple(reals), tuple(pairs), tau_real=tau_real)


@dataclass(frozen=True, eq=False)
class SpanCertificate:
    """Coefficients placing a real target in the real span of a labeled set.

    Reconstruction is sum(lambda_i * v_i) + sum(2 Re(mu_j * w_j)), with one
    real coefficient per real point and one complex coefficient per pair, so
    the result is a real vector by construction.
    """

    real_coeffs: np.ndarray
    pair_coeffs: np.ndarray
    residual: float
    degenerate: bool = False

    def __post_init__(self):
        rc = np.asarray(self.real_coeffs, dtype=np.float64)
        pc = np.asarray(self.pair_coeffs, dtype=np.complex128)
        rc.setflags(write=False)
        pc.setflags(write=False)
        object.__setattr__(self, "real_coeffs", rc)
        object.__setattr__(self, "pair_coeffs", pc)
        object.__setattr__(self, "residual", float(self.residual))


def _membership_columns(vectors_real: list, vectors_pair: list) -> np.ndarray:
    """Real design matrix: one column per real element, two per pair."""
    cols = [np.asarray(v).real for v in vectors_real]
    for w in vectors_pair:
        w = np.asarray(w)
        cols.append(2.0 * w.real)
        cols.append(-2.0 * w.imag)
    return np.column_stack(cols)


def _solve_membership(A: np.ndarray, target: np.ndarray, tol: float, rank_tol: float):
    x, *_ = np.linalg.lstsq(A, target, rcond=None)
    norm_t = float(np.linalg.norm(target))
    if norm_t == 0.0:
        raise ValueError("zero target")
    residual = float(np.linalg.norm(A @ x - target)) / norm_t
    degenerate = numeric_rank(A, rank_tol) < A.shape[1]
    return x, residual, degenerate


def _certificate_from_solution(x: np.ndarray, n_real: int, residual: float, degenerate: bool):
    lam = x[:n_real]
    uv = x[n_real:].reshape(-1, 2)
    mu = uv[:, 0] + 1j * uv[:, 1]
    return SpanCertificate(lam, mu, residual, degenerate)


def span_membership(
    target: HomogeneousForm,
    S: LabeledSet,
    tol: float = MEMBERSHIP_TOL,
    rank_tol: float = RANK_TOL,
) -> SpanCertificate:
    """Least-squares membership of a real form in the real span of powers.

    The basis vectors are the Bombieri-scaled coefficient vectors of l_p^d
    for p in S.  Returns a certificate when the relative residual is at most
    tol, else raises NotInSpan carrying the attained residual.
    """
    if not target.is_real:
        raise ValueError("target form must be real")
    d = target.d
    A = _membership_columns(
        [power_vector(p.real_coords, d) for p in S.real_points],
        [power_vector(q.coords, d) for q in S.pairs],
    )
    x, residual, degenerate = _solve_membership(A, target.bombieri_vector().real, tol, rank_tol)
    if residual > tol:
        raise NotInSpan(residual)
    return _certificate_from_solution(x, len(S.real_points), residual, degenerate)


def span_membership_point(
    q: ProjectivePoint,
    S: LabeledSet,
    tol: float = MEMBERSHIP_TOL,
    rank_tol: float = RANK_TOL,
) -> SpanCertificate:
    """Membership of a real point in the real span of the set itself."""
    if not q.is_real:
        raise ValueError("target point must be real")
    A = _membership_columns(
        [p.real_coords for p in S.real_points],
        [p.coords for p in S.pairs],
    )
    x, residual, degenerate = _solve_membership(A, q.real_coords, tol, rank_tol)
    if residual > tol:
        raise NotInSpan(residual)
    return _certificate_from_solution(x, len(S.real_points), residual, degenerate)


def reconstruct(S: LabeledSet, cert: SpanCertificate, d: int) -> HomogeneousForm:
    """The real form encoded by a labeled set and certificate.

    Computed in real arithmetic throughout, so the imaginary parts of the
    output are exactly zero.
    """
    if len(cert.real_coeffs) != len(S.real_points) or len(cert.pair_coeffs) != len(S.pairs):
        raise ValueError("certificate shape does not match the labeled set")
    n = (S.all_points()[0]).dim
    acc = np.zeros(len(multinomials(n, d)), dtype=np.float64)
    for lam, p in zip(cert.real_coeffs, S.real_points):
        acc += lam * _monomial_values(p.real_coords, n, d)
    for mu, p in zip(cert.pair_coeffs, S.pairs):
        w = _monomial_values(p.coords, n, d)
        acc += 2.0 * (mu.real * w.real - mu.imag * w.imag)
    return HomogeneousForm(n, d, multinomials(n, d) * acc)


def reconstruct_point(S: LabeledSet, cert: SpanCertificate) -> np.ndarray:
    """The real coordinate vector encoded by a point-span certificate."""
    n = (S.all_points()[0]).dim
    acc = np.zeros(n + 1, dtype=np.float64)
    for lam, p in zip(cert.real_coeffs, S.real_points):
        acc += lam * p.real_coords
    for mu, p in zip(cert.pair_coeffs, S.pairs):
        acc += 2.0 * (mu.real * p.coords.real - mu.imag * p.coords.imag)
    return acc
