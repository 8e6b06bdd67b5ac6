"""Numeric kernel: projective points over C, homogeneous forms, apolarity.

Conventions used throughout the package:

* Points of projective space carry canonical homogeneous coordinates: the
  coordinate of largest modulus equals 1 exactly (ties broken by lowest
  index).  This makes set comparison and conjugate pairing deterministic.
* A degree-d form in n+1 variables is stored as a dense coefficient vector
  over the exponent vectors of degree d, ordered descending-lexicographically
  (for binary forms: x^d, x^{d-1}y, ..., y^d).
* The norm of a form is the Bombieri norm, ||f||^2 = sum |c_a|^2 / C(d; a),
  which is invariant under unitary changes of variables and gives
  ||l^d|| = ||l||_2^d for powers of linear forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Default tolerances.  All operations accept explicit overrides; these values
# sit an order of magnitude above accumulated float64 rounding at desk scale.
TAU_REAL = 1e-8       # |Im| threshold for calling a normalized quantity real
TAU_PAIR = 1e-6       # max distance between a root and its matched conjugate
TAU_SEP = 1e-6        # min separation between roots counted as distinct
RANK_TOL = 1e-10      # relative singular-value cutoff for numeric rank
MEMBERSHIP_TOL = 1e-8  # relative residual bound for span membership
DISTINCT_TOL = 1e-8   # normalized-representative distance below which points coincide


class EngineError(Exception):
    """Base class for all engine-level failures (never raised on bugs)."""


class PairingFailure(EngineError):
    """A root multiset was not conjugation-closed within tolerance."""


def _as_coords(coords) -> np.ndarray:
    c = np.asarray(coords, dtype=np.complex128)
    if c.ndim != 1 or c.size < 2:
        raise ValueError("coordinates must be a 1-d sequence of length >= 2")
    if not np.all(np.isfinite(c)):
        raise ValueError("coordinates must be finite")
    return c


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """A point of complex projective space with canonical coordinates."""

    coords: np.ndarray

    def __post_init__(self):
        c = _as_coords(self.coords)
        mod = np.abs(c)
        i = int(np.argmax(mod))
        if mod[i] == 0.0:
            raise ValueError("all coordinates are zero")
        c = c / c[i]
        c[i] = 1.0  # exact, independent of rounding in the division
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def dim(self) -> int:
        return self.coords.size - 1

    def is_real_within(self, tau: float = TAU_REAL) -> bool:
        return float(np.max(np.abs(self.coords.imag))) <= tau

    @property
    def is_real(self) -> bool:
        return self.is_real_within(TAU_REAL)

    @property
    def real_coords(self) -> np.ndarray:
        """Real parts of the canonical coordinates (use on real points)."""
        return self.coords.real.copy()

    def conjugate(self) -> "ProjectivePoint":
        return ProjectivePoint(np.conj(self.coords))

    def distance(self, other: "ProjectivePoint") -> float:
        return float(np.linalg.norm(self.coords - other.coords))

    def __repr__(self):
        entries = ", ".join(f"{z.real:.6g}{z.imag:+.6g}j" for z in self.coords)
        return f"ProjectivePoint([{entries}])"


def conjugate_point(p: ProjectivePoint) -> ProjectivePoint:
    """Coordinate-wise complex conjugation; fixes exactly the real points."""
    return p.conjugate()


@lru_cache(maxsize=None)
def exponents(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree d in n+1 variables, descending lex order."""
    if n < 0 or d < 0:
        raise ValueError("need n >= 0 and d >= 0")
    if n == 0:
        return ((d,),)
    out = []
    for e0 in range(d, -1, -1):
        for rest in exponents(n - 1, d - e0):
            out.append((e0,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def exponent_index(n: int, d: int) -> dict:
    return {alpha: i for i, alpha in enumerate(exponents(n, d))}


@lru_cache(maxsize=None)
def exponent_matrix(n: int, d: int) -> np.ndarray:
    E = np.array(exponents(n, d), dtype=np.int64)
    E.setflags(write=False)
    return E


def _multinomial(d: int, alpha: tuple[int, ...]) -> int:
    m, s = 1, d
    for a in alpha:
        m *= math.comb(s, a)
        s -= a
    return m


@lru_cache(maxsize=None)
def multinomials(n: int, d: int) -> np.ndarray:
    """C(d; alpha) for every exponent vector, in the standard order."""
    M = np.array([_multinomial(d, a) for a in exponents(n, d)], dtype=np.float64)
    M.setflags(write=False)
    return M


@lru_cache(maxsize=None)
def _sqrt_multinomials(n: int, d: int) -> np.ndarray:
    S = np.sqrt(multinomials(n, d))
    S.setflags(write=False)
    return S


def _monomial_values(coords: np.ndarray, n: int, d: int) -> np.ndarray:
    """coords**alpha for every alpha, via per-variable power tables."""
    E = exponent_matrix(n, d)
    out = None
    for i in range(n + 1):
        table = coords[i] ** np.arange(d + 1)
        col = table[E[:, i]]
        out = col if out is None else out * col
    return out


@dataclass(frozen=True, eq=False)
class HomogeneousForm:
    """A homogeneous form of degree d in n+1 variables.

    Coefficients are stored densely over ``exponents(n, d)``.  Forms with all
    imaginary parts exactly zero are real; real inputs stay exactly real
    through every constructor in this package.
    """

    n: int
    d: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        c = np.asarray(self.coeffs, dtype=np.complex128)
        m = len(exponents(self.n, self.d))
        if c.shape != (m,):
            raise ValueError(f"expected {m} coefficients, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        if not np.any(c != 0):
            raise ValueError("the zero form is not admitted")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeff_dict(cls, n: int, d: int, mapping) -> "HomogeneousForm":
        idx = exponent_index(n, d)
        c = np.zeros(len(idx), dtype=np.complex128)
        for alpha, value in mapping.items():
            key = tuple(int(a) for a in alpha)
            if key not in idx:
                raise ValueError(f"exponent vector {key} is not of degree {d} in {n + 1} variables")
            c[idx[key]] += value
        return cls(n, d, c)

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.coeffs.imag == 0.0))

    def coefficient(self, alpha) -> complex:
        return complex(self.coeffs[exponent_index(self.n, self.d)[tuple(alpha)]])

    def to_coeff_dict(self) -> dict:
        exps = exponents(self.n, self.d)
        return {exps[i]: complex(self.coeffs[i]) for i in range(len(exps)) if self.coeffs[i] != 0}

    def bombieri_vector(self) -> np.ndarray:
        """Coefficients rescaled so the Euclidean norm is the Bombieri norm."""
        return self.coeffs / _sqrt_multinomials(self.n, self.d)

    def bombieri_norm(self) -> float:
        return float(np.linalg.norm(self.bombieri_vector()))

    def scale(self, factor) -> "HomogeneousForm":
        return HomogeneousForm(self.n, self.d, self.coeffs * factor)

    def add(self, other: "HomogeneousForm") -> "HomogeneousForm":
        self._check_shape(other)
        return HomogeneousForm(self.n, self.d, self.coeffs + other.coeffs)

    def sub(self, other: "HomogeneousForm") -> "HomogeneousForm":
        self._check_shape(other)
        return HomogeneousForm(self.n, self.d, self.coeffs - other.coeffs)

    def _check_shape(self, other: "HomogeneousForm"):
        if (self.n, self.d) != (other.n, other.d):
            raise ValueError("forms live in different spaces")

    def __repr__(self):
        nz = int(np.count_nonzero(self.coeffs))
        return f"HomogeneousForm(n={self.n}, d={self.d}, {nz} nonzero coefficients)"


def power_of_linear_form(ell: ProjectivePoint, d: int) -> HomogeneousForm:
    """Expand l^d for the linear form l with the point's canonical coordinates.

    The result is exactly real whenever the point is real.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    n = ell.dim
    coords = ell.real_coords if ell.is_real else ell.coords
    mono = _monomial_values(coords, n, d)
    return HomogeneousForm(n, d, multinomials(n, d) * mono)


def power_vector(coords: np.ndarray, d: int) -> np.ndarray:
    """Bombieri-basis vector of l^d: sqrt(C(d; a)) * coords**a.

    Real input arrays give exactly real output.
    """
    coords = np.asarray(coords)
    n = coords.size - 1
    return _sqrt_multinomials(n, d) * _monomial_values(coords, n, d)


def evaluate(f: HomogeneousForm, p: ProjectivePoint) -> complex:
    """Evaluate f at the canonical representative of p."""
    if p.dim != f.n:
        raise ValueError(f"point lives in P^{p.dim}, form in P^{f.n}")
    return complex(np.dot(f.coeffs, _monomial_values(p.coords, f.n, f.d)))


@lru_cache(maxsize=None)
def _catalecticant_tables(n: int, d: int, k: int):
    rows = exponents(n, d - k)
    cols = exponents(n, k)
    idx = exponent_index(n, d)
    I = np.empty((len(rows), len(cols)), dtype=np.int64)
    W = np.empty((len(rows), len(cols)), dtype=np.float64)
    for r, beta in enumerate(rows):
        for c, gamma in enumerate(cols):
            s = tuple(b + g for b, g in zip(beta, gamma))
            I[r, c] = idx[s]
            W[r, c] = math.prod(math.comb(b + g, g) for b, g in zip(beta, gamma))
    I.setflags(write=False)
    W.setflags(write=False)
    return I, W


@dataclass(frozen=True, eq=False)
class CatalecticantMatrix:
    """Apolarity pairing of a form in a fixed bidegree (d-k, k)."""

    k: int
    matrix: np.ndarray
    row_exponents: tuple
    col_exponents: tuple

    @property
    def shape(self):
        return self.matrix.shape


def scaled_binary_coeffs(f: HomogeneousForm) -> np.ndarray:
    """The a_i with f = sum C(d,i) a_i x^{d-i} y^i (binary forms only)."""
    if f.n != 1:
        raise ValueError("scaled coefficients are defined for binary forms")
    a = f.coeffs / multinomials(1, f.d)
    return a.real if f.is_real else a


def catalecticant(f: HomogeneousForm, k: int) -> CatalecticantMatrix:
    """Apolarity pairing matrix of f in contraction degree k.

    Binary forms produce the pure Hankel matrix M[i][j] = a_{i+j} in the
    scaled coefficients; for n >= 2 the entry at (beta, gamma) is
    c_{beta+gamma} * (beta+gamma)! / (beta! gamma!).  k may run up to d (the
    k = d row is the full contraction against degree-d operators).
    """
    if not 1 <= k <= f.d:
        raise ValueError(f"contraction degree k={k} out of range [1, {f.d}]")
    if f.n == 1:
        a = scaled_binary_coeffs(f)
        i = np.arange(f.d - k + 1)
        j = np.arange(k + 1)
        M = a[np.add.outer(i, j)]
    else:
        I, W = _catalecticant_tables(f.n, f.d, k)
        M = f.coeffs[I] * W
        if f.is_real:
            M = M.real
    return CatalecticantMatrix(
        k=k,
        matrix=M,
        row_exponents=exponents(f.n, f.d - k),
        col_exponents=exponents(f.n, k),
    )


def numeric_rank(M: np.ndarray, tol: float = RANK_TOL) -> int:
    """Number of singular values above tol times the largest one."""
    M = np.atleast_2d(np.asarray(M))
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def nullspace(M: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the right kernel, by SVD."""
    M = np.atleast_2d(np.asarray(M))
    u, s, vh = np.linalg.svd(M)
    cols = M.shape[1]
    if s.size == 0 or s[0] == 0.0:
        return np.eye(cols, dtype=M.dtype)
    r = int(np.count_nonzero(s > tol * s[0]))
    return vh[r:].conj().T


def trim_trailing(coeffs: np.ndarray, rel_tol: float = 1e-14) -> np.ndarray:
    """Drop leading (highest-index) coefficients below rel_tol * max|c|."""
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.size == 0:
        raise ValueError("empty coefficient sequence")
    scale = float(np.max(np.abs(c)))
    if scale == 0.0:
        raise ValueError("zero polynomial")
    keep = c.size
    while keep > 1 and abs(c[keep - 1]) <= rel_tol * scale:
        keep -= 1
    return c[:keep]


def univariate_roots(coeffs, rel_trim: float = 1e-14) -> np.ndarray:
    """Roots with multiplicity of c[0] + c[1] t + ... + c[m] t^m.

    Companion-matrix eigenvalues (balanced by LAPACK) followed by one Newton
    polish step per root.  Raises on the zero polynomial; a nonzero constant
    has no roots.
    """
    c = trim_trailing(coeffs, rel_trim)
    m = c.size - 1
    if m == 0:
        return np.empty(0, dtype=np.complex128)
    roots = np.roots(c[::-1]).astype(np.complex128)
    # One Newton step; skipped where the derivative is too small (multiple
    # roots), where the eigenvalue is already the better answer.
    dc = c[1:] * np.arange(1, m + 1)
    p = np.polynomial.polynomial.polyval(roots, c)
    dp = np.polynomial.polynomial.polyval(roots, dc)
    scale = np.max(np.abs(c))
    ok = np.abs(dp) > 1e-12 * scale * np.maximum(1.0, np.abs(roots)) ** max(m - 1, 0)
    step = np.zeros_like(roots)
    step[ok] = p[ok] / dp[ok]
    polished = roots - step
    p2 = np.polynomial.polynomial.polyval(polished, c)
    worse = np.abs(p2) > np.abs(p)
    polished[worse] = roots[worse]
    return polished


def pair_conjugate_roots(roots, tau_real: float = TAU_REAL, tau_pair: float = TAU_PAIR):
    """Partition roots of a real polynomial into reals and conjugate pairs.

    Returns ``(real_roots, pair_representatives, (a, b))`` where the pair
    representatives have positive imaginary part.  Raises PairingFailure when
    some non-real root has no conjugate partner within tau_pair * (1 + |z|).
    """
    z = np.asarray(roots, dtype=np.complex128)
    is_real = np.abs(z.imag) <= tau_real * (1.0 + np.abs(z))
    reals = np.sort(z[is_real].real)
    rest = z[~is_real]
    order = np.lexsort((rest.imag, rest.real))
    rest = list(rest[order])
    pairs = []
    while rest:
        w = rest.pop(0)
        target = np.conj(w)
        dists = [abs(target - u) for u in rest]
        if not dists:
            raise PairingFailure(f"root {w} has no conjugate partner")
        j = int(np.argmin(dists))
        if dists[j] > tau_pair * (1.0 + abs(w)):
            raise PairingFailure(
                f"root {w}: nearest conjugate candidate at distance {dists[j]:.3e}"
            )
        u = rest.pop(j)
        rep = w if w.imag > 0 else u
        pairs.append(rep)
    pairs = np.asarray(pairs, dtype=np.complex128)
    label = (pairs.size, reals.size)
    return reals, pairs, label
