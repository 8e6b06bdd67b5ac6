"""Labeled Waring decomposition of real forms by structured least squares.

A label template (a, b) fixes the shape of the decomposition: b real points
with real coefficients plus a conjugate pairs, each pair carrying one complex
coefficient with the partner's coefficient implied conjugate.  The objective
is the Bombieri-basis coefficient distance between the target and

    sum_i lambda_i l_{p_i}^d  +  sum_j 2 Re(mu_j l_{q_j}^d),

minimized by damped Levenberg-Marquardt with an analytic Jacobian over the
real parameter vector.  Projective scale is removed by freezing each point's
largest-modulus coordinate at 1.

The weight-(k+1) search seeds one extra conjugate pair on top of a best-effort
weight-(k-1) fit of a perturbed target; this mirrors building the k-th secant
variety as the join of the previous one with the variety itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .algebra import (
    RANK_TOL,
    TAU_PAIR,
    TAU_REAL,
    EngineError,
    HomogeneousForm,
    ProjectivePoint,
    catalecticant,
    exponent_matrix,
    numeric_rank,
    power_vector,
    _sqrt_multinomials,
)
from .labels import Label, LabeledSet, SpanCertificate, label_of, span_membership

LabelTemplate = Label

# Veronese embeddings where uniqueness of general submaximal decompositions
# is known to fail, and the classically defective cases where the filling
# formula overshoots; both are surfaced as flags, never as errors.
UNIQUENESS_EXCEPTIONS = {(2, 6), (3, 4), (5, 3)}
DEFECTIVE_CASES = {(2, 4), (3, 4), (4, 3), (4, 4)}


class DecompositionFailure(EngineError):
    """All attempts failed; carries the best residual seen for diagnostics."""

    def __init__(self, best_residual: float, reason: str = "", template: Label | None = None):
        self.best_residual = float(best_residual)
        self.template = template
        self.reason = reason
        msg = f"decomposition failed (best residual {best_residual:.3e})"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


@dataclass(frozen=True)
class NLSConfig:
    max_iters: int = 1500
    lambda_init: float = 1e-3
    gradient_tol: float = 1e-12
    residual_tol: float = 1e-6
    restarts: int = 8
    seed: int = 0

    def __post_init__(self):
        if min(self.max_iters, self.restarts) < 1 or min(
            self.lambda_init, self.gradient_tol, self.residual_tol
        ) <= 0:
            raise ValueError("NLS configuration values must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class DecompositionProblem:
    f: HomogeneousForm
    template: LabelTemplate
    config: NLSConfig = NLSConfig()

    def __post_init__(self):
        if not self.f.is_real:
            raise ValueError("only real forms are decomposed")


def generic_rank(n: int, d: int) -> int:
    """Smallest k for which k-point spans fill the space of degree-d forms,
    by the dimension-count formula (exact off the defective list)."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    return math.ceil(math.comb(n + d, n) / (n + 1))


def generic_rank_flags(n: int, d: int) -> tuple[str, ...]:
    flags = []
    if d < 3:
        flags.append("outside-theorem-hypotheses")
    if (n, d) in UNIQUENESS_EXCEPTIONS:
        flags.append("uniqueness-exception")
    if (n, d) in DEFECTIVE_CASES:
        flags.append("defective")
    return tuple(flags)


def weight_templates(w: int, skip_all_real: bool = False) -> list[Label]:
    """Templates (a, b) with 2a + b = w, in decreasing b."""
    if w < 1:
        raise ValueError("weight must be >= 1")
    out = [Label(a, w - 2 * a) for a in range(w // 2 + 1)]
    if skip_all_real:
        out = [t for t in out if t.b != w]
    return out


# ---------------------------------------------------------------------------
# residual and Jacobian
# ---------------------------------------------------------------------------


def param_count(n: int, template: Label) -> int:
    a, b = template.a, template.b
    return (b + 2 * a) * (n + 1) + b + 2 * a


def split_params(theta: np.ndarray, n: int, template: Label):
    """-> (real_points (b, n+1) float, pair_points (a, n+1) complex,
    real_coeffs (b,), pair_coeffs (a,) complex)."""
    a, b, c = template.a, template.b, n + 1
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (param_count(n, template),):
        raise ValueError(f"expected parameter vector of length {param_count(n, template)}")
    rp = theta[: b * c].reshape(b, c)
    block = theta[b * c : (b + 2 * a) * c].reshape(a, 2, c) if a else np.zeros((0, 2, c))
    qp = block[:, 0, :] + 1j * block[:, 1, :]
    off = (b + 2 * a) * c
    lam = theta[off : off + b]
    uv = theta[off + b :].reshape(a, 2) if a else np.zeros((0, 2))
    mu = uv[:, 0] + 1j * uv[:, 1]
    return rp, qp, lam, mu


def join_params(rp, qp, lam, mu) -> np.ndarray:
    parts = [np.asarray(rp, dtype=np.float64).ravel()]
    qp = np.asarray(qp, dtype=np.complex128)
    parts.append(np.stack([qp.real, qp.imag], axis=1).ravel() if qp.size else np.zeros(0))
    parts.append(np.asarray(lam, dtype=np.float64).ravel())
    mu = np.asarray(mu, dtype=np.complex128)
    parts.append(np.stack([mu.real, mu.imag], axis=1).ravel() if mu.size else np.zeros(0))
    return np.concatenate(parts)


def _batch_powers(points: np.ndarray, n: int, d: int, with_jac: bool = True):
    """Bombieri power vectors (npts, m) and Jacobians (npts, m, n+1)."""
    E = exponent_matrix(n, d)
    SC = _sqrt_multinomials(n, d)
    npts, c = points.shape
    m = E.shape[0]
    pows = points[:, :, None] ** np.arange(d + 1)
    cols = np.empty((npts, m, c), dtype=points.dtype)
    for i in range(c):
        cols[:, :, i] = pows[:, i, E[:, i]]
    W = SC * np.prod(cols, axis=2)
    if not with_jac:
        return W, None
    D = np.empty((npts, m, c), dtype=points.dtype)
    for i in range(c):
        e = E[:, i]
        down = np.where(e > 0, pows[:, i, np.maximum(e - 1, 0)], 0.0)
        others = np.prod(np.delete(cols, i, axis=2), axis=2)
        D[:, :, i] = SC * e * down * others
    return W, D


def _power_and_jacobian(coords: np.ndarray, n: int, d: int):
    """Single-point convenience wrapper around the batch computation."""
    W, D = _batch_powers(np.asarray(coords)[None, :], n, d)
    return W[0], D[0]


def _residual_jac(target_b: np.ndarray, n: int, d: int, template: Label, theta: np.ndarray):
    rp, qp, lam, mu = split_params(theta, n, template)
    a, b, c = template.a, template.b, n + 1
    m = target_b.size
    model = -target_b.astype(np.float64).copy()
    J = np.empty((m, theta.size), dtype=np.float64)
    off_coeff = (b + 2 * a) * c
    if b:
        Wr, Dr = _batch_powers(rp, n, d)
        model += lam @ Wr
        J[:, : b * c] = (lam[:, None, None] * Dr).transpose(1, 0, 2).reshape(m, b * c)
        J[:, off_coeff : off_coeff + b] = Wr.T
    if a:
        Wq, Dq = _batch_powers(qp, n, d)
        model += 2.0 * (mu.real @ Wq.real - mu.imag @ Wq.imag)
        muD = mu[:, None, None] * Dq
        block = np.concatenate([2.0 * muD.real, -2.0 * muD.imag], axis=2)  # (a, m, 2c)
        J[:, b * c : (b + 2 * a) * c] = block.transpose(1, 0, 2).reshape(m, 2 * a * c)
        cblock = np.stack([2.0 * Wq.real, -2.0 * Wq.imag], axis=2)  # (a, m, 2)
        J[:, off_coeff + b :] = cblock.transpose(1, 0, 2).reshape(m, 2 * a)
    return model, J


def residual_and_gradient(problem: DecompositionProblem, params: np.ndarray):
    """Residual vector and analytic Jacobian at a full parameter vector.

    The residual lives in the Bombieri-scaled coefficient basis; the
    Jacobian is exact (verified against central finite differences).
    """
    f = problem.f
    return _residual_jac(f.bombieri_vector().real, f.n, f.d, problem.template, params)


def _residual_only(target_b: np.ndarray, n: int, d: int, template: Label, theta: np.ndarray):
    rp, qp, lam, mu = split_params(theta, n, template)
    model = -target_b.astype(np.float64).copy()
    if len(rp):
        Wr, _ = _batch_powers(rp, n, d, with_jac=False)
        model += lam @ Wr
    if len(qp):
        Wq, _ = _batch_powers(qp, n, d, with_jac=False)
        model += 2.0 * (mu.real @ Wq.real - mu.imag @ Wq.imag)
    return model


# ---------------------------------------------------------------------------
# Levenberg-Marquardt over the gauged parameters
# ---------------------------------------------------------------------------


@dataclass
class LMFit:
    theta: np.ndarray
    residual: float          # relative to the target norm
    iterations: int
    history: list            # accepted residual norms, non-increasing
    converged: bool


def _gauge(theta: np.ndarray, n: int, d: int, template: Label) -> tuple[np.ndarray, np.ndarray]:
    """Rescale each point so its largest-modulus coordinate is exactly 1.

    Coefficients absorb the d-th power of the scale, leaving the model
    unchanged.  Returns the new parameters and the frozen-entry mask.
    """
    rp, qp, lam, mu = split_params(theta, n, template)
    a, b, c = template.a, template.b, n + 1
    rp, qp, lam, mu = rp.copy(), qp.copy(), lam.copy(), mu.copy()
    freeze = np.zeros(theta.size, dtype=bool)
    for i in range(b):
        g = int(np.argmax(np.abs(rp[i])))
        s = rp[i][g]
        if abs(s) > 1e-12:
            rp[i] = rp[i] / s
            rp[i][g] = 1.0
            lam[i] = lam[i] * s**d
        freeze[i * c + g] = True
    for j in range(a):
        g = int(np.argmax(np.abs(qp[j])))
        s = qp[j][g]
        if abs(s) > 1e-12:
            qp[j] = qp[j] / s
            qp[j][g] = 1.0
            mu[j] = mu[j] * s**d
        base = (b + 2 * j) * c
        freeze[base + g] = True          # Re of the gauge coordinate
        freeze[base + c + g] = True      # Im of the gauge coordinate
    return join_params(rp, qp, lam, mu), freeze


def _needs_regauge(theta: np.ndarray, n: int, template: Label, bound: float = 4.0) -> bool:
    rp, qp, _, _ = split_params(theta, n, template)
    for row in rp:
        if np.max(np.abs(row)) > bound:
            return True
    for row in qp:
        if np.max(np.abs(row)) > bound:
            return True
    return False


def _resolve_coefficients(target_b: np.ndarray, n: int, d: int, template: Label,
                          theta: np.ndarray) -> np.ndarray:
    """Replace the coefficient block by its exact least-squares solution.

    For fixed points the model is linear in the coefficients, so this is the
    global optimum over that block and never increases the residual.
    """
    rp, qp, _, _ = split_params(theta, n, template)
    x = _coefficient_lstsq(target_b, n, d, rp, qp)
    lam = x[: template.b]
    uv = x[template.b:].reshape(-1, 2)
    return join_params(rp, qp, lam, uv[:, 0] + 1j * uv[:, 1])


def _coefficient_lstsq(target_b: np.ndarray, n: int, d: int, rp: np.ndarray, qp: np.ndarray):
    cols = []
    if len(rp):
        Wr, _ = _batch_powers(rp, n, d, with_jac=False)
        cols.append(Wr.T)
    if len(qp):
        Wq, _ = _batch_powers(qp, n, d, with_jac=False)
        inter = np.stack([2.0 * Wq.real, -2.0 * Wq.imag], axis=2)
        cols.append(inter.transpose(1, 0, 2).reshape(target_b.size, -1))
    A = np.hstack(cols)
    x, *_ = np.linalg.lstsq(A, target_b, rcond=None)
    return x


def _lm_minimize(target_b: np.ndarray, n: int, d: int, template: Label,
                 theta0: np.ndarray, cfg: NLSConfig) -> LMFit:
    target_norm = float(np.linalg.norm(target_b))
    theta, freeze = _gauge(theta0, n, d, template)
    res, J = _residual_jac(target_b, n, d, template, theta)
    fnorm = float(np.linalg.norm(res))
    history = [fnorm]
    lam_damp = cfg.lambda_init
    nu = 2.0
    it = 0
    stagnation_mark = fnorm
    converged = fnorm <= cfg.residual_tol * target_norm
    while it < cfg.max_iters and not converged:
        it += 1
        if it % 120 == 0:
            if fnorm > 0.9 * stagnation_mark:
                break
            stagnation_mark = fnorm
        free = ~freeze
        Jf = J[:, free]
        g = Jf.T @ res
        if float(np.max(np.abs(g))) <= cfg.gradient_tol * max(1.0, fnorm):
            break
        A = Jf.T @ Jf
        diag = np.clip(np.diag(A), 1e-12, None)
        accepted = False
        for _ in range(40):
            try:
                delta = np.linalg.solve(A + lam_damp * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                lam_damp *= nu
                nu *= 2.0
                continue
            trial = theta.copy()
            trial[free] += delta
            res_t = _residual_only(target_b, n, d, template, trial)
            fnorm_t = float(np.linalg.norm(res_t))
            # Gain ratio: actual reduction over the reduction predicted by
            # the local quadratic model (Nielsen's damping update).
            predicted = float(delta @ (lam_damp * diag * delta - g))
            rho = (fnorm**2 - fnorm_t**2) / predicted if predicted > 0 else -1.0
            if fnorm_t < fnorm:
                theta, fnorm = trial, fnorm_t
                history.append(fnorm)
                lam_damp *= max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0) ** 3)
                lam_damp = max(lam_damp, 1e-14)
                nu = 2.0
                accepted = True
                break
            lam_damp *= nu
            nu *= 2.0
            if lam_damp > 1e14:
                break
        if not accepted:
            break
        # Variable-projection flavored hybrid: with the points fixed, the
        # coefficients are a linear problem; solving it exactly is monotone
        # and avoids slow zig-zagging along coefficient/point valleys.
        resolved = _resolve_coefficients(target_b, n, d, template, theta)
        res_r = _residual_only(target_b, n, d, template, resolved)
        fnorm_r = float(np.linalg.norm(res_r))
        if fnorm_r <= fnorm:
            theta, fnorm = resolved, fnorm_r
            history[-1] = fnorm
        if _needs_regauge(theta, n, template):
            theta, freeze = _gauge(theta, n, d, template)
        res, J = _residual_jac(target_b, n, d, template, theta)
        fnorm = float(np.linalg.norm(res))
        converged = fnorm <= cfg.residual_tol * target_norm
    return LMFit(theta, fnorm / target_norm, it, history, converged)


# ---------------------------------------------------------------------------
# template search
# ---------------------------------------------------------------------------


def secant_membership_filter(f: HomogeneousForm, k: int, rank_tol: float = RANK_TOL) -> bool:
    """Necessary condition for a weight-k decomposition to exist.

    False (impossible) when some catalecticant has numeric rank above k;
    True never asserts membership.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    for j in range(1, f.d):
        if numeric_rank(catalecticant(f, j).matrix, rank_tol) > k:
            return False
    return True


def _random_unit_real(rng, c: int) -> np.ndarray:
    v = rng.standard_normal(c)
    return v / np.linalg.norm(v)


def _random_unit_complex(rng, c: int) -> np.ndarray:
    v = rng.standard_normal(c) + 1j * rng.standard_normal(c)
    return v / np.linalg.norm(v)


def _validate_fit(f: HomogeneousForm, template: Label, theta: np.ndarray,
                  cfg: NLSConfig, tau_real: float, tau_pair: float,
                  min_coeff_rel: float):
    """Turn a converged iterate into (LabeledSet, certificate), or None.

    Rejects fits whose pair points drifted within tau_real of real, whose
    points collapsed, or whose certificate carries a negligible addendum
    (the label must be genuine, not a padded smaller one).
    """
    rp, qp, _, _ = split_params(theta, f.n, template)
    try:
        real_pts = [ProjectivePoint(row) for row in rp]
        pair_pts = [ProjectivePoint(row) for row in qp]
    except ValueError:
        return None
    if any(p.is_real_within(tau_real) for p in pair_pts):
        return None
    orbit = real_pts + [x for p in pair_pts for x in (p, p.conjugate())]
    try:
        S = label_of(orbit, tau_real, tau_pair)
        cert = span_membership(f, S, tol=cfg.residual_tol)
    except EngineError:
        return None
    if S.label != template:
        return None
    norm_f = f.bombieri_norm()
    for lam, p in zip(cert.real_coeffs, S.real_points):
        w = power_vector(p.real_coords, f.d)
        if abs(lam) * float(np.linalg.norm(w)) < min_coeff_rel * norm_f:
            return None
    for mu, p in zip(cert.pair_coeffs, S.pairs):
        w = power_vector(p.coords, f.d)
        addend = 2.0 * (mu.real * w.real - mu.imag * w.imag)
        if float(np.linalg.norm(addend)) < min_coeff_rel * norm_f:
            return None
    return S, cert


def _perturbed_iterate(theta: np.ndarray, rng, n: int, d: int, template: Label,
                       target_b: np.ndarray, scale: float = 0.15) -> np.ndarray:
    """Multiplicative point noise with exactly re-solved coefficients."""
    rp, qp, lam, mu = split_params(theta, n, template)
    rp = rp * (1.0 + scale * rng.standard_normal(rp.shape))
    if qp.size:
        qp = qp * (1.0 + scale * (rng.standard_normal(qp.shape) + 1j * rng.standard_normal(qp.shape)))
    return _resolve_coefficients(target_b, n, d, template, join_params(rp, qp, lam, mu))


def _restart_search(f: HomogeneousForm, template: Label, cfg: NLSConfig, rng,
                    target_b: np.ndarray, theta0: np.ndarray | None = None,
                    probes: int = 10, probe_iters: int = 40, hops: int = 3):
    """One restart: short probes pick a basin, full LM polishes, perturbation
    hops escape shallow minima.  Returns the best LMFit seen."""
    if theta0 is None:
        cands = []
        probe_cfg = replace(cfg, max_iters=probe_iters)
        for _ in range(probes):
            th = _initial_params_from_target(f, template, rng, target_b)
            pf = _lm_minimize(target_b, f.n, f.d, template, th, probe_cfg)
            if pf.converged:
                return pf
            cands.append((pf.residual, pf.theta))
        theta0 = min(cands, key=lambda t: t[0])[1]
    fit = _lm_minimize(target_b, f.n, f.d, template, theta0, cfg)
    for _ in range(hops):
        if fit.converged or fit.residual > 3e-2:
            break
        theta = _perturbed_iterate(fit.theta, rng, f.n, f.d, template, target_b)
        refit = _lm_minimize(target_b, f.n, f.d, template, theta, cfg)
        if refit.converged or refit.residual < fit.residual:
            fit = refit
    return fit


def decompose_with_template(
    problem: DecompositionProblem,
    tau_real: float = TAU_REAL,
    tau_pair: float = TAU_PAIR,
    min_coeff_rel: float = 1e-6,
):
    """Levenberg-Marquardt search for a decomposition with the exact template.

    Runs ``restarts`` deterministic random initializations; a restart
    succeeds when the relative residual meets residual_tol and the resulting
    point set carries exactly the template's label.  Raises
    DecompositionFailure with the best residual otherwise.
    """
    f, template, cfg = problem.f, problem.template, problem.config
    if not secant_membership_filter(f, template.weight):
        raise DecompositionFailure(
            np.inf, reason=f"catalecticant rank exceeds weight {template.weight}",
            template=template,
        )
    target_b = f.bombieri_vector().real
    best = np.inf
    for restart in range(cfg.restarts):
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(restart,)))
        fit = _restart_search(f, template, cfg, rng, target_b)
        best = min(best, fit.residual)
        if fit.converged:
            result = _validate_fit(f, template, fit.theta, cfg, tau_real, tau_pair, min_coeff_rel)
            if result is not None:
                return result
    raise DecompositionFailure(best, template=template)


def decompose_weight(
    f: HomogeneousForm,
    w: int,
    skip_all_real: bool = False,
    config: NLSConfig = NLSConfig(),
    tau_real: float = TAU_REAL,
    tau_pair: float = TAU_PAIR,
):
    """First success over the weight-w templates, enumerated in decreasing b."""
    if w < 1:
        raise ValueError("weight must be >= 1")
    if not secant_membership_filter(f, w):
        raise DecompositionFailure(np.inf, reason=f"catalecticant rank exceeds weight {w}")
    best = np.inf
    for template in weight_templates(w, skip_all_real):
        try:
            return decompose_with_template(
                DecompositionProblem(f, template, config), tau_real, tau_pair
            )
        except DecompositionFailure as exc:
            best = min(best, exc.best_residual)
    raise DecompositionFailure(best, reason=f"all weight-{w} templates failed")


def join_decompose(
    f: HomogeneousForm,
    k: int,
    config: NLSConfig = NLSConfig(),
    tau_real: float = TAU_REAL,
    tau_pair: float = TAU_PAIR,
    prefit_iters: int = 80,
):
    """Weight-(k+1) search seeded through the join construction.

    For each weight-(k-1) template (a, b): perturb the target by a random
    conjugate-pair addendum, fit (a, b) to the perturbed target as far as the
    iteration budget allows, then optimize the full (a+1, b) model on the true
    target starting from that iterate plus the seeded pair.

    Targets that may already sit on the smaller secant stratum (catalecticant
    ranks do not rule out weight k-1) get an honest smaller-weight attempt
    first, so degenerate inputs come back with their true label instead of a
    padded one; the filter keeps this pre-step free for generic targets.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    target_b = f.bombieri_vector().real
    norm_f = float(np.linalg.norm(target_b))
    best = np.inf
    cfg = config
    if secant_membership_filter(f, k - 1):
        try:
            return decompose_weight(f, k - 1, skip_all_real=False, config=cfg,
                                    tau_real=tau_real, tau_pair=tau_pair)
        except DecompositionFailure as exc:
            best = exc.best_residual
    for t_idx, small in enumerate(weight_templates(k - 1)):
        template = Label(small.a + 1, small.b)
        prefit_cfg = replace(cfg, max_iters=prefit_iters)
        for restart in range(cfg.restarts):
            rng = np.random.default_rng(
                np.random.SeedSequence(cfg.seed, spawn_key=(t_idx, restart))
            )
            y = _random_unit_complex(rng, f.n + 1)
            y = y / y[np.argmax(np.abs(y))]
            phase = np.exp(2j * np.pi * rng.uniform())
            Wy, _ = _power_and_jacobian(y, f.n, f.d)
            mu0 = 0.2 * norm_f * phase / max(float(np.linalg.norm(Wy)), 1e-12)
            pair_addendum = 2.0 * (mu0 * Wy).real
            perturbed = target_b - pair_addendum
            theta_small = _initial_params_from_target(f, small, rng, perturbed)
            prefit = _lm_minimize(perturbed, f.n, f.d, small, theta_small, prefit_cfg)
            rp, qp, lam, mu = split_params(prefit.theta, f.n, small)
            qp_ext = np.vstack([qp, y[None, :]]) if qp.size else y[None, :].copy()
            mu_ext = np.concatenate([mu, [mu0]])
            theta0 = join_params(rp, qp_ext, lam, mu_ext)
            fit = _restart_search(f, template, cfg, rng, target_b, theta0=theta0)
            best = min(best, fit.residual)
            if fit.converged:
                result = _validate_fit(f, template, fit.theta, cfg, tau_real, tau_pair, 1e-6)
                if result is not None:
                    return result
    raise DecompositionFailure(best, reason=f"join search at weight {k + 1} failed")


def _initial_params_from_target(f: HomogeneousForm, template: Label, rng,
                                target_b: np.ndarray) -> np.ndarray:
    """Random points with coefficients fitted to an explicit target vector."""
    c = f.n + 1
    rp = np.array([_random_unit_real(rng, c) for _ in range(template.b)]).reshape(template.b, c)
    qp = np.array([_random_unit_complex(rng, c) for _ in range(template.a)]).reshape(template.a, c)
    x = _coefficient_lstsq(target_b, f.n, f.d, rp, qp)
    lam = x[: template.b]
    uv = x[template.b :].reshape(-1, 2)
    return join_params(rp, qp, lam, uv[:, 0] + 1j * uv[:, 1])


def conjugate_only_decompose(
    f: HomogeneousForm,
    k: int,
    config: NLSConfig = NLSConfig(),
    tau_real: float = TAU_REAL,
    tau_pair: float = TAU_PAIR,
):
    """Decomposition with no real points: template ((k+2)/2, 0) for even k."""
    if k < 0 or k % 2 != 0:
        raise ValueError("k must be a non-negative even integer")
    template = Label(k // 2 + 1, 0)
    return decompose_with_template(
        DecompositionProblem(f, template, config), tau_real, tau_pair
    )


def conjugate_only_flags(k: int) -> tuple[str, ...]:
    return ("outside-theorem-hypotheses",) if k < 4 else ()
