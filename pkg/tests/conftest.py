import numpy as np
import pytest

from waring_labels import HomogeneousForm, Label, ProjectivePoint, power_of_linear_form


def binary_form(d, mapping):
    return HomogeneousForm.from_coeff_dict(1, d, mapping)


def gaussian_form(rng, n, d):
    from waring_labels.algebra import exponents

    return HomogeneousForm(n, d, rng.standard_normal(len(exponents(n, d))))


def build_from_configuration(real_points, pair_points, real_coeffs, pair_coeffs, d):
    """Real form from an explicit labeled configuration (real arithmetic only)."""
    acc = None
    for lam, p in zip(real_coeffs, real_points):
        term = lam * power_of_linear_form(p, d).coeffs.real
        acc = term if acc is None else acc + term
    for mu, p in zip(pair_coeffs, pair_points):
        w = power_of_linear_form(p, d).coeffs
        term = 2.0 * (mu.real * w.real - mu.imag * w.imag)
        acc = term if acc is None else acc + term
    n = (real_points + pair_points)[0].dim
    return HomogeneousForm(n, d, acc)


def plant_labeled_form(rng, n, d, template: Label, sep=0.35, min_coeff=0.2):
    """Separation-conditioned random decomposition; returns (form, points)."""
    while True:
        pts_r = [ProjectivePoint(rng.standard_normal(n + 1)) for _ in range(template.b)]
        pts_p = [
            ProjectivePoint(rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1))
            for _ in range(template.a)
        ]
        orbit = pts_r + [x for p in pts_p for x in (p, p.conjugate())]
        if any(
            orbit[i].distance(orbit[j]) <= sep
            for i in range(len(orbit))
            for j in range(i + 1, len(orbit))
        ):
            continue
        lam = rng.standard_normal(template.b)
        mu = rng.standard_normal(template.a) + 1j * rng.standard_normal(template.a)
        if (lam.size and np.min(np.abs(lam)) < min_coeff) or (
            mu.size and np.min(np.abs(mu)) < min_coeff
        ):
            continue
        f = build_from_configuration(pts_r, pts_p, lam, mu, d)
        return f, orbit


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
