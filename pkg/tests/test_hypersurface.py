import numpy as np
import pytest

from waring_labels import (
    HomogeneousForm,
    HypersurfaceInstance,
    Label,
    ProjectivePoint,
    RetriesExhausted,
    evaluate,
    find_label_hypersurface,
    restrict_to_line,
)
from waring_labels.labels import reconstruct_point

from conftest import gaussian_form


def conic():
    return HomogeneousForm.from_coeff_dict(2, 2, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})


def circle():
    return HomogeneousForm.from_coeff_dict(2, 2, {(2, 0, 0): -1, (0, 2, 0): 1, (0, 0, 2): 1})


class TestRestrictToLine:
    def test_real_point_free_conic(self):
        g = restrict_to_line(conic(), ProjectivePoint([1.0, 0, 0]), ProjectivePoint([0, 1.0, 0]))
        assert np.allclose(g.coeffs, [1, 0, 1])  # t^2 + s^2

    def test_circle(self):
        g = restrict_to_line(circle(), ProjectivePoint([1.0, 0, 0]), ProjectivePoint([0, 1.0, 0]))
        assert np.allclose(g.coeffs, [-1, 0, 1])  # s^2 - t^2

    def test_coincident_points_rejected(self):
        q = ProjectivePoint([1.0, 0, 0])
        with pytest.raises(ValueError):
            restrict_to_line(conic(), q, q)

    def test_against_evaluation_oracle(self, rng):
        # coefficients must reproduce F(t q + s v) pointwise
        for _ in range(25):
            d = int(rng.integers(2, 7))
            F = gaussian_form(rng, 2, d)
            q = ProjectivePoint(rng.standard_normal(3))
            v = ProjectivePoint(rng.standard_normal(3))
            g = restrict_to_line(F, q, v)
            assert g.is_real
            for _ in range(4):
                t, s = rng.standard_normal(2)
                # both sides evaluated on un-normalized representatives
                scale_g = complex(
                    sum(
                        c * t ** a[0] * s ** a[1]
                        for a, c in zip([(d - j, j) for j in range(d + 1)], g.coeffs)
                    )
                )
                direct = complex(
                    sum(
                        c * np.prod((t * q.real_coords + s * v.real_coords) ** np.array(a))
                        for a, c in F.to_coeff_dict().items()
                    )
                )
                assert abs(scale_g - direct) <= 1e-9 * max(1.0, abs(direct))


class TestFindLabel:
    def test_real_point_free_conic_gives_pair(self, rng):
        inst = HypersurfaceInstance(conic(), ProjectivePoint([1.0, 0, 0]))
        S, cert = find_label_hypersurface(inst, rng)
        assert S.label == Label(1, 0)
        assert cert.residual <= 1e-10
        rec = reconstruct_point(S, cert)
        rec /= np.linalg.norm(rec)
        assert np.allclose(np.abs(rec), [1, 0, 0], atol=1e-9)

    def test_circle_gives_two_reals(self, rng):
        inst = HypersurfaceInstance(circle(), ProjectivePoint([1.0, 0, 0]))
        S, cert = find_label_hypersurface(inst, rng)
        assert S.label == Label(0, 2)
        assert cert.residual <= 1e-10

    def test_point_on_surface(self, rng):
        inst = HypersurfaceInstance(circle(), ProjectivePoint([1.0, 1.0, 0.0]))
        S, cert = find_label_hypersurface(inst, rng)
        assert S.label == Label(0, 1)
        assert cert.residual == 0.0

    def test_prefer_pair_flips_choice(self):
        # the circle meets a generic real line in two real points, but with
        # prefer_pair a conjugate pair must be returned when one exists;
        # through [1,0,0] every real line meets the circle in two real
        # points, so use a quartic with mixed intersections instead
        F = HomogeneousForm.from_coeff_dict(
            2, 4, {(4, 0, 0): -1, (0, 4, 0): 1, (0, 0, 4): 1, (2, 2, 0): 1}
        )
        q = ProjectivePoint([1.0, 0.0, 0.0])
        rng1 = np.random.default_rng(5)
        S1, _ = find_label_hypersurface(HypersurfaceInstance(F, q), rng1)
        rng2 = np.random.default_rng(5)
        S2, _ = find_label_hypersurface(HypersurfaceInstance(F, q), rng2, prefer_pair=True)
        assert S1.label == Label(0, 2)
        assert S2.label == Label(1, 0)

    def test_degenerate_surface_exhausts_retries(self, rng):
        # a double line meets every line in a double point: never transversal
        # (the base point must be off the line, or the singleton label wins)
        F = HomogeneousForm.from_coeff_dict(2, 2, {(0, 2, 0): 1})
        inst = HypersurfaceInstance(F, ProjectivePoint([0.0, 1.0, 0.0]))
        with pytest.raises(RetriesExhausted):
            find_label_hypersurface(inst, rng, max_retries=10)

    def test_degree_one_rejected(self):
        F = HomogeneousForm.from_coeff_dict(2, 1, {(1, 0, 0): 1})
        with pytest.raises(ValueError):
            HypersurfaceInstance(F, ProjectivePoint([0.0, 1.0, 0.0]))

    def test_trichotomy_and_on_surface_residuals(self, rng):
        seen = set()
        for ci in range(20):
            d = 2 + ci % 5
            F = gaussian_form(rng, 2, d)
            nf = F.bombieri_norm()
            for _ in range(25):
                q = ProjectivePoint(rng.standard_normal(3))
                S, cert = find_label_hypersurface(HypersurfaceInstance(F, q), rng)
                lab = (S.label.a, S.label.b)
                seen.add(lab)
                assert lab in {(1, 0), (0, 2), (0, 1)}
                assert cert.residual <= 1e-8
                for p in S.all_points():
                    val = abs(evaluate(F, p))
                    assert val <= 1e-8 * nf * float(np.linalg.norm(p.coords)) ** d
        assert (1, 0) in seen and (0, 2) in seen

    def test_determinism_with_seeded_rng(self):
        F = gaussian_form(np.random.default_rng(3), 2, 4)
        q = ProjectivePoint([1.0, 0.25, -0.5])
        out = []
        for _ in range(2):
            rng = np.random.default_rng(42)
            S, cert = find_label_hypersurface(HypersurfaceInstance(F, q), rng)
            out.append((S.label, tuple(np.round(cert.real_coeffs, 12).tolist())))
        assert out[0] == out[1]
