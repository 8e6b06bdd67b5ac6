import numpy as np
import pytest

from waring_labels import (
    DecompositionFailure,
    DecompositionProblem,
    HomogeneousForm,
    Label,
    NLSConfig,
    ProjectivePoint,
    conjugate_only_decompose,
    decompose_weight,
    decompose_with_template,
    generic_rank,
    generic_rank_flags,
    join_decompose,
    label_of,
    reconstruct,
    residual_and_gradient,
    secant_membership_filter,
    weight_templates,
)
from waring_labels.decompose import (
    _lm_minimize,
    _initial_params_from_target,
    join_params,
    param_count,
    split_params,
)

from conftest import binary_form, build_from_configuration, gaussian_form, plant_labeled_form


class TestGenericRank:
    def test_values(self):
        assert generic_rank(1, 3) == 2
        assert generic_rank(2, 5) == 7  # 21 coefficients over 3 variables
        assert generic_rank(1, 5) == 3

    def test_flags(self):
        assert "uniqueness-exception" in generic_rank_flags(2, 6)
        assert "uniqueness-exception" in generic_rank_flags(3, 4)
        assert "defective" in generic_rank_flags(2, 4)
        assert "outside-theorem-hypotheses" in generic_rank_flags(2, 2)
        assert generic_rank_flags(2, 5) == ()


class TestTemplates:
    def test_enumeration_order(self):
        assert [(t.a, t.b) for t in weight_templates(4)] == [(0, 4), (1, 2), (2, 0)]
        assert [(t.a, t.b) for t in weight_templates(4, skip_all_real=True)] == [(1, 2), (2, 0)]
        assert [(t.a, t.b) for t in weight_templates(1)] == [(0, 1)]


class TestResidualAndGradient:
    def test_zero_residual_at_exact_parameters(self, rng):
        f, orbit = plant_labeled_form(rng, 2, 4, Label(1, 2))
        S = label_of(orbit)
        from waring_labels import span_membership

        cert = span_membership(f, S)
        rp = np.array([p.real_coords for p in S.real_points])
        qp = np.array([p.coords for p in S.pairs])
        theta = join_params(rp, qp, cert.real_coeffs, cert.pair_coeffs)
        res, _ = residual_and_gradient(DecompositionProblem(f, Label(1, 2)), theta)
        assert np.linalg.norm(res) <= 1e-9 * f.bombieri_norm()

    def test_all_zero_coefficients_give_minus_target(self, rng):
        f = gaussian_form(rng, 2, 4)
        template = Label(1, 1)
        theta = rng.standard_normal(param_count(2, template))
        rp, qp, lam, mu = split_params(theta, 2, template)
        theta0 = join_params(rp, qp, np.zeros_like(lam), np.zeros_like(mu))
        res, _ = residual_and_gradient(DecompositionProblem(f, template), theta0)
        assert np.allclose(res, -f.bombieri_vector().real)

    def test_jacobian_matches_central_differences(self, rng):
        from waring_labels.algebra import exponents

        for n, d, template in [(1, 5, Label(1, 2)), (2, 4, Label(2, 1)), (2, 5, Label(2, 3))]:
            f = gaussian_form(rng, n, d)
            problem = DecompositionProblem(f, template)
            theta = rng.standard_normal(param_count(n, template))
            _, J = residual_and_gradient(problem, theta)
            h = 1e-6
            Jfd = np.empty_like(J)
            for i in range(theta.size):
                tp, tm = theta.copy(), theta.copy()
                tp[i] += h
                tm[i] -= h
                Jfd[:, i] = (
                    residual_and_gradient(problem, tp)[0]
                    - residual_and_gradient(problem, tm)[0]
                ) / (2 * h)
            rel = np.max(np.abs(J - Jfd)) / np.max(np.abs(Jfd))
            assert rel <= 1e-5

    def test_shape_mismatch(self, rng):
        f = gaussian_form(rng, 2, 4)
        with pytest.raises(ValueError):
            residual_and_gradient(DecompositionProblem(f, Label(1, 1)), np.zeros(3))


class TestLMContract:
    def test_accepted_steps_never_increase_residual(self, rng):
        for _ in range(10):
            f = gaussian_form(rng, 2, 4)
            template = Label(2, 2)
            tb = f.bombieri_vector().real
            theta0 = _initial_params_from_target(f, template, rng, tb)
            fit = _lm_minimize(tb, 2, 4, template, theta0, NLSConfig(max_iters=150))
            hist = np.array(fit.history)
            assert np.all(np.diff(hist) <= 1e-15)


class TestSecantFilter:
    def test_power_is_possible_at_one(self, rng):
        p = ProjectivePoint(rng.standard_normal(3))
        f = build_from_configuration([p], [], [1.0], [], 5)
        assert secant_membership_filter(f, 1)

    def test_generic_sextic_impossible_at_two(self, rng):
        f = gaussian_form(rng, 1, 6)
        assert not secant_membership_filter(f, 2)

    def test_large_k_always_possible(self, rng):
        f = gaussian_form(rng, 2, 4)
        assert secant_membership_filter(f, 6)

    def test_soundness_on_constructed_ranks(self, rng):
        for _ in range(100):
            s = int(rng.integers(1, 5))
            templates = [t for t in weight_templates(s)]
            template = templates[int(rng.integers(0, len(templates)))]
            f, _ = plant_labeled_form(rng, 2, 5, template)
            for k in range(s, 8):
                assert secant_membership_filter(f, k)


class TestDecomposeWithTemplate:
    def test_recovers_sum_of_cubes(self):
        f = binary_form(3, {(3, 0): 1, (0, 3): 1})
        S, cert = decompose_with_template(
            DecompositionProblem(f, Label(0, 2), NLSConfig(seed=1))
        )
        assert S.label == Label(0, 2)
        pts = sorted(tuple(np.round(np.abs(p.coords), 5)) for p in S.real_points)
        assert pts == [(0.0, 1.0), (1.0, 0.0)]

    def test_planted_recovery(self, rng):
        for trial in range(6):
            template = [Label(2, 3), Label(1, 2), Label(2, 0)][trial % 3]
            f, _ = plant_labeled_form(rng, 2, 5, template)
            S, cert = decompose_with_template(
                DecompositionProblem(f, template, NLSConfig(seed=trial))
            )
            assert S.label == template
            assert cert.residual <= 1e-6
            g = reconstruct(S, cert, 5)
            rel = np.linalg.norm(g.coeffs - f.coeffs) / np.linalg.norm(f.coeffs)
            assert rel <= 1e-5

    def test_filter_failure_is_fast(self, rng):
        f = gaussian_form(rng, 2, 5)
        with pytest.raises(DecompositionFailure) as err:
            decompose_with_template(DecompositionProblem(f, Label(1, 1), NLSConfig(seed=0)))
        assert "catalecticant" in err.value.reason


class TestDecomposeWeight:
    def test_binary_quintic_weight_three(self, rng):
        from waring_labels import complex_rank_binary, sylvester_decompose

        f = gaussian_form(rng, 1, 5)
        S, cert = decompose_weight(f, 3, config=NLSConfig(seed=3))
        assert S.weight == 3
        assert cert.residual <= 1e-6
        r, _ = complex_rank_binary(f)
        assert r == 3  # cross-check against the Sylvester engine

    def test_weight_one_on_generic_form_fails(self, rng):
        f = gaussian_form(rng, 2, 4)
        with pytest.raises(DecompositionFailure):
            decompose_weight(f, 1, config=NLSConfig(seed=0, restarts=2))


class TestConjugateOnly:
    def test_pair_cubic_succeeds(self):
        f = binary_form(3, {(3, 0): 1, (1, 2): -3})
        S, cert = conjugate_only_decompose(f, 0, config=NLSConfig(seed=2))
        assert S.label == Label(1, 0)
        assert cert.residual <= 1e-6

    def test_real_cubic_fails_at_pair_template(self):
        # x^3 + y^3 has a unique 2-point decomposition and it is real, so no
        # exact (1, 0) representation exists
        f = binary_form(3, {(3, 0): 1, (0, 3): 1})
        with pytest.raises(DecompositionFailure):
            conjugate_only_decompose(f, 0, config=NLSConfig(seed=2, restarts=4))

    def test_odd_k_rejected(self, rng):
        f = gaussian_form(rng, 2, 4)
        with pytest.raises(ValueError):
            conjugate_only_decompose(f, 3)


class TestJoinDecompose:
    def test_generic_quintic_weight_seven(self, rng):
        hits = 0
        for trial in range(3):
            f = gaussian_form(rng, 2, 5)
            try:
                S, cert = join_decompose(f, 6, config=NLSConfig(seed=trial, restarts=4))
            except DecompositionFailure:
                continue
            assert S.weight == 7
            assert S.label.a >= 1  # the all-real template is never produced
            assert cert.residual <= 1e-6
            assert label_of(S.all_points()).label == S.label
            hits += 1
        assert hits >= 1

    def test_degenerate_input_falls_back_to_smaller_label(self, rng):
        # a weight-4 form pushed through the weight-6 join search must come
        # back with its honest weight-4 label, not a padded one
        template = Label(1, 2)
        f, _ = plant_labeled_form(rng, 2, 5, template)
        S, cert = join_decompose(f, 5, config=NLSConfig(seed=0, restarts=2))
        assert S.weight == 4
        assert cert.residual <= 1e-6

    def test_septic_cross_check(self, rng):
        # binary septics have filling rank 4; the weight-5 join output must
        # still reconstruct even though Sylvester already achieves weight 4
        from waring_labels import sylvester_decompose

        f = gaussian_form(rng, 1, 7)
        S4, _ = sylvester_decompose(f)
        assert S4.weight == 4
        S, cert = join_decompose(f, 4, config=NLSConfig(seed=1, restarts=6))
        g = reconstruct(S, cert, 7)
        rel = np.linalg.norm(g.coeffs - f.coeffs) / np.linalg.norm(f.coeffs)
        assert rel <= 1e-5
        assert S.weight in (4, 5)
