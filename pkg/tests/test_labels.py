import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waring_labels import (
    DuplicatePoint,
    HomogeneousForm,
    Label,
    LabeledSet,
    NotInSpan,
    NotSigmaInvariant,
    ProjectivePoint,
    SpanCertificate,
    label_of,
    reconstruct,
    span_membership,
    span_membership_point,
)
from waring_labels.labels import reconstruct_point

from conftest import binary_form, plant_labeled_form


class TestLabel:
    def test_weights(self):
        assert Label(1, 0).weight == 2
        assert Label(0, 2).weight == 2
        assert Label(2, 1).weight == 5

    def test_invalid(self):
        with pytest.raises(ValueError):
            Label(0, 0)
        with pytest.raises(ValueError):
            Label(-1, 2)


class TestLabelOf:
    def test_conjugate_pair(self):
        S = label_of([ProjectivePoint([1.0, 1j]), ProjectivePoint([1.0, -1j])])
        assert S.label == Label(1, 0)
        assert S.pairs[0].coords[1].imag > 0  # canonical representative

    def test_two_reals(self):
        S = label_of([ProjectivePoint([1.0, 0.0]), ProjectivePoint([0.0, 1.0])])
        assert S.label == Label(0, 2)

    def test_not_sigma_invariant(self):
        with pytest.raises(NotSigmaInvariant):
            label_of([ProjectivePoint([1.0, 1j]), ProjectivePoint([1.0, 2j])])

    def test_duplicate(self):
        with pytest.raises(DuplicatePoint):
            label_of([ProjectivePoint([1.0, 1.0]), ProjectivePoint([2.0, 2.0])])

    def test_weight_counts_cardinality(self, rng):
        for _ in range(30):
            a, b = int(rng.integers(0, 3)), int(rng.integers(0, 4))
            if (a, b) == (0, 0):
                continue
            _, orbit = plant_labeled_form(rng, 2, 3, Label(a, b))
            S = label_of(orbit)
            assert S.label == Label(a, b)
            assert 2 * S.label.a + S.label.b == len(S.all_points()) == S.weight
            # re-running on the flattened set reproduces the same label
            assert label_of(S.all_points()).label == S.label


class TestSpanMembership:
    def test_sum_of_cubes(self):
        f = binary_form(3, {(3, 0): 1, (0, 3): 1})
        S = label_of([ProjectivePoint([1.0, 0.0]), ProjectivePoint([0.0, 1.0])])
        cert = span_membership(f, S)
        assert np.allclose(sorted(cert.real_coeffs), [1.0, 1.0])
        assert cert.residual <= 1e-12

    def test_pair_membership_with_expansion_oracle(self):
        # x^3 - 3xy^2 = 2 Re(mu (x + iy)^3); matching coefficients by hand
        # against the canonical representative [1, i] gives mu = 1/2.
        f = binary_form(3, {(3, 0): 1, (1, 2): -3})
        S = label_of([ProjectivePoint([1j, 1.0]), ProjectivePoint([-1j, 1.0])])
        cert = span_membership(f, S)
        assert cert.residual <= 1e-12
        assert abs(cert.pair_coeffs[0] - 0.5) < 1e-10

    def test_not_in_span(self):
        f = binary_form(3, {(3, 0): 1})
        S = label_of([ProjectivePoint([0.0, 1.0])])
        with pytest.raises(NotInSpan) as err:
            span_membership(f, S)
        assert err.value.residual > 0.5

    def test_rejects_complex_target(self):
        f = HomogeneousForm(1, 2, np.array([1j, 0, 0]))
        S = label_of([ProjectivePoint([1.0, 0.0])])
        with pytest.raises(ValueError):
            span_membership(f, S)

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_scaling_invariance(self, seed):
        rng = np.random.default_rng(seed)
        f, orbit = plant_labeled_form(rng, 1, 4, Label(1, 1))
        S = label_of(orbit)
        cert = span_membership(f, S)
        factor = float(rng.uniform(0.1, 10.0)) * (1 if rng.random() < 0.5 else -1)
        cert2 = span_membership(f.scale(factor), S)
        assert np.allclose(cert2.real_coeffs, factor * cert.real_coeffs, atol=1e-9)
        assert np.allclose(cert2.pair_coeffs, factor * cert.pair_coeffs, atol=1e-9)


class TestSpanMembershipPoint:
    def test_pair_spans_real_point(self):
        # q = [1,0,0] = 2 Re(mu p) with p the canonical representative
        # [1, i, 0]: solving [2 Re(mu), -2 Im(mu), 0] = [1, 0, 0] gives 1/2.
        q = ProjectivePoint([1.0, 0.0, 0.0])
        S = label_of([ProjectivePoint([1j, 1.0, 0.0]), ProjectivePoint([-1j, 1.0, 0.0])])
        cert = span_membership_point(q, S)
        assert cert.residual <= 1e-12
        assert abs(cert.pair_coeffs[0] - 0.5) < 1e-10
        rec = reconstruct_point(S, cert)
        assert np.allclose(rec / np.linalg.norm(rec), q.real_coords / np.linalg.norm(q.real_coords))

    def test_midpoint(self):
        q = ProjectivePoint([1.0, 0.0, 0.0])
        S = label_of([ProjectivePoint([1.0, 1.0, 0.0]), ProjectivePoint([1.0, -1.0, 0.0])])
        cert = span_membership_point(q, S)
        assert np.allclose(cert.real_coeffs, [0.5, 0.5])

    def test_outside_line(self):
        q = ProjectivePoint([0.0, 0.0, 1.0])
        S = label_of([ProjectivePoint([1.0, 0.0, 0.0]), ProjectivePoint([0.0, 1.0, 0.0])])
        with pytest.raises(NotInSpan):
            span_membership_point(q, S)


class TestReconstruct:
    def test_round_trip_pair(self):
        f = binary_form(3, {(3, 0): 1, (1, 2): -3})
        S = label_of([ProjectivePoint([1j, 1.0]), ProjectivePoint([-1j, 1.0])])
        cert = span_membership(f, S)
        g = reconstruct(S, cert, 3)
        assert np.linalg.norm(g.coeffs - f.coeffs) <= 1e-10 * np.linalg.norm(f.coeffs)

    def test_explicit_sum(self):
        S = label_of([ProjectivePoint([1.0, 0.0]), ProjectivePoint([0.0, 1.0])])
        cert = SpanCertificate(np.array([1.0, 1.0]), np.zeros(0, dtype=complex), 0.0)
        g = reconstruct(S, cert, 3)
        assert np.allclose(g.coeffs, [1, 0, 0, 1])

    def test_zero_certificate_rejected(self):
        S = label_of([ProjectivePoint([1.0, 0.0])])
        cert = SpanCertificate(np.array([0.0]), np.zeros(0, dtype=complex), 0.0)
        with pytest.raises(ValueError):
            reconstruct(S, cert, 3)

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_reconstruction_exactly_real(self, seed):
        rng = np.random.default_rng(seed)
        f, orbit = plant_labeled_form(rng, 2, 4, Label(2, 1))
        S = label_of(orbit)
        cert = span_membership(f, S)
        g = reconstruct(S, cert, 4)
        assert np.all(g.coeffs.imag == 0.0)  # exact, not merely small
        assert np.linalg.norm(g.coeffs - f.coeffs) <= 1e-8 * np.linalg.norm(f.coeffs)
