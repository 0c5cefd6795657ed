"""
Tests for matrix polynomials, projective points and coefficient basis changes.
"""
import math

import numpy as np
import pytest

from pevcond.core.matpoly import (
    BinaryFormBasis,
    InvalidMatrixPolynomial,
    MatrixPolynomial,
    ProjectivePoint,
    SingularTransform,
    apply_coefficient_map,
    elementary_direction,
    evaluate,
    evaluate_partials,
    frobenius_norm,
    monomial_weights,
    orthogonal_transform,
    perturbed,
    random_orthogonal_matrix,
    scale_coeffs,
)


@pytest.fixture
def diag_example():
    """A_0 = diag(2, 3), A_1 = -I: eigenvalues [2:1] and [3:1]"""
    return MatrixPolynomial.from_matrices([np.diag([2.0, 3.0]), -np.eye(2)])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


class TestProjectivePoint:
    """Tests for points of the real projective line"""

    def test_from_homogeneous_canonicalizes(self):
        """Test that homogeneous coordinates are normalized and given beta > 0"""
        pt = ProjectivePoint.from_homogeneous(-2.0, -1.0)

        assert pt.alpha == pytest.approx(2.0 / math.sqrt(5.0), abs=1e-15)
        assert pt.beta == pytest.approx(1.0 / math.sqrt(5.0), abs=1e-15)
        assert pt.is_canonical

    def test_point_at_infinity(self):
        """Test that [-1:0] canonicalizes to [1:0]"""
        pt = ProjectivePoint.from_homogeneous(-3.0, 0.0)

        assert (pt.alpha, pt.beta) == (1.0, 0.0)
        assert pt.angle == 0.0

    def test_rejects_zero_and_off_circle(self):
        """Test that (0, 0) and non-unit direct construction are rejected"""
        with pytest.raises(ValueError):
            ProjectivePoint.from_homogeneous(0.0, 0.0)
        with pytest.raises(ValueError):
            ProjectivePoint(1.0, 1.0)

    def test_antipode_is_same_projective_point(self):
        """Test that a point and its antipode compare equal"""
        pt = ProjectivePoint.from_angle(1.1)
        flipped = pt.antipode()

        assert flipped.alpha == -pt.alpha
        assert flipped == pt
        assert flipped.angle == pytest.approx(1.1, abs=1e-15)

    def test_angular_distance_wraps_modulo_pi(self):
        """Test that distance is measured on RP^1"""
        near_zero = ProjectivePoint.from_angle(0.01)
        near_pi = ProjectivePoint.from_angle(math.pi - 0.01)

        assert near_zero.angular_distance(near_pi) == pytest.approx(0.02, abs=1e-12)
        assert near_zero != near_pi

    def test_points_are_unhashable(self):
        """Test that tolerance-based equality disables hashing"""
        with pytest.raises(TypeError):
            hash(ProjectivePoint(1.0, 0.0))


class TestMatrixPolynomial:
    """Tests for the storage type"""

    def test_shape_properties(self, diag_example):
        """Test that n and d are read from the coefficient array"""
        assert diag_example.n == 2
        assert diag_example.d == 1

    @pytest.mark.parametrize("coeffs", [
        np.zeros((2, 2, 3)),
        np.zeros((1, 2, 2)),
        np.zeros((2, 2)),
        np.full((2, 1, 1), np.nan),
    ])
    def test_invalid_coefficients(self, coeffs):
        """Test that malformed or non-finite coefficients are rejected"""
        with pytest.raises(InvalidMatrixPolynomial):
            MatrixPolynomial(coeffs)

    def test_coefficients_are_read_only(self, diag_example):
        """Test that stored coefficients cannot be mutated"""
        with pytest.raises(ValueError):
            diag_example.coeffs[0, 0, 0] = 5.0

    def test_dict_round_trip(self, diag_example):
        """Test the JSON document form"""
        data = diag_example.to_dict()

        assert data["n"] == 2 and data["d"] == 1
        assert MatrixPolynomial.from_dict(data) == diag_example

    def test_from_dict_checks_declared_sizes(self, diag_example):
        """Test that declared n and d must match the matrices"""
        data = diag_example.to_dict()
        data["n"] = 3
        with pytest.raises(InvalidMatrixPolynomial):
            MatrixPolynomial.from_dict(data)
        with pytest.raises(InvalidMatrixPolynomial):
            MatrixPolynomial.from_dict({"n": 1})


class TestEvaluation:
    """Tests for evaluation, partial derivatives and the norm"""

    def test_evaluate_at_eigenvalue(self, diag_example):
        """Test that P vanishes on the first diagonal entry at [2:1]"""
        m = evaluate(diag_example, ProjectivePoint.from_homogeneous(2.0, 1.0))

        np.testing.assert_allclose(m, np.diag([0.0, 1.0 / math.sqrt(5.0)]), atol=1e-15)

    def test_evaluate_matches_monomial_sum(self, rng):
        """Test Horner evaluation against the explicit monomial sum"""
        mp = MatrixPolynomial(rng.standard_normal((4, 3, 3)))
        pt = ProjectivePoint.from_angle(0.7)
        expected = np.tensordot(monomial_weights(3, pt), mp.coeffs, axes=1)

        np.testing.assert_allclose(evaluate(mp, pt), expected, atol=1e-13)

    def test_partials_quadratic(self, rng):
        """Test partial derivatives of beta^2 A0 + alpha beta A1 + alpha^2 A2"""
        a0, a1, a2 = rng.standard_normal((3, 2, 2))
        mp = MatrixPolynomial.from_matrices([a0, a1, a2])
        pt = ProjectivePoint.from_angle(0.3)
        d_alpha, d_beta = evaluate_partials(mp, pt)

        np.testing.assert_allclose(d_alpha, pt.beta * a1 + 2 * pt.alpha * a2, atol=1e-14)
        np.testing.assert_allclose(d_beta, 2 * pt.beta * a0 + pt.alpha * a1, atol=1e-14)

    def test_partials_at_infinity(self, diag_example):
        """Test that no negative powers appear at beta = 0"""
        d_alpha, d_beta = evaluate_partials(diag_example, ProjectivePoint(1.0, 0.0))

        np.testing.assert_array_equal(d_alpha, -np.eye(2))
        np.testing.assert_array_equal(d_beta, np.diag([2.0, 3.0]))

    def test_euler_identity(self, rng):
        """Test alpha dP/dalpha + beta dP/dbeta = d P"""
        mp = MatrixPolynomial(rng.standard_normal((4, 2, 2)))
        pt = ProjectivePoint.from_angle(1.9)
        d_alpha, d_beta = evaluate_partials(mp, pt)

        np.testing.assert_allclose(
            pt.alpha * d_alpha + pt.beta * d_beta, 3 * evaluate(mp, pt), atol=1e-13
        )

    def test_frobenius_norm(self, diag_example):
        """Test the product-space norm"""
        assert frobenius_norm(diag_example) == pytest.approx(math.sqrt(15.0), rel=1e-15)


class TestTransforms:
    """Tests for basis changes, scaling and orthogonal transforms"""

    def test_coefficient_map_matches_basis_forms(self, rng):
        """Test that the rewritten polynomial evaluates to sum_i f_i A_i"""
        mp = MatrixPolynomial(rng.standard_normal((3, 2, 2)))
        basis = BinaryFormBasis.random_orthogonal(2, rng)
        pt = ProjectivePoint.from_angle(2.2)
        expected = np.tensordot(basis.evaluate_forms(pt), mp.coeffs, axes=1)

        mapped = apply_coefficient_map(mp, basis)
        np.testing.assert_allclose(evaluate(mapped, pt), expected, atol=1e-13)

    def test_coefficient_maps_compose(self, rng):
        """Test that applying t1 then t2 equals applying t1 @ t2"""
        mp = MatrixPolynomial(rng.standard_normal((3, 2, 2)))
        g1 = BinaryFormBasis.random_orthogonal(2, rng)
        g2 = BinaryFormBasis.random_orthogonal(2, rng)
        twice = apply_coefficient_map(apply_coefficient_map(mp, g1), g2)
        once = apply_coefficient_map(mp, BinaryFormBasis(2, g1.transform @ g2.transform))

        np.testing.assert_allclose(twice.coeffs, once.coeffs, atol=1e-13)

    def test_rotation_swaps_coefficients(self, rng):
        """Test that f = (-alpha, beta) maps (A0, A1) to (A1, -A0)"""
        a0, a1 = rng.standard_normal((2, 3, 3))
        mp = MatrixPolynomial.from_matrices([a0, a1])
        rotated = apply_coefficient_map(mp, BinaryFormBasis(1, [[0.0, -1.0], [1.0, 0.0]]))

        np.testing.assert_allclose(rotated.coeffs[0], a1)
        np.testing.assert_allclose(rotated.coeffs[1], -a0)

    def test_monomial_basis_is_identity(self, diag_example):
        """Test that the monomial basis leaves coefficients unchanged"""
        assert apply_coefficient_map(diag_example, BinaryFormBasis.monomial(1)) == diag_example

    def test_singular_or_mismatched_basis(self, diag_example):
        """Test that singular transforms and wrong degrees are rejected"""
        with pytest.raises(SingularTransform):
            apply_coefficient_map(diag_example, BinaryFormBasis(1, [[1.0, 2.0], [2.0, 4.0]]))
        with pytest.raises(ValueError):
            apply_coefficient_map(diag_example, BinaryFormBasis.monomial(2))
        with pytest.raises(ValueError):
            BinaryFormBasis(1, np.eye(3))

    def test_scale_and_orthogonal_transform(self, diag_example, rng):
        """Test t*A and U A_i V^T"""
        u = random_orthogonal_matrix(2, rng)
        v = random_orthogonal_matrix(2, rng)
        pt = ProjectivePoint.from_angle(0.4)

        scaled = scale_coeffs(diag_example, 3.0)
        np.testing.assert_allclose(scaled.coeffs, 3.0 * diag_example.coeffs)
        np.testing.assert_allclose(
            evaluate(orthogonal_transform(diag_example, u, v), pt),
            u @ evaluate(diag_example, pt) @ v.T,
            atol=1e-14,
        )
        np.testing.assert_allclose(u @ u.T, np.eye(2), atol=1e-14)

    def test_elementary_direction_and_perturbation(self, diag_example):
        """Test that elementary directions enumerate the input space"""
        e = elementary_direction(diag_example, 3)
        moved = perturbed(diag_example, e, 0.5)

        assert e.shape == diag_example.coeffs.shape
        assert e.sum() == 1.0 and e[0, 1, 1] == 1.0
        assert moved.coeffs[0, 1, 1] == 3.5
