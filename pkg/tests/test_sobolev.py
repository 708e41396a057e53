"""Tests for the discrete Sobolev inner product and the S_n construction."""

import mpmath
import pytest
from mpmath import mpf

from jacobisobolev.jacobi import JacobiParams, build_jacobi
from jacobisobolev.numkernel import Poly, tol
from jacobisobolev.sobolev import (
    InvalidMassPoint,
    MassPoint,
    NotApplicable,
    SobolevProduct,
    build_family,
    inner_mu,
    inner_sobolev,
    is_sequentially_ordered,
    kernel_dk,
    kernel_dk_closed,
    kernel_poly_dk,
    quasi_orthogonality_check,
    zeros_of,
)


def gram_schmidt_oracle(product, n):
    """Independent S_0..S_n via monomial Gram-Schmidt under the product.

    Shares only the raw inner product with the library; the kernel-system
    construction is not involved.
    """
    cache = build_jacobi(product.jacobi, 2 * n + 4)
    basis = []
    for m in range(n + 1):
        v = Poly.x() ** m
        for b in basis:
            coef = inner_sobolev(v, b, product, cache) / inner_sobolev(b, b, product, cache)
            v = v - coef * b
        basis.append(v)
    return [p * (1 / p.leading) for p in basis]


class TestMassPoint:
    def test_inside_interval_rejected(self):
        with pytest.raises(InvalidMassPoint):
            MassPoint(mpf("0.5"), [(0, 1)])

    def test_negative_mass_rejected(self):
        with pytest.raises(InvalidMassPoint):
            MassPoint(2, [(0, -1)])

    def test_zero_masses_dropped(self):
        p = MassPoint(2, [(0, 0), (1, 3)])
        assert p.terms == ((1, mpf(3)),)
        assert p.max_order == 1

    def test_all_zero_masses_rejected(self):
        with pytest.raises(InvalidMassPoint):
            MassPoint(2, [(0, 0)])

    def test_duplicate_orders_rejected(self):
        with pytest.raises(InvalidMassPoint):
            MassPoint(2, [(1, 1), (1, 2)])


class TestProduct:
    def test_counts(self, ex2_product):
        assert ex2_product.n_points == 2
        assert ex2_product.d == 5  # (1+1) + (2+1)
        assert ex2_product.d_star == 2

    def test_duplicate_locations_rejected(self):
        with pytest.raises(InvalidMassPoint):
            SobolevProduct(
                JacobiParams(0, 0), [MassPoint(2, [(0, 1)]), MassPoint(2, [(1, 1)])]
            )

    def test_rho_factorizations(self, ex2_product):
        rho = ex2_product.rho()
        assert rho.degree == 5
        assert rho.is_monic()
        assert ex2_product.rho_n_points().degree == 2
        assert ex2_product.rho_excess().degree == 3
        prod = ex2_product.rho_n_points() * ex2_product.rho_excess()
        assert (prod - rho).max_abs_coeff() <= tol(2) * rho.max_abs_coeff()

    def test_rho_jk_reduces_one_factor(self, ex2_product):
        # reducing the order-2 location by k+1 = 3 powers removes it entirely
        r = ex2_product.rho_jk(1, 2)
        assert r.degree == 2
        assert abs(r(mpf(1))) <= tol(2)


class TestInnerProducts:
    def test_inner_mu_against_quadrature(self):
        cache = build_jacobi(JacobiParams(1, 2), 10)
        f, g = Poly((1, 2, 1)), Poly((0, 0, 3, 1))
        got = inner_mu(f, g, cache)
        want = mpmath.quad(lambda x: f(x) * g(x) * (1 - x) * (1 + x) ** 2, [-1, 0, 1])
        assert abs(got - want) <= mpf("1e-40") * max(1, abs(want))

    def test_sobolev_adds_derivative_masses(self, intro_product):
        cache = build_jacobi(intro_product.jacobi, 6)
        f = Poly((0, 0, 1))
        base = inner_mu(f, f, cache)
        full = inner_sobolev(f, f, intro_product, cache)
        # f'(+-2) = +-4, two masses of 16 each
        assert abs(full - base - 32) <= tol(2) * full


class TestKernels:
    def test_direct_vs_closed_form(self):
        cache = build_jacobi(JacobiParams(0, 3), 9)
        for k in [0, 1, 2]:
            direct = kernel_dk(cache, 7, 0, k, mpf("0.3"), mpf(2))
            closed = kernel_dk_closed(cache, 7, k, mpf("0.3"), mpf(2))
            assert abs(direct - closed) <= tol(2) * max(1, abs(direct))

    def test_closed_form_guards_diagonal(self):
        cache = build_jacobi(JacobiParams(0, 0), 5)
        with pytest.raises(ValueError):
            kernel_dk_closed(cache, 4, 0, mpf("0.5"), mpf("0.5"))

    def test_kernel_poly_reproduces_values(self):
        cache = build_jacobi(JacobiParams(0, 2), 8)
        kp = kernel_poly_dk(cache, 6, 1, mpf(2))
        for x in [mpf("-0.4"), mpf("0.9")]:
            assert abs(kp(x) - kernel_dk(cache, 6, 0, 1, x, mpf(2))) <= tol(2) * max(
                1, abs(kp(x))
            )

    def test_kernel_reproducing_property(self):
        # <K_{n-1}(., y), p>_mu = p(y) for deg p < n
        cache = build_jacobi(JacobiParams(0, 0), 8)
        kp = kernel_poly_dk(cache, 5, 0, mpf("0.37"))
        p = Poly((2, -1, 0, 4))
        got = inner_mu(kp, p, cache)
        assert abs(got - p(mpf("0.37"))) <= tol(2) * max(1, abs(got))


class TestConstruction:
    def test_intro_s3_is_exact(self, intro_family):
        s3 = intro_family.poly(3)
        want = Poly((0, mpf(-183) / 20, 0, 1))
        assert (s3 - want).max_abs_coeff() <= mpf("1e-20") * want.max_abs_coeff()

    @pytest.mark.parametrize("which", [0, 1, 2, 3])
    def test_orthogonality(self, all_families, which):
        family = all_families[which]
        product, cache = family.product, family.jacobi_cache
        for m in range(1, 9):
            sm = family.poly(m)
            scale = inner_sobolev(sm, sm, product, cache)
            for j in range(m):
                val = abs(inner_sobolev(sm, family.poly(j), product, cache))
                assert val <= tol(3) * scale, (m, j)

    @pytest.mark.parametrize("which", [0, 1, 2, 3])
    def test_gram_schmidt_oracle_equivalence(self, all_families, which):
        family = all_families[which]
        oracle = gram_schmidt_oracle(family.product, 8)
        for m in range(9):
            diff = (family.poly(m) - oracle[m]).max_abs_coeff()
            assert diff <= tol(4) * max(family.poly(m).max_abs_coeff(), mpf(1)), m

    def test_derivative_vector_matches_poly(self, ex2_family):
        product = ex2_family.product
        for m in range(13):
            sm = ex2_family.poly(m)
            for (j, k, _), val in zip(product.active_pairs, ex2_family.deriv_vector(m)):
                direct = sm.deriv(k)(product.points[j].c)
                assert abs(direct - val) <= tol(3) * max(1, abs(val))

    def test_empty_point_set_gives_jacobi(self):
        product = SobolevProduct(JacobiParams(0, 0), [])
        family = build_family(product, 5)
        cache = build_jacobi(JacobiParams(0, 0), 5)
        for m in range(6):
            assert (family.poly(m) - cache.poly(m)).max_abs_coeff() <= tol(2)


class TestSequentialOrdering:
    def test_intro_product_is_ordered(self, intro_product):
        flag, seq = is_sequentially_ordered(intro_product)
        assert flag
        assert len(seq) == 2

    def test_examples_are_ordered(self, ex1_product, ex2_product, ex3_product):
        for product in [ex1_product, ex2_product, ex3_product]:
            assert is_sequentially_ordered(product)[0]

    def test_two_orders_at_one_point_not_ordered(self):
        product = SobolevProduct(JacobiParams(0, 0), [MassPoint(2, [(0, 1), (1, 1)])])
        flag, seq = is_sequentially_ordered(product)
        assert not flag
        assert seq is None

    def test_decreasing_orders_not_ordered(self):
        # order-1 mass strictly inside the hull grown by the order-0 mass
        product = SobolevProduct(
            JacobiParams(0, 0), [MassPoint(3, [(0, 1)]), MassPoint(2, [(1, 1)])]
        )
        assert not is_sequentially_ordered(product)[0]


class TestQuasiOrthogonality:
    def test_defect_small(self, ex3_family):
        worst = quasi_orthogonality_check(ex3_family, 12)
        s12 = ex3_family.poly(12)
        cache = ex3_family.jacobi_cache
        scale = inner_mu(s12, s12, cache)
        assert worst <= tol(3) * scale

    def test_needs_large_degree(self, ex2_family):
        with pytest.raises(NotApplicable):
            quasi_orthogonality_check(ex2_family, 4)


class TestZeros:
    def test_interior_counts(self, all_families):
        for family in all_families:
            n_pts = family.product.n_points
            report = zeros_of(family, 8)
            assert report.sign_changes_inside >= 8 - n_pts

    def test_saddle_case_outlier(self, ex3_family):
        report = zeros_of(ex3_family, 12)
        assert report.count_inside == 11
        assert max(report.real_roots) > 2
