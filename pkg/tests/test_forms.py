import math

import pytest

from hardybounds.potentials import SquareWell
from hardybounds.spectra import kinetic_term, quadratic_form_value
from hardybounds.testfunctions import bump, bump_suite, transform_test_function
from hardybounds.quadrature import integrate


def rel_discrepancy(qo, qt, scale):
    return abs(qo - qt) / max(abs(qo), abs(qt), scale)


class TestBumps:
    def test_support_and_smoothness(self):
        u = bump(1.0, 3.0)
        assert u.value(0.9) == 0.0
        assert u.value(3.1) == 0.0
        assert u.value(2.0) == pytest.approx(math.exp(-1.0), rel=1e-14)
        # derivative vanishes at the symmetric center
        assert u.derivative(2.0) == pytest.approx(0.0, abs=1e-300)

    def test_derivative_matches_finite_differences(self):
        u = bump(0.5, 2.5)
        h = 1e-6
        for x in (0.8, 1.2, 1.9, 2.3):
            fd = (u.value(x + h) - u.value(x - h)) / (2 * h)
            assert u.derivative(x) == pytest.approx(fd, rel=1e-7, abs=1e-10)

    def test_pushforward_derivative_matches_finite_differences(self):
        u = bump(0.5, 2.5)
        phi = transform_test_function(u, 3, 1)
        h = 1e-6
        for s in (-0.5, 0.0, 0.5, 0.8):
            fd = (phi.value(s + h) - phi.value(s - h)) / (2 * h)
            assert phi.derivative(s) == pytest.approx(fd, rel=1e-6, abs=1e-10)

    def test_suite_respects_domain(self):
        for lo in (0.0, 1.0, math.e):
            for u in bump_suite(lo):
                assert u.lo > lo

    def test_transform_preserves_l2_mass_with_measure(self):
        # ||u||^2 with measure r^{d-1} equals ||phi||^2 ... not in general;
        # but the kinetic identity is what the form check covers.  Here:
        # support mapping is exact.
        u = bump(1.5, 4.0)
        phi = transform_test_function(u, 3, 1)
        assert phi.lo == pytest.approx(math.log(1.5))
        assert phi.hi == pytest.approx(math.log(4.0))


class TestTransformIdentity:
    @pytest.mark.parametrize("d", [1, 2, 3, 5])
    @pytest.mark.parametrize("n", [0, 1])
    def test_zero_potential(self, d, n):
        lo = 1.0 if (n >= 1 or d % 2 == 0) else 0.0
        u = bump(lo + 0.4, lo + 2.6)
        qo = quadratic_form_value("original", d, n, u)
        qt = quadratic_form_value("transformed", d, n, u)
        assert rel_discrepancy(qo, qt, kinetic_term(u, d)) <= 1e-8

    @pytest.mark.parametrize("d", [1, 2, 3, 5])
    @pytest.mark.parametrize("n", [0, 1])
    def test_square_well(self, d, n):
        lo = 1.0 if (n >= 1 or d % 2 == 0) else 0.0
        V = SquareWell(c=1.0, a=lo + 0.6, b=lo + 3.0)
        u = bump(lo + 0.4, lo + 2.6)
        qo = quadratic_form_value("original", d, n, u, V=V)
        qt = quadratic_form_value("transformed", d, n, u, V=V)
        assert rel_discrepancy(qo, qt, kinetic_term(u, d)) <= 1e-6

    def test_d1_bump_example(self):
        # bump exp(-1/(1-(x-2)^2)) on (1,3)
        u = bump(1.0, 3.0)
        qo = quadratic_form_value("original", 1, 0, u)
        qt = quadratic_form_value("transformed", 1, 0, u)
        assert rel_discrepancy(qo, qt, kinetic_term(u, 1)) <= 1e-8

    def test_d3_l0_channel(self):
        u = bump(1.0, 3.0)
        qo = quadratic_form_value("original", 3, 0, u, l=0)
        qt = quadratic_form_value("transformed", 3, 0, u, l=0)
        assert rel_discrepancy(qo, qt, kinetic_term(u, 3)) <= 1e-8

    @pytest.mark.parametrize("l", [1, 2])
    def test_higher_channels(self, l):
        u = bump(0.7, 2.8)
        V = SquareWell(c=2.0, a=1.0, b=2.5)
        qo = quadratic_form_value("original", 3, 0, u, V=V, l=l)
        qt = quadratic_form_value("transformed", 3, 0, u, V=V, l=l)
        assert rel_discrepancy(qo, qt, kinetic_term(u, 3)) <= 1e-8

    def test_d2_trivial_weight(self):
        # no weight at depth 0 in two dimensions: the form is the plain
        # Dirichlet integral with measure r dr
        u = bump(1.2, 2.8)
        q = quadratic_form_value("original", 2, 0, u)
        direct = integrate(
            lambda r: u.derivative(r) ** 2 * r, u.lo, u.hi, tol=1e-12
        ).value
        assert q == pytest.approx(direct, rel=1e-11)
        assert q >= 0.0


class TestHardyPositivity:
    @pytest.mark.parametrize("d", [1, 2, 3, 5])
    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_rayleigh_quotients_nonnegative(self, d, n):
        lo = 1.0 if (n == 0 and d % 2 == 0) else (0.0 if n == 0 else None)
        if lo is None:
            from hardybounds.iterfun import iterated_exp

            lo = iterated_exp(0.0, n)
        for u in bump_suite(lo, 3):
            q = quadratic_form_value("original", d, n, u)
            k = kinetic_term(u, d)
            assert q / k >= -1e-8

    def test_quotient_strictly_positive_for_bumps(self):
        # bumps are far from the Hardy optimizers, so the margin is large
        u = bump(0.3, 1.8)
        q = quadratic_form_value("original", 1, 0, u)
        assert q / kinetic_term(u, 1) > 0.1
