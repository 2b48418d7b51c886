import cmath
import math
import random
from fractions import Fraction

import pytest

from dwbc.errors import DegeneratePoints, NearDegenerate, Singular
from dwbc.ik_engine import (
    NumericTriple,
    TrigParams,
    build_hNs,
    cantini_P_poly,
    cantini_W_value,
    family,
    gamma_change,
    homogeneous_abc,
    ik_determinant,
    ik_homogeneous,
    partially_inhomogeneous_Z,
    phi_derivatives,
)
from dwbc.lattice_oracle import WeightMatrix, WeightTriple, enumerate_Z


def draw_params(rng, n):
    while True:
        lams = sorted(rng.uniform(0.2, 2.4) for _ in range(n))
        nus = sorted(rng.uniform(-0.6, 0.6) for _ in range(n))
        eta = rng.uniform(0.2, 0.6)
        ok = all(b - a > 0.08 for a, b in zip(lams, lams[1:]))
        ok = ok and all(b - a > 0.08 for a, b in zip(nus, nus[1:]))
        if ok:
            return TrigParams(lams, nus, eta)


class TestDeterminant:
    def test_one_by_one(self):
        p = TrigParams([0.7], [0.1], 0.4)
        assert abs(ik_determinant(p) - cmath.sin(0.8)) < 1e-14

    def test_matches_enumeration(self):
        rng = random.Random(17)
        for n in (1, 2, 3, 4):
            for _ in range(4):
                p = draw_params(rng, n)
                z1 = ik_determinant(p)
                z2 = enumerate_Z(n, p.weight_matrix(), "enum")
                assert abs(z1 - z2) <= 1e-9 * max(1, abs(z1))

    def test_spec_point(self):
        p = TrigParams([0.3, 0.7], [0.1, 0.2], 0.4)
        z1 = ik_determinant(p)
        z2 = enumerate_Z(2, p.weight_matrix(), "enum")
        assert abs(z1 - z2) <= 1e-9 * max(1, abs(z1))

    def test_permutation_invariance(self):
        p = TrigParams([0.3, 0.8, 1.4], [0.05, 0.22, -0.31], 0.37)
        q = TrigParams([1.4, 0.3, 0.8], [0.05, 0.22, -0.31], 0.37)
        z1, z2 = ik_determinant(p), ik_determinant(q)
        assert abs(z1 - z2) <= 1e-12 * abs(z1)
        q2 = TrigParams([0.3, 0.8, 1.4], [0.22, -0.31, 0.05], 0.37)
        assert abs(ik_determinant(q2) - z1) <= 1e-12 * abs(z1)

    def test_near_degenerate(self):
        with pytest.raises(NearDegenerate):
            TrigParams([0.3, 0.3 + 1e-10], [0.1, 0.2], 0.4)


class TestHomogeneous:
    def test_n1(self):
        assert abs(ik_homogeneous(1, 0.9, 0.3) - cmath.sin(0.6)) < 1e-13

    def test_ice_like_point(self):
        # lam = pi/2, eta = pi/6: a = b = c, so Z_3 = 7 a^9
        z = ik_homogeneous(3, math.pi / 2, math.pi / 6)
        rho = math.sin(2 * math.pi / 3)
        assert abs(z - 7 * rho**9) <= 1e-9 * abs(z)

    def test_matches_oracle(self):
        lam, eta = 0.95, 0.33
        w = NumericTriple(*homogeneous_abc(lam, eta))
        for n in (2, 3, 4, 5):
            zh = ik_homogeneous(n, lam, eta)
            zo = enumerate_Z(n, w, "transfer")
            assert abs(zh - zo) <= 1e-9 * abs(zo)

    def test_limit_of_determinant(self):
        # symmetric perturbation plus one Richardson step in eps^2
        lam, eta = 0.95, 0.33
        zh = ik_homogeneous(3, lam, eta)

        def f(eps):
            return ik_determinant(TrigParams(
                [lam - eps, lam, lam + eps], [-0.7 * eps, 0.0, 0.7 * eps], eta))

        r = (4 * f(2e-3) - f(4e-3)) / 3
        assert abs(r - zh) <= 1e-6 * abs(zh)

    def test_singular_guard(self):
        with pytest.raises(Singular):
            phi_derivatives(0.3, 0.3, 2)


class TestBoundaryFamily:
    def test_hn1_is_hn(self):
        w = WeightTriple(2, 3, 4)
        fam = family(w)
        z = Fraction(2, 7)
        assert build_hNs(4, 1, w, [z]) == fam.h(4).eval(z)

    def test_value_vs_poly_and_symmetry(self):
        w = WeightTriple(2, 3, 4)
        fam = family(w)
        n = 4
        for s in (1, 2, 3):
            pts = [Fraction(k + 2, 7) for k in range(s)]
            v = fam.hns_value(n, s, pts)
            p = fam.hns_poly(n, s)
            assert p.eval(pts) == v
            assert p.eval(list(reversed(pts))) == v
            assert all(p.degree(i) <= n - 1 for i in range(s))

    def test_reduction_at_one(self):
        w = WeightTriple(1, 2, 2)
        fam = family(w)
        pts = [Fraction(1, 3), Fraction(2, 5)]
        lhs = fam.hns_poly(4, 3).eval(pts + [Fraction(1)])
        rhs = fam.hns_poly(4, 2).eval(pts)
        assert lhs == rhs

    def test_reduction_at_zero(self):
        w = WeightTriple(1, 2, 2)
        fam = family(w)
        pts = [Fraction(1, 3), Fraction(2, 5)]
        lhs = fam.hns_poly(4, 3).eval(pts + [Fraction(0)])
        rhs = fam.h(4).eval(0) * fam.hns_poly(3, 2).eval(pts)
        assert lhs == rhs

    def test_degenerate_points_error(self):
        w = WeightTriple(2, 3, 4)
        with pytest.raises(DegeneratePoints):
            build_hNs(3, 2, w, [Fraction(1, 2), Fraction(1, 2)])

    def test_htilde_reversal(self):
        w = WeightTriple(2, 3, 4)
        fam = family(w)
        assert fam.htilde_coeffs(4) == fam.h_coeffs(4)[::-1]

    def test_htilde_family_relation(self):
        # htilde_{N,s}(z) = prod z_j^(N-1) h_{N,s}(1/z)
        w = WeightTriple(1, 2, 2)
        fam = family(w)
        n, s = 4, 2
        pts = [Fraction(2, 3), Fraction(5, 7)]
        lhs = fam.hns_poly(n, s, tilde=True).eval(pts)
        rhs = fam.hns_poly(n, s).eval([1 / p for p in pts])
        for p in pts:
            rhs *= p ** (n - 1)
        assert lhs == rhs


class TestPartiallyInhomogeneous:
    def test_gamma_at_zero(self):
        assert abs(gamma_change(0, 0.9, 0.3) - 1) < 1e-15

    def test_equal_lambdas_recover_homogeneous(self):
        lam0, eta = 0.95, 0.33
        z = partially_inhomogeneous_Z([lam0 + 1e-9 * k for k in range(3)],
                                      lam0, eta)
        zh = ik_homogeneous(3, lam0, eta)
        assert abs(z - zh) <= 1e-6 * abs(zh)

    def test_matches_enumeration(self):
        lam0, eta = 0.95, 0.33
        for n in (2, 3, 4):
            lams = [lam0 + 0.13 * k for k in range(n)]
            zp = partially_inhomogeneous_Z(lams, lam0, eta)
            a = [[cmath.sin(l + eta)] * n for l in lams]
            b = [[cmath.sin(l - eta)] * n for l in lams]
            ze = enumerate_Z(n, WeightMatrix(a, b, cmath.sin(2 * eta)), "enum")
            assert abs(zp - ze) <= 1e-9 * max(1, abs(ze))

    def test_z_product_identity(self):
        # Z_s at nu_j - eta; nu_j factorizes into c^s prod e(nu_j, nu_k)
        for s in (2, 3, 4):
            nus = [0.21 * k + 0.05 for k in range(s)]
            eta = 0.37
            lams = [v - eta for v in nus]
            a = [[cmath.sin(l - v + eta) for v in nus] for l in lams]
            b = [[cmath.sin(l - v - eta) for v in nus] for l in lams]
            z = enumerate_Z(s, WeightMatrix(a, b, cmath.sin(2 * eta)), "enum")
            rhs = cmath.sin(2 * eta) ** s
            for j in range(s):
                for k in range(s):
                    if j != k:
                        rhs *= cmath.sin(nus[j] - nus[k] + 2 * eta)
            assert abs(z - rhs) <= 1e-10 * max(1, abs(rhs))


class TestCantiniKernel:
    def test_p1_is_one(self):
        p = cantini_P_poly(1, Fraction(1, 2))
        assert p.terms == {(0, 0): Fraction(1)}

    def test_p_vs_w_definition(self):
        rng = random.Random(3)
        for s in (2, 3):
            delta = Fraction(1, 2)
            p = cantini_P_poly(s, delta)
            for _ in range(4):
                xs = [Fraction(rng.randint(-12, 12), rng.randint(1, 9))
                      for _ in range(s)]
                ys = [Fraction(rng.randint(-12, 12), rng.randint(1, 9))
                      for _ in range(s)]
                if len(set(xs)) < s or len(set(ys)) < s:
                    continue
                try:
                    w = cantini_W_value(xs, ys, delta)
                except ZeroDivisionError:
                    continue
                pref = Fraction(1)
                for x in xs:
                    for y in ys:
                        pref *= 1 - x * y
                assert p.eval(xs + ys) == w * pref

    def test_degree_bound(self):
        p = cantini_P_poly(3, Fraction(-2, 3))
        assert all(p.degree(i) <= 2 for i in range(6))
