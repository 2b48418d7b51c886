import random
from fractions import Fraction

import pytest

from dwbc.errors import OrderExceeded, OutOfRange, ZeroDenominator
from dwbc.exact_core import (
    ExactLaurent,
    ExactPoly,
    MultiPoly,
    build_tower,
    coefficient_of,
    complete_homogeneous,
    format_rational,
    geom_inverse,
    joint_residue,
    parse_rational,
    poly_det,
    rf_const,
    rf_poly,
    rf_var,
    series_expand,
)


class TestScalars:
    def test_round_trip(self):
        rng = random.Random(1)
        for _ in range(50):
            q = Fraction(rng.randint(-10**9, 10**9), rng.randint(1, 10**6))
            assert parse_rational(format_rational(q)) == q

    def test_format(self):
        assert format_rational(Fraction(3)) == "3"
        assert format_rational(Fraction(-22, 7)) == "-22/7"


class TestSeriesExpand:
    def test_geometric(self):
        z = rf_var("z")
        s = series_expand(1 / (1 - z), 0, 0, 3)
        assert s.coeffs == [1, 1, 1, 1]
        assert coefficient_of(series_expand(1 / (1 - z), 0, 0, 5), 5) == 1

    def test_simple_pole(self):
        z = rf_var("z")
        s = series_expand(1 / z, 0, -1, 0)
        assert s.lo == -1 and s.coeffs == [1, 0]

    def test_shifted_pole_leading_coefficient(self):
        # (t^2 z - 2 D t + 1)/(t^2 (z-1)) at D=0, t=1 about z=1
        z = rf_var("z")
        t, d = Fraction(1), Fraction(0)
        f = (t**2 * z - 2 * d * t + 1) / (t**2 * (z - 1))
        s = series_expand(f, 1, -1, 1)
        assert s.lo == -1 and s.coeffs[0] == 2

    def test_out_of_range(self):
        s = ExactLaurent(0, [1, 2, 3])
        with pytest.raises(OutOfRange):
            coefficient_of(s, 5)
        assert coefficient_of(series_expand(rf_var("z") ** 2, 0, 0, 3), 1) == 0

    def test_zero_denominator(self):
        z = rf_var("z")
        with pytest.raises(ZeroDenominator):
            series_expand(1 / (z - z), 0, 0, 2)

    def test_order_exceeded(self):
        z = rf_var("z")
        with pytest.raises(OrderExceeded):
            series_expand(1 / z**3, 0, -1, 0)

    def test_non_rational_rejected(self):
        from dwbc.errors import NonRationalDescriptor
        z = rf_var("z")
        with pytest.raises(NonRationalDescriptor):
            z ** 0.5
        with pytest.raises(NonRationalDescriptor):
            z + 0.25


class TestJointResidue:
    def test_product_of_simple_poles(self):
        z1, z2 = rf_var("z1"), rf_var("z2")
        assert joint_residue(1 / (z1 * z2), ["z1", "z2"], [0, 0], [1, 1]) == 1

    def test_double_pole(self):
        z = rf_var("z")
        assert joint_residue(z / (z - 1) ** 2, ["z"], [1], [2]) == 1

    def test_order_exceeded(self):
        z = rf_var("z")
        with pytest.raises(OrderExceeded):
            joint_residue(1 / z**4, ["z"], [0], [2])

    def test_efp_integrand_matches_oracle(self):
        # the symmetric s-fold integrand at N=2, s=1, r=1, ice point
        from dwbc.ik_engine import family
        from dwbc.lattice_oracle import ICE_POINT, efp_oracle
        h2 = family(ICE_POINT).h(2)
        z = rf_var("z")
        t = Fraction(1)
        delta = Fraction(1, 2)
        integrand = rf_poly(h2, z) / (z * (z - 1))
        val = -joint_residue(integrand, ["z"], [0], [1])
        assert val == efp_oracle(2, 1, 1, ICE_POINT) == Fraction(1, 2)

    def test_h3_coefficient(self):
        from dwbc.ik_engine import family
        from dwbc.lattice_oracle import ICE_POINT
        h3 = family(ICE_POINT).h(3)
        s = series_expand(rf_poly(h3, rf_var("z")), 0, 0, 2)
        assert coefficient_of(s, 0) == Fraction(2, 7)

    def test_permutation_invariance_symmetric_integrand(self):
        # h_{N,s}-weighted symmetric integrand: order of extraction is free
        from dwbc.ik_engine import family
        from dwbc.lattice_oracle import WeightTriple
        w = WeightTriple(1, 2, 2)
        fam = family(w)
        h = fam.hns_poly(3, 2)
        t, delta = w.t(), w.delta()
        z1, z2 = rf_var("z1"), rf_var("z2")
        hexpr = sum(
            (rf_const(c) * z1**e1 * z2**e2 for (e1, e2), c in h.terms.items()),
            rf_const(0))
        f = hexpr / (z1**2 * z2**2 * (t * t * z1 * z2 - 2 * delta * t * z1 + 1)
                     * (t * t * z1 * z2 - 2 * delta * t * z2 + 1))
        r1 = joint_residue(f, ["z1", "z2"], [0, 0], [2, 2])
        r2 = joint_residue(f, ["z2", "z1"], [0, 0], [2, 2])
        assert r1 == r2


class TestRingHomomorphism:
    def test_product_of_expansions(self):
        rng = random.Random(7)
        z = rf_var("z")
        for _ in range(10):
            num1 = ExactPoly([rng.randint(-4, 4) for _ in range(3)] + [1])
            num2 = ExactPoly([rng.randint(-4, 4) for _ in range(2)] + [1])
            den1 = ExactPoly([1] + [rng.randint(-3, 3) for _ in range(2)])
            den2 = ExactPoly([1] + [rng.randint(-3, 3) for _ in range(2)])
            f = rf_poly(num1, z) / rf_poly(den1, z)
            g = rf_poly(num2, z) / rf_poly(den2, z)
            fg = series_expand(f * g, 0, 0, 6)
            sf = series_expand(f, 0, 0, 6)
            sg = series_expand(g, 0, 0, 6)
            prod = [sum(sf.coeffs[i] * sg.coeffs[k - i] for i in range(k + 1))
                    for k in range(7)]
            assert fg.coeffs == prod


class TestTower:
    def test_nested_contour_expansion(self):
        # 1/(z2 - z1) with the z1 contour inside the z2 contour
        ring, atoms = build_tower([("z1", 5), ("z2", 5)])
        e = 1 / (atoms["z2"] - atoms["z1"])
        assert e.coefficient(0).coefficient(-1) == 1
        assert e.coefficient(1).coefficient(-2) == 1

    def test_geom_inverse_matches_division(self):
        ring, atoms = build_tower([("x", 6), ("y", 6)])
        u = atoms["x"] * atoms["y"]
        a = geom_inverse(u, ring)
        b = 1 / (1 - u)
        diff = a - b
        for k in range(3):
            c = diff.coefficient(k)
            for m in range(3):
                assert c.coefficient(m) == 0


class TestExactLaurentArithmetic:
    def test_mul_add_track_window(self):
        a = ExactLaurent(-1, [1, 0, 2])      # 1/x + 2x, known to x^1
        b = ExactLaurent(0, [1, 1, 1])       # 1 + x + x^2, known to x^2
        assert (a * b).coeffs == [1, 1, 3] and (a * b).lo == -1
        assert (a + b).coeffs == [1, 1, 3] and (a + b).lo == -1

    def test_inverse_shifts_lo(self):
        a = ExactLaurent(-1, [1, 0, 2])
        inv = a.inverse()
        assert inv.lo == 1 and inv.coeffs == [1, 0, -2]

    def test_inverse_requires_nonzero_leading(self):
        with pytest.raises(ZeroDenominator):
            ExactLaurent(0, [0, 1]).inverse()


class TestPoly:
    def test_json_round_trip(self):
        p = ExactPoly([1, Fraction(2, 3), 0, -5])
        assert ExactPoly.from_json(p.to_json()) == p

    def test_eval_and_derivative(self):
        p = ExactPoly([1, 0, 3])
        assert p.eval(Fraction(1, 2)) == Fraction(7, 4)
        assert p.derivative().coeffs == [0, 6]

    def test_reversed(self):
        p = ExactPoly([1, 2, 3])
        assert p.reversed().coeffs == [3, 2, 1]


class TestMultiPoly:
    def test_divexact(self):
        x = MultiPoly.variable(2, 0)
        y = MultiPoly.variable(2, 1)
        p = (x - y) * (x + y)
        q = p.divexact_linear(0, 1)
        assert q.terms == (x + y).terms

    def test_divexact_remainder_raises(self):
        x = MultiPoly.variable(2, 0)
        with pytest.raises(ZeroDenominator):
            (x * x).divexact_linear(0, 1)

    def test_complete_homogeneous(self):
        h = complete_homogeneous(2, 2, 2)
        assert h.terms == {(2, 0): 1, (1, 1): 1, (0, 2): 1}

    def test_poly_det(self):
        m = [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]]
        assert poly_det(m) == -2
