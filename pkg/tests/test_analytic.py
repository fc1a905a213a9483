"""Analytic extensions: truncated Taylor evaluation and preimages."""

import cmath
import math

import pytest

from zeon import (
    DimensionMismatch,
    NotSpectrallySimple,
    OutsideDomain,
    SeedMismatch,
    Zeon,
    ZeonExtension,
    ZeonPoly,
    by_name,
    extend_eval,
    polynomial_form,
    preimage,
)

from conftest import random_zeon

Z1 = Zeon.blade(2, (1,))
Z2 = Zeon.blade(2, (2,))
Z12 = Zeon.blade(2, (1, 2))


def ext(name, n):
    return ZeonExtension(by_name(name), n)


def cosine_pair():
    # cos maps pi/6 - 6 z1 - 2 z{1,2} + 2 z4 + 12 sqrt(3) z{1,4}
    #          + 4 sqrt(3) z{1,2,4}
    # onto sqrt(3)/2 + 3 z1 + z{1,2} - z4.        [derivation frozen]
    s3 = math.sqrt(3.0)
    lam = Zeon(4, {
        (): math.pi / 6,
        (1,): -6.0,
        (1, 2): -2.0,
        (4,): 2.0,
        (1, 4): 12.0 * s3,
        (1, 2, 4): 4.0 * s3,
    })
    w = Zeon(4, {(): s3 / 2.0, (1,): 3.0, (1, 2): 1.0, (4,): -1.0})
    return lam, w


# -- function table ---------------------------------------------------------


class TestByName:
    @pytest.mark.parametrize("name", ["exp", "log", "sin", "cos", "sqrt"])
    def test_builtins(self, name):
        assert by_name(name).name == name

    def test_pow_integer(self):
        fn = by_name("pow(2)")
        assert fn.derivative(3.0, 0) == pytest.approx(9.0)
        assert fn.derivative(3.0, 1) == pytest.approx(6.0)
        assert fn.in_domain(0.0)
        assert fn.in_domain(-5.0)

    def test_pow_half(self):
        fn = by_name("pow(0.5)")
        assert fn.derivative(4.0, 0) == pytest.approx(2.0)
        assert not fn.in_domain(-1.0)

    def test_pow_matches_sqrt(self):
        a = by_name("sqrt").derivative(2.0 + 1j, 1)
        b = by_name("pow(0.5)").derivative(2.0 + 1j, 1)
        assert a == pytest.approx(b)

    def test_unknown_rejected(self):
        with pytest.raises(ValueError):
            by_name("gamma")

    def test_whitespace_tolerated(self):
        assert by_name(" exp ").name == "exp"


# -- extension evaluation -----------------------------------------------------


class TestExtendEval:
    def test_exp_of_one_generator(self):
        assert ext("exp", 2).eval(Z1) == Zeon(2, {(): 1, (1,): 1})

    def test_exp_of_two_generators(self):
        # exp(z1 + z2) = 1 + z1 + z2 + z{1,2}   [oracle-checked]
        got = ext("exp", 2).eval(Z1 + Z2)
        assert got.isclose(Zeon(2, {(): 1, (1,): 1, (2,): 1, (1, 2): 1}))

    def test_cosine_of_dual_shift(self):
        lam, w = cosine_pair()
        assert extend_eval(ZeonExtension(by_name("cos"), 4), lam).isclose(
            w, eps=1e-9)

    def test_scalar_argument_matches_cmath(self):
        for name, f in [("exp", cmath.exp), ("sin", cmath.sin),
                        ("cos", cmath.cos), ("log", cmath.log)]:
            got = ext(name, 2).eval(Zeon.scalar(2, 0.7 + 0.3j))
            assert got.scalar_part() == pytest.approx(f(0.7 + 0.3j))
            assert got.dual_part().is_zero()

    def test_pow_two_is_square(self, rng):
        u = random_zeon(rng, 3)
        assert ext("pow(2)", 3).eval(u).isclose(u.mul(u))

    def test_pow_zero_is_one(self, rng):
        u = random_zeon(rng, 3)
        assert ext("pow(0)", 3).eval(u).isclose(Zeon.one(3))

    def test_exp_is_homomorphism(self, rng):
        e = ext("exp", 4)
        for _ in range(5):
            u, v = random_zeon(rng, 4), random_zeon(rng, 4)
            assert e.eval(u + v).isclose(e.eval(u).mul(e.eval(v)), eps=1e-8)

    def test_log_inverts_exp(self, rng):
        e, l = ext("exp", 3), ext("log", 3)
        for _ in range(5):
            u = random_zeon(rng, 3)
            # keep exp(C(u)) off the branch cut
            u = u - Zeon.scalar(3, 1j * u.scalar_part().imag)
            assert l.eval(e.eval(u)).isclose(u, eps=1e-8)

    def test_sqrt_squares_back(self, rng):
        s = ext("sqrt", 3)
        for _ in range(5):
            u = random_zeon(rng, 3) + Zeon.scalar(3, 4.0)
            r = s.eval(u)
            assert r.mul(r).isclose(u, eps=1e-8)

    def test_pythagorean_identity(self, rng):
        u = random_zeon(rng, 4)
        sn, cs = ext("sin", 4).eval(u), ext("cos", 4).eval(u)
        assert (sn.mul(sn) + cs.mul(cs)).isclose(Zeon.one(4), eps=1e-8)

    def test_log_on_cut_rejected(self):
        with pytest.raises(OutsideDomain):
            ext("log", 2).eval(Zeon.scalar(2, -1.0) + Z1)

    def test_sqrt_at_zero_rejected(self):
        with pytest.raises(OutsideDomain):
            ext("sqrt", 2).eval(Z1)

    def test_mixed_n_rejected(self):
        with pytest.raises(DimensionMismatch):
            ext("exp", 2).eval(Zeon.one(3))


# -- polynomial form ----------------------------------------------------------


class TestPolynomialForm:
    def test_exp_at_zero(self):
        p = polynomial_form(ext("exp", 2), 0.0)
        assert p.degree == 2
        assert p.coeff(0).isclose(Zeon.one(2))
        assert p.coeff(1).isclose(Zeon.one(2))
        assert p.coeff(2).isclose(Zeon.scalar(2, 0.5))

    def test_identity_function(self):
        p = polynomial_form(ext("pow(1)", 2), 3.0)
        assert p.degree <= 1
        assert p.coeff(1).isclose(Zeon.one(2))
        assert p.coeff(0).max_abs() < 1e-12

    def test_matches_extension_on_fiber(self, rng):
        # at scalar part z0 the polynomial form reproduces the extension
        for name, z0 in [("exp", 0.3 - 0.2j), ("sin", 1.1), ("log", 2.0),
                         ("sqrt", 4.0)]:
            e = ext(name, 3)
            p = polynomial_form(e, z0)
            u = Zeon.scalar(3, z0) + random_zeon(rng, 3).dual_part()
            assert p.eval(u).isclose(e.eval(u), eps=1e-9)

    def test_degree_bounded_by_n(self):
        assert polynomial_form(ext("exp", 4), 0.0).degree <= 4

    def test_off_domain_rejected(self):
        with pytest.raises(OutsideDomain):
            polynomial_form(ext("log", 2), -2.0)


# -- preimages ----------------------------------------------------------------


class TestPreimage:
    def test_exp_preimage_of_one_plus_generator(self):
        got = preimage(ext("exp", 2), Zeon.one(2) + Z1, 0.0)
        assert got.isclose(Z1, eps=1e-9)

    def test_cosine_preimage_from_exact_seed(self):
        lam, w = cosine_pair()
        got = preimage(ZeonExtension(by_name("cos"), 4), w, math.pi / 6)
        assert got.isclose(lam, eps=1e-9)

    def test_cosine_preimage_from_coarse_seed(self):
        # pi/3 sits in the same Newton basin as the true scalar
        # preimage pi/6, so refinement lands on the same answer
        lam, w = cosine_pair()
        got = preimage(ZeonExtension(by_name("cos"), 4), w, math.pi / 3)
        assert got.isclose(lam, eps=1e-9)

    def test_square_root_branch_follows_seed(self):
        w = Zeon(2, {(): 4, (1,): 4})
        e = ext("pow(2)", 2)
        plus = preimage(e, w, 2.0)
        minus = preimage(e, w, -2.0)
        assert plus.isclose(Zeon(2, {(): 2, (1,): 1}), eps=1e-9)
        assert minus.isclose(Zeon(2, {(): -2, (1,): -1}), eps=1e-9)

    def test_round_trip_through_extension(self, rng):
        for name in ("exp", "sin", "log"):
            e = ext(name, 4)
            for _ in range(3):
                u = random_zeon(rng, 4)
                if name == "log":
                    u = u + Zeon.scalar(4, 3.0 - u.scalar_part())
                w = e.eval(u)
                back = preimage(e, w, u.scalar_part() + 0.05)
                assert back.isclose(u, eps=1e-7)

    def test_image_of_preimage_is_input(self, rng):
        e = ext("exp", 3)
        w = Zeon.one(3) + random_zeon(rng, 3).dual_part()
        z = preimage(e, w, 0.0)
        assert e.eval(z).isclose(w, eps=1e-9)

    def test_no_scalar_preimage(self):
        # a real seed keeps Newton for sin(z) = 1.2 on the real line,
        # where no preimage exists; the iteration never settles
        with pytest.raises(SeedMismatch):
            preimage(ext("sin", 2), Zeon(2, {(): 1.2, (1,): 1.0}), 0.3)

    def test_unreachable_value_hits_flat_slope(self):
        # chasing exp(z) = 0 drives z left until the slope dies; the
        # reached point has no simple scalar preimage
        with pytest.raises(NotSpectrallySimple):
            preimage(ext("exp", 2), Z1, 0.0)

    def test_critical_point_rejected(self):
        # C(w) = 1 forces the scalar preimage 0, where cos' vanishes
        with pytest.raises(NotSpectrallySimple):
            preimage(ext("cos", 2), Zeon.one(2) + Z1, 0.0)

    def test_seed_outside_domain_rejected(self):
        with pytest.raises(OutsideDomain):
            preimage(ext("log", 2), Zeon.one(2), -1.0)

    def test_mixed_n_rejected(self):
        with pytest.raises(DimensionMismatch):
            preimage(ext("exp", 2), Zeon.one(3), 0.0)
