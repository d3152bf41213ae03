"""Core arithmetic: canonical forms, predicates, real-subfield tools."""

import cmath
import math
import random

import pytest

from cast_forge.cyclotomic import (
    CycRat,
    RealCyc,
    SumOfRoots,
    b_to_c,
    b_vector_value,
    c_to_b,
    c_vector_value,
    canonicalize,
    from_literal,
    has_rational_arg,
    integer,
    is_root_of_unity,
    mu,
    real_cmp,
    real_sign,
    to_complex,
    to_literal,
    zeta,
)


def rand_element(rng, n, terms=6, coeff=4, den_pool=(1, 1, 1, 2, 3, 5)):
    items = [(rng.randint(-coeff, coeff), rng.randint(0, 4 * n)) for _ in range(rng.randint(1, terms))]
    return canonicalize(n, items, rng.choice(den_pool))


def float_of(z):
    return z.complex_approx()


class TestCanonicalize:
    def test_zeta4_squared_is_minus_one(self):
        assert canonicalize(2, [(1, 0), (1, 2)]).is_zero()

    def test_vanishing_root_triple(self):
        assert canonicalize(3, [(1, 0), (1, 2), (1, 4)]).is_zero()

    def test_table_eta_n4(self):
        z = canonicalize(4, [(1, 0), (2, 1), (1, 3)])
        ref = 1 + 2 * cmath.exp(1j * math.pi / 4) + cmath.exp(3j * math.pi / 4)
        assert abs(float_of(z) - ref) < 1e-12

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            canonicalize(4, [(1, 0)], 0)

    def test_canonical_form_unique_under_regrouping(self):
        rng = random.Random(20210)
        for _ in range(400):
            n = rng.randint(2, 12)
            terms = [(rng.randint(-5, 5), rng.randint(-3 * n, 5 * n)) for _ in range(6)]
            den = rng.choice([1, 2, 3, 5, 7])
            z1 = canonicalize(n, terms, den)
            # regroup: split each term in two and shuffle, same value
            split = []
            for c, k in terms:
                a = rng.randint(-3, 3)
                split.append((a, k))
                split.append((c - a, k))
            rng.shuffle(split)
            scale = rng.choice([1, 2, 4])
            z2 = canonicalize(n, [(c * scale, k) for c, k in split], den * scale)
            assert z1 == z2

    def test_gcd_normalization(self):
        z = canonicalize(4, [(2, 0), (4, 1)], 6)
        assert z.den == 3 and z.num[0] == 1


class TestArithmetic:
    def test_conj_of_i(self):
        assert zeta(2, 1).conj() == zeta(2, 3)

    def test_pinwheel_norm(self):
        z = canonicalize(2, [(2, 0), (1, 1)])
        assert (z * z.conj()) == integer(2, 5)

    def test_n6_norm_matches_table(self):
        z = canonicalize(6, [(1, 0), (1, 1), (1, 3)])
        assert (z * z.conj()) == integer(6, 4) + mu(6, 2).value

    def test_conj_is_ring_automorphism(self):
        rng = random.Random(7)
        for _ in range(200):
            n = rng.randint(2, 10)
            a, b = rand_element(rng, n), rand_element(rng, n)
            assert (a * b).conj() == a.conj() * b.conj()
            assert a.conj().conj() == a
            assert (a + b).conj() == a.conj() + b.conj()

    def test_norm_multiplicative(self):
        rng = random.Random(8)
        for _ in range(150):
            n = rng.randint(2, 9)
            a, b = rand_element(rng, n), rand_element(rng, n)
            lhs = ((a * b) * (a * b).conj())
            rhs = (a * a.conj()) * (b * b.conj())
            assert lhs == rhs

    def test_mixed_orders_rejected(self):
        with pytest.raises(ValueError):
            zeta(2, 1) + zeta(3, 1)

    def test_inverse(self):
        rng = random.Random(9)
        for _ in range(60):
            n = rng.randint(2, 8)
            z = rand_element(rng, n)
            if z.is_zero():
                continue
            assert z * z.inverse() == integer(n, 1)

    def test_division_pinwheel_rotation(self):
        z = canonicalize(2, [(2, 0), (1, 1)])
        assert z / z.conj() == canonicalize(2, [(3, 0), (4, 1)], 5)


class TestNormSq:
    def test_roots_have_unit_norm(self):
        for n in range(2, 10):
            for k in range(2 * n):
                z = zeta(n, k)
                assert (z * z.conj()) == integer(n, 1)

    def test_n5_float_value(self):
        z = canonicalize(5, [(1, 0), (1, 1), (1, 3)])
        assert abs(z.norm_sq().float_approx() - 4.6180339887) < 1e-9

    def test_norm_2_plus_zeta6_is_7(self):
        # independent oracle: |2+e^(i pi/3)|^2
        z = canonicalize(3, [(2, 0), (1, 1)])
        assert z.norm_sq().value == integer(3, 7)
        oracle = abs(2 + cmath.exp(1j * math.pi / 3)) ** 2
        assert abs(oracle - 7.0) < 1e-12

    def test_b0_of_norm_is_sum_of_squares(self):
        # expansion bound: constant term of |eta|^2 >= l for irreducible sums
        rng = random.Random(11)
        for _ in range(100):
            n = rng.randint(4, 9)
            alphas = sorted(rng.randint(0, 2 * n - 1) for _ in range(rng.randint(1, 5)))
            s = SumOfRoots(n, alphas)
            mult = s.multiplicities()
            v = s.value()
            nrm = v * v.conj()
            # float check of the identity sum a_k^2 = constant + pair content
            total = sum(a * a for a in mult.values())
            approx = nrm.complex_approx().real
            pair_part = sum(
                2 * m1 * m2 * math.cos((k1 - k2) * math.pi / n)
                for i, (k1, m1) in enumerate(mult.items())
                for (k2, m2) in list(mult.items())[i + 1:]
            )
            assert abs(approx - total - pair_part) < 1e-9


class TestRootOfUnity:
    def test_direct_hits(self):
        assert is_root_of_unity(zeta(4, 5)) == 5

    def test_pinwheel_unit_is_not_root(self):
        z = canonicalize(2, [(3, 0), (4, 1)], 5)
        assert is_root_of_unity(z) is None
        w = integer(2, 1)
        for _ in range(8):
            w = w * z
        assert w != integer(2, 1)  # oracle: z^8 != 1

    def test_norm_not_one(self):
        assert is_root_of_unity(canonicalize(3, [(1, 0), (1, 1)])) is None

    def test_lemma_equivalence(self):
        # z^(2n) = 1 and z != 0 iff z is one of the 2n roots
        rng = random.Random(13)
        for _ in range(300):
            n = rng.randint(2, 8)
            z = rand_element(rng, n)
            if z.is_zero():
                continue
            w = integer(n, 1)
            for _ in range(2 * n):
                w = w * z
            k = is_root_of_unity(z)
            assert (w == integer(n, 1)) == (k is not None)
            if k is not None:
                assert (z * z.conj()) == integer(n, 1)


class TestHasRationalArg:
    def test_pi_over_10(self):
        z = canonicalize(5, [(1, 0), (1, 1)])
        assert has_rational_arg(z) == 1

    def test_three_pi_over_8(self):
        z = canonicalize(4, [(1, 0), (1, 1), (1, 2), (1, 3)])
        assert has_rational_arg(z) == 3

    def test_minimal_multiplier_irrational(self):
        z = canonicalize(6, [(1, 0), (1, 1), (1, 3)])
        assert has_rational_arg(z) is None

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            has_rational_arg(integer(4, 0))

    def test_halfplane_lift(self):
        # -z has argument shifted by pi: k shifts by 2n
        z = canonicalize(5, [(1, 0), (1, 1)])
        k = has_rational_arg(z)
        k2 = has_rational_arg(-z)
        assert (k2 - k) % (4 * 5) == 2 * 5

    def test_agrees_with_float_oracle(self):
        rng = random.Random(17)
        checked = 0
        for _ in range(2000):
            n = rng.randint(2, 12)
            l = rng.randint(1, 6)
            z = canonicalize(n, [(1, rng.randint(0, 2 * n - 1)) for _ in range(l)])
            if z.is_zero():
                continue
            checked += 1
            k = has_rational_arg(z)
            ang = cmath.phase(float_of(z)) % (2 * math.pi)
            ratio = ang / (math.pi / (2 * n))
            near = abs(ratio - round(ratio)) < 1e-9
            assert (k is not None) == near
            if k is not None:
                d = (ang - k * math.pi / (2 * n)) % (2 * math.pi)
                assert min(d, 2 * math.pi - d) < 1e-9
        assert checked > 1500


class TestMu:
    def test_mu_4_2_is_sqrt2(self):
        assert mu(4, 2).value == zeta(4, 1) + zeta(4, -1)

    def test_float_values(self):
        for n in range(2, 16):
            for k in range(1, n):
                want = math.sin(k * math.pi / n) / math.sin(math.pi / n)
                assert abs(mu(n, k).float_approx() - want) < 1e-9

    def test_unit_diagonal(self):
        for n in range(2, 10):
            assert mu(n, 1).value == integer(n, 1)

    def test_symmetry(self):
        for n in range(2, 31):
            for k in range(1, n):
                assert mu(n, k) == mu(n, n - k)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            mu(5, 5)


class TestBCVectors:
    def test_table_row_n5(self):
        c = b_to_c(5, [3, 1])
        assert c_vector_value(5, c) == b_vector_value(5, [3, 1])

    def test_single_diagonal(self):
        assert c_to_b(2, [1]) == [1]

    def test_n12_row(self):
        v = b_vector_value(12, [4, 1, 0, 1])
        assert v.value == integer(12, 4) + mu(12, 4).value

    def test_roundtrip_random(self):
        rng = random.Random(23)
        for _ in range(1000):
            n = rng.randint(2, 14)
            c = [rng.randint(0, 4) for _ in range(n // 2)]
            b = c_to_b(n, c)
            back = b_to_c(n, b)
            assert back[: len(c)] == c + [0] * (len(back[: len(c)]) - len(c))
            assert c_vector_value(n, c) == b_vector_value(n, b)

    def test_negative_coefficient_reported(self):
        with pytest.raises(ValueError):
            b_to_c(5, [0, 0, 1])


class TestRealSign:
    def test_sqrt2_greater_one(self):
        assert real_sign(RealCyc(mu(4, 2).value - integer(4, 1))) == 1

    def test_golden_comparison(self):
        a = RealCyc(integer(5, 3) + mu(5, 2).value)
        b = RealCyc(integer(5, 4))
        assert real_cmp(a, b) == 1

    def test_exact_cancellation(self):
        x = integer(5, 1) + zeta(5, 2) + zeta(5, 2).conj() - zeta(5, 1) - zeta(5, 1).conj()
        assert real_sign(RealCyc(x)) == 0

    def test_tiny_but_nonzero(self):
        # mu(30,2) - mu(30,2) + small difference of near-equal diagonals
        x = mu(30, 14).value - mu(30, 15).value
        s = real_sign(RealCyc(x))
        want = math.sin(14 * math.pi / 30) - math.sin(15 * math.pi / 30)
        assert s == (1 if want > 0 else -1)


class TestToComplex:
    def test_exact_i(self):
        re, im, err = to_complex(zeta(2, 1))
        assert abs(re) < 1e-12 and abs(im - 1) < 1e-12

    def test_table_n2(self):
        re, im, err = to_complex(canonicalize(2, [(2, 0), (1, 1)]))
        assert abs(re - 2) < 1e-12 and abs(im - 1) < 1e-12

    def test_error_bound_respected(self):
        z = canonicalize(8, [(1, 0), (1, 1), (1, 4)])
        re, im, err = to_complex(z, 1e-20)
        assert err <= 1e-20
        ref = 1 + cmath.exp(1j * math.pi / 8) + cmath.exp(1j * math.pi / 2)
        assert abs(complex(re, im) - ref) < 1e-14

    def test_bad_precision(self):
        with pytest.raises(ValueError):
            to_complex(zeta(2, 1), 0)


class TestLiterals:
    def test_roundtrip(self):
        rng = random.Random(29)
        for _ in range(200):
            n = rng.randint(2, 10)
            z = rand_element(rng, n)
            assert from_literal(n, to_literal(z)) == z

    def test_malformed(self):
        with pytest.raises(ValueError):
            from_literal(4, {"den": 1})
        with pytest.raises(ValueError):
            from_literal(4, {"den": 0, "terms": []})


class TestSumOfRoots:
    def test_value(self):
        s = SumOfRoots(4, [0, 1, 1, 3])
        assert s.value() == canonicalize(4, [(1, 0), (2, 1), (1, 3)])

    def test_orbit_has_4n_images_with_equal_norm(self):
        rng = random.Random(31)
        for _ in range(40):
            n = rng.randint(2, 8)
            s = SumOfRoots(n, [rng.randint(0, 2 * n - 1) for _ in range(3)])
            v = s.value()
            if v.is_zero():
                continue
            base_norm = v * v.conj()
            base_arg = has_rational_arg(v)
            images = set()
            for c in range(2 * n):
                for refl in (False, True):
                    img = s.reflected().rotated(c) if refl else s.rotated(c)
                    images.add(img.alphas)
                    iv = img.value()
                    assert iv * iv.conj() == base_norm
                    assert (has_rational_arg(iv) is None) == (base_arg is None)
            assert len(images) <= 4 * n
