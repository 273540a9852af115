import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diowords.realnum import (
    DEFAULT_MAX_BITS,
    Enclosure,
    FromCF,
    Mobius,
    PrecisionBudgetError,
    Rational,
    SeriesE,
    SeriesShallit,
    SpecSyntaxError,
    Surd,
    digits,
    digits_from_enclosure,
    enclosure,
    enclosure_from_digits,
    mobius,
    parse_real_spec,
)


class TestEnclosure:
    def test_rational_is_point(self):
        enc = enclosure(Rational(1, 3))
        assert enc.is_point()
        assert enc.lo == Fraction(1, 3)

    def test_series_e_contains_e(self):
        enc = enclosure(SeriesE(), 64)
        assert float(enc.lo) <= math.e <= float(enc.hi)
        assert enc.width <= Fraction(1, 2**64)

    def test_nested_refinement(self):
        enc = enclosure(SeriesE(), 16)
        widths = [enc.width]
        bounds = [enc.bounds()]
        for _ in range(5):
            assert enc.refine()
            lo, hi = enc.bounds()
            plo, phi_ = bounds[-1]
            assert plo <= lo <= hi <= phi_
            assert enc.width < widths[-1]
            widths.append(enc.width)
            bounds.append((lo, hi))

    def test_budget_exhaustion(self):
        enc = enclosure(SeriesE(), 32, max_bits=64)
        assert enc.refine()
        assert not enc.refine()

    def test_surd_square_is_point(self):
        enc = enclosure(Surd(1, 2, 9))
        assert enc.is_point() and enc.lo == 2

    def test_surd_contains_value(self):
        enc = enclosure(Surd(0, 1, 2), 80)
        assert float(enc.lo) <= math.sqrt(2) <= float(enc.hi)

    def test_from_cf_tuple_exact(self):
        enc = enclosure(FromCF((3, 7)))
        assert enc.is_point() and enc.lo == Fraction(22, 7)

    def test_from_cf_stream(self):
        golden = enclosure(FromCF(lambda n: 1), 64)
        value = (1 + math.sqrt(5)) / 2
        assert float(golden.lo) <= value <= float(golden.hi)

    def test_validation(self):
        with pytest.raises(ValueError):
            Rational(1, 0)
        with pytest.raises(ValueError):
            Surd(1, 0, 2)
        with pytest.raises(ValueError):
            FromCF(())
        with pytest.raises(ValueError):
            FromCF((1, 0))
        with pytest.raises(ValueError):
            Mobius(1, 1, 1, 1, Rational(1, 2))  # det 0


class TestMobius:
    def test_identity(self):
        enc = mobius(1, 0, 0, 1, enclosure(Rational(1, 3)))
        assert enc.bounds() == (Fraction(1, 3), Fraction(1, 3))

    def test_shift(self):
        enc = mobius(1, 1, 0, 1, enclosure(Rational(1, 3)))
        assert enc.bounds() == (Fraction(4, 3), Fraction(4, 3))

    def test_reciprocal_of_e(self):
        enc = mobius(0, 1, 1, 0, enclosure(SeriesE(), 64))
        assert float(enc.lo) <= 1 / math.e <= float(enc.hi)

    def test_unimodular_required(self):
        with pytest.raises(ValueError):
            mobius(2, 0, 0, 1, enclosure(Rational(1, 3)))

    def test_pole_at_point(self):
        with pytest.raises(ValueError, match="pole"):
            mobius(0, 1, 1, 0, enclosure(Rational(0, 1)))

    def test_spec_variant_digits(self):
        stream = digits(Mobius(0, 1, 1, 0, SeriesE()), 10, 10)
        assert stream.as_text() == "0.3678794411 certified:10"

    def test_mu_agreement_under_shift(self):
        # x -> x + 1 permutes the quotient tail; exponent terms agree
        from diowords.contfrac import cf_from_enclosure, mu_estimate

        cf_inner = cf_from_enclosure(enclosure(SeriesE(), 64), 40)
        cf_image = cf_from_enclosure(mobius(1, 1, 0, 1, enclosure(SeriesE(), 64)), 40)
        mu_inner = mu_estimate(cf_inner, 6)
        mu_image = mu_estimate(cf_image, 6)
        assert abs(mu_inner.tail_max - mu_image.tail_max) <= 0.05


class TestDigits:
    def test_one_third(self):
        assert digits(Rational(1, 3), 10, 5).as_text() == "0.33333 certified:5"

    def test_terminating_expansion_pads_zeros(self):
        assert digits(Rational(1, 2), 10, 5).as_text() == "0.50000 certified:5"

    def test_e_fifteen_digits(self):
        assert digits(SeriesE(), 10, 15).as_text() == "2.718281828459045 certified:15"

    def test_e_two_precisions_agree(self):
        # same digits whether the enclosure starts coarse or fine
        coarse = digits_from_enclosure(enclosure(SeriesE(), 16), 10, 12)
        fine = digits_from_enclosure(enclosure(SeriesE(), 4096), 10, 12)
        assert coarse.fractional_digits == fine.fractional_digits

    def test_shallit_digit_positions(self):
        stream = digits(SeriesShallit(), 2, 16)
        assert stream.as_text() == "0.1101000100000001 certified:16"
        ones = {i + 1 for i, d in enumerate(stream.fractional_digits) if d}
        assert ones == {1, 2, 4, 8, 16}

    def test_sqrt2_against_isqrt_oracle(self):
        n = 40
        stream = digits(Surd(0, 1, 2), 10, n)
        scaled = math.isqrt(2 * 10 ** (2 * n))  # floor(sqrt(2) * 10^n)
        expected = [int(c) for c in str(scaled)[1:]]
        assert stream.integer_part == 1
        assert list(stream.fractional_digits) == expected

    def test_negative_value_floor_digits(self):
        stream = digits(Rational(-1, 3), 10, 4)
        assert stream.integer_part == -1
        assert list(stream.fractional_digits) == [6, 6, 6, 6]

    def test_binary_and_hex(self):
        assert digits(Rational(1, 2), 2, 3).fractional_digits == (1, 0, 0)
        assert digits(Rational(1, 16), 16, 2).fractional_digits == (1, 0)

    def test_base_validation(self):
        with pytest.raises(ValueError):
            digits(Rational(1, 2), 1, 3)

    def test_budget_exhaustion_gives_partial_stream(self):
        stream = digits(SeriesE(), 10, 400, max_bits=256)
        assert not stream.complete
        assert 0 < stream.certified < 400
        full = digits(SeriesE(), 10, stream.certified)
        assert stream.fractional_digits == full.fractional_digits

    def test_digit_value_consistency(self):
        # rational value of the digit prefix sits within b^(1-N) of the target
        n = 30
        stream = digits(SeriesE(), 10, n)
        enc = enclosure(SeriesE(), 256)
        mid = (enc.lo + enc.hi) / 2
        assert abs(stream.value() - mid) < Fraction(10) ** (1 - n)

    @given(st.integers(1, 200), st.integers(2, 300))
    @settings(max_examples=100)
    def test_rational_digits_match_long_division(self, p, q):
        from diowords.approx import expansion_digits

        p = p % q
        stream = digits(Rational(p, q), 10, 25)
        assert list(stream.fractional_digits) == expansion_digits(p, q, 10, 25)


class TestCrossRoutes:
    def test_e_digits_via_euler_quotients(self):
        def euler(n):
            if n == 0:
                return 2
            return 2 * (n + 1) // 3 if n % 3 == 2 else 1

        via_cf = digits(FromCF(euler), 10, 30)
        via_series = digits(SeriesE(), 10, 30)
        assert via_cf.fractional_digits == via_series.fractional_digits
        assert via_cf.integer_part == via_series.integer_part

    def test_golden_digits_via_cf_and_surd(self):
        via_cf = digits(FromCF(lambda n: 1), 2, 40)
        via_surd = digits(Surd(1, 2, 5), 2, 40)
        assert via_cf.fractional_digits == via_surd.fractional_digits

    def test_sqrt2_digits_via_cf_and_surd(self):
        via_cf = digits(FromCF(lambda n: 1 if n == 0 else 2), 10, 40)
        via_surd = digits(Surd(0, 1, 2), 10, 40)
        assert via_cf.fractional_digits == via_surd.fractional_digits


class TestEnclosureFromDigits:
    def test_fixed_digit_stream(self):
        enc = enclosure_from_digits(lambda n: [3] * n, 10, 0, bits=16)
        assert float(enc.lo) <= 1 / 3 <= float(enc.hi)
        enc.refine()
        assert enc.width < Fraction(1, 10**4)


class TestSpecGrammar:
    def test_roundtrip_forms(self):
        assert parse_real_spec("e") == SeriesE()
        assert parse_real_spec("shallit") == SeriesShallit()
        assert parse_real_spec("rat:22/7") == Rational(22, 7)
        assert parse_real_spec("rat:5") == Rational(5, 1)
        assert parse_real_spec("surd:1,2,5") == Surd(1, 2, 5)
        assert parse_real_spec("cf:2,1,2") == FromCF((2, 1, 2))
        spec = parse_real_spec("mobius:0,1,1,0:(e)")
        assert spec == Mobius(0, 1, 1, 0, SeriesE())

    def test_nested_mobius(self):
        spec = parse_real_spec("mobius:1,1,0,1:(mobius:0,1,1,0:(rat:1/3))")
        assert spec == Mobius(1, 1, 0, 1, Mobius(0, 1, 1, 0, Rational(1, 3)))

    def test_cf_file(self, tmp_path):
        path = tmp_path / "cf.json"
        path.write_text('["2", "1", "2"]')
        assert parse_real_spec(f"cf:@{path}") == FromCF((2, 1, 2))

    def test_errors_carry_position(self):
        with pytest.raises(SpecSyntaxError) as err:
            parse_real_spec("rat:x/y")
        assert err.value.position == 4
        with pytest.raises(SpecSyntaxError) as err:
            parse_real_spec("mobius:0,1,1,0:(nope)")
        assert err.value.position == 16
        with pytest.raises(SpecSyntaxError):
            parse_real_spec("wat:1")
