import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diowords.contfrac import (
    CFExpansion,
    bounded_pq_check,
    cf_from_enclosure,
    cf_of_rational,
    convergents_from_quotients,
    mu_estimate,
)
from diowords.realnum import FromCF, Rational, SeriesE, SeriesShallit, Surd, enclosure


def euler_quotients(count):
    out = [2]
    k = 1
    while len(out) < count:
        out.extend((1, 2 * k, 1))
        k += 1
    return out[:count]


rationals = st.builds(
    Fraction, st.integers(-10**6, 10**6), st.integers(1, 10**6)
)


class TestRationalCF:
    def test_22_over_7(self):
        cf = cf_from_enclosure(enclosure(Rational(22, 7)), 10)
        assert list(cf.quotients) == [3, 7]
        assert cf.rational and cf.complete

    def test_canonical_last_quotient(self):
        assert cf_of_rational(Fraction(5, 3)) == [1, 1, 2]
        assert cf_of_rational(Fraction(1, 1)) == [1]
        assert cf_of_rational(Fraction(-1, 3)) == [-1, 1, 2]

    @given(rationals)
    @settings(max_examples=300)
    def test_roundtrip(self, x):
        qs = cf_of_rational(x)
        assert len(qs) == 1 or qs[-1] >= 2
        assert all(a >= 1 for a in qs[1:])
        cf = cf_from_enclosure(enclosure(FromCF(tuple(qs))), len(qs))
        assert list(cf.quotients) == qs
        assert cf.value() == x

    @given(rationals)
    @settings(max_examples=200)
    def test_convergent_invariants(self, x):
        qs = cf_of_rational(x)
        convs = convergents_from_quotients(qs)
        p_prev, q_prev = 1, 0
        p_prev2, q_prev2 = 0, 1
        for a, (p, q) in zip(qs, convs):
            assert p == a * p_prev + p_prev2
            assert q == a * q_prev + q_prev2
            assert math.gcd(p, q) == 1
            p_prev2, q_prev2, p_prev, q_prev = p_prev, q_prev, p, q
        denominators = [q for _, q in convs[1:]]
        assert denominators == sorted(set(denominators))


class TestIrrationalCF:
    def test_golden_all_ones(self):
        cf = cf_from_enclosure(enclosure(Surd(1, 2, 5)), 40)
        assert list(cf.quotients) == [1] * 40
        assert not cf.rational

    def test_euler_pattern(self):
        cf = cf_from_enclosure(enclosure(SeriesE()), 30)
        assert list(cf.quotients) == euler_quotients(30)

    def test_sandwich_and_convergent_gap(self):
        enc = enclosure(SeriesE(), 64)
        cf = cf_from_enclosure(enc, 20)
        enc.refine_below(Fraction(1, 10**40))
        lo, hi = enc.bounds()
        for k in range(0, 18, 2):
            even = cf.convergent(k)
            odd = cf.convergent(k + 1)
            assert even <= lo and hi <= odd
        for n in range(19):
            p, q = cf.convergents[n]
            q_next = cf.convergents[n + 1][1]
            err_hi = max(abs(hi - Fraction(p, q)), abs(lo - Fraction(p, q)))
            assert err_hi < Fraction(1, q * q_next) + (hi - lo)

    def test_budget_exhaustion_is_partial_not_error(self):
        cf = cf_from_enclosure(enclosure(SeriesE(), 16, max_bits=32), 200)
        assert cf.budget_exhausted
        assert 0 < cf.certified < 200
        assert list(cf.quotients) == euler_quotients(cf.certified)

    def test_convergents_roundtrip_in_canonical_form(self):
        cf = cf_from_enclosure(enclosure(SeriesE()), 15)
        for n in range(len(cf.quotients)):
            prefix = list(cf.quotients[: n + 1])
            if n > 0 and prefix[-1] == 1:
                prefix = prefix[:-1]
                prefix[-1] += 1
            back = cf_from_enclosure(enclosure(Rational(*cf.convergents[n])), n + 2)
            assert list(back.quotients) == prefix


class TestMuEstimate:
    def test_golden_terms_exactly_two(self):
        cf = cf_from_enclosure(enclosure(Surd(1, 2, 5)), 40)
        mu = mu_estimate(cf, 5)
        assert all(v == 2.0 for _, v in mu.values)
        assert mu.global_max == 2.0 and mu.tail_max == 2.0

    def test_e_window_below_2_2(self):
        cf = cf_from_enclosure(enclosure(SeriesE()), 62)
        mu = mu_estimate(cf, n_min=30)
        window = [v for n, v in mu.values if 30 <= n <= 60]
        assert len(window) == 31
        assert max(window) <= 2.2

    def test_synthetic_large_quotients_push_terms_to_three(self):
        # choose a_{n+1} = q_n so that log a_{n+1} / log q_n = 1
        qs = [1, 2]
        convs = convergents_from_quotients(qs)
        while len(qs) < 12:
            qs.append(convs[-1][1])
            convs = convergents_from_quotients(qs)
        cf = CFExpansion(tuple(qs), convs)
        mu = mu_estimate(cf, 5)
        tail = [v for _, v in mu.values][-4:]
        assert all(abs(v - 3.0) < 1e-9 for v in tail)

    def test_terms_at_least_two(self):
        cf = cf_from_enclosure(enclosure(SeriesE()), 40)
        mu = mu_estimate(cf, 5)
        assert all(v >= 2.0 for _, v in mu.values)

    def test_too_few_terms(self):
        cf = cf_from_enclosure(enclosure(Surd(1, 2, 5)), 6)
        with pytest.raises(ValueError, match="too few certified terms"):
            mu_estimate(cf, 5)

    def test_small_denominator_guard(self):
        cf = cf_from_enclosure(enclosure(Surd(1, 2, 5)), 10)
        with pytest.raises(ValueError):
            mu_estimate(cf, 1)  # q_1 = 1 would put log 1 in the denominator


class TestBoundedPQ:
    def test_golden(self):
        cf = cf_from_enclosure(enclosure(Surd(1, 2, 5)), 30)
        assert bounded_pq_check(cf, 30) == 1

    def test_e_quotients_grow(self):
        cf = cf_from_enclosure(enclosure(SeriesE()), 30)
        assert bounded_pq_check(cf, 30) == max(euler_quotients(30))
        assert bounded_pq_check(cf, 30) > bounded_pq_check(cf, 10)

    def test_shallit_small(self):
        cf = cf_from_enclosure(enclosure(SeriesShallit()), 20)
        assert bounded_pq_check(cf, 20) <= 6

    def test_window_validation(self):
        cf = cf_from_enclosure(enclosure(Surd(1, 2, 5)), 10)
        with pytest.raises(ValueError):
            bounded_pq_check(cf, 11)
