import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diowords.words import (
    ComplexityProfile,
    Word,
    complexity_profile,
    factor_counts_brute,
    fractional_power,
    gap_profile,
    occurrence_count,
    _factor_counts_automaton,
    _factor_counts_hash,
)


def fib_text(n):
    s = "0"
    while len(s) < n:
        s = s.replace("0", "a").replace("1", "0").replace("a", "01")
    return s[:n]


words_strategy = st.builds(
    lambda letters, b: Word(bytes(min(x, b - 1) for x in letters), b),
    st.lists(st.integers(0, 3), min_size=1, max_size=60),
    st.integers(2, 4),
)


class TestWord:
    def test_letters_validated(self):
        with pytest.raises(ValueError):
            Word(bytes([0, 2]), 2)
        with pytest.raises(ValueError):
            Word(b"\x00", 1)

    def test_from_digits_roundtrip(self):
        w = Word.from_digits("0100101")
        assert w.to_text() == "0100101"
        assert len(w) == 7
        assert w.alphabet_size == 2
        assert list(w) == [0, 1, 0, 0, 1, 0, 1]

    def test_json_forms(self):
        assert json.loads(Word.from_digits("010").to_json()) == "010"
        big = Word(bytes([0, 11]), 12)
        assert json.loads(big.to_json()) == [0, 11]


class TestFractionalPower:
    def test_identity(self):
        assert fractional_power(Word.from_digits("012", 3), 1).to_text() == "012"

    def test_integer_power(self):
        assert fractional_power(Word.from_digits("01"), 2).to_text() == "0101"

    def test_proper_fraction(self):
        # one full copy then ceil((2/3)*3) = 2 prefix letters
        assert fractional_power(Word.from_digits("011"), Fraction(5, 3)).to_text() == "01101"

    def test_empty_base_word(self):
        with pytest.raises(ValueError, match="empty base word"):
            fractional_power(Word(b"", 2), 2)

    def test_float_rejected(self):
        with pytest.raises(TypeError):
            fractional_power(Word.from_digits("01"), 1.5)

    def test_nonpositive(self):
        with pytest.raises(ValueError):
            fractional_power(Word.from_digits("01"), 0)

    @given(words_strategy, st.fractions(min_value=Fraction(1, 8), max_value=8))
    @settings(max_examples=150)
    def test_length_law_and_prefix(self, w, x):
        out = fractional_power(w, x)
        whole = x.numerator // x.denominator
        frac = x - whole
        expected = whole * len(w) + -((-frac.numerator * len(w)) // frac.denominator)
        assert len(out) == expected
        bigger = fractional_power(w, x + Fraction(1, 2))
        assert bigger.symbols.startswith(out.symbols)


class TestComplexityProfile:
    def test_constant_word(self):
        prof = complexity_profile(Word.from_digits("0000000"), 3)
        assert prof.counts == (1, 1, 1)

    def test_alternating_word(self):
        prof = complexity_profile(Word.from_digits("0101010"), 3)
        assert prof.counts == (2, 2, 2)

    def test_fibonacci_prefix_counts(self):
        w = Word.from_digits(fib_text(200))
        prof = complexity_profile(w, 20)
        assert prof.counts == tuple(n + 1 for n in range(1, 21))

    def test_window_exceeds_prefix(self):
        with pytest.raises(ValueError, match="window exceeds prefix"):
            complexity_profile(Word.from_digits("01"), 3)

    def test_csv(self):
        prof = complexity_profile(Word.from_digits("0101010"), 2)
        assert prof.to_csv() == "n,p_n,gap\n1,2,1\n2,2,0\n"

    @given(words_strategy)
    @settings(max_examples=150)
    def test_kernels_agree_with_brute(self, w):
        n_max = len(w)
        brute = factor_counts_brute(w.symbols, n_max)
        assert _factor_counts_hash(w.symbols, n_max) == brute
        assert _factor_counts_automaton(w.symbols, n_max) == brute

    @given(words_strategy)
    @settings(max_examples=150)
    def test_invariants(self, w):
        prof = complexity_profile(w, len(w))
        L, b = len(w), w.alphabet_size
        for i, c in enumerate(prof.counts):
            n = i + 1
            assert 1 <= c <= min(b**n, L - n + 1)
            if n < len(prof.counts):
                assert c <= prof.counts[i + 1] + 1

    @given(words_strategy, st.integers(1, 20))
    @settings(max_examples=100)
    def test_monotone_in_prefix_length(self, w, cut):
        if cut >= len(w):
            return
        shorter = w.prefix(cut)
        n_max = min(len(shorter), 5)
        a = complexity_profile(shorter, n_max)
        b = complexity_profile(w, n_max)
        assert all(x <= y for x, y in zip(a.counts, b.counts))

    def test_eventually_periodic_counts_bounded(self):
        period = "0110"
        w = Word.from_digits(period * 100)
        prof = complexity_profile(w, 50)
        # counts cannot exceed the period length once n is large
        assert all(c <= len(period) for c in prof.counts[len(period):])

    def test_deep_profile_uses_automaton(self):
        w = Word.from_digits(fib_text(300))
        prof = complexity_profile(w, 150)
        assert prof.counts[:20] == tuple(n + 1 for n in range(1, 21))

    def test_profile_validation(self):
        with pytest.raises(ValueError):
            ComplexityProfile(5, 2, (3, 1))  # p(1)=3 > p(2)+1


class TestOccurrenceAndGap:
    def test_occurrences(self):
        assert occurrence_count(Word.from_digits("0101"), 1) == 2
        assert occurrence_count(Word.from_digits("000"), 1) == 0
        assert occurrence_count(Word.from_digits("0100101"), 0) == 4

    def test_letter_out_of_range(self):
        with pytest.raises(ValueError):
            occurrence_count(Word.from_digits("01"), 2)

    def test_gap_profile_fibonacci(self):
        prof = complexity_profile(Word.from_digits(fib_text(200)), 20)
        assert gap_profile(prof) == [1] * 20

    def test_gap_profile_constant(self):
        prof = complexity_profile(Word.from_digits("0000000"), 3)
        assert gap_profile(prof)[2] == 1 - 3

    def test_gap_profile_alternating(self):
        prof = complexity_profile(Word.from_digits("01" * 10), 5)
        assert gap_profile(prof)[4] == 2 - 5
