"""Finite-word primitives: alphabets, fractional powers, factor complexity.

A word is an immutable sequence of small integer letters.  The main
analysis tool is the complexity profile: for a prefix of length L it
reports, for every window size n, the number of distinct length-n
blocks occurring in the prefix.  Two independent counting kernels are
provided (rolling hash with collision verification, and a suffix
automaton) and are cross-checked in the test suite.

A profile computed on a finite prefix only ever underestimates the
complexity of the infinite word it was cut from; downstream reporting
labels these values as lower bounds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

# Letters are stored as bytes, which caps the alphabet.  Digit streams in
# larger bases exist elsewhere; the word-analysis surface does not need them.
MAX_ALPHABET = 256


@dataclass(frozen=True)
class Word:
    """Immutable finite word over the alphabet {0, ..., alphabet_size - 1}."""

    symbols: bytes
    alphabet_size: int

    def __post_init__(self) -> None:
        if not 2 <= self.alphabet_size <= MAX_ALPHABET:
            raise ValueError(
                f"alphabet size must be in [2, {MAX_ALPHABET}], got {self.alphabet_size}"
            )
        if not isinstance(self.symbols, bytes):
            object.__setattr__(self, "symbols", bytes(self.symbols))
        if self.symbols and max(self.symbols) >= self.alphabet_size:
            raise ValueError("letter out of range for alphabet")

    @classmethod
    def from_digits(cls, text: str, alphabet_size: int | None = None) -> "Word":
        """Build a word from a digit string such as "0100101"."""
        letters = bytes(int(ch) for ch in text)
        if alphabet_size is None:
            alphabet_size = max(2, (max(letters) + 1) if letters else 2)
        return cls(letters, alphabet_size)

    @classmethod
    def from_letters(cls, letters: Iterable[int], alphabet_size: int | None = None) -> "Word":
        data = bytes(letters)
        if alphabet_size is None:
            alphabet_size = max(2, (max(data) + 1) if data else 2)
        return cls(data, alphabet_size)

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.symbols[i], self.alphabet_size)
        return self.symbols[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def prefix(self, n: int) -> "Word":
        if n > len(self):
            raise ValueError("prefix longer than word")
        return Word(self.symbols[:n], self.alphabet_size)

    def to_text(self) -> str:
        """Digit-string rendering; only available for alphabets up to 10."""
        if self.alphabet_size > 10:
            raise ValueError("text rendering needs alphabet size <= 10")
        return "".join(str(c) for c in self.symbols)

    def to_json(self) -> str:
        if self.alphabet_size <= 10:
            return json.dumps(self.to_text())
        return json.dumps(list(self.symbols))


@dataclass(frozen=True)
class ComplexityProfile:
    """Distinct-factor counts of a prefix: counts[n-1] = p(n) for n = 1..n_max."""

    prefix_length: int
    alphabet_size: int
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        L, b = self.prefix_length, self.alphabet_size
        for i, c in enumerate(self.counts):
            n = i + 1
            if not 1 <= c <= _max_factor_count(b, n, L):
                raise ValueError(f"count p({n})={c} out of range for L={L}, b={b}")
            if i + 1 < len(self.counts) and c > self.counts[i + 1] + 1:
                raise ValueError(f"count p({n})={c} exceeds p({n+1})+1")

    @property
    def n_max(self) -> int:
        return len(self.counts)

    def count(self, n: int) -> int:
        return self.counts[n - 1]

    def to_csv(self) -> str:
        lines = ["n,p_n,gap"]
        for i, c in enumerate(self.counts):
            n = i + 1
            lines.append(f"{n},{c},{c - n}")
        return "\n".join(lines) + "\n"


def _max_factor_count(b: int, n: int, L: int) -> int:
    # min(b^n, L-n+1) without materializing huge powers
    window_bound = L - n + 1
    if n * b.bit_length() > 64:
        return window_bound
    return min(b**n, window_bound)


def fractional_power(w: Word, exponent) -> Word:
    """W^x: W repeated floor(x) times, then the prefix of ceil(frac(x)*|W|) letters.

    The exponent must be exact (int, Fraction, or a string like "5/3");
    floats are rejected so word lengths never pass through rounding.
    """
    if len(w) == 0:
        raise ValueError("empty base word")
    if isinstance(exponent, float):
        raise TypeError("exponent must be exact, not float")
    x = Fraction(exponent)
    if x <= 0:
        raise ValueError("exponent must be positive")
    whole, rem = divmod(x.numerator, x.denominator)
    # ceil(rem/den * |W|) in integer arithmetic
    tail = -((-rem * len(w)) // x.denominator)
    return Word(w.symbols * whole + w.symbols[:tail], w.alphabet_size)


def occurrence_count(w: Word, letter: int) -> int:
    """Number of positions of ``w`` carrying ``letter``."""
    if not 0 <= letter < w.alphabet_size:
        raise ValueError("letter out of range for alphabet")
    return w.symbols.count(letter)


_HASH_MOD = (1 << 61) - 1
_HASH_BASE = 1_000_003
# The rolling-hash kernel is preferred for shallow profiles; deep profiles
# (n_max beyond this) switch to the suffix automaton, which is linear in L.
HASH_KERNEL_MAX_N = 64


def complexity_profile(w: Word, n_max: int) -> ComplexityProfile:
    """Exact distinct-factor counts of the prefix, for window sizes 1..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    if n_max > len(w):
        raise ValueError("window exceeds prefix")
    if n_max <= HASH_KERNEL_MAX_N:
        counts = _factor_counts_hash(w.symbols, n_max)
    else:
        counts = _factor_counts_automaton(w.symbols, n_max)
    return ComplexityProfile(len(w), w.alphabet_size, tuple(counts))


def gap_profile(profile: ComplexityProfile) -> list[int]:
    """The sequence p(n) - n; negative entries flag sub-Sturmian (periodic) data."""
    return [c - (i + 1) for i, c in enumerate(profile.counts)]


def _factor_counts_hash(data: bytes, n_max: int) -> list[int]:
    """Rolling-hash window dedup with collision verification.

    Windows are bucketed by a 61-bit polynomial hash; buckets with more
    than one position are resolved by comparing the actual windows, so
    hash collisions cannot inflate or deflate the counts.
    """
    L = len(data)
    h = [0] * (L + 1)
    for i, c in enumerate(data):
        h[i + 1] = (h[i] * _HASH_BASE + c + 1) % _HASH_MOD
    powers = [1] * (L + 1)
    for i in range(L):
        powers[i + 1] = powers[i] * _HASH_BASE % _HASH_MOD
    counts = []
    for n in range(1, n_max + 1):
        pn = powers[n]
        buckets: dict[int, list[int]] = {}
        for i in range(L - n + 1):
            key = (h[i + n] - h[i] * pn) % _HASH_MOD
            buckets.setdefault(key, []).append(i)
        distinct = 0
        for positions in buckets.values():
            if len(positions) == 1:
                distinct += 1
            else:
                distinct += len({data[j : j + n] for j in positions})
        counts.append(distinct)
    return counts


def _factor_counts_automaton(data: bytes, n_max: int) -> list[int]:
    """Distinct-substring counts per length from a suffix automaton.

    Each non-initial state covers the substring lengths
    (len(link) , len(state)]; accumulating those intervals in a
    difference array yields all counts in one O(L) pass.
    """
    maxlen = [0]
    link = [-1]
    trans: list[dict[int, int]] = [{}]
    last = 0
    for ch in data:
        cur = len(maxlen)
        maxlen.append(maxlen[last] + 1)
        link.append(-1)
        trans.append({})
        p = last
        while p != -1 and ch not in trans[p]:
            trans[p][ch] = cur
            p = link[p]
        if p == -1:
            link[cur] = 0
        else:
            q = trans[p][ch]
            if maxlen[p] + 1 == maxlen[q]:
                link[cur] = q
            else:
                clone = len(maxlen)
                maxlen.append(maxlen[p] + 1)
                link.append(link[q])
                trans.append(dict(trans[q]))
                while p != -1 and trans[p].get(ch) == q:
                    trans[p][ch] = clone
                    p = link[p]
                link[q] = clone
                link[cur] = clone
        last = cur

    L = len(data)
    diff = [0] * (L + 2)
    for s in range(1, len(maxlen)):
        diff[maxlen[link[s]] + 1] += 1
        diff[maxlen[s] + 1] -= 1
    counts = []
    acc = 0
    for n in range(1, n_max + 1):
        acc += diff[n]
        counts.append(acc)
    return counts


def factor_counts_brute(data: Sequence[int], n_max: int) -> list[int]:
    """Reference counter: a set of explicit windows per length.

    Quadratic and only meant as an oracle for the fast kernels.
    """
    data = bytes(data)
    return [len({data[i : i + n] for i in range(len(data) - n + 1)}) for n in range(1, n_max + 1)]
