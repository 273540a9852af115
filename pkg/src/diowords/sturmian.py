"""Sturmian and quasi-Sturmian word generation with exact slope arithmetic.

Binary mechanical words are produced letter by letter from
s(n) = floor((n+1)*alpha + rho) - floor(n*alpha + rho), where the
irrational slope alpha in (0, 1) is either a quadratic surd
(P + sqrt(D))/Q or a continued-fraction quotient sequence.  No floor is
ever taken through floating point: surd floors reduce to an integer
square root, and continued-fraction slopes are bracketed by convergents
that are extended until the floor is unambiguous.

Quasi-Sturmian words are built as W followed by the image of a Sturmian
word under a nonerasing binary morphism; the checkers in this module
measure the complexity plateau p(n) = n + k and the frequency and
length laws that make that construction work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .words import Word, complexity_profile

_SLOPE_EXTEND_CAP = 100_000


def _sign_plus_root(a: int, s: int, d: int) -> int:
    """Sign of a + s*sqrt(d) for nonsquare d > 0, s in {-1, 0, 1}."""
    if s == 0:
        return (a > 0) - (a < 0)
    if s > 0:
        if a >= 0:
            return 1
        return 1 if d > a * a else -1
    if a <= 0:
        return -1
    return 1 if a * a > d else -1


@dataclass(frozen=True)
class SurdSlope:
    """Quadratic irrational slope (p + sqrt(d))/q, constrained to (0, 1)."""

    p: int
    q: int
    d: int

    def __post_init__(self) -> None:
        if self.q == 0:
            raise ValueError("surd denominator must be nonzero")
        if self.d <= 0 or math.isqrt(self.d) ** 2 == self.d:
            raise ValueError("surd radicand must be positive and not a perfect square")
        pp, ss, qq = self._normalized()
        if _sign_plus_root(pp, ss, self.d) <= 0:
            raise ValueError("slope must lie in (0, 1)")
        if _sign_plus_root(pp - qq, ss, self.d) >= 0:
            raise ValueError("slope must lie in (0, 1)")

    def _normalized(self) -> tuple[int, int, int]:
        # value = (P + S*sqrt(d))/Q with Q > 0
        if self.q > 0:
            return self.p, 1, self.q
        return -self.p, -1, -self.q

    def is_irrational(self) -> bool:
        return True

    def bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        pp, ss, qq = self._normalized()
        scale = 1 << bits
        t = math.isqrt(self.d * scale * scale)
        root_lo, root_hi = Fraction(t, scale), Fraction(t + 1, scale)
        if ss < 0:
            root_lo, root_hi = -root_hi, -root_lo
        a = (pp + root_lo) / qq
        b = (pp + root_hi) / qq
        return (a, b) if a <= b else (b, a)

    def floor_times(self, n: int, rho: Fraction) -> int:
        """Exact floor(n*alpha + rho)."""
        pp, ss, qq = self._normalized()
        rp, rq = rho.numerator, rho.denominator
        a = n * pp * rq + rp * qq
        b = n * rq
        c = qq * rq
        if b == 0:
            return a // c
        t = math.isqrt(b * b * self.d)
        # b*sqrt(d) is irrational here, so its floor is t (resp. -t-1).
        return (a + t) // c if ss > 0 else (a - t - 1) // c

    def describe(self) -> str:
        return f"({self.p}+sqrt({self.d}))/{self.q}"


class CFSlope:
    """Slope given by the partial quotients of [0; m1, m2, ...].

    A finite quotient list denotes a rational and is accepted at parse
    time but rejected by every consumer that needs an irrational slope.
    Periodic tails and generator-backed presets are irrational.
    """

    def __init__(
        self,
        head: tuple[int, ...] = (),
        cycle: tuple[int, ...] = (),
        fn: Callable[[int], int] | None = None,
        label: str | None = None,
    ) -> None:
        for m in (*head, *cycle):
            if m < 1:
                raise ValueError("partial quotients must be >= 1")
        if cycle and fn:
            raise ValueError("give either a periodic tail or a generator, not both")
        self.head = tuple(head)
        self.cycle = tuple(cycle)
        self.fn = fn
        self.label = label
        self._state: _CFSlopeState | None = None

    def quotient(self, i: int) -> int:
        """The i-th partial quotient m_i, 1-based."""
        if i <= len(self.head):
            return self.head[i - 1]
        if self.cycle:
            return self.cycle[(i - len(self.head) - 1) % len(self.cycle)]
        if self.fn is not None:
            m = self.fn(i)
            if m < 1:
                raise ValueError("partial quotients must be >= 1")
            return m
        raise IndexError("finite quotient list exhausted")

    def is_irrational(self) -> bool:
        return bool(self.cycle) or self.fn is not None

    def _shared_state(self) -> "_CFSlopeState":
        if self._state is None:
            self._state = _CFSlopeState(self)
        return self._state

    def bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        if not self.is_irrational():
            v = self.value()
            return v, v
        state = self._shared_state()
        target = Fraction(1, 1 << bits)
        while state.width() > target:
            state.extend()
        ln, ld, hn, hd = state.bracket()
        return Fraction(ln, ld), Fraction(hn, hd)

    def value(self) -> Fraction:
        """Exact value; only defined for finite (rational) quotient lists."""
        if self.is_irrational():
            raise ValueError("irrational slope has no exact rational value")
        x = Fraction(0)
        for m in reversed(self.head):
            x = Fraction(1, m + x)
        return x

    def floor_times(self, n: int, rho: Fraction) -> int:
        state = self._shared_state()
        rp, rq = rho.numerator, rho.denominator
        while True:
            ln, ld, hn, hd = state.bracket()
            f_lo = (n * ln * rq + rp * ld) // (ld * rq)
            f_hi = (n * hn * rq + rp * hd) // (hd * rq)
            if f_lo == f_hi:
                return f_lo
            state.extend()

    def describe(self) -> str:
        if self.label:
            return f"[0; {self.label}]"
        head = ",".join(map(str, self.head))
        if self.cycle:
            cyc = ",".join(map(str, self.cycle))
            return f"[0; {head}{',' if head else ''}({cyc})*]"
        return f"[0; {head}]"


class _CFSlopeState:
    """Lazily extended convergents of [0; m1, m2, ...] bracketing the slope."""

    def __init__(self, slope: CFSlope) -> None:
        self.slope = slope
        self.k = 0
        # p0/q0 = 0/1 sits below the slope; extend once so a bracket exists.
        self.p_prev, self.q_prev = 1, 0
        self.p_cur, self.q_cur = 0, 1
        self.extend()

    def extend(self) -> None:
        if self.k >= _SLOPE_EXTEND_CAP:
            raise RuntimeError("continued-fraction slope refinement ran away")
        self.k += 1
        m = self.slope.quotient(self.k)
        p = m * self.p_cur + self.p_prev
        q = m * self.q_cur + self.q_prev
        self.p_prev, self.q_prev = self.p_cur, self.q_cur
        self.p_cur, self.q_cur = p, q

    def bracket(self) -> tuple[int, int, int, int]:
        # consecutive convergents straddle the value; order them
        if self.p_prev * self.q_cur < self.p_cur * self.q_prev:
            return self.p_prev, self.q_prev, self.p_cur, self.q_cur
        return self.p_cur, self.q_cur, self.p_prev, self.q_prev

    def width(self) -> Fraction:
        ln, ld, hn, hd = self.bracket()
        return Fraction(hn * ld - ln * hd, ld * hd)


SlopeSpec = SurdSlope | CFSlope

PRESET_SLOPES: dict[str, Callable[[], CFSlope]] = {
    # [0; 1, 10, 100, 1000, ...]: an extreme unbounded-quotient slope
    "pow10": lambda: CFSlope(fn=lambda i: 10 ** (i - 1), label="pow10"),
}


def parse_slope(text: str) -> SlopeSpec:
    """Parse "surd:P,Q,D" or "cfslope:m1,m2,..." (with optional "(...)*" tail)."""
    if text.startswith("surd:"):
        parts = text[5:].split(",")
        if len(parts) != 3:
            raise ValueError(f"surd slope needs P,Q,D at position 5: {text!r}")
        try:
            p, q, d = (int(x) for x in parts)
        except ValueError:
            raise ValueError(f"surd slope needs integers at position 5: {text!r}") from None
        return SurdSlope(p, q, d)
    if text.startswith("cfslope:"):
        body = text[8:]
        if body in PRESET_SLOPES:
            return PRESET_SLOPES[body]()
        head_txt, cycle_txt = body, ""
        if "(" in body:
            i = body.index("(")
            if not body.endswith(")*"):
                raise ValueError(f"periodic tail must end with ')*' at position {8 + i}: {text!r}")
            head_txt = body[:i].rstrip(",")
            cycle_txt = body[i + 1 : -2]
        try:
            head = tuple(int(x) for x in head_txt.split(",") if x)
            cycle = tuple(int(x) for x in cycle_txt.split(",") if x)
        except ValueError:
            raise ValueError(f"bad quotient list at position 8: {text!r}") from None
        if not head and not cycle:
            raise ValueError(f"empty quotient list at position 8: {text!r}")
        return CFSlope(head, cycle)
    raise ValueError(f"unknown slope spec at position 0: {text!r}")


def _as_intercept(rho) -> Fraction:
    if isinstance(rho, float):
        raise TypeError("intercept must be exact, not float")
    rho = Fraction(rho)
    if not 0 <= rho < 1:
        raise ValueError("intercept must lie in [0, 1)")
    return rho


def mechanical_letters(slope: SlopeSpec, intercept=Fraction(0)) -> Iterator[int]:
    """Infinite stream s(1), s(2), ... of the mechanical word; exact floors."""
    if not slope.is_irrational():
        raise ValueError("slope must be irrational")
    rho = _as_intercept(intercept)
    prev = slope.floor_times(1, rho)
    n = 1
    while True:
        nxt = slope.floor_times(n + 1, rho)
        yield nxt - prev
        prev = nxt
        n += 1


def mechanical_word(slope: SlopeSpec, intercept=Fraction(0), length: int = 0) -> Word:
    """First `length` letters of the mechanical word of the given slope."""
    if length < 1:
        raise ValueError("length must be positive")
    gen = mechanical_letters(slope, intercept)
    return Word(bytes(next(gen) for _ in range(length)), 2)


def slope_bounds(slope: SlopeSpec, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Certified rational bracket of the slope with width at most 2^-bits."""
    if not slope.is_irrational():
        raise ValueError("slope must be irrational")
    return slope.bounds(bits)


def letter_frequency_check(s: Word, slope: SlopeSpec) -> Fraction:
    """Largest certified |count_1(n) - n*alpha| over prefixes of s.

    Mechanical words keep this below 1; anything above 2 means the word
    does not match the slope.
    """
    n_total = len(s)
    if n_total == 0:
        raise ValueError("empty word")
    bits = max(16, (4 * n_total).bit_length() + 2)
    lo, hi = slope_bounds(slope, bits)
    an, ad = lo.numerator, lo.denominator
    bn, bd = hi.numerator, hi.denominator
    worst = Fraction(0)
    count = 0
    for n, letter in enumerate(s, start=1):
        count += letter
        dev_lo = Fraction(abs(count * ad - n * an), ad)
        dev_hi = Fraction(abs(count * bd - n * bn), bd)
        dev = dev_lo if dev_lo >= dev_hi else dev_hi
        if dev > worst:
            worst = dev
    return worst


@dataclass(frozen=True)
class Morphism:
    """Nonerasing morphism from {0,1}* into a target alphabet."""

    image0: Word
    image1: Word

    def __post_init__(self) -> None:
        if len(self.image0) == 0 or len(self.image1) == 0:
            raise ValueError("morphism must be nonerasing")

    def image(self, letter: int) -> Word:
        if letter == 0:
            return self.image0
        if letter == 1:
            return self.image1
        raise ValueError("morphism domain is {0, 1}")

    @property
    def target_alphabet(self) -> int:
        return max(self.image0.alphabet_size, self.image1.alphabet_size)

    def describe(self) -> str:
        return f"0>{self.image0.to_text()};1>{self.image1.to_text()}"


def parse_morphism(text: str) -> Morphism:
    """Parse the "0>01;1>001" rule syntax."""
    rules: dict[int, Word] = {}
    for chunk in text.split(";"):
        if ">" not in chunk:
            raise ValueError(f"morphism rule needs '>': {chunk!r}")
        left, right = chunk.split(">", 1)
        if left not in ("0", "1"):
            raise ValueError(f"morphism domain letter must be 0 or 1: {chunk!r}")
        rules[int(left)] = Word.from_digits(right)
    if set(rules) != {0, 1}:
        raise ValueError("morphism must define images for both 0 and 1")
    return Morphism(rules[0], rules[1])


@dataclass(frozen=True)
class QuasiSturmianSpec:
    """A word of the shape W phi(s) for a Sturmian s."""

    prefix: Word
    morphism: Morphism
    slope: SlopeSpec
    intercept: Fraction = Fraction(0)


def apply_morphism(spec: QuasiSturmianSpec, length: int) -> Word:
    """First `length` letters of W phi(s), pulling letters of s lazily."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    out = bytearray(spec.prefix.symbols[:length])
    gen = mechanical_letters(spec.slope, spec.intercept)
    while len(out) < length:
        out += spec.morphism.image(next(gen)).symbols
    alphabet = max(spec.prefix.alphabet_size, spec.morphism.target_alphabet)
    return Word(bytes(out[:length]), alphabet)


MIN_PLATEAU = 50


def quasi_sturmian_check(a: Word, n_max: int) -> tuple[int, int] | None:
    """Detect the complexity law p(n) = n + k for n in [n0, n_max].

    Returns (k, n0) once the gap p(n) - n is constant on a plateau of at
    least MIN_PLATEAU consecutive n ending at n_max, or None when the
    data is too short or not quasi-Sturmian.  n_max is capped at |a|/4
    so that the counts are not starved by the prefix cut-off.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    if n_max > len(a) // 4:
        raise ValueError("window too large")
    profile = complexity_profile(a, n_max)
    gaps = [c - (i + 1) for i, c in enumerate(profile.counts)]
    k = gaps[-1]
    n0 = n_max
    while n0 > 1 and gaps[n0 - 2] == k:
        n0 -= 1
    if k < 1 or n_max - n0 + 1 < MIN_PLATEAU:
        return None
    return k, n0


def morphic_length_check(spec: QuasiSturmianSpec, n_letters: int) -> Fraction:
    """Largest certified ||phi(s_1..s_n)| - delta*n| for n up to n_letters.

    delta = alpha*|phi(1)| + (1-alpha)*|phi(0)| is the mean letter cost;
    the deviation stays below 2*max(|phi(0)|, |phi(1)|) because the
    letter counts of a mechanical word stay within 2 of n*alpha.
    """
    if n_letters < 1:
        raise ValueError("need at least one letter")
    len0, len1 = len(spec.morphism.image0), len(spec.morphism.image1)
    bits = max(16, (4 * n_letters).bit_length() + 2)
    lo, hi = slope_bounds(spec.slope, bits)
    # delta(alpha) = len0 + alpha*(len1 - len0) is monotone in alpha
    d1 = len0 + lo * (len1 - len0)
    d2 = len0 + hi * (len1 - len0)
    d_lo, d_hi = (d1, d2) if d1 <= d2 else (d2, d1)
    gen = mechanical_letters(spec.slope, spec.intercept)
    total = 0
    worst = Fraction(0)
    for n in range(1, n_letters + 1):
        total += len1 if next(gen) else len0
        dev = max(abs(total - n * d_lo), abs(total - n * d_hi))
        if dev > worst:
            worst = dev
    return worst
