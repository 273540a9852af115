"""Continued fractions from enclosures: convergents and exponent estimates.

Quotients of an interval source are emitted only while both endpoints
share the same integer part at the current depth of the Gauss map, so
every emitted quotient is correct for the limit value.  Exact rational
points fall through to Euclid's algorithm with the canonical final
quotient >= 2, which makes rational expansions round-trip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .realnum import Enclosure


@dataclass(frozen=True)
class CFExpansion:
    """Certified partial quotients plus big-integer convergents."""

    quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]
    rational: bool = False
    complete: bool = False
    budget_exhausted: bool = False

    @property
    def certified(self) -> int:
        return len(self.quotients)

    def convergent(self, n: int) -> Fraction:
        p, q = self.convergents[n]
        return Fraction(p, q)

    def value(self) -> Fraction:
        if not self.complete:
            raise ValueError("only a complete rational expansion has an exact value")
        return self.convergent(len(self.quotients) - 1)

    def to_json_dict(self) -> dict:
        return {
            "quotients": [str(a) for a in self.quotients],
            "certified": self.certified,
            "rational": self.rational,
            "complete": self.complete,
            "budget_exhausted": self.budget_exhausted,
        }


def convergents_from_quotients(quotients) -> tuple[tuple[int, int], ...]:
    """Run p_n = a_n p_{n-1} + p_{n-2}, q_n likewise; checks the invariants."""
    out: list[tuple[int, int]] = []
    p_prev, q_prev = 1, 0
    p_cur, q_cur = None, None
    for i, a in enumerate(quotients):
        if i > 0 and a < 1:
            raise ValueError("partial quotients after the first must be >= 1")
        if p_cur is None:
            p_cur, q_cur = a, 1
        else:
            p_cur, p_prev = a * p_cur + p_prev, p_cur
            q_cur, q_prev = a * q_cur + q_prev, q_cur
        if math.gcd(p_cur, q_cur) != 1:
            raise AssertionError("convergent not in lowest terms")
        if len(out) >= 2 and q_cur <= out[-1][1]:
            raise AssertionError("convergent denominators must increase")
        out.append((p_cur, q_cur))
    return tuple(out)


def cf_of_rational(x: Fraction) -> list[int]:
    """Euclid with the canonical form: final quotient >= 2 when possible."""
    out: list[int] = []
    p, q = x.numerator, x.denominator
    while q:
        a = p // q
        out.append(a)
        p, q = q, p - a * q
    if len(out) > 1 and out[-1] == 1:
        out.pop()
        out[-1] += 1
    return out


def _interval_quotients(lo: Fraction, hi: Fraction, k_max: int) -> list[int]:
    out: list[int] = []
    while len(out) < k_max:
        f_lo = lo.numerator // lo.denominator
        f_hi = hi.numerator // hi.denominator
        if f_lo != f_hi:
            break
        out.append(f_lo)
        lo, hi = lo - f_lo, hi - f_lo
        if lo == 0 or hi == 0:
            break
        lo, hi = 1 / hi, 1 / lo
    return out


def cf_from_enclosure(source: Enclosure, max_terms: int) -> CFExpansion:
    """Certified quotients of the value enclosed by a refinable source.

    Exact rational points get their full (canonical) expansion; interval
    sources are refined until `max_terms` quotients are certified or the
    budget is exhausted, in which case the partial result is flagged
    rather than treated as an error.
    """
    if max_terms < 1:
        raise ValueError("max_terms must be positive")
    while True:
        lo, hi = source.bounds()
        if lo == hi:
            qs = cf_of_rational(lo)
            complete = len(qs) <= max_terms
            qs = qs[:max_terms]
            return CFExpansion(
                tuple(qs),
                convergents_from_quotients(qs),
                rational=True,
                complete=complete,
            )
        qs = _interval_quotients(lo, hi, max_terms)
        if len(qs) >= max_terms:
            qs = qs[:max_terms]
            return CFExpansion(tuple(qs), convergents_from_quotients(qs))
        if not source.refine():
            return CFExpansion(
                tuple(qs),
                convergents_from_quotients(qs),
                budget_exhausted=True,
            )


@dataclass(frozen=True)
class MuEstimate:
    """Per-depth irrationality-exponent terms 2 + log a_{n+1} / log q_n.

    The true exponent is the limsup of these terms; a finite truncation
    bounds it in neither direction, so both the running maximum and the
    maximum over the later half (less start-up noise) are reported.
    """

    n_min: int
    values: tuple[tuple[int, float], ...]
    tail_start: int

    @property
    def global_max(self) -> float:
        return max(v for _, v in self.values)

    @property
    def tail_max(self) -> float:
        return max(v for n, v in self.values if n >= self.tail_start)

    def to_json_dict(self) -> dict:
        return {
            "n_min": self.n_min,
            "tail_start": self.tail_start,
            "per_n": [{"n": n, "value": {"estimate": v}} for n, v in self.values],
            "global_max": {"estimate": self.global_max},
            "tail_max": {"estimate": self.tail_max},
        }


def mu_estimate(cf: CFExpansion, n_min: int = 5) -> MuEstimate:
    """Exponent terms from exact a_{n+1} and q_n.

    math.log on ints carries about 1 ulp of relative error (far below
    the 1e-12 budget the reported 6-decimal values need).
    """
    if n_min < 1:
        raise ValueError("n_min must be >= 1")
    if cf.certified < n_min + 2:
        raise ValueError("too few certified terms")
    if cf.convergents[n_min][1] < 2:
        raise ValueError("q_n at n_min must be >= 2; raise n_min")
    values = []
    for n in range(n_min, cf.certified - 1):
        a_next = cf.quotients[n + 1]
        q_n = cf.convergents[n][1]
        values.append((n, 2.0 + math.log(a_next) / math.log(q_n)))
    tail_start = values[len(values) // 2][0]
    return MuEstimate(n_min=n_min, values=tuple(values), tail_start=tail_start)


def bounded_pq_check(cf: CFExpansion, window: int) -> int:
    """Largest partial quotient among the first `window` certified terms.

    Finite data cannot prove boundedness; this is informational only.
    """
    if window < 1:
        raise ValueError("window must be positive")
    if cf.certified < window:
        raise ValueError("not enough certified terms")
    return max(cf.quotients[:window])
