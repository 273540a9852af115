"""From repetition witnesses to explicit rational approximants.

A witness (u, v, m) on the base-b digit word of a real xi yields the
rational p/q with q = b^u (b^v - 1) whose expansion starts with the
same u digits and then repeats the next v digits forever.  Because xi
and p/q share their first m digits, |xi - p/q| < b^-m < q^-rho with
rho = m/(u+v); both inequalities are certified here in exact interval
arithmetic, never through floats.  p/q is deliberately not reduced;
a reduced form is available for display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .contfrac import CFExpansion, MuEstimate, cf_from_enclosure, mu_estimate
from .realnum import (
    DEFAULT_MAX_BITS,
    DigitStream,
    Enclosure,
    PrecisionBudgetError,
    RealSpec,
    digits,
    enclosure,
)
from .repetition import ExponentEstimate, RepetitionWitness, dio_estimate, verify_witness
from .words import Word


@dataclass(frozen=True)
class Approximant:
    """p/q = 0.UVVV... built from a repetition witness on base-b digits."""

    p: int
    q: int
    base: int
    witness: RepetitionWitness

    @property
    def score(self) -> Fraction:
        return self.witness.score

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    def reduced(self) -> tuple[int, int]:
        """Lowest-terms view, for display only."""
        g = math.gcd(self.p, self.q)
        return self.p // g, self.q // g

    def to_json_dict(self) -> dict:
        return {
            "p": str(self.p),
            "q": str(self.q),
            "base": self.base,
            "witness": self.witness.to_json_dict(),
        }


def witness_to_approximant(digit_word: Word, witness: RepetitionWitness, base: int) -> Approximant:
    """Build p/q from the witnessed factorization U V^w of the digit word.

    q = base^u (base^v - 1) and p = U (base^v - 1) + V with U, V read as
    base-b integers, so that p/q = 0.UVVV... exactly; no division and no
    gcd reduction happens.
    """
    if base < 2:
        raise ValueError("base must be >= 2")
    if len(digit_word) and max(digit_word.symbols) >= base:
        raise ValueError("digit word has letters outside the base")
    if witness.m > len(digit_word):
        raise ValueError("witness exceeds prefix")
    if not verify_witness(digit_word, witness):
        raise ValueError("unverified witness")
    u, v = witness.u, witness.v
    u_int = _digits_to_int(digit_word.symbols[:u], base)
    v_int = _digits_to_int(digit_word.symbols[u : u + v], base)
    block = base**v - 1
    return Approximant(p=u_int * block + v_int, q=base**u * block, base=base, witness=witness)


def _digits_to_int(ds: bytes, base: int) -> int:
    value = 0
    for d in ds:
        value = value * base + d
    return value


def expansion_digits(p: int, q: int, base: int, count: int) -> list[int]:
    """Fractional digits of p/q in [0, 1) by plain long division (oracle path)."""
    if not 0 <= p <= q:
        raise ValueError("expects 0 <= p/q <= 1")
    rem = p % q
    out = []
    for _ in range(count):
        rem *= base
        d, rem = divmod(rem, q)
        out.append(d)
    return out


def verify_approximation(source: Enclosure, approx: Approximant) -> Fraction:
    """Certify |xi - p/q| < base^-m and |xi - p/q| < q^-rho; return the margin.

    The margin is the exact rational max distance from p/q to the
    enclosure, refined until it clears base^-m.  The q^-rho comparison
    clears denominators: margin < q^(-m/(u+v)) iff
    margin_num^(u+v) * q^m < margin_den^(u+v), all in integers.
    """
    w = approx.witness
    byte_bound = Fraction(1, approx.base**w.m)
    pq = approx.as_fraction()
    source.refine_below(byte_bound / 2)
    while True:
        lo, hi = source.bounds()
        margin = max(abs(lo - pq), abs(hi - pq))
        if margin < byte_bound:
            break
        if not source.refine():
            raise PrecisionBudgetError("enclosure too wide to certify the approximation")
    denom_exp = w.u + w.v
    ok = margin.numerator**denom_exp * approx.q**w.m < margin.denominator**denom_exp
    if not ok:
        raise AssertionError("q^-rho certification failed despite digit agreement")
    return margin


@dataclass(frozen=True)
class DioMuReport:
    """Side-by-side repetition exponent of the digit word and exponent terms
    of the continued fraction, with the slack-adjusted comparison."""

    base: int
    prefix_length: int
    cf_terms: int
    slack: float
    digit_estimate: ExponentEstimate | None
    cf: CFExpansion
    mu: MuEstimate | None
    rational: bool
    partial: bool
    notes: tuple[str, ...]

    @property
    def dio_value(self) -> float | None:
        if self.digit_estimate is None:
            return None
        return float(self.digit_estimate.global_max.score)

    @property
    def mu_tail_value(self) -> float | None:
        return None if self.mu is None else self.mu.tail_max

    @property
    def inequality_holds(self) -> bool | None:
        if self.rational or self.dio_value is None or self.mu_tail_value is None:
            return None
        return self.dio_value <= self.mu_tail_value + self.slack

    def to_json_dict(self) -> dict:
        return {
            "base": self.base,
            "prefix_length": self.prefix_length,
            "cf_terms": self.cf_terms,
            "slack": {"estimate": self.slack},
            "dio": None if self.digit_estimate is None else self.digit_estimate.to_json_dict(),
            "dio_value": None if self.dio_value is None else {"estimate": self.dio_value},
            "mu": None if self.mu is None else self.mu.to_json_dict(),
            "mu_tail_max": None if self.mu_tail_value is None else {"estimate": self.mu_tail_value},
            "rational": self.rational,
            "partial": self.partial,
            "inequality_holds": self.inequality_holds,
            "notes": list(self.notes),
        }


def dio_mu_report(
    spec: RealSpec,
    base: int,
    prefix_length: int,
    cf_terms: int,
    threshold: int | None = None,
    slack: float = 0.15,
    n_min: int = 5,
    max_bits: int = DEFAULT_MAX_BITS,
) -> DioMuReport:
    """Run both pipelines on one number and compare the finite estimates.

    Both sides truncate limits, so the comparison carries a slack and
    the raw values are always part of the report.
    """
    notes: list[str] = []
    partial = False

    stream: DigitStream = digits(spec, base, prefix_length, max_bits=max_bits)
    if not stream.complete:
        partial = True
        notes.append(f"digit stream certified only {stream.certified} of {prefix_length}")
    est: ExponentEstimate | None = None
    if stream.certified >= 2:
        est = dio_estimate(stream.fractional_word(), threshold)

    cf = cf_from_enclosure(enclosure(spec, max_bits=max_bits), cf_terms)
    if cf.budget_exhausted:
        partial = True
        notes.append(f"continued fraction certified only {cf.certified} of {cf_terms} terms")

    mu: MuEstimate | None = None
    if cf.rational:
        notes.append("rational input: digits are eventually periodic and the "
                     "repetition exponent diverges with the prefix length")
    elif cf.certified >= n_min + 2:
        mu = mu_estimate(cf, n_min=n_min)
    else:
        partial = True
        notes.append("too few continued-fraction terms for exponent terms")

    return DioMuReport(
        base=base,
        prefix_length=prefix_length,
        cf_terms=cf_terms,
        slack=slack,
        digit_estimate=est,
        cf=cf,
        mu=mu,
        rational=cf.rational,
        partial=partial,
        notes=tuple(notes),
    )
