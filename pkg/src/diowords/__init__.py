"""Exact digit expansions, subword complexity, repetition exponents and
continued fractions for exactly-defined real numbers."""

from .words import (
    ComplexityProfile,
    Word,
    complexity_profile,
    fractional_power,
    gap_profile,
    occurrence_count,
)
from .repetition import (
    ExponentEstimate,
    RepetitionWitness,
    dio_brute_force,
    dio_estimate,
    ice_brute_force,
    ice_estimate,
    verify_witness,
)
from .sturmian import (
    CFSlope,
    Morphism,
    QuasiSturmianSpec,
    SurdSlope,
    apply_morphism,
    letter_frequency_check,
    mechanical_letters,
    mechanical_word,
    morphic_length_check,
    parse_morphism,
    parse_slope,
    quasi_sturmian_check,
    slope_bounds,
)
from .realnum import (
    DigitStream,
    Enclosure,
    FromCF,
    Mobius,
    PrecisionBudgetError,
    Rational,
    RealSpec,
    SeriesE,
    SeriesShallit,
    Surd,
    digits,
    enclosure,
    enclosure_from_digits,
    mobius,
)
from .contfrac import (
    CFExpansion,
    MuEstimate,
    bounded_pq_check,
    cf_from_enclosure,
    cf_of_rational,
    mu_estimate,
)
from .approx import (
    Approximant,
    DioMuReport,
    dio_mu_report,
    expansion_digits,
    verify_approximation,
    witness_to_approximant,
)

__version__ = "0.1.0"
