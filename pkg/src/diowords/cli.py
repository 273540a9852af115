"""Command-line surface.

Deterministic by construction: identical configurations produce
byte-identical stdout (timing and advisory notes go to stderr).  Exact
values appear in JSON as numerator/denominator strings; floats are
always estimates and are tagged as such.

Exit codes: 0 success, 1 criterion/assertion failure, 2 usage error,
3 refinement-budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import acceptance, approx, contfrac, realnum, repetition, sturmian, words

ENV_MAX_BITS = "DIOWORDS_MAX_BITS"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

PROFILE_NOTE = "profile counts are lower bounds for the infinite word"


class _WordSource:
    """A word source description: literal, digit word, or generated word."""

    def __init__(self, kind: str, make):
        self.kind = kind
        self._make = make

    def materialize(self, prefix: int, max_bits: int) -> words.Word:
        return self._make(prefix, max_bits)


def parse_word_source(text: str) -> _WordSource:
    """Word-source grammar: "lit:0100101", "digits:SPEC|BASE",
    "sturmian:SLOPE[|INTERCEPT]", "quasi:W|MORPHISM|SLOPE[|INTERCEPT]"."""
    if text.startswith("lit:"):
        w = words.Word.from_digits(text[4:])
        return _WordSource("lit", lambda prefix, _mb: w.prefix(min(prefix, len(w))) if prefix else w)
    if text.startswith("digits:"):
        parts = text[7:].split("|")
        if len(parts) != 2:
            raise ValueError(f"digits source needs SPEC|BASE: {text!r}")
        spec = realnum.parse_real_spec(parts[0], offset=7)
        try:
            base = int(parts[1])
        except ValueError:
            raise ValueError(f"bad base {parts[1]!r}") from None

        def make_digits(prefix: int, max_bits: int) -> words.Word:
            return realnum.digits(spec, base, prefix, max_bits=max_bits).fractional_word()

        return _WordSource("digits", make_digits)
    if text.startswith("sturmian:"):
        parts = text[9:].split("|")
        slope = sturmian.parse_slope(parts[0])
        intercept = Fraction(parts[1]) if len(parts) > 1 else Fraction(0)
        return _WordSource(
            "sturmian", lambda prefix, _mb: sturmian.mechanical_word(slope, intercept, prefix)
        )
    if text.startswith("quasi:"):
        parts = text[6:].split("|")
        if len(parts) not in (3, 4):
            raise ValueError(f"quasi source needs W|MORPHISM|SLOPE: {text!r}")
        prefix_word = words.Word.from_digits(parts[0]) if parts[0] else words.Word(b"", 2)
        spec = sturmian.QuasiSturmianSpec(
            prefix_word,
            sturmian.parse_morphism(parts[1]),
            sturmian.parse_slope(parts[2]),
            Fraction(parts[3]) if len(parts) > 3 else Fraction(0),
        )
        return _WordSource("quasi", lambda prefix, _mb: sturmian.apply_morphism(spec, prefix))
    raise ValueError(f"unknown word source {text!r} (position 0)")


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _json_out(payload) -> None:
    _emit(json.dumps(payload, indent=2, sort_keys=False))


def _word_out(w: words.Word, fmt: str) -> None:
    if fmt == "json":
        _json_out({"alphabet_size": w.alphabet_size, "word": json.loads(w.to_json())})
    else:
        _emit(w.to_text() if w.alphabet_size <= 10 else ",".join(map(str, w.symbols)))


def _estimate_json(est: repetition.ExponentEstimate) -> dict:
    payload = est.to_json_dict()
    payload["global_max"]["score"] = {"estimate": float(est.global_max.score)}
    payload["persistent_max"]["score"] = {"estimate": float(est.persistent_max.score)}
    payload["note"] = "finite-prefix estimates of a supremum"
    return payload


def _estimate_text(kind: str, est: repetition.ExponentEstimate) -> str:
    g, p = est.global_max, est.persistent_max
    return (
        f"{kind} estimate over prefix N={est.prefix_length} (threshold {est.threshold})\n"
        f"global:     score={float(g.score):.6f} ({g.m}/{g.u + g.v}) u={g.u} v={g.v} m={g.m}\n"
        f"persistent: score={float(p.score):.6f} ({p.m}/{p.u + p.v}) u={p.u} v={p.v} m={p.m}\n"
        f"note: finite-prefix estimates of a supremum; persistent restricts to u+v >= threshold"
    )


def cmd_digits(args) -> int:
    spec = realnum.parse_real_spec(args.spec)
    stream = realnum.digits(spec, args.base, args.count, max_bits=args.max_bits)
    if args.format == "json":
        _json_out(
            {
                "base": stream.base,
                "integer_part": str(stream.integer_part),
                "fractional_digits": list(stream.fractional_digits),
                "certified": stream.certified,
                "requested": stream.requested,
            }
        )
    else:
        _emit(stream.as_text())
    return EXIT_OK if stream.complete else EXIT_BUDGET


def cmd_complexity(args, gaps_only: bool = False) -> int:
    source = parse_word_source(args.source)
    w = source.materialize(args.prefix, args.max_bits)
    profile = words.complexity_profile(w, args.n_max)
    gaps = words.gap_profile(profile)
    if args.format == "json":
        rows = [
            {"n": n, "p_n": c, "gap": g}
            for n, (c, g) in enumerate(zip(profile.counts, gaps), start=1)
        ]
        _json_out({"prefix_length": profile.prefix_length, "rows": rows, "note": PROFILE_NOTE})
    else:
        print(PROFILE_NOTE, file=sys.stderr)
        if gaps_only:
            lines = ["n,gap"] + [f"{n},{g}" for n, g in enumerate(gaps, start=1)]
            _emit("\n".join(lines))
        else:
            _emit(profile.to_csv())
    return EXIT_OK


def cmd_ice_dio(args, kind: str) -> int:
    source = parse_word_source(args.source)
    w = source.materialize(args.prefix, args.max_bits)
    if kind == "dio":
        est = repetition.dio_estimate(w, args.threshold, threads=args.threads)
    else:
        est = repetition.ice_estimate(w, args.threshold)
    if args.format == "json":
        _json_out(_estimate_json(est))
    else:
        _emit(_estimate_text(kind, est))
    return EXIT_OK


def cmd_cf(args) -> int:
    spec = realnum.parse_real_spec(args.spec)
    cf = contfrac.cf_from_enclosure(
        realnum.enclosure(spec, max_bits=args.max_bits), args.terms
    )
    if args.format == "json":
        payload = cf.to_json_dict()
        payload["convergents"] = [[str(p), str(q)] for p, q in cf.convergents]
        _json_out(payload)
    else:
        _emit("[" + ", ".join(str(a) for a in cf.quotients) + "]")
        if cf.budget_exhausted:
            _emit(f"terms certified: {cf.certified}")
    return EXIT_BUDGET if cf.budget_exhausted and cf.certified < args.terms else EXIT_OK


def cmd_mu(args) -> int:
    spec = realnum.parse_real_spec(args.spec)
    cf = contfrac.cf_from_enclosure(
        realnum.enclosure(spec, max_bits=args.max_bits), args.terms
    )
    mu = contfrac.mu_estimate(cf, n_min=args.n_min)
    if args.format == "json":
        _json_out(mu.to_json_dict())
    else:
        lines = [f"{n} {v:.6f}" for n, v in mu.values]
        lines.append(f"global_max {mu.global_max:.6f}")
        lines.append(f"tail_max {mu.tail_max:.6f} (n >= {mu.tail_start})")
        _emit("\n".join(lines))
    return EXIT_OK


def cmd_sturmian(args) -> int:
    slope = sturmian.parse_slope(args.slope)
    w = sturmian.mechanical_word(slope, Fraction(args.intercept), args.length)
    _word_out(w, args.format)
    return EXIT_OK


def cmd_quasi(args) -> int:
    prefix_word = words.Word.from_digits(args.word) if args.word else words.Word(b"", 2)
    spec = sturmian.QuasiSturmianSpec(
        prefix_word,
        sturmian.parse_morphism(args.morphism),
        sturmian.parse_slope(args.slope),
        Fraction(args.intercept),
    )
    w = sturmian.apply_morphism(spec, args.length)
    if args.check_n_max:
        result = sturmian.quasi_sturmian_check(w, args.check_n_max)
        if args.format == "json":
            _json_out(
                {"plateau": None if result is None else {"k": result[0], "n0": result[1]}}
            )
        elif result is None:
            _emit("no quasi-Sturmian plateau detected")
        else:
            _emit(f"k={result[0]} n0={result[1]}")
        return EXIT_OK if result is not None else EXIT_FAIL
    _word_out(w, args.format)
    return EXIT_OK


def cmd_approximant(args) -> int:
    spec = realnum.parse_real_spec(args.spec)
    stream = realnum.digits(spec, args.base, args.prefix, max_bits=args.max_bits)
    w = stream.fractional_word()
    est = repetition.dio_estimate(w, args.threshold, threads=args.threads)
    a = approx.witness_to_approximant(w, est.global_max, args.base)
    # the witness lives on the fractional digits, so certify against xi - floor(xi)
    enc = realnum.enclosure(spec, max_bits=args.max_bits)
    if stream.integer_part:
        enc = realnum.mobius(1, -stream.integer_part, 0, 1, enc, max_bits=args.max_bits)
    margin = approx.verify_approximation(enc, a)
    rp, rq = a.reduced()
    if args.format == "json":
        payload = a.to_json_dict()
        payload["reduced"] = [str(rp), str(rq)]
        payload["margin"] = {"num": str(margin.numerator), "den": str(margin.denominator)}
        payload["certified"] = True
        _json_out(payload)
    else:
        _emit(
            f"p/q = {a.p}/{a.q} (reduced {rp}/{rq})\n"
            f"witness u={a.witness.u} v={a.witness.v} m={a.witness.m} "
            f"score={float(a.score):.6f}\n"
            f"certified: |xi - p/q| < {args.base}^-{a.witness.m} and < q^-score"
        )
    return EXIT_OK


def cmd_report(args) -> int:
    spec = realnum.parse_real_spec(args.spec)
    report = approx.dio_mu_report(
        spec,
        base=args.base,
        prefix_length=args.prefix,
        cf_terms=args.terms,
        threshold=args.threshold,
        slack=args.slack,
        max_bits=args.max_bits,
    )
    if args.format == "json":
        _json_out(report.to_json_dict())
    else:
        lines = [f"digit-word exponent vs irrationality terms (slack {args.slack})"]
        if report.digit_estimate is not None:
            g = report.digit_estimate.global_max
            lines.append(f"dio:  {report.dio_value:.6f} (u={g.u} v={g.v} m={g.m})")
        if report.mu is not None:
            lines.append(
                f"mu:   global_max={report.mu.global_max:.6f} tail_max={report.mu.tail_max:.6f}"
            )
        lines.append(f"rational: {report.rational}")
        lines.append(f"inequality_holds: {report.inequality_holds}")
        for note in report.notes:
            lines.append(f"note: {note}")
        _emit("\n".join(lines))
    if report.partial:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.list:
        for cid, _ in acceptance.CRITERIA:
            _emit(cid)
        return EXIT_OK
    results = acceptance.run_suite(args.suite, seed=args.seed, threads=args.threads)
    if args.format == "json":
        _json_out(
            {
                "results": [
                    {"id": r.cid, "passed": r.passed, "detail": r.detail} for r in results
                ],
                "passed": all(r.passed for r in results),
            }
        )
    else:
        for r in results:
            _emit(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diowords",
        description="Digit expansions, complexity profiles, repetition exponents "
        "and continued fractions of exactly-defined reals.",
    )
    parser.add_argument("--format", choices=("text", "json", "csv"), default="text")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for scans")
    parser.add_argument(
        "--max-bits",
        type=int,
        default=int(os.environ.get(ENV_MAX_BITS, realnum.DEFAULT_MAX_BITS)),
        help=f"refinement budget in bits (env {ENV_MAX_BITS})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("digits", help="certified base-b digits of a real")
    p.add_argument("spec")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(func=cmd_digits)

    for name, gaps_only in (("complexity", False), ("gap", True)):
        p = sub.add_parser(name, help="factor complexity profile (CSV)")
        p.add_argument("source")
        p.add_argument("--n-max", type=int, required=True)
        p.add_argument("--prefix", type=int, default=1000)
        p.set_defaults(func=lambda a, g=gaps_only: cmd_complexity(a, gaps_only=g))

    for name in ("ice", "dio"):
        p = sub.add_parser(name, help=f"{name} repetition-exponent estimate")
        p.add_argument("source")
        p.add_argument("--prefix", type=int, default=1000)
        p.add_argument("--threshold", type=int, default=None)
        p.set_defaults(func=lambda a, k=name: cmd_ice_dio(a, k))

    p = sub.add_parser("cf", help="certified continued-fraction quotients")
    p.add_argument("spec")
    p.add_argument("--terms", type=int, required=True)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("mu", help="irrationality-exponent terms from a continued fraction")
    p.add_argument("spec")
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--n-min", type=int, default=5)
    p.set_defaults(func=cmd_mu)

    p = sub.add_parser("sturmian", help="mechanical word of an irrational slope")
    p.add_argument("slope")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--intercept", default="0")
    p.set_defaults(func=cmd_sturmian)

    p = sub.add_parser("quasi", help="W phi(s) word, optionally with the plateau check")
    p.add_argument("--word", default="")
    p.add_argument("--morphism", required=True)
    p.add_argument("--slope", required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--intercept", default="0")
    p.add_argument("--check-n-max", type=int, default=0)
    p.set_defaults(func=cmd_quasi)

    p = sub.add_parser("approximant", help="rational approximant from the best witness")
    p.add_argument("spec")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--prefix", type=int, required=True)
    p.add_argument("--threshold", type=int, default=None)
    p.set_defaults(func=cmd_approximant)

    p = sub.add_parser("report", help="digit-word exponent vs irrationality terms")
    p.add_argument("spec")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--prefix", type=int, required=True)
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--slack", type=float, default=0.15)
    p.add_argument("--threshold", type=int, default=None)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--suite", default=None, help="substring filter on criterion ids")
    p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p.add_argument("--list", action="store_true", help="list criterion ids and exit")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except realnum.PrecisionBudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, TypeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
