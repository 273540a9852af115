"""Repetition-witness search over word prefixes.

A witness (u, v, m) certifies that the length-m prefix factors as U V^w
with |U| = u, |V| = v and w = (m - u) / v >= 1; its score is the exact
rational m / (u + v).  Maximizing the score over all factorizations of
prefixes estimates the Diophantine exponent of the underlying infinite
word; restricting to u = 0 estimates the initial critical exponent.
Both are suprema over infinite data, so a finite prefix yields
estimates only: alongside the global maximum we report a "persistent"
maximum over witnesses with u + v >= threshold, which is less sensitive
to one lucky short repetition.

Scan kernel: for each candidate period v, one right-to-left pass yields
run lengths r[i] = (a[i] == a[i+v] ? r[i+1] + 1 : 0), and then
m(u, v) = u + v + min(r[u], N - u - v).  Periods are pruned once
N / (u + v) can no longer beat the incumbent score.  Large prefixes go
through a vectorized numpy path; the per-period reduction stays exact
(integer cross-multiplication, see _better).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .words import Word

# Above ~10^6 letters the float argmax inside the numpy kernel could no
# longer be trusted to rank two distinct rational scores correctly.
MAX_SCAN_LENGTH = 1_000_000

_NUMPY_MIN_LENGTH = 128

_Cand = tuple[int, int, int]  # (m, u, v)


@dataclass(frozen=True)
class RepetitionWitness:
    """Certificate that the length-m prefix equals U V^w with w >= 1."""

    u: int
    v: int
    m: int

    def __post_init__(self) -> None:
        if self.v < 1 or self.u < 0 or self.m < self.u + self.v:
            raise ValueError(f"invalid witness (u={self.u}, v={self.v}, m={self.m})")

    @property
    def score(self) -> Fraction:
        return Fraction(self.m, self.u + self.v)

    def to_json_dict(self) -> dict:
        s = self.score
        return {
            "u": self.u,
            "v": self.v,
            "m": self.m,
            "score_num": str(s.numerator),
            "score_den": str(s.denominator),
        }


@dataclass(frozen=True)
class ExponentEstimate:
    global_max: RepetitionWitness
    persistent_max: RepetitionWitness
    prefix_length: int
    threshold: int

    def to_json_dict(self) -> dict:
        return {
            "prefix_length": self.prefix_length,
            "threshold": self.threshold,
            "global_max": self.global_max.to_json_dict(),
            "persistent_max": self.persistent_max.to_json_dict(),
        }


def verify_witness(prefix: Word, w: RepetitionWitness) -> bool:
    """Check the periodicity certificate a[i] = a[i+v] on [u, m-v-1]."""
    if w.m > len(prefix):
        raise ValueError("witness exceeds prefix")
    data = prefix.symbols
    if w.m < w.u + w.v:
        return False
    return all(data[i] == data[i + w.v] for i in range(w.u, w.m - w.v))


def _better(cand: _Cand, best: _Cand | None) -> bool:
    """Exact witness ordering: higher score, then smaller u+v, then smaller u."""
    if best is None:
        return True
    m1, u1, v1 = cand
    m2, u2, v2 = best
    d1, d2 = u1 + v1, u2 + v2
    if m1 * d2 != m2 * d1:
        return m1 * d2 > m2 * d1
    if d1 != d2:
        return d1 < d2
    return u1 < u2


def _can_reach(n_cap: int, denom: int, best: _Cand | None) -> bool:
    # True while a score of n_cap/denom might still match or beat `best`.
    if best is None:
        return True
    m, u, v = best
    return n_cap * (u + v) >= m * denom


def _default_threshold(n: int) -> int:
    return max(1, n // 20)


def dio_estimate(prefix: Word, threshold: int | None = None, threads: int = 1) -> ExponentEstimate:
    """Best repetition score over all (u, v) factorizations of the prefix.

    Exhaustive over u + v <= N with m capped at N; the score maximum is
    exact and the tie-break (smaller u+v, then smaller u) makes the
    returned witnesses deterministic, also across thread counts.
    """
    n = len(prefix)
    if n < 2:
        raise ValueError("degenerate prefix (length < 2)")
    if n > MAX_SCAN_LENGTH:
        raise ValueError(f"prefix longer than supported maximum {MAX_SCAN_LENGTH}")
    t = _default_threshold(n) if threshold is None else threshold
    if not 1 <= t <= n // 2:
        raise ValueError("threshold must be in [1, N/2]")

    if n < _NUMPY_MIN_LENGTH:
        best_g, best_p = _scan_python(prefix.symbols, n, t)
    else:
        best_g, best_p = _scan_numpy(prefix.symbols, n, t, threads)

    est = ExponentEstimate(
        global_max=RepetitionWitness(best_g[1], best_g[2], best_g[0]),
        persistent_max=RepetitionWitness(best_p[1], best_p[2], best_p[0]),
        prefix_length=n,
        threshold=t,
    )
    assert verify_witness(prefix, est.global_max)
    assert verify_witness(prefix, est.persistent_max)
    return est


def ice_estimate(prefix: Word, threshold: int | None = None) -> ExponentEstimate:
    """Best initial-repetition score (u = 0): V^w prefixes only, score m/v."""
    n = len(prefix)
    if n < 2:
        raise ValueError("degenerate prefix (length < 2)")
    t = _default_threshold(n) if threshold is None else threshold
    if not 1 <= t <= n // 2:
        raise ValueError("threshold must be in [1, N/2]")

    z = _z_array(prefix.symbols)
    best_g: _Cand | None = None
    best_p: _Cand | None = None
    for v in range(1, n + 1):
        ext = z[v] if v < n else 0
        m = v + min(ext, n - v)
        cand = (m, 0, v)
        if _better(cand, best_g):
            best_g = cand
        if v >= t and _better(cand, best_p):
            best_p = cand
    est = ExponentEstimate(
        global_max=RepetitionWitness(0, best_g[2], best_g[0]),
        persistent_max=RepetitionWitness(0, best_p[2], best_p[0]),
        prefix_length=n,
        threshold=t,
    )
    assert verify_witness(prefix, est.global_max)
    assert verify_witness(prefix, est.persistent_max)
    return est


def _z_array(data: bytes) -> list[int]:
    n = len(data)
    z = [0] * n
    z[0] = n
    left = right = 0
    for i in range(1, n):
        if i < right:
            z[i] = min(right - i, z[i - left])
        while i + z[i] < n and data[z[i]] == data[i + z[i]]:
            z[i] += 1
        if i + z[i] > right:
            left, right = i, i + z[i]
    return z


def _scan_python(data: bytes, n: int, t: int) -> tuple[_Cand, _Cand]:
    best_g: _Cand | None = None
    best_p: _Cand | None = None
    for v in range(1, n + 1):
        g_live = _can_reach(n, v, best_g)
        p_live = _can_reach(n, max(v, t), best_p)
        if not g_live and not p_live:
            break
        L = n - v
        r = [0] * (L + 1)
        for i in range(L - 1, -1, -1):
            r[i] = r[i + 1] + 1 if data[i] == data[i + v] else 0
        for u in range(0, L + 1):
            m = u + v + min(r[u] if u < L else 0, L - u)
            cand = (m, u, v)
            if g_live and _better(cand, best_g):
                best_g = cand
            if u + v >= t and p_live and _better(cand, best_p):
                best_p = cand
    return best_g, best_p


def _scan_period_numpy(a: np.ndarray, n: int, v: int, t: int,
                       best_g: _Cand | None, best_p: _Cand | None) -> tuple[_Cand | None, _Cand | None]:
    L = n - v
    if L == 0:
        cand = (n, 0, v)
        if _better(cand, best_g):
            best_g = cand
        if v >= t and _better(cand, best_p):
            best_p = cand
        return best_g, best_p

    eq = a[:L] == a[v:]
    idx = np.arange(L)
    next_miss = np.minimum.accumulate(np.where(eq, L, idx)[::-1])[::-1]
    r = next_miss - idx
    m_vals = idx + v + np.minimum(r, L - idx)
    scores = m_vals / (idx + v)

    # Within one period the first float argmax is already the exact best
    # candidate: distinct scores at N <= 10^6 differ by more than float
    # error, and among equal scores the smallest u wins the tie-break.
    if _can_reach(n, v, best_g):
        if best_g is None:
            u_hi = L
        else:
            mg, ug, vg = best_g
            u_hi = min(L, n * (ug + vg) // mg - v + 1)
        if u_hi > 0:
            i = int(np.argmax(scores[:u_hi]))
            cand = (int(m_vals[i]), i, v)
            if _better(cand, best_g):
                best_g = cand
    if _can_reach(n, max(v, t), best_p):
        u_lo = max(0, t - v)
        if best_p is None:
            u_hi = L
        else:
            mp_, up, vp = best_p
            u_hi = min(L, n * (up + vp) // mp_ - v + 1)
        if u_lo < u_hi:
            i = u_lo + int(np.argmax(scores[u_lo:u_hi]))
            cand = (int(m_vals[i]), i, v)
            if _better(cand, best_p):
                best_p = cand
    # u = L (m = u+v = N, score 1) never beats the v=1 pass, so it is skipped.
    return best_g, best_p


def _scan_numpy(data: bytes, n: int, t: int, threads: int = 1) -> tuple[_Cand, _Cand]:
    a = np.frombuffer(data, dtype=np.uint8)
    if threads > 1:
        return _scan_numpy_threaded(a, n, t, threads)
    best_g: _Cand | None = None
    best_p: _Cand | None = None
    for v in range(1, n + 1):
        if not _can_reach(n, v, best_g) and not _can_reach(n, max(v, t), best_p):
            break
        best_g, best_p = _scan_period_numpy(a, n, v, t, best_g, best_p)
    return best_g, best_p


def _scan_numpy_threaded(a: np.ndarray, n: int, t: int, threads: int) -> tuple[_Cand, _Cand]:
    # Periods are partitioned into chunks; each worker prunes against a
    # shared incumbent.  Pruning only discards provably non-winning
    # candidates, so the deterministic final reduction is unaffected by
    # scheduling.
    chunk = 256
    shared: dict[str, _Cand | None] = {"g": None, "p": None}

    def run_chunk(v0: int) -> tuple[_Cand | None, _Cand | None]:
        bg, bp = shared["g"], shared["p"]
        for v in range(v0, min(v0 + chunk, n + 1)):
            if not _can_reach(n, v, bg) and not _can_reach(n, max(v, t), bp):
                break
            bg, bp = _scan_period_numpy(a, n, v, t, bg, bp)
        return bg, bp

    results: list[tuple[_Cand | None, _Cand | None]] = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending = []
        for v0 in range(1, n + 1, chunk):
            if not _can_reach(n, v0, shared["g"]) and not _can_reach(n, max(v0, t), shared["p"]):
                break
            pending.append(pool.submit(run_chunk, v0))
            if len(pending) >= threads:
                done = pending.pop(0)
                bg, bp = done.result()
                results.append((bg, bp))
                if bg is not None and _better(bg, shared["g"]):
                    shared["g"] = bg
                if bp is not None and _better(bp, shared["p"]):
                    shared["p"] = bp
        for fut in pending:
            results.append(fut.result())

    best_g: _Cand | None = None
    best_p: _Cand | None = None
    for bg, bp in results:
        if bg is not None and _better(bg, best_g):
            best_g = bg
        if bp is not None and _better(bp, best_p):
            best_p = bp
    return best_g, best_p


def dio_brute_force(prefix: Word, threshold: int | None = None) -> ExponentEstimate:
    """Triple-loop reference scan (O(N^3) worst case), for oracle tests.

    Independent of the run-length kernel: for every (u, v) the match is
    extended one position at a time.
    """
    data = prefix.symbols
    n = len(data)
    if n < 2:
        raise ValueError("degenerate prefix (length < 2)")
    t = _default_threshold(n) if threshold is None else threshold
    best_g: _Cand | None = None
    best_p: _Cand | None = None
    for u in range(n):
        for v in range(1, n - u + 1):
            m = u + v
            while m < n and data[m] == data[m - v]:
                m += 1
            cand = (m, u, v)
            if _better(cand, best_g):
                best_g = cand
            if u + v >= t and _better(cand, best_p):
                best_p = cand
    return ExponentEstimate(
        global_max=RepetitionWitness(best_g[1], best_g[2], best_g[0]),
        persistent_max=RepetitionWitness(best_p[1], best_p[2], best_p[0]),
        prefix_length=n,
        threshold=t,
    )


def ice_brute_force(prefix: Word, threshold: int | None = None) -> ExponentEstimate:
    """Reference scan for initial repetitions (u = 0 slice of dio_brute_force)."""
    data = prefix.symbols
    n = len(data)
    if n < 2:
        raise ValueError("degenerate prefix (length < 2)")
    t = _default_threshold(n) if threshold is None else threshold
    best_g: _Cand | None = None
    best_p: _Cand | None = None
    for v in range(1, n + 1):
        m = v
        while m < n and data[m] == data[m - v]:
            m += 1
        cand = (m, 0, v)
        if _better(cand, best_g):
            best_g = cand
        if v >= t and _better(cand, best_p):
            best_p = cand
    return ExponentEstimate(
        global_max=RepetitionWitness(0, best_g[2], best_g[0]),
        persistent_max=RepetitionWitness(0, best_p[2], best_p[0]),
        prefix_length=n,
        threshold=t,
    )
