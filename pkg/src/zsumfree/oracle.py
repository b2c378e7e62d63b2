"""Brute-force ground truth for f_n(k) over Z_n.

Subset-sum sets are n-bit integers: bit s set means some nonempty subset of
the elements processed so far sums to s mod n.  Adding an element b maps the
current sum-set S to S | rot(S, b) | {b}, where rot is rotation by b modulo
n.  A partial subset with a zero sum can never be extended to a zero-sum
free set, so the enumeration prunes on bit 0 immediately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

MAX_N = 1024

INFINITE = math.inf


class CapacityError(ValueError):
    """n exceeds the configured bit-set width."""


@dataclass(frozen=True)
class WitnessReport:
    n: int
    elements: tuple[int, ...]
    sum_count: int
    zero_sum_free: bool


def sumset_size(n: int, elements) -> tuple[bool, int]:
    """(zero_sum_free, number of distinct nonempty subset sums) of a set of
    distinct residues mod n."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_N:
        raise CapacityError("n=%d exceeds bit-set capacity %d" % (n, MAX_N))
    elems = [b % n for b in elements]
    if len(set(elems)) != len(elems):
        raise ValueError("elements not distinct mod n")
    mask = (1 << n) - 1
    s = 0
    for b in elems:
        s = (s | ((s << b) | (s >> (n - b))) | (1 << b)) & mask
    return (s & 1 == 0, bin(s).count("1"))


def _unit_canonical(n: int, elems: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically least image of the set under multiplication by a
    unit of Z_n."""
    best = tuple(sorted(elems))
    for u in range(2, n):
        if math.gcd(u, n) != 1:
            continue
        img = tuple(sorted(u * b % n for b in elems))
        if img < best:
            best = img
    return best


def brute_force_f(n: int, k: int, reduce_units: bool = False,
                  workers: int = 1):
    """Minimum of sumset_size over all zero-sum-free k-subsets of Z_n\\{0}.

    Returns (value, WitnessReport) with value == math.inf and witness None
    when no zero-sum free k-subset exists.  The witness is the
    lexicographically smallest minimizer found by the in-order enumeration.

    reduce_units restricts the enumeration to subsets that are the
    lexicographically least representative of their unit-orbit u*B; the
    minimum value is unchanged because |Sigma(uB)| = |Sigma(B)|.
    """
    if n < 2 or k < 1:
        raise ValueError("need n >= 2, k >= 1")
    if n > MAX_N:
        raise CapacityError("n=%d exceeds bit-set capacity %d" % (n, MAX_N))
    if workers > 1:
        return _brute_force_parallel(n, k, reduce_units, workers)
    return _brute_force_range(n, k, reduce_units, 1, n)


def _brute_force_range(n: int, k: int, reduce_units: bool,
                       first_lo: int, first_hi: int):
    """Search restricted to subsets whose smallest element lies in
    [first_lo, first_hi)."""
    mask = (1 << n) - 1
    best_count = n  # sumset count is always < n when zero-sum free
    best_witness: tuple[int, ...] | None = None
    chosen = [0] * k

    def rec(start: int, s: int, depth: int) -> None:
        nonlocal best_count, best_witness
        if bin(s).count("1") >= best_count:
            return
        if depth == k:
            cnt = bin(s).count("1")
            w = tuple(chosen)
            if reduce_units and _unit_canonical(n, w) != w:
                return
            best_count = cnt
            best_witness = w
            return
        hi = n - (k - depth - 1)
        if depth == 0:
            lo, hi = first_lo, min(hi, first_hi)
        else:
            lo = start
        for b in range(lo, hi):
            s2 = (s | ((s << b) | (s >> (n - b))) | (1 << b)) & mask
            if s2 & 1:
                continue
            chosen[depth] = b
            rec(b + 1, s2, depth + 1)

    rec(1, 0, 0)
    if best_witness is None:
        return INFINITE, None
    return best_count, WitnessReport(n, best_witness, best_count, True)


def _brute_worker(args):
    return _brute_force_range(*args)


def _brute_force_parallel(n: int, k: int, reduce_units: bool, workers: int):
    import multiprocessing as mp

    tasks = [(n, k, reduce_units, b, b + 1) for b in range(1, n)]
    with mp.Pool(workers) as pool:
        results = pool.map(_brute_worker, tasks)
    best = (INFINITE, None)
    for value, witness in results:
        if witness is None:
            continue
        if value < best[0] or (value == best[0]
                               and witness.elements < best[1].elements):
            best = (value, witness)
    return best


def verify_example(n: int, elements, expected_ell: int) -> bool:
    """True iff the elements are distinct nonzero residues mod n, zero-sum
    free, with exactly expected_ell distinct nonempty sums."""
    elems = [b % n for b in elements]
    if len(set(elems)) != len(elems) or 0 in elems:
        return False
    free, count = sumset_size(n, elems)
    return free and count == expected_ell


def sweep(k: int, n_lo: int, n_hi: int, workers: int = 1) -> dict[int, float]:
    """brute_force_f values for n in [n_lo, n_hi]."""
    return {n: brute_force_f(n, k, workers=workers)[0]
            for n in range(n_lo, n_hi + 1)}


def find_minimal_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    """All zero-sum-free k-subsets achieving the minimal sum count
    (small n only; used by audit tests)."""
    value, _ = brute_force_f(n, k)
    if value is INFINITE:
        return []
    out = []
    for comb in combinations(range(1, n), k):
        free, cnt = sumset_size(n, comb)
        if free and cnt == value:
            out.append(comb)
    return out
