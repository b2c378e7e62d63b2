"""Shared vocabulary: index subsets as bit masks, linear forms over x_1..x_k.

A nonempty subset C of {1,..,k} is encoded as an integer mask with bit i-1
set for i in C.  A linear form is a length-k tuple of integer coefficients
representing sum_i c_i * x_i; forms coming straight from a subset pair have
entries in {-1,0,1}, but lattice reduction produces larger entries, so
everything downstream treats entries as unbounded ints.
"""

from __future__ import annotations

from itertools import combinations

MAX_K = 16

Form = tuple[int, ...]


def all_masks(k: int) -> list[int]:
    """All nonempty subsets of {1,..,k} as masks, in increasing integer order."""
    return list(range(1, 1 << k))


def mask_size(mask: int) -> int:
    return bin(mask).count("1")


def mask_elems(mask: int) -> tuple[int, ...]:
    """1-based element indices of a mask, ascending."""
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def mask_from_elems(elems) -> int:
    m = 0
    for i in elems:
        m |= 1 << (i - 1)
    return m


def singleton(i: int) -> int:
    return 1 << (i - 1)


def pair_form(c: int, c2: int, k: int) -> Form:
    """Coefficient vector of sum_{i in c} x_i - sum_{i in c2} x_i.

    c must be nonempty; c2 may be 0, which yields the zero-sum form of c.
    """
    if c == 0:
        raise ValueError("left subset must be nonempty")
    if c >= (1 << k) or c2 >= (1 << k):
        raise ValueError("mask out of range for k=%d" % k)
    return tuple((c >> i & 1) - (c2 >> i & 1) for i in range(k))


def base_inequations(k: int) -> set[Form]:
    """Forms that must never vanish: x_i - x_j for i < j, and every
    nonempty zero-sum form sum_{i in C} x_i.

    Count is k(k-1)/2 + 2^k - 1.
    """
    if not 1 <= k <= MAX_K:
        raise ValueError("k out of range")
    forms: set[Form] = set()
    for i, j in combinations(range(1, k + 1), 2):
        forms.add(pair_form(singleton(i), singleton(j), k))
    for c in all_masks(k):
        forms.add(pair_form(c, 0, k))
    return forms


def normalize_sign(form: Form) -> Form:
    """Flip the form so its first nonzero entry is positive (canonical rep
    of {v, -v})."""
    for x in form:
        if x > 0:
            return form
        if x < 0:
            return tuple(-y for y in form)
    return form


def negate(form: Form) -> Form:
    return tuple(-x for x in form)


def trivial_ell_max(k: int) -> int:
    """One less than the trivial upper bound k(k+1)/2 on the number of
    distinct nonempty sums (clamped to k: singleton sums are always
    pairwise distinct)."""
    return max(k, k * (k + 1) // 2 - 1)
