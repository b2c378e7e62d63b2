import math

import pytest

from zsumfree import oracle
from zsumfree.oracle import (CapacityError, brute_force_f,
                             find_minimal_subsets, sumset_size, sweep,
                             verify_example)

# Named witnesses with their table values, checked by direct enumeration.
PAPER_WITNESSES = [
    (6, (1, 2), 3),
    (6, (1, 3, 4), 5),            # {1, n/2, n/2+1} at n = 6
    (9, (3, 1, 4, 7), 8),
    (15, (-1, 2, 3, 4, 5), 14),
    (25, (5, 10, 1, 6, 11, 16, 21), 24),
]


def test_sumset_size_basics():
    # {1,2} in Z_6: sums 1,2,3
    assert sumset_size(6, (1, 2)) == (True, 3)
    # {2,4} in Z_6: 2+4 = 0, not zero-sum free
    free, _ = sumset_size(6, (2, 4))
    assert not free
    with pytest.raises(ValueError):
        sumset_size(6, (1, 7))  # 7 = 1 mod 6, duplicates
    with pytest.raises(CapacityError):
        sumset_size(oracle.MAX_N + 1, (1, 2))


def test_named_witnesses_verify():
    for n, elems, ell in PAPER_WITNESSES:
        assert verify_example(n, elems, ell), (n, elems, ell)
        assert not verify_example(n, elems, ell + 1)


def test_verify_example_rejects_bad_sets():
    assert not verify_example(6, (1, 2, 0), 3)   # contains 0
    assert not verify_example(6, (1, 7), 3)      # duplicates mod n
    assert not verify_example(6, (2, 4), 2)      # zero sum


def test_tiny_values():
    # k = 1: any single nonzero element, one sum
    assert brute_force_f(2, 1)[0] == 1
    # k = 2: f_n(2) = 3 for n >= 4, infinite for n <= 3
    assert brute_force_f(4, 2)[0] == 3
    assert brute_force_f(4, 2)[1].elements == (1, 2)
    assert brute_force_f(3, 2)[0] == oracle.INFINITE


def test_k3_parity_split():
    # f_n(3) = 5 for even n >= 6, 6 for odd n >= 7
    for n in range(6, 21):
        expect = 5 if n % 2 == 0 else 6
        assert brute_force_f(n, 3)[0] == expect, n
    for n in range(2, 6):
        assert brute_force_f(n, 3)[0] == oracle.INFINITE


def test_witness_is_lex_smallest_minimizer():
    value, report = brute_force_f(9, 4)
    assert value == 8
    minimal = find_minimal_subsets(9, 4)
    assert report.elements == min(minimal)
    assert all(sumset_size(9, b) == (True, 8) for b in minimal)


def test_unit_orbit_reduction_transparent():
    for n, k in [(9, 4), (11, 4), (12, 3), (14, 5)]:
        plain = brute_force_f(n, k)[0]
        reduced = brute_force_f(n, k, reduce_units=True)[0]
        assert plain == reduced, (n, k)


def test_parallel_matches_serial():
    for n, k in [(9, 4), (11, 4), (13, 4)]:
        v1, w1 = brute_force_f(n, k, workers=1)
        v2, w2 = brute_force_f(n, k, workers=2)
        assert v1 == v2
        assert w1.elements == w2.elements


def test_sweep_shape():
    s = sweep(2, 2, 8)
    assert s == {2: oracle.INFINITE, 3: oracle.INFINITE,
                 4: 3, 5: 3, 6: 3, 7: 3, 8: 3}


def test_general_lower_bound_2k():
    # f_n(k) >= 2k for k = 4, modest n (full range covered in acceptance)
    for n in range(9, 26):
        v = brute_force_f(n, 4)[0]
        if v != oracle.INFINITE:
            assert v >= 8, n


def test_prime_lower_bound_small():
    # f_p(k) >= C(k+1,2) - (k mod 2) for primes p, small cases
    for p in (7, 11, 13, 17, 19, 23):
        for k in (3, 4):
            v = brute_force_f(p, k)[0]
            bound = k * (k + 1) // 2 - (k % 2)
            if v != oracle.INFINITE:
                assert v >= bound, (p, k)


def test_bad_arguments():
    with pytest.raises(ValueError):
        brute_force_f(1, 2)
    with pytest.raises(ValueError):
        brute_force_f(5, 0)
    with pytest.raises(CapacityError):
        brute_force_f(oracle.MAX_N + 1, 2)
