import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from zsumfree.lattice import IntLattice, lattice_from

vec = lambda dim: st.tuples(*[st.integers(-6, 6)] * dim)


def gens_strategy(dim):
    return st.lists(vec(dim), min_size=0, max_size=5)


def test_known_membership():
    lat = lattice_from(2, [(2, 0), (0, 2)])
    assert lat.contains((2, 4))
    assert lat.contains((-2, 2))
    assert not lat.contains((1, 0))
    assert not lat.contains((0, 3))


def test_echelon_invariants():
    lat = lattice_from(3, [(2, 3, 5), (4, 1, 1), (0, 0, 7)])
    assert lat.pivots == sorted(lat.pivots)
    for row, p in zip(lat.rows, lat.pivots):
        assert row[p] > 0
        assert all(x == 0 for x in row[:p])


def test_insert_is_pure():
    lat = lattice_from(2, [(2, 0)])
    rows_before = list(lat.rows)
    lat.insert((1, 1))
    assert lat.rows == rows_before


@settings(max_examples=200)
@given(st.integers(1, 4).flatmap(
    lambda d: st.tuples(st.just(d), gens_strategy(d), st.randoms(),
                        st.lists(vec(d), min_size=3, max_size=3))))
def test_insertion_order_independence(args):
    """The basis is not unique, but the lattice, its pivot structure and
    the canonical residues are independent of insertion order."""
    dim, gens, rng, probes = args
    lat1 = lattice_from(dim, gens)
    shuffled = list(gens)
    rng.shuffle(shuffled)
    lat2 = lattice_from(dim, shuffled)
    assert lat1.pivots == lat2.pivots
    assert [r[p] for r, p in zip(lat1.rows, lat1.pivots)] == \
        [r[p] for r, p in zip(lat2.rows, lat2.pivots)]
    for r in lat1.rows:
        assert lat2.contains(r)
    for r in lat2.rows:
        assert lat1.contains(r)
    for v in probes:
        assert lat1.reduce(v) == lat2.reduce(v)


@settings(max_examples=200)
@given(st.integers(1, 4).flatmap(
    lambda d: st.tuples(st.just(d), gens_strategy(d),
                        st.lists(st.integers(-3, 3), min_size=0, max_size=5),
                        vec(d))))
def test_combinations_contained_and_reduce_canonical(args):
    dim, gens, coeffs, v = args
    lat = lattice_from(dim, gens)
    combo = [0] * dim
    for c, g in zip(coeffs, gens):
        combo = [x + c * y for x, y in zip(combo, g)]
    combo = tuple(combo)
    # every integer combination of the generators lies in the lattice
    assert lat.contains(combo)
    # the residue is a canonical coset representative
    shifted = tuple(x + y for x, y in zip(v, combo))
    assert lat.reduce(shifted) == lat.reduce(v)
    r = lat.reduce(v)
    assert lat.reduce(r) == r
    assert lat.contains(v) == (not any(r))
    # v - reduce(v) is in the lattice
    assert lat.contains(tuple(x - y for x, y in zip(v, r)))


@settings(max_examples=100)
@given(st.integers(1, 3).flatmap(
    lambda d: st.tuples(st.just(d), gens_strategy(d), vec(d))))
def test_insert_contained_is_noop(args):
    dim, gens, v = args
    lat = lattice_from(dim, gens)
    if lat.contains(v):
        lat2 = lat.insert(v)
        assert lat2.rows == lat.rows
    else:
        lat2 = lat.insert(v)
        assert lat2.contains(v)
        for g in gens:
            assert lat2.contains(g)


def test_membership_against_exhaustive_combinations():
    """Brute-force oracle in dimension 2: v with small entries is in the
    lattice of two small generators iff some small-coefficient integer
    combination hits it.  Coefficient bound: with |entries| <= 3 and
    echelon pivots >= 1, any representation of a vector with entries
    bounded by 6 uses coefficients bounded by 60 in absolute value."""
    rng = random.Random(7)
    for _ in range(50):
        g1 = tuple(rng.randint(-3, 3) for _ in range(2))
        g2 = tuple(rng.randint(-3, 3) for _ in range(2))
        lat = lattice_from(2, [g1, g2])
        for _ in range(10):
            v = (rng.randint(-6, 6), rng.randint(-6, 6))
            found = any(
                (a * g1[0] + b * g2[0], a * g1[1] + b * g2[1]) == v
                for a, b in product(range(-60, 61), repeat=2))
            assert lat.contains(v) == found, (g1, g2, v)


def test_reduce_cached_matches_reduce():
    lat = lattice_from(3, [(1, 2, 3), (0, 4, 2)])
    for v in [(5, 5, 5), (0, 0, 0), (1, 2, 3), (-3, 1, 0)]:
        assert lat.reduce_cached(v) == lat.reduce(v)
        assert lat.reduce_cached(v) == lat.reduce(v)  # cached path


def test_dimension_mismatch():
    lat = IntLattice(2)
    with pytest.raises(ValueError):
        lat.contains((1, 2, 3))
    with pytest.raises(ValueError):
        lat.insert((1,))
