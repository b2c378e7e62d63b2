"""Incremental Z-lattice of integer forms in upper triangular shape.

Rows are kept in echelon form: strictly increasing pivot columns, positive
pivot entries.  Only generation and membership are supported; membership
reduces a vector through the pivots (floor division), so the residue of a
vector is a canonical coset representative and a vector lies in the lattice
iff its residue is zero.
"""

from __future__ import annotations

from bisect import bisect_left

from .core import Form


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, x, y with x*a + y*b = g = gcd(a, b), g > 0 for (a,b) != (0,0)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# content-interned lattices produced by insert_cached, keyed by
# (dim, rows): search branches reaching the same equation lattice by
# different routes share one object and its residue cache.  The table is
# the only structure retaining probe results, so dropping it bounds
# memory; it is cleared wholesale when it hits the cap (in-flight
# lattices keep working, future probes just re-warm).
_INTERNED: dict = {}
_INTERN_CAP = 100_000


def clear_caches() -> None:
    """Drop the global intern table (per-lattice caches die with it).
    Called between long-running search shards to bound memory."""
    _INTERNED.clear()


def _leading(v: Form) -> int:
    for i, x in enumerate(v):
        if x:
            return i
    return -1


class IntLattice:
    """Immutable-by-convention echelon lattice.  insert() returns a new
    lattice; the receiver is never mutated, so search branches can share
    ancestors freely."""

    __slots__ = ("dim", "rows", "pivots", "_cache", "_zeros")

    def __init__(self, dim: int, rows: list[Form] | None = None,
                 pivots: list[int] | None = None):
        self.dim = dim
        self.rows: list[Form] = rows if rows is not None else []
        self.pivots: list[int] = pivots if pivots is not None else []
        self._cache: dict[Form, Form] = {}
        self._zeros: set[Form] = set()  # inputs known to reduce to zero

    def __len__(self) -> int:
        return len(self.rows)

    def __repr__(self) -> str:
        return "IntLattice(%d, %r)" % (self.dim, self.rows)

    def reduce(self, v: Form) -> Form:
        """Canonical residue of v modulo the lattice.  Zero iff contained."""
        rows = self.rows
        pivots = self.pivots
        if not rows:
            return v
        w = list(v)
        for r, p in zip(rows, pivots):
            a = w[p]
            if a:
                q = a // r[p]
                if q:
                    for j in range(p, self.dim):
                        w[j] -= q * r[j]
        return tuple(w)

    def reduce_cached(self, v: Form) -> Form:
        """reduce() memoized per lattice; safe because lattices are never
        mutated after construction."""
        r = self._cache.get(v)
        if r is None:
            r = self.reduce(v)
            self._cache[v] = r
            if not any(r):
                self._zeros.add(v)
        return r

    def contains(self, v: Form) -> bool:
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        return not any(self.reduce(v))

    def insert_cached(self, v: Form) -> "IntLattice":
        """insert() interned by row content: equal lattices reached along
        different insertion paths share one object and one residue
        cache."""
        lat = self.insert(v)
        key = (lat.dim, tuple(lat.rows))
        canon = _INTERNED.get(key)
        if canon is not None:
            return canon
        if len(_INTERNED) >= _INTERN_CAP:
            _INTERNED.clear()
        _INTERNED[key] = lat
        return lat

    def insert(self, v: Form) -> "IntLattice":
        """Lattice generated by the old rows plus v, re-triangularized.

        Row operations are unimodular, so the generated lattice is exactly
        old + Zv.  Inserting the zero vector (or a contained one) returns
        an equal lattice.
        """
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        rows = list(self.rows)
        pivots = list(self.pivots)
        work = [v]
        while work:
            w = work.pop()
            while True:
                lead = _leading(w)
                if lead < 0:
                    break
                i = bisect_left(pivots, lead)
                if i == len(pivots) or pivots[i] != lead:
                    if w[lead] < 0:
                        w = tuple(-x for x in w)
                    rows.insert(i, tuple(w))
                    pivots.insert(i, lead)
                    break
                r = rows[i]
                a, b = r[lead], w[lead]
                if b % a == 0:
                    q = b // a
                    w = tuple(x - q * y for x, y in zip(w, r))
                    continue
                g, x, y = _xgcd(a, b)
                new = tuple(x * p + y * q for p, q in zip(r, w))
                rows[i] = new
                qa, qb = a // g, b // g
                r2 = tuple(p - qa * q for p, q in zip(r, new))
                w2 = tuple(p - qb * q for p, q in zip(w, new))
                if any(r2):
                    work.append(r2)
                w = w2
        return IntLattice(self.dim, rows, pivots)

def lattice_from(dim: int, generators) -> IntLattice:
    lat = IntLattice(dim)
    for g in generators:
        lat = lat.insert(g)
    return lat
