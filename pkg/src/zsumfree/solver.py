"""Exact solving of linear systems in Q/Z with case splits on division.

A system of equations sum_i c_i x_i = t (mod 1) with integer c_i and
rational t is eliminated variable by variable.  Integer row combinations
are invertible mod 1 and therefore safe; dividing by the pivot a is not,
so each division forks into a branches with constants shifted by s/a,
s = 0..a-1.  The result is a finite list of affine solution families whose
union is exactly the solution set in (Q/Z)^k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .core import Form
from . import oracle

Equation = tuple[Form, Fraction]  # sum c_i x_i = const (mod 1)


class InstantiationError(RuntimeError):
    """A family that passed the symbolic check produced a witness the
    oracle rejected; signals a genericity bug."""


@dataclass(frozen=True)
class AffineExpr:
    """const + sum coeffs[v] * x_v, interpreted mod 1.  Variables in coeffs
    are free parameters of the enclosing family.  const is normalized
    into [0, 1)."""
    coeffs: tuple[tuple[int, Fraction], ...]  # sorted by variable index
    const: Fraction

    def evaluate(self, values: dict[int, Fraction]) -> Fraction:
        total = self.const
        for v, c in self.coeffs:
            total += c * values[v]
        return total % 1


@dataclass(frozen=True)
class SolutionFamily:
    k: int
    free: tuple[int, ...]  # variable indices (0-based) chosen as parameters
    bound: tuple[tuple[int, AffineExpr], ...]  # sorted by variable index

    @property
    def modulus(self) -> int:
        """lcm of all denominators in bound constants and coefficients;
        divides the n of every instantiation."""
        d = 1
        for _, expr in self.bound:
            d = lcm(d, expr.const.denominator)
            for _, c in expr.coeffs:
                d = lcm(d, c.denominator)
        return d

    @property
    def divisor(self) -> int:
        """lcm of the constant denominators only: the divisibility
        condition d | n under which the family can be realized (free
        parameters absorb coefficient denominators)."""
        d = 1
        for _, expr in self.bound:
            d = lcm(d, expr.const.denominator)
        return d

    def bound_map(self) -> dict[int, AffineExpr]:
        return dict(self.bound)

    def point(self, params: dict[int, Fraction]) -> tuple[Fraction, ...]:
        """Concrete solution vector in [0,1)^k for given parameter values."""
        vals = {v: params[v] % 1 for v in self.free}
        for v, expr in self.bound:
            vals[v] = expr.evaluate(vals)
        return tuple(vals[i] for i in range(self.k))


def _combine_column(eqs: list[tuple[list[int], Fraction]], j: int):
    """Integer row ops until at most one equation has a nonzero entry in
    column j; returns (pivot_eq, others)."""
    with_j = [e for e in eqs if e[0][j]]
    others = [e for e in eqs if not e[0][j]]
    while len(with_j) > 1:
        with_j.sort(key=lambda e: abs(e[0][j]))
        c0, t0 = with_j[0]
        rest = []
        for c, t in with_j[1:]:
            q = c[j] // c0[j]
            c2 = [a - q * b for a, b in zip(c, c0)]
            t2 = t - q * t0
            if c2[j]:
                rest.append((c2, t2))
            else:
                others.append((c2, t2))
        with_j = [with_j[0]] + rest
    pivot = with_j[0] if with_j else None
    return pivot, others


def solve_mod1(k: int, equations) -> list[SolutionFamily]:
    """All solution families of the system in (Q/Z)^k.

    equations: iterable of (coeffs, const) with integer coeffs of length k
    and rational const.  An inconsistent branch (e.g. 0 = 1/2) contributes
    no family.
    """
    eqs0 = [([int(c) for c in coeffs], Fraction(const))
            for coeffs, const in equations]
    families: list[SolutionFamily] = []
    seen = set()

    def emit(bindings: list[tuple[int, list[Fraction], Fraction]]) -> None:
        bound_vars = {j for j, _, _ in bindings}
        free = tuple(i for i in range(k) if i not in bound_vars)
        resolved: dict[int, AffineExpr] = {}
        # bindings are in increasing variable order and only reference
        # higher-index variables; back-substitute from the bottom up
        for j, coeffs, const in reversed(bindings):
            acc: dict[int, Fraction] = {}
            tot = const
            for i in range(k):
                c = coeffs[i]
                if not c:
                    continue
                if i in resolved:
                    sub = resolved[i]
                    tot += c * sub.const
                    for v, cc in sub.coeffs:
                        acc[v] = acc.get(v, Fraction(0)) + c * cc
                else:
                    acc[i] = acc.get(i, Fraction(0)) + c
            coeff_items = tuple(sorted((v, c) for v, c in acc.items() if c))
            resolved[j] = AffineExpr(coeff_items, tot % 1)
        fam = SolutionFamily(k, free, tuple(sorted(resolved.items())))
        key = (fam.free, fam.bound)
        if key not in seen:
            seen.add(key)
            families.append(fam)

    def step(eqs, bindings) -> None:
        live = []
        for c, t in eqs:
            if any(c):
                live.append((c, t))
            elif (t % 1) != 0:
                return  # contradictory: 0 = noninteger
        if not live:
            emit(bindings)
            return
        j = min(i for c, _ in live for i in range(k) if c[i])
        pivot, rest = _combine_column(live, j)
        assert pivot is not None
        c, t = pivot
        if c[j] < 0:
            c = [-a for a in c]
            t = -t
        a = c[j]
        # a*x_j + sum_{i>j} c_i x_i = t (mod 1)
        # => x_j = (t + s)/a - sum c_i/a x_i, s = 0..a-1
        base = [-Fraction(ci, a) for ci in c]
        base[j] = Fraction(0)
        for s in range(a):
            step(rest, bindings + [(j, base, Fraction(t + s, a))])

    step(eqs0, [])
    return families


def substitute_form(fam: SolutionFamily, form: Form):
    """Plug the family's bound expressions into an integer form; returns
    (param_coeffs dict, const Fraction)."""
    bound = fam.bound_map()
    acc: dict[int, Fraction] = {}
    const = Fraction(0)
    for i, c in enumerate(form):
        if not c:
            continue
        if i in bound:
            expr = bound[i]
            const += c * expr.const
            for v, cc in expr.coeffs:
                acc[v] = acc.get(v, Fraction(0)) + c * cc
        else:
            acc[i] = acc.get(i, Fraction(0)) + c
    acc = {v: c for v, c in acc.items() if c}
    return acc, const


def substitute_check(fam: SolutionFamily, inequations) -> bool:
    """False iff some inequation collapses identically to an integer after
    substitution; True means generic parameter values satisfy all of
    them."""
    for form in inequations:
        coeffs, const = substitute_form(fam, form)
        if not coeffs and const.denominator == 1:
            return False
    return True


def _primes_above(floor: int):
    n = max(floor, 2)
    while True:
        n += 1
        if all(n % p for p in range(2, int(n ** 0.5) + 1)):
            yield n


def instantiate(fam: SolutionFamily, prime_floor: int | None = None,
                expected_ell: int | None = None) -> tuple[int, tuple[int, ...]]:
    """Concrete zero-sum-free witness (n, B) realizing the family.

    Each free parameter gets the value 1/p for a fresh prime p above
    prime_floor (default k * ell_max), n is the lcm of all denominators of
    the resulting solution vector, and B = n * x mod n.  The witness is
    re-verified by the oracle; a verifier rejection is retried once with
    larger primes, a second rejection raises InstantiationError.
    """
    k = fam.k
    if prime_floor is None:
        prime_floor = k * (k * (k + 1) // 2 - 1)
    for attempt in range(2):
        gen = _primes_above(prime_floor * (attempt + 1))
        params = {v: Fraction(1, next(gen)) for v in fam.free}
        values = fam.point(params)
        n = 1
        for x in values:
            n = lcm(n, x.denominator)
        if n < 2:
            n = 2
        elems = tuple(int(x * n) % n for x in values)
        ok = (len(set(elems)) == k and 0 not in elems)
        if ok:
            free, count = oracle.sumset_size(n, elems)
            ok = free and (expected_ell is None or count == expected_ell)
        if ok:
            return n, elems
    raise InstantiationError(
        "family %r produced no verifiable witness" % (fam,))
