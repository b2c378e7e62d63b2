"""Glue from almost-examples to certified solution families.

For an almost-example the equation system is a spanning set of pair forms
inside each class; the inequations are the base inequations plus one pair
form per pair of distinct classes.  Families that survive the symbolic
substitution filter are instantiated into concrete witnesses in Z_n and
re-verified by the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Form, base_inequations, pair_form
from .search import AlmostExample
from . import oracle, solver


@dataclass(frozen=True)
class CertifiedFamily:
    example: AlmostExample
    family: solver.SolutionFamily
    ell: int
    witness_n: int
    witness: tuple[int, ...]

    @property
    def modulus(self) -> int:
        return self.family.modulus

    @property
    def divisor(self) -> int:
        return self.family.divisor


def relation_equations(ex: AlmostExample) -> list[tuple[Form, Fraction]]:
    """Spanning equation set of the relation: anchor each class member to
    the first member; constants are zero."""
    eqs = []
    for cls in ex.classes:
        anchor = cls[0]
        for m in cls[1:]:
            eqs.append((pair_form(anchor, m, ex.k), Fraction(0)))
    return eqs


def relation_inequations(ex: AlmostExample) -> list[Form]:
    """All inequation forms of the relation's system: base distinctness and
    zero-sum forms plus one difference form per pair of distinct
    classes."""
    forms = list(base_inequations(ex.k))
    reps = [cls[0] for cls in ex.classes]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            forms.append(pair_form(reps[i], reps[j], ex.k))
    return forms


def certify(ex: AlmostExample) -> list[CertifiedFamily]:
    """Solve the example's equations over Q/Z, keep the families passing
    the substitution filter, and attach an oracle-verified witness to
    each."""
    ineqs = relation_inequations(ex)
    out = []
    for fam in solver.solve_mod1(ex.k, relation_equations(ex)):
        if not solver.substitute_check(fam, ineqs):
            continue
        n, elems = solver.instantiate(fam, expected_ell=ex.ell)
        out.append(CertifiedFamily(ex, fam, ex.ell, n, elems))
    return out


def certify_all(examples) -> list[CertifiedFamily]:
    out = []
    for ex in examples:
        out.extend(certify(ex))
    return out


def verify_families(families) -> bool:
    """Witness gate: every certified family's witness must pass the
    independent verifier."""
    return all(oracle.verify_example(cf.witness_n, cf.witness, cf.ell)
               for cf in families)
