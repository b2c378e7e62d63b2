"""Minimal subset-sum counts of zero-sum-free sets in finite cyclic groups.

Library layout:

- core: masks, linear forms, base inequations
- lattice: exact Z-lattice insert/membership in triangular form
- search: pruned enumeration of subset-sum equivalence relations
- solver: Q/Z solving with case splits, substitution filter, witnesses
- oracle: brute-force f_n(k) and witness verification
- pipeline / report: certified families and the results table
- cli: `zsumfree search|oracle|table`
"""

from .core import base_inequations, pair_form
from .lattice import IntLattice
from .oracle import brute_force_f, sumset_size, verify_example
from .search import (AlmostExample, SearchConfig, anti_clique_bound, dedupe,
                     enumerate_relations, extend, symmetry_admissible)
from .solver import SolutionFamily, instantiate, solve_mod1, substitute_check

__all__ = [
    "AlmostExample", "IntLattice", "SearchConfig", "SolutionFamily",
    "anti_clique_bound", "base_inequations", "brute_force_f", "dedupe",
    "enumerate_relations", "extend", "instantiate", "pair_form",
    "solve_mod1", "substitute_check", "sumset_size", "symmetry_admissible",
    "verify_example",
]

__version__ = "0.1.0"
