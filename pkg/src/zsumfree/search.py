"""Recursive enumeration of subset-sum equivalence relations.

A relation over the nonempty subsets of {1,..,k} is built pair by pair:
each unordered pair of subsets is decided Equal or Unequal.  Equal inserts
the difference form into the equation lattice and merges the classes;
Unequal records the residue of the form as an inequation.  A state is dead
as soon as an inequation residue reduces to zero.  Four prunings keep the
tree small: lattice consistency, a greedy anti-clique lower bound on the
final class count, a symmetry canonicity restriction, and memoized
inconsistency checks.  Survivors with at most ell_max classes are the
almost-examples, deduplicated up to permutation of the k variables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, permutations

from .core import (Form, all_masks, base_inequations, mask_elems, mask_size,
                   normalize_sign, pair_form, trivial_ell_max)
from . import lattice
from .lattice import IntLattice

CHECKPOINT_FORMAT = "zsumfree-checkpoint"
CHECKPOINT_VERSION = 1

DEAD = "DEAD"
EQUAL = "E"
UNEQUAL = "U"


class CheckpointMismatch(RuntimeError):
    """Resume file does not match the requested search parameters."""


class Interrupted(RuntimeError):
    """Search interrupted; completed shards were checkpointed."""

    def __init__(self, path):
        super().__init__("search interrupted, checkpoint written to %s" % path)
        self.path = path


@dataclass
class SearchConfig:
    k: int
    ell_max: int | None = None  # default k(k+1)/2 - 1
    use_symmetry: bool = True
    use_anticlique: bool = True
    use_memo: bool = True
    workers: int = 1
    anticlique_period_early: int = 1  # during the 1-vs-2 stage
    anticlique_period_late: int = 4
    shard_depth: int = 12  # branch decisions defining one shard task

    def resolved_ell_max(self) -> int:
        if self.ell_max is None:
            return trivial_ell_max(self.k)
        return self.ell_max


@dataclass(frozen=True, order=True)
class AlmostExample:
    """A lattice-consistent relation: partition of all nonempty masks,
    canonical under variable permutation."""
    k: int
    classes: tuple[tuple[int, ...], ...]

    @property
    def ell(self) -> int:
        return len(self.classes)


def build_pairs(k: int):
    """Pair decision order: (singleton, 2-subset) pairs first, then
    (2-subset, 2-subset), then everything else; within each stage sorted
    by (larger mask, smaller mask).  Returns (pairs, n1, n2) with n1, n2
    the stage boundaries."""
    masks = all_masks(k)
    singles = [m for m in masks if mask_size(m) == 1]
    twos = [m for m in masks if mask_size(m) == 2]
    key = lambda p: (p[1], p[0])
    stage1 = sorted(((min(s, d), max(s, d)) for s in singles for d in twos),
                    key=key)
    stage2 = sorted(combinations(sorted(twos), 2), key=key)
    covered = set(stage1) | set(stage2)
    stage3 = sorted((p for p in combinations(masks, 2)
                     if (min(p), max(p)) not in covered), key=key)
    pairs = stage1 + stage2 + stage3
    return pairs, len(stage1), len(stage1) + len(stage2)


def anti_clique_order(k: int) -> list[int]:
    masks = all_masks(k)
    singles = sorted(m for m in masks if mask_size(m) == 1)
    twos = sorted(m for m in masks if mask_size(m) == 2)
    rest = sorted(m for m in masks if mask_size(m) > 2)
    return singles + twos + rest


class RelationState:
    """Partial relation: union-find partition of masks, equation lattice,
    inequation residues, and the memo of forms known inconsistent to add.

    Mutations go through methods returning undo closures so the search can
    branch cheaply; copy() supports the functional extend() used by
    callers outside the hot loop.
    """

    __slots__ = ("k", "zero", "parent", "size", "num_classes", "lattice",
                 "ineq_res", "memo_dead", "use_memo", "_form_cache")

    def __init__(self, k: int, use_memo: bool = True):
        self.k = k
        self.zero = (0,) * k
        n = 1 << k
        self.parent = list(range(n))
        self.size = [1] * n
        self.num_classes = n - 1
        self.lattice = IntLattice(k)
        self.ineq_res: dict[Form, int] = {}
        for f in base_inequations(k):
            key = normalize_sign(f)
            self.ineq_res[key] = self.ineq_res.get(key, 0) + 1
        self.use_memo = use_memo
        self.memo_dead: set[Form] = set()
        self._form_cache: dict[tuple[int, int], Form] = {}

    def copy(self) -> "RelationState":
        st = object.__new__(RelationState)
        st.k = self.k
        st.zero = self.zero
        st.parent = list(self.parent)
        st.size = list(self.size)
        st.num_classes = self.num_classes
        st.lattice = self.lattice
        st.ineq_res = dict(self.ineq_res)
        st.memo_dead = set(self.memo_dead)
        st.use_memo = self.use_memo
        st._form_cache = self._form_cache  # shared, content-immutable
        return st

    def find(self, m: int) -> int:
        p = self.parent
        while p[m] != m:
            m = p[m]
        return m

    def canon_form(self, ra: int, rb: int) -> Form:
        """Sign-normalized difference form between two class
        representatives."""
        if ra > rb:
            ra, rb = rb, ra
        key = (ra, rb)
        f = self._form_cache.get(key)
        if f is None:
            f = normalize_sign(pair_form(ra, rb, self.k))
            self._form_cache[key] = f
        return f

    def merge(self, ra: int, rb: int):
        """Union the two classes; returns an undo closure."""
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.num_classes -= 1

        def undo():
            self.size[ra] -= self.size[rb]
            self.parent[rb] = rb
            self.num_classes += 1

        return undo

    def add_inequation(self, g: Form, residue: Form, memoize: bool):
        """Record the residue of a decided-Unequal form; returns undo."""
        self.ineq_res[residue] = self.ineq_res.get(residue, 0) + 1
        added_memo = memoize and self.use_memo and g not in self.memo_dead
        if added_memo:
            self.memo_dead.add(g)

        def undo():
            c = self.ineq_res[residue] - 1
            if c:
                self.ineq_res[residue] = c
            else:
                del self.ineq_res[residue]
            if added_memo:
                self.memo_dead.discard(g)

        return undo

    def try_insert(self, g: Form):
        """Probe adding the equation g: (new_lattice, new_residues, dead).
        new_residues is None when dead."""
        newlat = self.lattice.insert_cached(g)
        if not newlat._zeros.isdisjoint(self.ineq_res):
            return newlat, None, True
        red = newlat.reduce_cached
        zero = self.zero
        newres: dict[Form, int] = {}
        get = newres.get
        for key, cnt in self.ineq_res.items():
            nk = red(key)
            if nk == zero:
                return newlat, None, True
            newres[nk] = get(nk, 0) + cnt
        return newlat, newres, False

    def probe_dead(self, g: Form) -> bool:
        """Deadness part of try_insert without building the residue map.
        Warm probes are two set operations against the inserted lattice's
        residue cache."""
        lat = self.lattice.insert_cached(g)
        ineq = self.ineq_res
        if not lat._zeros.isdisjoint(ineq):
            return True
        missing = ineq.keys() - lat._cache.keys()
        if not missing:
            return False
        red = lat.reduce_cached
        zero = self.zero
        for key in missing:
            if red(key) == zero:
                return True
        return False

    def apply_equal(self, ra: int, rb: int, newlat: IntLattice,
                    newres: dict[Form, int]):
        oldlat, oldres = self.lattice, self.ineq_res
        self.lattice = newlat
        self.ineq_res = newres
        undo_merge = self.merge(ra, rb)

        def undo():
            undo_merge()
            self.lattice = oldlat
            self.ineq_res = oldres

        return undo

    def inconsistent_to_add(self, g: Form, memo_log: list | None = None) -> bool:
        """Would inserting g make some inequation contained?  Uses and
        feeds the memo when enabled."""
        if self.use_memo and g in self.memo_dead:
            return True
        dead = self.probe_dead(g)
        if dead and self.use_memo:
            self.memo_dead.add(g)
            if memo_log is not None:
                memo_log.append(g)
        return dead

    def partition(self) -> tuple[tuple[int, ...], ...]:
        groups: dict[int, list[int]] = {}
        for m in all_masks(self.k):
            groups.setdefault(self.find(m), []).append(m)
        return tuple(sorted(tuple(sorted(g)) for g in groups.values()))

    def small_profile(self):
        """Per-variable triples (x_i=a+b count, a=x_i+b count,
        x_i+a=b+c count) over the current partition of masks of size
        <= 2 (0-based variable index)."""
        k = self.k
        shape1 = [0] * k
        shape2 = [0] * k
        shape3 = [0] * k
        groups: dict[int, tuple[list[int], list[int]]] = {}
        for m in all_masks(k):
            sz = mask_size(m)
            if sz > 2:
                continue
            g = groups.setdefault(self.find(m), ([], []))
            g[sz - 1].append(m)
        for singles, twos in groups.values():
            ns, nt = len(singles), len(twos)
            if nt and ns:
                for m in twos:
                    for i in range(k):
                        if m >> i & 1:
                            shape2[i] += ns
            if nt:
                for m in singles:
                    shape1[m.bit_length() - 1] += nt
            if nt >= 2:
                for i in range(k):
                    ci = sum(1 for m in twos if m >> i & 1)
                    shape3[i] += ci * (nt - ci)
        return [(shape1[i], shape2[i], shape3[i]) for i in range(k)]


def initial_state(k: int, use_memo: bool = True) -> RelationState:
    return RelationState(k, use_memo)


def extend(state: RelationState, pair: tuple[int, int], decision: str):
    """Functional one-pair extension: returns a new RelationState, or DEAD.

    Equal inserts the pair form and merges; Unequal records the residue.
    Deciding Equal on a pair whose form already makes the state
    inconsistent, or Unequal on a pair whose form is contained, yields
    DEAD.
    """
    a, b = pair
    st = state.copy()
    ra, rb = st.find(a), st.find(b)
    if ra == rb:
        return st if decision == EQUAL else DEAD
    g = st.canon_form(ra, rb)
    residue = st.lattice.reduce(g)
    if decision == EQUAL:
        if residue == st.zero:
            st.merge(ra, rb)
            return st
        newlat, newres, dead = st.try_insert(g)
        if dead:
            return DEAD
        st.apply_equal(ra, rb, newlat, newres)
        return st
    if residue == st.zero:
        return DEAD
    st.add_inequation(g, residue, memoize=True)
    return st


def anti_clique_bound(state: RelationState, ell_max: int | None = None) -> int:
    """Greedy lower bound on the class count of every consistent
    completion: masks are tried singletons first, then 2-subsets, then the
    rest; a mask joins the anti-clique iff merging it with every current
    member is provably inconsistent.  Stops early once the bound exceeds
    ell_max."""
    chosen: list[int] = []
    chosen_set: set[int] = set()
    for mask in anti_clique_order(state.k):
        r = state.find(mask)
        if r in chosen_set:
            continue
        ok = True
        for r2 in chosen:
            g = state.canon_form(r, r2)
            if state.use_memo and g in state.memo_dead:
                continue
            if state.lattice.reduce(g) == state.zero:
                ok = False
                break
            if not state.inconsistent_to_add(g):
                ok = False
                break
        if ok:
            chosen.append(r)
            chosen_set.add(r)
            if ell_max is not None and len(chosen) > ell_max:
                break
    return len(chosen)


def symmetry_admissible(state: RelationState) -> bool:
    """Conservative canonicity test: false only when no completion can
    make the per-variable profile weakly increasing.

    Lower bounds come from the current partition; upper bounds add the
    contribution of every small pair that could still merge (merge not
    provably inconsistent).
    """
    k = state.k
    lower = state.small_profile()
    upper = [list(t) for t in lower]
    singles = [m for m in all_masks(k) if mask_size(m) == 1]
    twos = [m for m in all_masks(k) if mask_size(m) == 2]

    def could_merge(a, b):
        ra, rb = state.find(a), state.find(b)
        if ra == rb:
            return False  # already merged, counted in lower
        g = state.canon_form(ra, rb)
        if state.lattice.reduce(g) == state.zero:
            return True
        return not state.inconsistent_to_add(g)

    for s in singles:
        i = s.bit_length() - 1
        for d in twos:
            if d >> i & 1:
                continue
            if could_merge(s, d):
                upper[i][0] += 1
                for j in range(k):
                    if d >> j & 1:
                        upper[j][1] += 1
    for d1, d2 in combinations(twos, 2):
        if d1 & d2 == 0 or mask_size(d1 & d2) == 1:
            if could_merge(d1, d2):
                for j in range(k):
                    if (d1 | d2) >> j & 1 and not (d1 & d2) >> j & 1:
                        upper[j][2] += 1
    lo = [tuple(t) for t in lower]
    up = [tuple(t) for t in upper]
    for i in range(k):
        for j in range(i + 1, k):
            if lo[i] > up[j]:
                return False
    return True


def dedupe(examples) -> list[AlmostExample]:
    """One representative per orbit under variable permutation: the
    lexicographically minimal image of the class partition."""
    out: dict[tuple, AlmostExample] = {}
    by_k: dict[int, list] = {}
    for ex in examples:
        by_k.setdefault(ex.k, []).append(ex)
    for k, exs in by_k.items():
        tables = _perm_tables(k)
        for ex in exs:
            canon = _canonical_partition(ex.classes, tables)
            out.setdefault((k, canon), AlmostExample(k, canon))
    return sorted(out.values())


_PERM_TABLE_CACHE: dict[int, list[list[int]]] = {}


def _perm_tables(k: int) -> list[list[int]]:
    tables = _PERM_TABLE_CACHE.get(k)
    if tables is None:
        tables = []
        for perm in permutations(range(k)):
            table = [0] * (1 << k)
            for m in range(1, 1 << k):
                im = 0
                for i in range(k):
                    if m >> i & 1:
                        im |= 1 << perm[i]
                table[m] = im
            tables.append(table)
        _PERM_TABLE_CACHE[k] = tables
    return tables


def _canonical_partition(classes, tables) -> tuple[tuple[int, ...], ...]:
    best = None
    for table in tables:
        image = tuple(sorted(tuple(sorted(table[m] for m in cls))
                             for cls in classes))
        if best is None or image < best:
            best = image
    return best


class Engine:
    """Depth-first search over the pair decision order with pruning,
    sharding and checkpoint support."""

    def __init__(self, cfg: SearchConfig):
        if not 1 <= cfg.k <= 16:
            raise ValueError("k out of supported range")
        self.cfg = cfg
        self.k = cfg.k
        self.ell_max = cfg.resolved_ell_max()
        self.pairs, self.n1, self.n2 = build_pairs(self.k)
        self.N = len(self.pairs)
        self.ac_order = anti_clique_order(self.k)
        self._small_masks = [m for m in all_masks(self.k)
                             if mask_size(m) <= 2]
        self._profile_cache: dict[tuple, list] = {}
        self._build_suffix_bounds()
        self.st = RelationState(self.k, use_memo=cfg.use_memo)
        self.results: set[tuple[tuple[int, ...], ...]] = set()
        # sharding / replay
        self.prefix: str | None = None
        self.prefix_pos = 0
        self.shard_depth: int | None = None
        self.shard_sink: list[str] | None = None
        self.path: list[str] = []

    def _build_suffix_bounds(self):
        k = self.k
        n1, n2 = self.n1, self.n2
        suf1 = [[0] * k for _ in range(n1 + 1)]
        suf2 = [[0] * k for _ in range(n1 + 1)]
        for idx in range(n1 - 1, -1, -1):
            a, b = self.pairs[idx]
            s, d = (a, b) if mask_size(a) == 1 else (b, a)
            for i in range(k):
                suf1[idx][i] = suf1[idx + 1][i] + (1 if s >> i & 1 else 0)
                suf2[idx][i] = suf2[idx + 1][i] + (1 if d >> i & 1 else 0)
        m2 = n2 - n1
        suf3 = [[0] * k for _ in range(m2 + 1)]
        for loc in range(m2 - 1, -1, -1):
            a, b = self.pairs[self.n1 + loc]
            u = a | b
            for i in range(k):
                suf3[loc][i] = suf3[loc + 1][i] + (1 if u >> i & 1 else 0)
        self.suf1, self.suf2, self.suf3 = suf1, suf2, suf3

    # pruning -----------------------------------------------------------

    def _symmetry_prune(self, idx: int) -> bool:
        """True when no completion from here has a weakly increasing
        profile.  Valid (and only called) while idx <= n2."""
        k = self.k
        st = self.st
        sig = tuple(map(st.find, self._small_masks))
        lower = self._profile_cache.get(sig)
        if lower is None:
            lower = st.small_profile()
            self._profile_cache[sig] = lower
        if idx >= self.n2:
            up = lower
        elif idx >= self.n1:
            loc = idx - self.n1
            up = [(lower[i][0], lower[i][1], lower[i][2] + self.suf3[loc][i])
                  for i in range(k)]
        else:
            s3 = self.suf3[0]
            up = [(lower[i][0] + self.suf1[idx][i],
                   lower[i][1] + self.suf2[idx][i],
                   lower[i][2] + s3[i]) for i in range(k)]
        for i in range(k):
            li = lower[i]
            for j in range(i + 1, k):
                if li > up[j]:
                    return True
        return False

    def _anti_clique_prune(self, memo_log: list) -> bool:
        st = self.st
        find = st.find
        form_cache = st._form_cache
        memo_dead = st.memo_dead if st.use_memo else ()
        lattice = st.lattice
        zero = st.zero
        k = st.k
        chosen: list[int] = []
        chosen_set: set[int] = set()
        for mask in self.ac_order:
            r = find(mask)
            if r in chosen_set:
                continue
            ok = True
            for r2 in chosen:
                key = (r, r2) if r < r2 else (r2, r)
                g = form_cache.get(key)
                if g is None:
                    g = normalize_sign(pair_form(key[0], key[1], k))
                    form_cache[key] = g
                if g in memo_dead:
                    continue
                if lattice.reduce_cached(g) == zero:
                    ok = False
                    break
                if not st.inconsistent_to_add(g, memo_log):
                    ok = False
                    break
            if ok:
                chosen.append(r)
                chosen_set.add(r)
                if len(chosen) > self.ell_max:
                    return True
        return False

    # recursion ---------------------------------------------------------

    def run(self, prefix: str | None = None, shard_depth: int | None = None,
            shard_sink: list[str] | None = None):
        self.prefix = prefix or ""
        self.prefix_pos = 0
        self.shard_depth = shard_depth
        self.shard_sink = shard_sink
        self.path = []
        self._rec(0, 0, 0)
        if prefix and self.prefix_pos < len(self.prefix):
            raise CheckpointMismatch("shard prefix longer than search path")

    def _rec(self, idx: int, depth: int, since_ac: int):
        cfg = self.cfg
        st = self.st
        pairs = self.pairs
        undo = []
        memo_log: list[Form] = []
        try:
            while idx < self.N:
                a, b = pairs[idx]
                ra, rb = st.find(a), st.find(b)
                if ra == rb:
                    idx += 1
                    continue
                g = st.canon_form(ra, rb)
                residue = st.lattice.reduce_cached(g)
                decided = False
                if residue == st.zero:
                    undo.append(st.merge(ra, rb))
                    idx += 1
                    decided = True
                elif st.use_memo and g in st.memo_dead:
                    undo.append(st.add_inequation(g, residue, memoize=False))
                    idx += 1
                    decided = True
                else:
                    newlat, newres, dead = st.try_insert(g)
                    if dead:
                        undo.append(st.add_inequation(g, residue,
                                                      memoize=True))
                        idx += 1
                        decided = True
                if decided:
                    since_ac += 1
                    if cfg.use_symmetry and idx <= self.n2:
                        if self._symmetry_prune(idx):
                            return
                    if cfg.use_anticlique and since_ac >= self._ac_period(idx):
                        since_ac = 0
                        if self._anti_clique_prune(memo_log):
                            return
                    continue
                # genuine branch point
                if (self.shard_depth is not None
                        and depth == self.shard_depth
                        and self.prefix_pos >= len(self.prefix)):
                    base = "".join(self.path)
                    self.shard_sink.append(base + EQUAL)
                    self.shard_sink.append(base + UNEQUAL)
                    return
                if self.prefix_pos < len(self.prefix):
                    branches = self.prefix[self.prefix_pos]
                    self.prefix_pos += 1
                else:
                    branches = EQUAL + UNEQUAL
                for decision in branches:
                    if decision == EQUAL:
                        u = st.apply_equal(ra, rb, newlat, newres)
                    else:
                        u = st.add_inequation(g, residue, memoize=True)
                    self.path.append(decision)
                    prune = False
                    if cfg.use_symmetry and idx + 1 <= self.n2:
                        prune = self._symmetry_prune(idx + 1)
                    # memo entries learned below the applied decision are
                    # conditional on it; release them before undoing
                    sub_log: list[Form] = []
                    if not prune and cfg.use_anticlique:
                        prune = self._anti_clique_prune(sub_log)
                    if not prune:
                        self._rec(idx + 1, depth + 1, 0)
                    for key in sub_log:
                        st.memo_dead.discard(key)
                    self.path.pop()
                    u()
                return
            # leaf: every pair decided
            if st.num_classes <= self.ell_max:
                self.results.add(st.partition())
        finally:
            for op in reversed(undo):
                op()
            for key in memo_log:
                st.memo_dead.discard(key)

    def _ac_period(self, idx: int) -> int:
        if idx < self.n1:
            return self.cfg.anticlique_period_early
        return self.cfg.anticlique_period_late


def _run_shard(cfg: SearchConfig, prefix: str):
    lattice.clear_caches()  # bound memory across shards
    eng = Engine(cfg)
    eng.run(prefix=prefix)
    return prefix, sorted(eng.results)


def _pool_shard(args):
    return _run_shard(*args)


def collect_shards(cfg: SearchConfig) -> tuple[list[str], set]:
    """Phase 1: explore to shard_depth branch decisions; returns pending
    shard prefixes plus results from subtrees shallower than that."""
    eng = Engine(cfg)
    sink: list[str] = []
    eng.run(shard_depth=cfg.shard_depth, shard_sink=sink)
    return sink, eng.results


def _checkpoint_header(cfg: SearchConfig) -> dict:
    return {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "k": cfg.k,
        "ell_max": cfg.resolved_ell_max(),
        "shard_depth": cfg.shard_depth,
        "use_symmetry": cfg.use_symmetry,
        "use_anticlique": cfg.use_anticlique,
        "use_memo": cfg.use_memo,
    }


def read_checkpoint(path, cfg: SearchConfig):
    """Completed shard prefixes and their recorded partitions."""
    done: dict[str, list] = {}
    with open(path) as fh:
        header = json.loads(fh.readline())
        expect = _checkpoint_header(cfg)
        for key, val in expect.items():
            if header.get(key) != val:
                raise CheckpointMismatch(
                    "checkpoint %s=%r does not match requested %r"
                    % (key, header.get(key), val))
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if rec.get("type") == "shard":
                done[rec["prefix"]] = [
                    tuple(tuple(c) for c in classes)
                    for classes in rec["classes"]]
    return done


def enumerate_relations(cfg: SearchConfig, checkpoint_path=None,
                        resume_path=None) -> list[AlmostExample]:
    """All almost-examples for cfg, deduplicated up to permutation and
    sorted canonically.  With checkpointing or multiple workers the tree
    is split into shard tasks by decision prefix; completed shards are
    appended to the checkpoint file so an interrupted run can resume."""
    simple = (cfg.workers <= 1 and checkpoint_path is None
              and resume_path is None)
    if simple:
        eng = Engine(cfg)
        eng.run()
        raw = eng.results
    else:
        shards, raw = collect_shards(cfg)
        raw = set(raw)
        done: dict[str, list] = {}
        if resume_path is not None:
            done = read_checkpoint(resume_path, cfg)
            for classes in done.values():
                raw.update(tuple(c) for c in classes)
        pending = [p for p in shards if p not in done]
        out_fh = None
        if checkpoint_path is not None:
            mode = "a" if (resume_path is not None
                           and str(resume_path) == str(checkpoint_path)) else "w"
            out_fh = open(checkpoint_path, mode)
            if mode == "w":
                out_fh.write(json.dumps(_checkpoint_header(cfg)) + "\n")
                for prefix, classes in done.items():
                    out_fh.write(json.dumps(
                        {"type": "shard", "prefix": prefix,
                         "classes": [list(map(list, c)) for c in classes]})
                        + "\n")
                out_fh.flush()
        try:
            if cfg.workers > 1 and pending:
                import multiprocessing as mp
                with mp.Pool(cfg.workers) as pool:
                    for prefix, classes in pool.imap_unordered(
                            _pool_shard, [(cfg, p) for p in pending]):
                        raw.update(classes)
                        _write_shard(out_fh, prefix, classes)
            else:
                for prefix in pending:
                    _, classes = _run_shard(cfg, prefix)
                    raw.update(classes)
                    _write_shard(out_fh, prefix, classes)
        except KeyboardInterrupt:
            if out_fh is not None:
                out_fh.close()
                raise Interrupted(checkpoint_path) from None
            raise
        finally:
            if out_fh is not None and not out_fh.closed:
                out_fh.close()
    examples = [AlmostExample(cfg.k, classes) for classes in raw]
    return dedupe(examples)


def _write_shard(fh, prefix, classes):
    if fh is None:
        return
    fh.write(json.dumps({"type": "shard", "prefix": prefix,
                         "classes": [list(map(list, c)) for c in classes]})
             + "\n")
    fh.flush()


def audit_example(ex: AlmostExample) -> bool:
    """From-scratch consistency check: rebuild the lattice from the Equal
    pairs of the partition and verify no inequation form is contained."""
    k = ex.k
    lat = IntLattice(k)
    for cls in ex.classes:
        anchor = cls[0]
        for m in cls[1:]:
            lat = lat.insert(pair_form(anchor, m, k))
    for f in base_inequations(k):
        if lat.contains(f):
            return False
    reps = [cls[0] for cls in ex.classes]
    for a, b in combinations(reps, 2):
        if lat.contains(pair_form(a, b, k)):
            return False
    return True
