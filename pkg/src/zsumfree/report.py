"""Results table: join certified families with oracle sweeps.

A table row is (divisibility condition d | n, smallest verified n, value,
example).  Rows are grouped by (family modulus, class count), dominated
rows (a row with d' | d and value' <= value exists) are dropped, and the
n column is filled from a brute-force sweep: the smallest multiple of d at
which the value is attained exactly.  The n column is observed, not
proved; the sweep bound is reported alongside.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict

from . import oracle
from .pipeline import CertifiedFamily

RECORD_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class TableRow:
    k: int
    divisor: int  # condition d | n; 1 means no condition
    n_min_observed: int
    value: int
    example_n: int
    example_elements: tuple[int, ...]
    family_id: str
    almost_example_id: str
    is_min: bool = False  # marks the f(k) row(s)


def _dominated(d: int, ell: int, candidates) -> bool:
    for d2, ell2 in candidates:
        if (d2, ell2) != (d, ell) and d % d2 == 0 and ell2 <= ell:
            return True
    return False


def build_table(k: int, families: list[CertifiedFamily],
                sweep_limit: int = 40, workers: int = 1) -> list[TableRow]:
    """Table rows for k from certified families.

    An empty family list yields an empty table for k >= 2 (upstream
    failure); for k = 1 the trivial single row is still emitted by the
    caller running the full pipeline, which does produce a family.
    """
    if not families:
        return []
    # group by (divisor, ell); keep the family with the smallest witness
    groups: dict[tuple[int, int], CertifiedFamily] = {}
    for cf in families:
        key = (cf.divisor, cf.ell)
        cur = groups.get(key)
        if cur is None or (cf.witness_n, cf.witness) < (cur.witness_n,
                                                        cur.witness):
            groups[key] = cf
    keys = [key for key in groups
            if not _dominated(key[0], key[1], groups.keys())]
    sweep = _sweep_cache(k, sweep_limit, workers)
    rows = []
    ex_ids = _example_ids(families)
    fam_ids = _family_ids(families)
    for d, ell in sorted(keys, key=lambda key: (key[1], key[0])):
        cf = groups[(d, ell)]
        n_min = None
        for n in range(d, sweep_limit + 1, d):
            if sweep.get(n) == ell:
                n_min = n
                break
        if n_min is None:
            continue  # never attained in the sweep; always beaten
        rows.append(TableRow(
            k=k, divisor=d, n_min_observed=n_min, value=ell,
            example_n=cf.witness_n, example_elements=cf.witness,
            family_id=fam_ids[id(cf)], almost_example_id=ex_ids[id(cf)]))
    if not rows:
        return []
    fk = min(r.value for r in rows)
    return [TableRow(**{**asdict(r), "is_min": r.value == fk,
                        "example_elements": tuple(r.example_elements)})
            for r in rows]


def _example_ids(families):
    examples = []
    for cf in families:
        if cf.example not in examples:
            examples.append(cf.example)
    examples.sort()
    out = {}
    for cf in families:
        out[id(cf)] = "k%d-ae%02d" % (cf.example.k,
                                      examples.index(cf.example))
    return out


def _family_ids(families):
    out = {}
    counter: dict[object, int] = {}
    ex_ids = _example_ids(families)
    for cf in families:
        base = ex_ids[id(cf)]
        counter[base] = counter.get(base, 0) + 1
        out[id(cf)] = "%s-f%02d" % (base, counter[base] - 1)
    return out


_SWEEPS: dict[tuple[int, int], dict[int, float]] = {}


def _sweep_cache(k: int, limit: int, workers: int = 1) -> dict[int, float]:
    key = (k, limit)
    if key not in _SWEEPS:
        _SWEEPS[key] = {n: oracle.brute_force_f(n, k, workers=workers)[0]
                        for n in range(2, limit + 1)}
    return _SWEEPS[key]


def min_f(k: int, rows: list[TableRow]) -> int:
    """f(k) = min over all n of f_n(k): the minimal row value."""
    if not rows:
        raise ValueError("no rows for k=%d" % k)
    return min(r.value for r in rows)


def predicted_value(rows: list[TableRow], n: int) -> float:
    """Table prediction for f_n(k): the best applicable row, infinity when
    no row applies."""
    best = oracle.INFINITE
    for r in rows:
        if n % r.divisor == 0 and n >= r.n_min_observed:
            best = min(best, r.value)
    return best


def format_text(rows: list[TableRow]) -> str:
    if not rows:
        return "(no rows)\n"
    header = f"k={rows[0].k}"
    lines = [header,
             "cond    n>=   f_n(k)  example"]
    for r in rows:
        cond = "%d|n" % r.divisor if r.divisor > 1 else "-"
        val = "*%d" % r.value if r.is_min else " %d" % r.value
        ex = "{%s} in Z_%d" % (",".join(map(str, r.example_elements)),
                               r.example_n)
        lines.append("%-7s %-5d %-7s %s" % (cond, r.n_min_observed, val, ex))
    lines.append("(* marks f(k); n>= column observed from the sweep)")
    return "\n".join(lines) + "\n"


def format_records(rows: list[TableRow]) -> str:
    out = []
    for r in rows:
        rec = asdict(r)
        rec["example_elements"] = list(r.example_elements)
        rec["schema_version"] = RECORD_SCHEMA_VERSION
        out.append(json.dumps(rec, sort_keys=True))
    return "\n".join(out) + ("\n" if out else "")
