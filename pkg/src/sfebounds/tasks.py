"""Finite secure-function-evaluation tasks and black-box cheating baselines.

A task is a total function f : X x Y -> B between finite index sets, with
both inputs uniform and independent.  Tasks are either explicit tables or
members of one of six parametric families (oblivious-transfer variants,
equality, inner product, millionaire comparison) with closed-form
baselines.  Tables are materialized only up to MATERIALIZE_CAP cells so
that huge parametric instances stay usable through their formulas.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Optional, Union

MATERIALIZE_CAP = 10**6  # tables are built only when x_size * y_size fits

FAMILY_TAGS = ("ot", "knot", "xot", "eq", "ip", "mp")


class TaskError(ValueError):
    """Malformed task, family parameters, or query."""


@dataclass(frozen=True)
class FamilySpec:
    """Parametric family descriptor: a tag from FAMILY_TAGS plus int params."""

    family: str
    params: dict

    def __post_init__(self):
        if self.family not in FAMILY_TAGS:
            raise TaskError(f"unknown family tag {self.family!r}")


@dataclass(frozen=True)
class SfeTask:
    """A finite SFE instance with uniform, independent inputs.

    ``table[x][y]`` holds the output index f(x, y) when materialized.
    Instances above the materialization cap carry only ``family`` and
    answer pointwise/closed-form queries.  Tasks are immutable; every
    operation on them is pure.
    """

    name: str
    x_size: int
    y_size: int
    b_size: int
    table: Optional[tuple[tuple[int, ...], ...]] = None
    family: Optional[FamilySpec] = None

    @property
    def materialized(self) -> bool:
        return self.table is not None

    def f(self, x: int, y: int) -> int:
        """Output index f(x, y), from the table or the family formula."""
        if not (0 <= x < self.x_size and 0 <= y < self.y_size):
            raise TaskError(f"input pair ({x}, {y}) out of range")
        if self.table is not None:
            return self.table[x][y]
        if self.family is not None:
            return family_value(self.family, x, y)
        raise TaskError("task has neither a table nor family parameters")


def answer_vector(task: SfeTask, x: int) -> tuple[int, ...]:
    """The full answer tuple (f(x, y) for every y) that a fully cheating
    receiver must produce for input row x."""
    if task.table is None:
        raise TaskError("answer vectors require a materialized table")
    if not 0 <= x < task.x_size:
        raise TaskError(f"x index {x} out of range")
    return task.table[x]


# ---------------------------------------------------------------------------
# family formulas
#
# Index conventions (fixed so tables, files, and formulas agree):
#   ot   : x encodes (x_1..x_n) over alphabet W base-|W| big-endian;
#          y in {0..n-1} selects component y; f = component.
#   knot : y enumerates k-subsets of {0..n-1} in lexicographic order;
#          f packs the selected components (ascending position) base-|W|.
#   xot  : x = x1 * 2^n + x2 for n-bit strings x1, x2; y in {0: first,
#          1: second, 2: bitwise xor}; f is the selected n-bit string.
#   eq   : X = Y = {0..n-1}; f = 1 iff x == y.
#   ip   : x an n-bit string; y in {0..2^n-2} stands for the nonzero
#          string y+1; f = parity of bitwise AND.
#   mp   : x in {0..n-1} for wealth x+1; y in {0..n-2} for wealth y+1;
#          f = 1 iff y >= x (holder of y learns who is richer).
# ---------------------------------------------------------------------------


def _subset_by_rank(rank: int, n: int, k: int) -> tuple[int, ...]:
    """Lexicographic unranking of k-subsets of range(n)."""
    out = []
    c = 0
    while k > 0:
        block = comb(n - 1 - c, k - 1)
        if rank < block:
            out.append(c)
            k -= 1
        else:
            rank -= block
        c += 1
    return tuple(out)


def family_value(spec: FamilySpec, x: int, y: int) -> int:
    """Closed-form f(x, y) for a parametric family, no table needed."""
    p = spec.params
    tag = spec.family
    if tag == "ot":
        w, n = p["alphabet"], p["n"]
        return (x // w ** (n - 1 - y)) % w
    if tag == "knot":
        w, n, k = p["alphabet"], p["n"], p["k"]
        subset = _subset_by_rank(y, n, k)
        b = 0
        for i in subset:
            b = b * w + (x // w ** (n - 1 - i)) % w
        return b
    if tag == "xot":
        n = p["n"]
        mask = (1 << n) - 1
        x1, x2 = x >> n, x & mask
        return (x1, x2, x1 ^ x2)[y]
    if tag == "eq":
        return int(x == y)
    if tag == "ip":
        return ((x & (y + 1)).bit_count()) % 2
    if tag == "mp":
        return int(y >= x)
    raise TaskError(f"unknown family tag {tag!r}")


def _family_sizes(spec: FamilySpec) -> tuple[int, int, int]:
    p = spec.params
    tag = spec.family
    if tag == "ot":
        return p["alphabet"] ** p["n"], p["n"], p["alphabet"]
    if tag == "knot":
        w, n, k = p["alphabet"], p["n"], p["k"]
        return w**n, comb(n, k), w**k
    if tag == "xot":
        n = p["n"]
        return 4**n, 3, 2**n
    if tag == "eq":
        return p["n"], p["n"], 2
    if tag == "ip":
        n = p["n"]
        return 2**n, 2**n - 1, 2
    if tag == "mp":
        n = p["n"]
        return n, n - 1, 2
    raise TaskError(f"unknown family tag {tag!r}")


def _family_name(spec: FamilySpec) -> str:
    p = spec.params
    return {
        "ot": lambda: f"1-of-{p['n']} OT (alphabet {p['alphabet']})",
        "knot": lambda: f"{p['k']}-of-{p['n']} OT (alphabet {p['alphabet']})",
        "xot": lambda: f"XOR OT ({p['n']}-bit strings)",
        "eq": lambda: f"equality (n={p['n']})",
        "ip": lambda: f"inner product (n={p['n']})",
        "mp": lambda: f"millionaire (n={p['n']})",
    }[spec.family]()


_FAMILY_PARAM_KEYS = {
    "ot": ("alphabet", "n"),
    "knot": ("alphabet", "n", "k"),
    "xot": ("n",),
    "eq": ("n",),
    "ip": ("n",),
    "mp": ("n",),
}


def make_family(family: str, **params: int) -> SfeTask:
    """Construct a parametric task, materializing its table when it fits.

    Raises TaskError on invalid parameter combinations (non-positive
    values, k >= n for k-of-n OT, n < 2 for equality or millionaire).
    """
    if family not in FAMILY_TAGS:
        raise TaskError(f"unknown family tag {family!r}")
    expected = _FAMILY_PARAM_KEYS[family]
    if set(params) != set(expected):
        raise TaskError(f"family {family!r} takes parameters {expected}, got {tuple(params)}")
    for key, value in params.items():
        if not isinstance(value, int) or value < 1:
            raise TaskError(f"parameter {key}={value!r} must be a positive integer")
    if family == "knot" and params["k"] >= params["n"]:
        raise TaskError("k-of-n OT requires k < n")
    if family in ("eq", "mp") and params["n"] < 2:
        raise TaskError(f"family {family!r} requires n >= 2")

    spec = FamilySpec(family, dict(params))
    x_size, y_size, b_size = _family_sizes(spec)
    table = None
    if x_size * y_size <= MATERIALIZE_CAP:
        table = tuple(
            tuple(family_value(spec, x, y) for y in range(y_size)) for x in range(x_size)
        )
    return SfeTask(
        name=_family_name(spec),
        x_size=x_size,
        y_size=y_size,
        b_size=b_size,
        table=table,
        family=spec,
    )


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate_task(task: SfeTask) -> list[str]:
    """Check totality, index ranges, and family/table agreement.

    Returns a list of human-readable violations; empty means valid.
    Reports rather than raises so callers can surface every problem.
    """
    violations: list[str] = []
    if task.x_size < 1 or task.y_size < 1 or task.b_size < 1:
        violations.append("sizes must all be positive")
        return violations
    if task.table is None and task.family is None:
        violations.append("task has neither a table nor family parameters")
        return violations

    if task.table is not None:
        if len(task.table) != task.x_size:
            violations.append(
                f"table has {len(task.table)} rows, expected x_size={task.x_size}"
            )
        for x, row in enumerate(task.table):
            if len(row) != task.y_size:
                violations.append(f"table not total at x={x}: row length {len(row)}")
                continue
            for y, b in enumerate(row):
                if b is None:
                    violations.append(f"table not total at ({x}, {y})")
                elif not isinstance(b, int) or not 0 <= b < task.b_size:
                    violations.append(f"entry {b!r} at ({x}, {y}) outside [0, {task.b_size})")

    if task.family is not None:
        try:
            sizes = _family_sizes(task.family)
        except (KeyError, TaskError) as exc:
            violations.append(f"bad family descriptor: {exc}")
            return violations
        if sizes != (task.x_size, task.y_size, task.b_size):
            violations.append(
                f"family implies sizes {sizes}, task declares "
                f"({task.x_size}, {task.y_size}, {task.b_size})"
            )
        elif task.table is not None and not violations:
            for x in range(task.x_size):
                for y in range(task.y_size):
                    expected = family_value(task.family, x, y)
                    if task.table[x][y] != expected:
                        violations.append(
                            f"family/table mismatch at ({x}, {y}): "
                            f"table {task.table[x][y]}, formula {expected}"
                        )
    return violations


# ---------------------------------------------------------------------------
# black-box baselines
# ---------------------------------------------------------------------------


def a_rand(task: SfeTask) -> Fraction:
    """Blind-guess success of the input holder with no output: 1/|Y|."""
    if task.y_size < 1:
        raise TaskError("y_size must be positive")
    return Fraction(1, task.y_size)


def b_rand_bruteforce(task: SfeTask) -> Fraction:
    """Exact best single-query success at guessing the full answer tuple.

    The receiver picks the best query y*, observes b = f(x, y*), and
    outputs the most frequent answer tuple among inputs consistent with
    the observation.  Exhaustive over y*, exact over the uniform prior.
    """
    if task.table is None:
        raise TaskError("brute-force baseline requires a materialized table")
    row_ids: dict[tuple[int, ...], int] = {}
    ids = []
    for row in task.table:
        ids.append(row_ids.setdefault(row, len(row_ids)))
    best = 0
    for ystar in range(task.y_size):
        counts: dict[tuple[int, int], int] = defaultdict(int)
        for x in range(task.x_size):
            counts[(task.table[x][ystar], ids[x])] += 1
        modal: dict[int, int] = defaultdict(int)
        for (b, _), cnt in counts.items():
            if cnt > modal[b]:
                modal[b] = cnt
        best = max(best, sum(modal.values()))
    return Fraction(best, task.x_size)


def b_rand_closed_form(task: SfeTask) -> Fraction:
    """Per-family closed form of the single-query baseline."""
    if task.family is None:
        raise TaskError("closed-form baseline requires family parameters")
    p = task.family.params
    tag = task.family.family
    if tag == "ot":
        return Fraction(1, p["alphabet"] ** (p["n"] - 1))
    if tag == "knot":
        return Fraction(1, p["alphabet"] ** (p["n"] - p["k"]))
    if tag == "xot":
        return Fraction(1, 2 ** p["n"])
    if tag == "eq":
        return Fraction(2, p["n"])
    if tag == "ip":
        return Fraction(2, 2 ** p["n"])
    if tag == "mp":
        return Fraction(2, p["n"])
    raise TaskError(f"unknown family tag {tag!r}")


def b_rand(task: SfeTask) -> Fraction:
    """Best available baseline: closed form when parametric, else brute force."""
    if task.family is not None:
        return b_rand_closed_form(task)
    return b_rand_bruteforce(task)


# ---------------------------------------------------------------------------
# JSON task files
#
# Explicit form:  {"name": str, "x_size": int, "y_size": int, "b_size": int,
#                  "table": [[int, ...], ...]}      (table[x][y] = f(x, y))
# Family form:    {"family": tag, "params": {...}}
# ---------------------------------------------------------------------------


def task_to_jsonable(task: SfeTask) -> dict:
    if task.family is not None:
        return {"family": task.family.family, "params": dict(task.family.params)}
    if task.table is None:
        raise TaskError("cannot serialize a task with neither table nor family")
    return {
        "name": task.name,
        "x_size": task.x_size,
        "y_size": task.y_size,
        "b_size": task.b_size,
        "table": [list(row) for row in task.table],
    }


def task_from_jsonable(obj: dict) -> SfeTask:
    if not isinstance(obj, dict):
        raise TaskError("task document must be a JSON object")
    if "family" in obj:
        params = obj.get("params")
        if not isinstance(params, dict):
            raise TaskError("family task needs a 'params' object")
        return make_family(obj["family"], **params)
    try:
        name = obj["name"]
        x_size, y_size, b_size = obj["x_size"], obj["y_size"], obj["b_size"]
        table = tuple(tuple(row) for row in obj["table"])
    except (KeyError, TypeError) as exc:
        raise TaskError(f"malformed task document: {exc}") from exc
    return SfeTask(name=name, x_size=x_size, y_size=y_size, b_size=b_size, table=table)


def load_task(path: Union[str, Path]) -> SfeTask:
    with open(path, encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise TaskError(f"invalid JSON in {path}: {exc}") from exc
    return task_from_jsonable(obj)


def dump_task(task: SfeTask, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(task_to_jsonable(task), handle, sort_keys=True)
        handle.write("\n")
