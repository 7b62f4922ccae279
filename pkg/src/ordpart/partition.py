"""Finite polarised partition relations.

A query ``(R / C) -> (r_0 r_1 ... / s_0 s_1 ...)`` holds when every colouring of
an ``R x C`` grid with ``len(targets)`` colours contains, for some colour ``k``,
``r_k`` rows and ``s_k`` columns whose rectangle is entirely coloured ``k``.
Everything here is about finite grids; infinite relations are never decided.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

__all__ = [
    "Coloring", "RelationQuery", "RectangleWitness", "RelationResult", "BudgetExceeded",
    "WitnessError", "DEFAULT_BUDGET", "verify_witness", "find_homogeneous", "holds",
    "pigeonhole_bound", "parse_targets", "thread_cap",
]

DEFAULT_BUDGET = 2 ** 25


class WitnessError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Raised when a search visits more nodes than allowed.

    ``partial`` describes how far the search got: nodes visited, the deepest
    row prefix reached (as row values) and the grid size.
    """

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class Coloring:
    rows: int
    cols: int
    colors: int
    table: np.ndarray = field(compare=False, repr=False)

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.int64).reshape(self.rows, self.cols)
        if self.colors < 1:
            raise ValueError("a colouring needs at least one colour")
        if table.size and (table.min() < 0 or table.max() >= self.colors):
            raise ValueError(f"colour values must lie in 0..{self.colors - 1}")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @classmethod
    def from_table(cls, table, colors: Optional[int] = None) -> "Coloring":
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2:
            raise ValueError("colouring table must be two-dimensional")
        if colors is None:
            colors = int(table.max()) + 1 if table.size else 1
        return cls(table.shape[0], table.shape[1], max(colors, 1), table)

    def __eq__(self, other):
        if not isinstance(other, Coloring):
            return NotImplemented
        return (self.rows, self.cols, self.colors) == (other.rows, other.cols, other.colors) \
            and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.rows, self.cols, self.colors, self.table.tobytes()))

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "colors": self.colors,
                "data": self.table.tolist()}

    @classmethod
    def from_json(cls, obj) -> "Coloring":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["rows"]), int(obj["cols"]), int(obj["colors"]), obj["data"])


@dataclass(frozen=True)
class RelationQuery:
    source_rows: int
    source_cols: int
    targets: tuple  # ((row_target, col_target), ...) one pair per colour

    def __post_init__(self):
        targets = tuple((int(r), int(c)) for r, c in self.targets)
        if not targets:
            raise ValueError("a query needs at least one colour")
        if self.source_rows < 0 or self.source_cols < 0 or any(r < 0 or c < 0 for r, c in targets):
            raise ValueError("sources and targets must be natural numbers")
        object.__setattr__(self, "targets", targets)

    @property
    def colors(self) -> int:
        return len(self.targets)

    @classmethod
    def uniform(cls, rows, cols, row_target, col_target, colors) -> "RelationQuery":
        return cls(rows, cols, ((row_target, col_target),) * colors)

    def to_json(self) -> dict:
        return {"rows": self.source_rows, "cols": self.source_cols,
                "targets": [[r for r, _ in self.targets], [c for _, c in self.targets]]}

    @classmethod
    def from_json(cls, obj) -> "RelationQuery":
        if isinstance(obj, str):
            obj = json.loads(obj)
        top, bottom = obj["targets"]
        if len(top) != len(bottom):
            raise ValueError("target matrix rows must have equal length")
        return cls(int(obj["rows"]), int(obj["cols"]), tuple(zip(top, bottom)))

    def __str__(self):
        top = " ".join(str(r) for r, _ in self.targets)
        bottom = " ".join(str(c) for _, c in self.targets)
        return f"({self.source_rows}/{self.source_cols}) -> ({top} / {bottom})"


def parse_targets(text: str, colors: Optional[int] = None) -> tuple:
    """Parse ``"1 2 / 2 1"`` into per-colour pairs.

    A single entry per line (``"2 / 2"``) is repeated for each of ``colors`` colours.
    """
    try:
        top, bottom = text.split("/")
        top, bottom = [int(x) for x in top.split()], [int(x) for x in bottom.split()]
    except ValueError:
        raise ValueError(f"targets must look like '1 2 / 2 1', got {text!r}") from None
    if len(top) != len(bottom) or not top:
        raise ValueError("both lines of the target matrix need the same number of entries")
    if len(top) == 1 and colors:
        top, bottom = top * colors, bottom * colors
    elif colors and len(top) != colors:
        raise ValueError(f"{len(top)} targets given for {colors} colours")
    return tuple(zip(top, bottom))


@dataclass(frozen=True)
class RectangleWitness:
    rows: tuple
    cols: tuple
    color: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(sorted(int(r) for r in self.rows)))
        object.__setattr__(self, "cols", tuple(sorted(int(c) for c in self.cols)))

    @property
    def shape(self):
        return len(self.rows), len(self.cols)

    def to_json(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols), "color": self.color}

    @classmethod
    def from_json(cls, obj) -> "RectangleWitness":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(tuple(obj["rows"]), tuple(obj["cols"]), int(obj["color"]))


@dataclass(frozen=True)
class RelationResult:
    holds: bool
    counterexample: Optional[Coloring]
    nodes: int


def verify_witness(c: Coloring, w: RectangleWitness, query: Optional[RelationQuery] = None) -> bool:
    """True iff the rectangle of ``w`` is monochromatic in ``w.color`` (and meets its target)."""
    if any(r < 0 or r >= c.rows for r in w.rows) or any(j < 0 or j >= c.cols for j in w.cols):
        raise WitnessError(f"witness indices out of bounds for a {c.rows}x{c.cols} colouring")
    if len(set(w.rows)) != len(w.rows) or len(set(w.cols)) != len(w.cols):
        raise WitnessError("witness rows and columns must be distinct")
    if query is not None:
        if not 0 <= w.color < query.colors:
            return False
        r, s = query.targets[w.color]
        if len(w.rows) < r or len(w.cols) < s:
            return False
    if not w.rows or not w.cols:
        return True
    block = c.table[np.ix_(list(w.rows), list(w.cols))]
    return bool(np.all(block == w.color))


def _row_masks(table: np.ndarray, color: int) -> list[int]:
    weights = 1 << np.arange(table.shape[1], dtype=object)
    return [int(np.sum(weights[row == color])) if table.shape[1] else 0 for row in table]


def _lowest_bits(mask: int, count: int) -> tuple:
    out = []
    j = 0
    while len(out) < count:
        if mask >> j & 1:
            out.append(j)
        j += 1
    return tuple(out)


def _search_colour(masks: list[int], r: int, s: int):
    """Lexicographically least r-set of rows whose common columns number at least s."""
    n = len(masks)
    full = (1 << max((m.bit_length() for m in masks), default=0)) - 1

    def dfs(start, chosen, common):
        if len(chosen) == r:
            return chosen, common
        for i in range(start, n - (r - len(chosen)) + 1):
            nxt = common & masks[i]
            if nxt.bit_count() >= s:
                found = dfs(i + 1, chosen + (i,), nxt)
                if found:
                    return found
        return None

    return dfs(0, (), full if masks else 0)


def find_homogeneous(c: Coloring, q: RelationQuery) -> Optional[RectangleWitness]:
    """A monochromatic rectangle meeting some colour's target, or None if there is none."""
    if (c.rows, c.cols) != (q.source_rows, q.source_cols):
        raise ValueError("colouring and query have different source sizes")
    if c.colors > q.colors:
        raise ValueError("colouring uses more colours than the query has targets")
    for kappa, (r, s) in enumerate(q.targets):
        if r > c.rows or s > c.cols:
            continue
        if r == 0 or s == 0:
            witness = RectangleWitness(tuple(range(r)), tuple(range(s)), kappa)
        else:
            masks = _row_masks(c.table, kappa)
            found = _search_colour(masks, r, s)
            if found is None:
                continue
            rows, common = found
            witness = RectangleWitness(rows, _lowest_bits(common, s), kappa)
        assert verify_witness(c, witness, q)
        return witness
    return None


def pigeonhole_bound(m: int, n: int, row_target: int) -> int:
    """Rows that guarantee ``(N / mn+1) -> (row_target / n+1)_m``.

    Every row has a colour on at least n+1 of its mn+1 cells, so it realises one of
    ``m * C(mn+1, n+1)`` colour/column patterns; with this many rows some pattern
    repeats ``row_target`` times.  Sufficient, not claimed optimal.
    """
    if m < 1 or n < 1 or row_target < 1:
        raise ValueError("m, n and row_target must be positive")
    return m * math.comb(m * n + 1, n + 1) * (row_target - 1) + 1


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("ORDPART_THREADS", "1")))
    except ValueError:
        return 1


# exhaustive search for a colouring without witness

def _digits(v, k, width):
    out = [0] * width
    for j in range(width - 1, -1, -1):
        v, out[j] = divmod(v, k)
    return tuple(out)


@lru_cache(maxsize=16)
def _row_values(k: int, width: int) -> tuple:
    """Every row of a k-colouring of ``width`` columns: (value, digits, masks, popcounts)."""
    out = []
    for v in range(k ** width):
        digits = _digits(v, k, width)
        masks = tuple(sum(1 << j for j, d in enumerate(digits) if d == kappa) for kappa in range(k))
        out.append((v, digits, masks, tuple(m.bit_count() for m in masks)))
    return tuple(out)


class _Search:
    """Backtracking over row values.

    Rows are taken in non-decreasing order (rows may be permuted freely) and the
    columns, read top to bottom, are kept lexicographically non-decreasing as well
    (columns may be permuted too).  Both orders can be imposed at once, so every
    colouring is equivalent to one the search visits.
    """

    def __init__(self, q: RelationQuery, budget: int):
        self.q = q
        self.R, self.C, self.k = q.source_rows, q.source_cols, q.colors
        self.budget = budget
        self.nodes = 0
        self.deepest = ()
        self.active = []  # (colour, r, s) for feasible colours with r >= 2
        self.trivial = False
        static_limits = []
        for kappa, (r, s) in enumerate(q.targets):
            if r > self.R or s > self.C:
                continue
            if r == 0 or s == 0:
                self.trivial = True
            elif r == 1:
                static_limits.append((kappa, s))
            else:
                self.active.append((kappa, r, s))
        self.values = [entry for entry in _row_values(self.k, self.C)
                       if all(entry[3][kappa] < s for kappa, s in static_limits)]

    def digits(self, v):
        return _digits(v, self.k, self.C)

    def run(self, first_choices=None):
        """Return the first witness-free colouring (as row values) or None."""
        if self.trivial:
            return None
        if self.R == 0:
            return ()
        full = (1 << self.C) - 1
        # reach[idx][j]: set of column masks (with enough columns) common to some j chosen rows
        init = tuple([{full}] + [set() for _ in range(r - 1)] for _, r, _ in self.active)
        eq0 = (True,) * max(self.C - 1, 0)
        choices = range(len(self.values)) if first_choices is None else first_choices
        for i in choices:
            found = self._extend((), i, init, eq0)
            if found is not None:
                return found
        return None

    def _extend(self, prefix, idx, reach, eq):
        v, digits, masks, _ = self.values[idx]
        new_eq = list(eq)
        for j, same in enumerate(eq):
            if same:
                if digits[j] > digits[j + 1]:
                    return None
                if digits[j] < digits[j + 1]:
                    new_eq[j] = False
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(
                f"search budget of {self.budget} nodes exceeded",
                {"nodes": self.nodes, "deepest_prefix": [int(x) for x in self.deepest],
                 "rows": self.R, "cols": self.C})
        new_reach = []
        for (kappa, r, s), levels in zip(self.active, reach):
            m = masks[kappa]
            for common in levels[r - 1]:
                if (common & m).bit_count() >= s:
                    return None
            updated = [levels[0]]
            for j in range(1, r):
                extra = {common & m for common in levels[j - 1] if (common & m).bit_count() >= s}
                updated.append(levels[j] | extra if extra else levels[j])
            new_reach.append(updated)
        prefix = prefix + (v,)
        if len(prefix) > len(self.deepest):
            self.deepest = prefix
        if len(prefix) == self.R:
            return prefix
        new_eq = tuple(new_eq)
        for nxt in range(idx, len(self.values)):
            found = self._extend(prefix, nxt, new_reach, new_eq)
            if found is not None:
                return found
        return None

    def coloring(self, values) -> Coloring:
        table = np.array([self.digits(v) for v in values], dtype=np.int64).reshape(self.R, self.C)
        return Coloring(self.R, self.C, self.k, table)


def _run_subtree(args):
    q, budget, idx = args
    search = _Search(q, budget)
    found = search.run([idx])
    return found, search.nodes


def holds(q: RelationQuery, budget: int = DEFAULT_BUDGET, workers: Optional[int] = None) -> RelationResult:
    """Decide the finite relation ``q`` by exhaustive search with symmetry breaking.

    With ``workers > 1`` (default: ``ORDPART_THREADS``) the subtrees below each
    first-row value run in separate processes, each with the full budget; the
    answer is the same as the serial one.
    """
    workers = thread_cap() if workers is None else max(1, workers)
    search = _Search(q, budget)
    if workers == 1 or search.trivial or q.source_rows == 0 or len(search.values) < 2:
        found = search.run()
        nodes = search.nodes
    else:
        found, nodes = None, 0
        with ProcessPoolExecutor(max_workers=workers) as pool:
            jobs = [(q, budget, i) for i in range(len(search.values))]
            for sub_found, sub_nodes in pool.map(_run_subtree, jobs):
                nodes += sub_nodes
                if found is None and sub_found is not None:
                    found = sub_found
    if found is None:
        return RelationResult(True, None, nodes)
    counter = search.coloring(found)
    if find_homogeneous(counter, q) is not None:
        raise AssertionError("search produced a colouring that has a witness")
    return RelationResult(False, counter, nodes)
