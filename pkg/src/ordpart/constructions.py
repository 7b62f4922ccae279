"""Finite realisations of the positive constructions for countable sources.

Everything works on truncations: ``w^k`` is materialised as the digit tuples of
length ``k`` below a bound ``N`` (see :class:`ordpart.ordinal.OmegaPowerElement`),
and "an infinite homogeneous set" becomes a homogeneous set of a requested size.
A pipeline that cannot find one says so instead of pretending.

Pattern convention: a pattern is a set of ``k`` positions among ``0..k+m-1``.
Given an ascending ``l_0 < ... < l_{k+m-1}``, the row element takes the ``l`` at
the pattern positions (smallest position in the most significant digit) and
the column element takes the rest.  Patterns are numbered colexicographically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .ordinal import (
    OMEGA, Ordinal, OrdinalLike, as_ordinal, compare, decompose_into_indecomposables, mul,
    omega_power,
)
from .ordertype import ALEPH_0, Eta, Fin, Omega, Ord, OrderTerm, cardinal_size, format_term, normalize
from .partition import (
    DEFAULT_BUDGET, BudgetExceeded, Coloring, RectangleWitness, RelationQuery, WitnessError,
    verify_witness,
)

__all__ = [
    "SplitPattern", "split_patterns", "TupleColoring", "PairColoring", "derive_pair_coloring",
    "ramsey_search", "extract_rectangle", "PatternRectangleReport", "pattern_rectangle_pipeline",
    "SplitRelationResult", "split_relation_rectangle", "CompositionStep", "CompositionResult", "compose_sums",
    "PowerSumResult", "power_sum_driver", "driver_schedule", "block_exponents", "PinningMap", "pin",
    "ConstructionError", "BlockSolverError", "InvariantViolation", "UnsupportedPin",
]


class ConstructionError(ValueError):
    pass


class BlockSolverError(RuntimeError):
    """A block solver failed during sum composition; ``block`` is its ``(i, j)``."""

    def __init__(self, block, message):
        super().__init__(f"block {block}: {message}")
        self.block = block


class InvariantViolation(AssertionError):
    pass


class UnsupportedPin(ValueError):
    pass


# patterns and colourings

@dataclass(frozen=True)
class SplitPattern:
    index: int
    k_positions: tuple  # descending
    m_positions: tuple  # descending

    def assemble(self, ells: Sequence[int]) -> tuple:
        """Row and column digit tuples (most significant first) built from ``ells``."""
        x = tuple(ells[p] for p in reversed(self.k_positions))
        y = tuple(ells[p] for p in reversed(self.m_positions))
        return x, y


def split_patterns(k: int, m: int) -> list[SplitPattern]:
    sets = sorted(itertools.combinations(range(k + m), k), key=lambda s: s[::-1])
    out = []
    for i, s in enumerate(sets):
        rest = [p for p in range(k + m) if p not in s]
        out.append(SplitPattern(i, tuple(sorted(s, reverse=True)), tuple(sorted(rest, reverse=True))))
    return out


def _rank(digits, bound) -> int:
    r = 0
    for d in digits:
        r = r * bound + d
    return r


@dataclass(frozen=True)
class TupleColoring:
    """A 2-colouring of ``w^k x w^m`` materialised on digits below ``bound``.

    ``table[rank(x), rank(y)]`` is the colour, ranks as in ``enumerate_truncation``.
    """

    k: int
    m: int
    bound: int
    table: np.ndarray = field(compare=False, repr=False)

    def __post_init__(self):
        shape = (self.bound ** self.k, self.bound ** self.m)
        table = np.asarray(self.table, dtype=np.int64).reshape(shape)
        if table.size and (table.min() < 0 or table.max() > 1):
            raise ValueError("tuple colourings take values in {0, 1}")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def __eq__(self, other):
        if not isinstance(other, TupleColoring):
            return NotImplemented
        return (self.k, self.m, self.bound) == (other.k, other.m, other.bound) \
            and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.k, self.m, self.bound, self.table.tobytes()))

    def color(self, x: Sequence[int], y: Sequence[int]) -> int:
        return int(self.table[_rank(x, self.bound), _rank(y, self.bound)])

    @classmethod
    def from_function(cls, k, m, bound, fn: Callable) -> "TupleColoring":
        xs = list(itertools.product(range(bound), repeat=k))
        ys = list(itertools.product(range(bound), repeat=m))
        return cls(k, m, bound, [[int(fn(x, y)) for y in ys] for x in xs])

    @classmethod
    def random(cls, k, m, bound, rng: np.random.Generator, p: float = 0.5) -> "TupleColoring":
        return cls(k, m, bound, (rng.random((bound ** k, bound ** m)) < p).astype(np.int64))

    def as_coloring(self) -> Coloring:
        return Coloring.from_table(self.table, 2)

    def to_json(self) -> dict:
        return {"k": self.k, "m": self.m, "bound": self.bound, "data": self.table.tolist()}

    @classmethod
    def from_json(cls, obj) -> "TupleColoring":
        return cls(int(obj["k"]), int(obj["m"]), int(obj["bound"]), obj["data"])


@dataclass(frozen=True)
class PairColoring:
    """A colouring of the ``arity``-subsets of ``{0..size-1}``, keyed by sorted tuples."""

    arity: int
    size: int
    colors: int
    values: dict = field(compare=False, repr=False)

    def color(self, subset) -> int:
        return self.values[tuple(sorted(subset))]

    @classmethod
    def from_function(cls, arity, size, colors, fn: Callable) -> "PairColoring":
        values = {s: int(fn(s)) for s in itertools.combinations(range(size), arity)}
        if any(not 0 <= v < colors for v in values.values()):
            raise ValueError(f"colour values must lie in 0..{colors - 1}")
        return cls(arity, size, colors, values)


def derive_pair_coloring(c: TupleColoring, N: Optional[int] = None) -> PairColoring:
    """Colour each ``(k+m)``-set by the bit vector of ``c`` over all split patterns."""
    N = c.bound if N is None else N
    if N > c.bound:
        raise ConstructionError(f"digit bound {N} exceeds the materialised bound {c.bound}")
    patterns = split_patterns(c.k, c.m)

    def colour(ells):
        total = 0
        for pat in patterns:
            x, y = pat.assemble(ells)
            total |= c.color(x, y) << pat.index
        return total

    return PairColoring.from_function(c.k + c.m, N, 2 ** len(patterns), colour)


def ramsey_search(p: PairColoring, target_size: Optional[int] = None, budget: int = DEFAULT_BUDGET,
                  per_color: Optional[Sequence[int]] = None):
    """Lexicographically least homogeneous set of the requested size, or None.

    ``per_color`` gives a separate size for each colour; a set counts as soon as it
    is homogeneous in some colour and has that colour's size.  Raises
    :class:`BudgetExceeded` after ``budget`` search nodes.
    """
    goals = list(per_color) if per_color is not None else [target_size] * p.colors
    if len(goals) != p.colors or any(g is None or g < 0 for g in goals):
        raise ValueError("one natural target size per colour is required")
    r, n = p.arity, p.size
    nodes = 0

    def dfs(chosen, col):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"ramsey search exceeded {budget} nodes",
                                 {"nodes": nodes - 1, "prefix": list(chosen)})
        size = len(chosen)
        if col is None:
            done = [c for c, g in enumerate(goals) if g == size]
            if done:
                return list(chosen), done[0]
            need = min((g for g in goals if g > size), default=None)
        else:
            if size == goals[col]:
                return list(chosen), col
            need = goals[col]
        if need is None:
            return None
        start = chosen[-1] + 1 if chosen else 0
        for v in range(start, n):
            if size + (n - v) < need:
                break
            if size + 1 < r:
                found = dfs(chosen + [v], None)
            elif size + 1 == r:
                c = p.color(chosen + [v])
                found = dfs(chosen + [v], c) if goals[c] >= r else None
            else:
                if any(p.color(rest + (v,)) != col for rest in itertools.combinations(chosen, r - 1)):
                    continue
                found = dfs(chosen + [v], col)
            if found is not None:
                return found
        return None

    return dfs([], None)


def _check_homogeneous(p: PairColoring, H, colour) -> None:
    for s in itertools.combinations(sorted(H), p.arity):
        if p.color(s) != colour:
            raise ConstructionError(f"H is not homogeneous in colour {colour}: {s} has colour {p.color(s)}")


def _extract_digits(k, m, n, H, colour):
    """Row and column digit tuples of the rectangle read off a homogeneous ``H``."""
    H = sorted(H)
    if colour == 0:
        h0, h1 = H[0::2], H[1::2]
        if len(h0) < k or len(h1) < m:
            raise ConstructionError(f"H has {len(H)} elements; colour 0 needs at least {k} + {m} after splitting")
        return list(itertools.combinations(h0, k)), list(itertools.combinations(h1, m)), None
    i = (colour & -colour).bit_length() - 1
    pat = split_patterns(k, m)[i]
    if len(H) < (k + m) * n:
        raise ConstructionError(f"H has {len(H)} elements; a positive colour needs (k+m)*n = {(k + m) * n}")
    xs = [tuple(H[q * n + j] for q in reversed(pat.k_positions)) for j in range(n)]
    ys = [tuple(H[q * n + j] for q in reversed(pat.m_positions)) for j in range(n)]
    return xs, ys, pat


def extract_rectangle(c: TupleColoring, n: int, H, colour: int) -> RectangleWitness:
    """Monochromatic rectangle of ``c`` (as truncation ranks) from a homogeneous ``H``.

    Colour 0 gives all increasing digit tuples from the even and odd positions of
    ``H``; a positive colour gives an ``n x n`` colour-1 rectangle.
    """
    p = derive_pair_coloring(c)
    if any(h < 0 or h >= c.bound for h in H):
        raise ConstructionError("H must lie below the digit bound")
    _check_homogeneous(p, H, colour)
    xs, ys, _ = _extract_digits(c.k, c.m, n, H, colour)
    w = RectangleWitness(tuple(_rank(x, c.bound) for x in xs), tuple(_rank(y, c.bound) for y in ys),
                         0 if colour == 0 else 1)
    if not verify_witness(c.as_coloring(), w):
        raise WitnessError("extracted rectangle is not monochromatic")
    return w


@dataclass(frozen=True)
class PatternRectangleReport:
    H: Optional[tuple]
    colour: Optional[int]
    pattern: Optional[int]
    witness: Optional[RectangleWitness]

    def to_json(self) -> dict:
        return {"H": None if self.H is None else list(self.H), "pair_colour": self.colour,
                "pattern": self.pattern,
                "witness": None if self.witness is None else self.witness.to_json()}


def pattern_rectangle_pipeline(c: TupleColoring, n: int, target: Optional[int] = None,
                     budget: int = DEFAULT_BUDGET) -> PatternRectangleReport:
    """Derive the pattern colouring, search a homogeneous set, extract a rectangle.

    ``target`` defaults to ``(k+m)*n``, enough for either case.  Returns a report
    with ``witness=None`` when the truncation holds no homogeneous set that large.
    """
    target = (c.k + c.m) * n if target is None else target
    p = derive_pair_coloring(c)
    found = ramsey_search(p, target, budget=budget)
    if found is None:
        return PatternRectangleReport(None, None, None, None)
    H, colour = found
    w = extract_rectangle(c, n, H, colour)
    pattern = None if colour == 0 else (colour & -colour).bit_length() - 1
    return PatternRectangleReport(tuple(H), colour, pattern, w)


# splitting relations on a finite order

@dataclass(frozen=True)
class SplitRelationResult:
    case: int
    homogeneous: tuple
    witness: RectangleWitness

    def to_json(self) -> dict:
        return {"case": self.case, "homogeneous": list(self.homogeneous), "witness": self.witness.to_json()}


def _relation_table(E, size) -> Coloring:
    table = np.zeros((size, size), dtype=np.int64)
    for a, b in E:
        if not (0 <= a < size and 0 <= b < size):
            raise ConstructionError(f"pair {(a, b)} outside the order of size {size}")
        table[a, b] = 1
    return Coloring.from_table(table, 2)


def split_relation_rectangle(E, size: int, tau: int, phi: int, psi: int, solver: Optional[Callable] = None,
                   budget: int = DEFAULT_BUDGET) -> SplitRelationResult:
    """Rectangle ``tau x tau`` outside ``E`` or ``phi x psi`` inside ``E`` on ``{0..size-1}``.

    Colours pairs ``a < b`` by ``[(a,b) in E] + 2[(a,b) not in E and (b,a) in E]``
    and asks ``solver(pair_colouring, (2*tau, phi+psi, psi+phi))`` for a homogeneous
    set.  The default solver is :func:`ramsey_search`.
    """
    table = _relation_table(E, size)
    t = table.table
    p = PairColoring.from_function(2, size, 3, lambda s: int(t[s[0], s[1]]) + 2 * int(not t[s[0], s[1]] and t[s[1], s[0]]))
    goals = (2 * tau, phi + psi, psi + phi)
    if solver is None:
        found = ramsey_search(p, per_color=goals, budget=budget)
    else:
        found = solver(p, goals)
    if found is None:
        raise ConstructionError(f"solver found no homogeneous set for targets {goals} on {size} points")
    H, case = found
    H = sorted(H)
    _check_homogeneous(p, H, case)
    if len(H) < goals[case]:
        raise ConstructionError(f"solver returned {len(H)} points, colour {case} needs {goals[case]}")
    if case == 0:
        w = RectangleWitness(tuple(H[0::2][:tau]), tuple(H[1::2][:tau]), 0)
    elif case == 1:
        w = RectangleWitness(tuple(H[:phi]), tuple(H[phi:phi + psi]), 1)
    else:
        w = RectangleWitness(tuple(H[psi:psi + phi]), tuple(H[:psi]), 1)
    query = RelationQuery(size, size, ((tau, tau), (phi, psi)))
    if not verify_witness(table, w, query):
        raise WitnessError("reduced rectangle failed verification")
    return SplitRelationResult(case, tuple(H), w)


# composing block solvers over finite sums

@dataclass(frozen=True)
class CompositionStep:
    step: int
    block: tuple
    row_sizes: tuple
    col_sizes: tuple
    invariant: bool

    def to_json(self) -> dict:
        return {"step": self.step, "block": list(self.block), "row_sizes": list(self.row_sizes),
                "col_sizes": list(self.col_sizes), "invariant": self.invariant}


@dataclass
class CompositionResult:
    witness: RectangleWitness
    row_blocks: list
    col_blocks: list
    trace: list
    shortcut: Optional[tuple] = None  # block whose solver found a colour-1 rectangle


def _avoids(table: np.ndarray, rows, cols) -> bool:
    if not len(rows) or not len(cols):
        return True
    return not np.any(table[np.ix_(list(rows), list(cols))] == 1)


def compose_sums(block_solvers, row_blocks: Sequence, col_blocks: Sequence, coloring: Coloring,
                 members: Optional[Callable] = None, order: Optional[Sequence] = None) -> CompositionResult:
    """Refine row and column blocks pair by pair until every block product avoids ``E``.

    ``E`` is the set of colour-1 cells of ``coloring``.  ``block_solvers[i][j]`` (or a
    single callable) receives ``(i, j, X_i, Y_j)`` and returns refined blocks
    ``(X', Y')`` with ``X' x Y'`` outside ``E``, or a colour-1 ``RectangleWitness``
    which ends the composition at once.  ``members`` maps a block to its grid
    indices (default: the block itself).  After every step the product of every
    block pair handled so far is checked against ``E``.
    """
    members = members or (lambda b: list(b))
    k, m = len(row_blocks), len(col_blocks)
    order = list(order) if order is not None else [(i, j) for i in range(k) for j in range(m)]
    if sorted(order) != [(i, j) for i in range(k) for j in range(m)]:
        raise ValueError("order must enumerate every block pair exactly once")
    X, Y = list(row_blocks), list(col_blocks)
    table = coloring.table
    trace = []
    for step, (i, j) in enumerate(order):
        solver = block_solvers if callable(block_solvers) else block_solvers[i][j]
        try:
            out = solver(i, j, X[i], Y[j])
        except (BudgetExceeded, BlockSolverError):
            raise
        except Exception as exc:
            raise BlockSolverError((i, j), str(exc)) from exc
        if out is None:
            raise BlockSolverError((i, j), "solver returned nothing")
        if isinstance(out, RectangleWitness):
            if out.color != 1 or not verify_witness(coloring, out):
                raise BlockSolverError((i, j), "solver returned an invalid rectangle")
            return CompositionResult(out, X, Y, trace, shortcut=(i, j))
        new_x, new_y = out
        if not set(members(new_x)) <= set(members(X[i])) or not set(members(new_y)) <= set(members(Y[j])):
            raise BlockSolverError((i, j), "refined blocks are not sub-blocks")
        X[i], Y[j] = new_x, new_y
        ok = all(_avoids(table, members(X[a]), members(Y[b])) for a, b in order[:step + 1])
        trace.append(CompositionStep(step, (i, j), tuple(len(members(x)) for x in X),
                                     tuple(len(members(y)) for y in Y), ok))
        if not ok:
            raise InvariantViolation(f"after step {step} some refined block product meets E")
    rows = sorted(r for x in X for r in members(x))
    cols = sorted(c for y in Y for c in members(y))
    w = RectangleWitness(tuple(rows), tuple(cols), 0)
    if not verify_witness(coloring, w):
        raise InvariantViolation("composed rectangle meets E")
    return CompositionResult(w, X, Y, trace)


# the driver for sums of powers of w below w^w

@dataclass
class _PowerBlock:
    """An order embedding of the truncation ``T(exp, t)`` into one source block.

    Digit position ``p`` of a truncation element is sent through ``lanes[p]``; the
    image is ranked in base ``bound`` and shifted by ``offset``.
    """

    exp: int
    offset: int
    bound: int
    lanes: list

    @property
    def size(self) -> int:
        return len(self.lanes[0]) if self.lanes else 1

    def image(self, digits) -> int:
        return self.offset + _rank([self.lanes[p][d] for p, d in enumerate(digits)], self.bound)

    def images(self, width: int) -> np.ndarray:
        return np.array([self.image(u) for u in itertools.product(range(width), repeat=self.exp)],
                        dtype=np.int64)

    def members(self) -> list:
        return self.images(self.size).tolist()

    def restrict(self, digits: Sequence[int]) -> "_PowerBlock":
        """Re-embed a full truncation into the increasing tuples over ``digits``."""
        t = len(digits) // self.exp
        lanes = [[self.lanes[p][d] for d in digits[p * t:(p + 1) * t]] for p in range(self.exp)]
        return _PowerBlock(self.exp, self.offset, self.bound, lanes)


def block_exponents(alpha: Ordinal) -> list[int]:
    parts = decompose_into_indecomposables(mul(OMEGA, alpha))
    return [int(p.leading_exponent()) for p in parts]


def driver_schedule(row_exps, col_exps, n: int, min_bound: int = 2) -> list[int]:
    """Colour-0 homogeneous-set sizes needed at each refinement step (row-major order).

    Computed backwards so that every block keeps a truncation of ``min_bound``
    digits at the end; the even half of ``H`` feeds rows, the odd half columns.
    """
    req_r, req_c = [min_bound] * len(row_exps), [min_bound] * len(col_exps)
    order = [(i, j) for i in range(len(row_exps)) for j in range(len(col_exps))]
    sizes = [0] * len(order)
    for step in range(len(order) - 1, -1, -1):
        i, j = order[step]
        e, f = row_exps[i], col_exps[j]
        sizes[step] = max(2 * e * req_r[i], 2 * f * req_c[j], (e + f) * n)
        req_r[i] = req_c[j] = sizes[step]
    return sizes


@dataclass
class PowerSumResult:
    status: str  # "witness", "insufficient" or "budget"
    witness: Optional[RectangleWitness]
    row_exponents: list
    col_exponents: list
    schedule: list
    trace: list
    failing_block: Optional[tuple] = None
    message: str = ""

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": None if self.witness is None else self.witness.to_json(),
            "row_blocks": [f"w^{e}" for e in self.row_exponents],
            "col_blocks": [f"w^{f}" for f in self.col_exponents],
            "schedule": list(self.schedule),
            "trace": [s.to_json() for s in self.trace],
            "failing_block": None if self.failing_block is None else list(self.failing_block),
            "message": self.message,
        }


def power_sum_driver(alpha: OrdinalLike, beta: OrdinalLike, n: int, coloring: Coloring, bound: int,
                      min_bound: int = 2, budget: int = DEFAULT_BUDGET) -> PowerSumResult:
    """Rectangle for a 2-colouring of truncated ``w*alpha x w*beta``.

    Rows are the blocks ``w^e`` of ``w*alpha`` laid out in order, each truncated to
    digits below ``bound``; columns likewise for ``w*beta``.  Each block pair is
    handled by the pattern-colouring argument and the pairs are composed row-major.
    The result is a colour-0 rectangle meeting every block in a truncation of at
    least ``min_bound`` digits, or an ``n x n`` colour-1 rectangle.  When the
    truncation is too small the status is ``"insufficient"``, never a false witness.
    """
    alpha, beta = as_ordinal(alpha), as_ordinal(beta)
    limit = omega_power(OMEGA)
    for name, v in (("alpha", alpha), ("beta", beta)):
        if v.is_zero() or compare(v, limit) >= 0:
            raise ValueError(f"{name} must satisfy 0 < {name} < w^w, got {v}")
    if coloring.colors != 2:
        raise ValueError("the driver needs a 2-colouring")
    row_exps, col_exps = block_exponents(alpha), block_exponents(beta)
    expected = (sum(bound ** e for e in row_exps), sum(bound ** f for f in col_exps))
    if (coloring.rows, coloring.cols) != expected:
        raise ValueError(f"colouring is {coloring.rows}x{coloring.cols}, truncation needs {expected[0]}x{expected[1]}")

    def layout(exps):
        blocks, offset = [], 0
        for e in exps:
            blocks.append(_PowerBlock(e, offset, bound, [list(range(bound)) for _ in range(e)]))
            offset += bound ** e
        return blocks

    schedule = driver_schedule(row_exps, col_exps, n, min_bound)
    order = [(i, j) for i in range(len(row_exps)) for j in range(len(col_exps))]
    step_of = {blk: s for s, blk in enumerate(order)}
    table = coloring.table

    def solver(i, j, xb: _PowerBlock, yb: _PowerBlock):
        e, f = xb.exp, yb.exp
        width = min(xb.size, yb.size)
        sub = table[np.ix_(xb.images(width), yb.images(width))]
        tc = TupleColoring(e, f, width, sub)
        p = derive_pair_coloring(tc)
        goals = [schedule[step_of[(i, j)]]] + [(e + f) * n] * (p.colors - 1)
        found = ramsey_search(p, per_color=goals, budget=budget)
        if found is None:
            raise BlockSolverError((i, j), f"no homogeneous set of size {goals[0]} (colour 0) or "
                                           f"{goals[1]} (positive) among {width} digits")
        H, colour = found
        if colour == 0:
            H = sorted(H)
            return xb.restrict(H[0::2]), yb.restrict(H[1::2])
        xs, ys, _ = _extract_digits(e, f, n, H, colour)
        rows = tuple(xb.image(x) for x in xs)
        cols = tuple(yb.image(y) for y in ys)
        return RectangleWitness(rows, cols, 1)

    result = PowerSumResult("witness", None, row_exps, col_exps, schedule, [])
    try:
        comp = compose_sums(solver, layout(row_exps), layout(col_exps), coloring,
                            members=lambda b: b.members(), order=order)
    except BlockSolverError as exc:
        result.status, result.failing_block, result.message = "insufficient", exc.block, str(exc)
        return result
    except BudgetExceeded as exc:
        result.status, result.message = "budget", str(exc)
        return result
    result.witness, result.trace = comp.witness, comp.trace
    if comp.shortcut is None:
        small = [b.size for b in comp.row_blocks + comp.col_blocks if b.size < min_bound]
        if small:
            raise InvariantViolation(f"blocks shrank below {min_bound} digits: {small}")
    return result


# pinning maps

def _cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def _dyadics(depth: int) -> list[Fraction]:
    """Dyadic rationals in (0, 1) with denominator up to ``2**depth``, by depth then value."""
    out = []
    for d in range(1, depth + 1):
        out.extend(Fraction(k, 2 ** d) for k in range(1, 2 ** d, 2))
    return out


@dataclass(frozen=True)
class PinningMap:
    """A map from a materialised truncation of ``source`` into ``target``.

    ``points`` lists source elements (as printable labels) and ``image`` their
    targets, which are natural numbers (elements of an initial ordinal).
    """

    source: OrderTerm
    target: OrderTerm
    points: tuple
    image: tuple

    def __call__(self, point):
        return self.image[self.points.index(point)]

    def check(self) -> bool:
        """Injective into the target; onto and increasing when the target is finite."""
        if len(set(self.image)) != len(self.image) or any(v < 0 for v in self.image):
            return False
        size = cardinal_size(self.target)
        if size is not ALEPH_0:
            return list(self.image) == list(range(size))
        return True

    def image_shape_ok(self, subset: Sequence[int]) -> bool:
        """The image of the points at positions ``subset`` keeps their number.

        Infinite subsets of ``w`` have type ``w``, so on a truncation the target
        shape is witnessed by injectivity on the subset.
        """
        return len({self.image[i] for i in subset}) == len(set(subset))

    def to_json(self) -> dict:
        return {"source": format_term(self.source), "target": format_term(self.target),
                "points": [str(p) for p in self.points], "image": list(self.image)}


def pin(source: OrderTerm, target: OrderTerm, truncation: int) -> PinningMap:
    """Pinning map for ``w^n -> w``, ``eta -> w`` or a type onto its initial ordinal.

    ``truncation`` is the digit bound for powers of ``w``, the dyadic depth for
    ``eta``, and the number of enumerated points for other countable types.
    """
    src, tgt = normalize(source), normalize(target)
    size = cardinal_size(src)
    if size is not ALEPH_0:
        if tgt != normalize(Fin(size)):
            raise UnsupportedPin(f"a finite type of size {size} pins to {size}, not {format_term(target)}")
        pts = tuple(range(size))
        return PinningMap(source, target, pts, pts)
    if tgt != Omega:
        raise UnsupportedPin(f"countable infinite types are only pinned to w here, not {format_term(target)}")
    if src == Eta:
        pts = tuple(_dyadics(truncation))
        return PinningMap(source, target, pts, tuple(range(len(pts))))
    if src == Omega:
        pts = tuple(range(truncation))
        return PinningMap(source, target, pts, pts)
    if isinstance(src, Ord) and src.value.has_finite_exponents() and len(src.value.terms) == 1 \
            and src.value.terms[0][1] == 1:
        degree = int(src.value.leading_exponent())
        pts = tuple(itertools.product(range(truncation), repeat=degree))
        image = []
        for digits in pts:
            code = digits[0]
            for d in digits[1:]:
                code = _cantor_pair(code, d)
            image.append(code)
        return PinningMap(source, target, pts, tuple(image))
    # any other countable type: an enumeration is an injection into w
    pts = tuple(range(truncation))
    return PinningMap(source, target, pts, pts)
