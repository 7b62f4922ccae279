"""Colourings that refute relations, and finite replays of the refutation arguments.

The infinite objects involved (an unbounded family of functions, an ordinal of
large cofinality, infinite traces) are replaced by explicit finite stand-ins:

* a :class:`ScaleFamily` is a short list of increasing functions on ``0..domain-1``
  that eventually dominate one another; it plays the unbounding number b;
* a :class:`CofinalChain` is a strictly increasing list of ordinals;
* a trace ``Y & P_t`` counts as infinite when it has at least ``quota`` points.

Refuters therefore have an honest third outcome, ``"insufficient"``, for when the
truncation is too small to show the contradiction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .ordinal import Ordinal, OrdinalLike, as_ordinal, compare, format_ordinal
from .ordertype import (
    Fin, Omega, OmegaStar, OrderTerm, Prod, Sum, TriBool, embeds, format_term, normalize,
)
from .partition import Coloring

__all__ = [
    "index_order_coloring", "index_order_scan", "UnionwiseSplit", "unionwise_split_coloring", "TypewiseDecomposition",
    "ScaleFamily", "CofinalChain", "ETable", "build_E", "RefutationReport", "refute_zero_rectangle",
    "refute_one_fiber", "ShuffleMap", "orr_shuffle", "Stabilization", "stabilize_power_coloring",
    "desk_instance", "UndecidableClaim", "UnsupportedFragment", "InconsistentInput",
]


class UndecidableClaim(ValueError):
    """An embeddability question the decision procedure cannot settle."""


class UnsupportedFragment(ValueError):
    pass


class InconsistentInput(ValueError):
    pass


def _require_no(s: OrderTerm, t: OrderTerm, what: str) -> None:
    verdict = embeds(s, t)
    if verdict is TriBool.UNKNOWN:
        raise UndecidableClaim(f"cannot decide whether {format_term(s)} embeds into {format_term(t)} ({what})")
    if verdict is TriBool.YES:
        raise InconsistentInput(f"{format_term(s)} embeds into {format_term(t)} ({what})")


# enumerating both sources in type w

def index_order_coloring(N: int) -> Coloring:
    """``c(a, b) = 1`` iff the index of ``a`` is below the index of ``b``."""
    if N < 1:
        raise ValueError("N must be positive")
    return Coloring.from_table(np.triu(np.ones((N, N), dtype=np.int64), 1), 2)


def index_order_scan(c: Coloring) -> dict:
    """Check both avoidances: row ``a`` has its 0s among the first ``a+1`` columns,
    column ``b`` has its 1s among the first ``b`` rows."""
    t = c.table
    rows = np.arange(c.rows)[:, None]
    cols = np.arange(c.cols)[None, :]
    zero_outside = np.count_nonzero((t == 0) & (cols > rows))
    one_outside = np.count_nonzero((t == 1) & (rows >= cols))
    return {"rows": c.rows, "zeros_beyond_row_prefix": int(zero_outside),
            "ones_beyond_column_prefix": int(one_outside),
            "ok": zero_outside == 0 and one_outside == 0}


# unionwise splits

@dataclass(frozen=True)
class UnionwiseSplit:
    """``phi`` split into the points of ``Y`` (type ``inside``) and the rest (type ``outside``).

    ``membership`` marks, for each materialised point of ``phi`` in order, whether it lies in ``Y``.
    """

    phi: OrderTerm
    inside: OrderTerm
    outside: OrderTerm
    membership: tuple

    def validate(self) -> None:
        _require_no(self.phi, self.inside, "phi into Y")
        _require_no(self.phi, self.outside, "phi into X minus Y")


def unionwise_split_coloring(split: UnionwiseSplit, row_count: int = 1) -> Coloring:
    """Colour ``(row, point)`` by whether the point lies in ``Y``; every row is the same."""
    split.validate()
    row = np.array(split.membership, dtype=np.int64)
    return Coloring.from_table(np.tile(row, (row_count, 1)), 2)


# the refutation for typewise decomposable types

def _enum_key(term: OrderTerm, n: int):
    """Order key of the ``n``-th enumerated point of a materialised ``term``."""
    nf = normalize(term)
    if nf == Omega:
        return n
    if nf == OmegaStar:
        return -n
    if isinstance(nf, Fin):
        if n >= nf.n:
            raise IndexError(f"point {n} beyond the finite type {nf.n}")
        return n
    raise UnsupportedFragment(f"no materialised enumeration for {format_term(term)}")


@dataclass(frozen=True)
class TypewiseDecomposition:
    """``phi`` as the sum over ``index_type`` of copies of ``block_type``, materialised.

    Blocks are numbered by the enumeration ``b`` (block ``n`` is ``b(n)``), and the
    ``k``-th point of block ``n`` is ``e_n(k)``; both enumerations are the natural
    ones for ``w``, ``w*`` and finite types.  Points are pairs ``(n, k)``.
    """

    index_type: OrderTerm
    block_type: OrderTerm
    phi: OrderTerm
    blocks: int
    depth: int

    def __post_init__(self):
        if self.blocks < 1 or self.depth < 1:
            raise ValueError("materialise at least one block of depth one")
        if normalize(Prod(self.block_type, self.index_type)) != normalize(self.phi):
            raise InconsistentInput(f"the sum of {format_term(self.block_type)} over "
                                    f"{format_term(self.index_type)} is not {format_term(self.phi)}")
        _require_no(self.phi, self.index_type, "phi into the index type")
        _require_no(self.phi, self.block_type, "phi into a block")
        for n in range(self.blocks):
            _enum_key(self.index_type, n)
        _enum_key(self.block_type, self.depth - 1)

    def column(self, n: int, k: int) -> int:
        if not (0 <= n < self.blocks and 0 <= k < self.depth):
            raise IndexError(f"point {(n, k)} outside the materialised sum")
        return n * self.depth + k

    def point(self, column: int) -> tuple:
        return divmod(column, self.depth)

    def order_key(self, pt) -> tuple:
        n, k = pt
        return _enum_key(self.index_type, n), _enum_key(self.block_type, k)

    def to_json(self) -> dict:
        return {"index_type": format_term(self.index_type), "block_type": format_term(self.block_type),
                "phi": format_term(self.phi), "blocks": self.blocks, "depth": self.depth}


@dataclass(frozen=True)
class ScaleFamily:
    """Increasing functions on ``0..domain-1``; ``values[i, n]`` is ``f_i(n)``.

    ``thresholds[i]`` is the least ``n`` from which ``f_{i+1}`` stays strictly above ``f_i``.
    """

    values: np.ndarray = field(repr=False)
    thresholds: tuple = ()

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int64)
        if v.ndim != 2 or v.shape[0] == 0:
            raise InconsistentInput("a scale family needs at least one function")
        if v.shape[1] > 1 and np.any(np.diff(v, axis=1) <= 0):
            raise InconsistentInput("every function of the scale must be strictly increasing")
        thresholds = []
        for i in range(v.shape[0] - 1):
            below = np.nonzero(v[i + 1] <= v[i])[0]
            start = int(below[-1]) + 1 if len(below) else 0
            if start >= v.shape[1]:
                raise InconsistentInput(f"f_{i + 1} never dominates f_{i} on the domain")
            thresholds.append(start)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "thresholds", tuple(thresholds))

    @classmethod
    def linear(cls, count: int, domain: int) -> "ScaleFamily":
        """``f_i(n) = (i+1)(n+1)``."""
        n = np.arange(domain)
        return cls(np.array([(i + 1) * (n + 1) for i in range(count)], dtype=np.int64).reshape(count, domain))

    def __len__(self):
        return self.values.shape[0]

    @property
    def domain(self) -> int:
        return self.values.shape[1]

    def __call__(self, i: int, n: int) -> int:
        return int(self.values[i, n])


@dataclass(frozen=True)
class CofinalChain:
    values: tuple
    bound: Optional[Ordinal] = None

    def __post_init__(self):
        vals = tuple(as_ordinal(v) for v in self.values)
        if not vals:
            raise InconsistentInput("the chain must not be empty")
        if any(compare(a, b) >= 0 for a, b in zip(vals, vals[1:])):
            raise InconsistentInput("the chain must be strictly increasing")
        if self.bound is not None and compare(vals[-1], self.bound) >= 0:
            raise InconsistentInput("the chain must stay below its bound")
        object.__setattr__(self, "values", vals)

    def nu(self, beta: OrdinalLike) -> int:
        """Least index whose chain value is at least ``beta``."""
        beta = as_ordinal(beta)
        for i, mu in enumerate(self.values):
            if compare(mu, beta) >= 0:
                return i
        raise IndexError(f"{beta} lies above the materialised chain")


@dataclass(frozen=True)
class ETable:
    """Membership of ``(row, (n, k))`` where row ``r`` stands for ordinal ``rows[r]``."""

    rows: tuple
    nus: tuple
    dec: TypewiseDecomposition
    member: np.ndarray = field(repr=False)  # [row, block, k]
    sections: np.ndarray = field(repr=False)  # [row, block] f values; the block may be shorter

    def contains(self, r: int, pt) -> bool:
        n, k = pt
        return bool(self.member[r, n, k])

    def as_coloring(self) -> Coloring:
        """Rows by ``rows``, columns by ``dec.column``; colour 1 on ``E``."""
        r = self.member.shape[0]
        return Coloring.from_table(self.member.reshape(r, -1).astype(np.int64), 2)

    def to_json(self) -> dict:
        return {"dec": self.dec.to_json(),
                "rows": [{"beta": format_ordinal(b), "nu": nu,
                          "sections": {str(n): int(self.sections[r, n]) for n in range(self.dec.blocks)}}
                         for r, (b, nu) in enumerate(zip(self.rows, self.nus))]}


def build_E(chain: CofinalChain, scale: ScaleFamily, dec: TypewiseDecomposition,
            rows: Optional[Sequence[OrdinalLike]] = None) -> ETable:
    """``(beta, (n, k))`` is in ``E`` iff ``f_{nu(beta)}(n) > k``, blocks in ``<t, p>`` order."""
    if len(scale) < len(chain.values):
        raise InconsistentInput(f"scale has {len(scale)} functions, chain needs {len(chain.values)}")
    if scale.domain < dec.blocks:
        raise IndexError(f"scale domain {scale.domain} shorter than {dec.blocks} blocks")
    rows = tuple(as_ordinal(b) for b in (chain.values if rows is None else rows))
    nus = tuple(chain.nu(b) for b in rows)
    sections = np.array([[scale(nu, n) for n in range(dec.blocks)] for nu in nus], dtype=np.int64)
    member = np.arange(dec.depth)[None, None, :] < sections[:, :, None]
    return ETable(rows, nus, dec, member, sections)


def desk_instance(functions: int = 8, blocks: int = 8, depth: int = 80):
    """``phi = w^2`` as ``w`` copies of ``w``, a linear scale and the chain ``0 < 1 < ...``."""
    dec = TypewiseDecomposition(Omega, Omega, Prod(Omega, Omega), blocks, depth)
    scale = ScaleFamily.linear(functions, blocks)
    chain = CofinalChain(tuple(range(functions)))
    return dec, scale, chain


@dataclass
class RefutationReport:
    status: str  # "violation", "member", "shape-refuted" or "insufficient"
    pair: Optional[tuple] = None  # (row, (n, k))
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        pair = None if self.pair is None else [self.pair[0], list(self.pair[1])]
        return {"status": self.status, "pair": pair, "detail": self.detail}


def _traces(Y, dec: TypewiseDecomposition) -> dict:
    tr = {n: [] for n in range(dec.blocks)}
    for n, k in Y:
        dec.column(n, k)
        tr[n].append(k)
    return {n: sorted(ks) for n, ks in tr.items()}


def _shuffle_refutes(trace, dec: TypewiseDecomposition, blocks_used) -> dict:
    """Shuffle ``index_type`` onto the finite traces and confirm ``phi`` does not fit in it."""
    sizes = [len(trace[n]) for n in blocks_used if trace[n]]
    shuffle = orr_shuffle(dec.index_type, sizes) if sizes else None
    _require_no(dec.phi, dec.index_type, "phi into the index type")
    return {"shuffled_blocks": len(sizes), "missed": 0 if shuffle is None else shuffle.missed}


def refute_zero_rectangle(E: ETable, X: Sequence[int], Y: Sequence[tuple], quota: Optional[int] = None) -> RefutationReport:
    """Refute the claim that ``X x Y`` avoids ``E`` with ``X`` cofinal and ``Y`` of type ``phi``.

    Replays the proof: a block is infinite-marked when its trace has at least
    ``quota`` points (default half a block).  If the marked blocks stop before the
    last block, the trace tail is shuffled onto the index type, refuting the shape
    of ``Y``.  Otherwise ``a``, ``g``, ``h`` are computed and the first row of ``X``
    and ``k`` with ``f(k) > h(k)`` give a pair of ``E`` inside ``X x Y``.
    """
    dec = E.dec
    quota = max(1, dec.depth // 2) if quota is None else quota
    X = sorted(X)
    if not X or not Y:
        return RefutationReport("insufficient", detail={"reason": "empty rows or columns cannot have the claimed shape"})
    trace = _traces(Y, dec)
    marked = [n for n in range(dec.blocks) if len(trace[n]) >= quota]
    scan = next(((r, pt) for r in X for pt in sorted(Y) if E.contains(r, pt)), None)
    detail = {"marked_blocks": marked, "quota": quota,
              "first_member": None if scan is None else [scan[0], list(scan[1])]}
    if not marked or marked[-1] != dec.blocks - 1:
        tail = list(range(marked[-1] + 1 if marked else 0, dec.blocks))
        detail.update(_shuffle_refutes(trace, dec, tail))
        detail["branch"] = "finite traces on a tail of blocks"
        return RefutationReport("shape-refuted", detail=detail)
    a = [min(k for k in marked if k >= n) for n in range(dec.blocks)]
    g = [trace[n][0] if trace[n] else 0 for n in range(dec.blocks)]
    h = [max(a[n], g[a[n]]) for n in range(dec.blocks)]
    detail.update({"a": a, "g": g, "h": h})
    for r in X:
        for k in range(dec.blocks):
            if E.sections[r, k] > h[k]:
                pt = (a[k], g[a[k]])
                if not E.contains(r, pt) or pt not in set(map(tuple, Y)):
                    raise AssertionError(f"replayed pair {(r, pt)} is not a member of E inside X x Y")
                detail["k"] = k
                return RefutationReport("violation", (r, pt), detail)
    if scan is not None:
        return RefutationReport("member", scan, detail)
    detail["reason"] = "no row of X outgrows h on the materialised blocks"
    return RefutationReport("insufficient", detail=detail)


def refute_one_fiber(E: ETable, gamma: int, Y: Sequence[tuple], quota: Optional[int] = None) -> RefutationReport:
    """Refute ``{gamma} x Y`` inside ``E`` for ``Y`` of type ``phi``.

    Case 1: some trace is infinite-marked; a point of it at or beyond the section
    length is outside ``E``.  Case 2: every trace is finite and ``Y`` meets every
    block from its first to the last, so the shuffle embeds ``Y`` minus finitely
    many points into the index type, which cannot hold ``phi``.
    """
    dec = E.dec
    quota = max(1, dec.depth // 2) if quota is None else quota
    trace = _traces(Y, dec)
    marked = [n for n in range(dec.blocks) if len(trace[n]) >= quota]
    for n in marked:
        length = int(E.sections[gamma, n])
        beyond = [k for k in trace[n] if k >= length]
        if beyond:
            pt = (n, beyond[0])
            if E.contains(gamma, pt):
                raise AssertionError(f"point {pt} beyond the section is in E")
            return RefutationReport("violation", (gamma, pt),
                                    {"case": 1, "block": n, "section": length, "quota": quota})
    met = [n for n in range(dec.blocks) if trace[n]]
    if not marked and met and met == list(range(met[0], dec.blocks)) and len(met) > 1:
        detail = {"case": 2, "quota": quota}
        detail.update(_shuffle_refutes(trace, dec, met))
        return RefutationReport("shape-refuted", detail=detail)
    return RefutationReport("insufficient", detail={
        "quota": quota, "marked_blocks": marked,
        "reason": "Y is too small in the truncation to carry the claimed type"})


# shuffling an index order onto a sum of finite blocks

@dataclass(frozen=True)
class ShuffleMap:
    """``sigma[i]`` is the target position of source point ``i``.

    Targets are the points of the block sum in order; ``block_of[j]`` is the block
    of target point ``j``.
    """

    source: tuple
    block_of: tuple
    sigma: tuple
    bound: int

    @property
    def missed(self) -> int:
        return len(self.block_of) - len(set(self.sigma))

    def check(self) -> bool:
        increasing = all(a < b for a, b in zip(self.sigma, self.sigma[1:]))
        hit = {self.block_of[j] for j in self.sigma}
        return increasing and hit == set(self.block_of) and self.missed <= self.bound


def _segments(index_type: OrderTerm) -> list:
    nf = normalize(index_type)
    parts = nf.parts if isinstance(nf, Sum) else [nf]
    out = []
    for p in parts:
        if isinstance(p, Fin):
            out.append(("fin", p.n))
        elif p == Omega:
            out.append(("omega", None))
        elif p == OmegaStar:
            out.append(("omega*", None))
        else:
            raise UnsupportedFragment(f"shuffles are implemented for sums of finite, w and w* "
                                      f"segments only; got {format_term(p)}")
    return out


def orr_shuffle(index_type: OrderTerm, blocks: Sequence[int], segment_sizes: Optional[Sequence[int]] = None) -> ShuffleMap:
    """Increasing map from ``index_type`` into the sum of finite blocks.

    ``blocks`` gives the size of the block at each materialised index point, in
    index order.  A ``w`` segment sends its ``j``-th point to the ``j``-th point of
    its block sum (so its window has one source point per target point); ``w*``
    is the mirror image; a finite segment sends each point to the first point of
    its block and misses the rest.
    """
    if any(b < 1 for b in blocks):
        raise ValueError("blocks must be non-empty")
    segs = _segments(index_type)
    if segment_sizes is None:
        fixed = sum(n for kind, n in segs if kind == "fin")
        infinite = [i for i, (kind, _) in enumerate(segs) if kind != "fin"]
        if len(infinite) > 1:
            raise ValueError("give segment_sizes when the index has several infinite segments")
        sizes = [n if kind == "fin" else len(blocks) - fixed for kind, n in segs]
    else:
        sizes = list(segment_sizes)
    if len(sizes) != len(segs) or sum(sizes) != len(blocks) or any(s < 0 for s in sizes):
        raise ValueError("segment sizes must split the blocks")
    for (kind, n), s in zip(segs, sizes):
        if kind == "fin" and s != n:
            raise ValueError(f"finite segment of size {n} given {s} blocks")
    source, block_of, sigma = [], [], []
    bound, pos, start = 0, 0, 0
    for si, ((kind, _), s) in enumerate(zip(segs, sizes)):
        seg_blocks = list(range(start, start + s))
        start += s
        targets = [b for b in seg_blocks for _ in range(blocks[b])]
        if kind == "fin":
            first = pos
            for b in seg_blocks:
                source.append((si, b - seg_blocks[0]))
                sigma.append(first)
                first += blocks[b]
            bound += sum(blocks[b] - 1 for b in seg_blocks)
        else:
            # one source point per target point; w* is labelled from the top down
            for j in range(len(targets)):
                label = j if kind == "omega" else -(len(targets) - 1 - j)
                source.append((si, label))
                sigma.append(pos + j)
        block_of.extend(targets)
        pos += len(targets)
    sm = ShuffleMap(tuple(source), tuple(block_of), tuple(sigma), bound)
    if not sm.check():
        raise AssertionError("shuffle map violates its invariants")
    return sm


# stabilising a colouring of K x w^(n+1)

@dataclass
class Stabilization:
    majority: np.ndarray  # [row, block] -> i
    exceptions: np.ndarray  # [row, block] -> f, -1 when there is no exception
    sets: list  # per row, the set X
    dominating: np.ndarray  # g
    deviations: int  # recolouring check on the induced B

    def to_json(self) -> dict:
        return {"majority": self.majority.tolist(), "exceptions": self.exceptions.tolist(),
                "sets": [sorted(s) for s in self.sets], "g": self.dominating.tolist(),
                "deviations": self.deviations}


def stabilize_power_coloring(c: Coloring, n: int, threshold: int = 1) -> Stabilization:
    """Majority colours per row and block of ``w^n``, with exception functions.

    Columns are ``w*nu + m`` in rank order for a truncation of ``w^(n+1)`` with
    digit bound ``N``, so block ``nu`` is ``column // N`` and blocks are enumerated
    in rank order.  For each row, a nested chain keeps the positions ``m`` where
    block ``k`` shows its majority colour (ties go to the lower colour); ``X`` is the
    final set together with every ``m`` below its minimum.  ``f(k)`` is the largest
    ``m`` in ``X`` deviating from the majority of block ``k``.  The recolouring check
    takes ``g = max f + 1`` and counts deviations on ``B = {(k, m) : m in X, m >= g(k)}``.
    """
    N = round(c.cols ** (1 / (n + 1))) if c.cols else 0
    if N ** (n + 1) != c.cols or N < 1:
        raise ValueError(f"{c.cols} columns is not a truncation of w^{n + 1}")
    if c.colors != 2:
        raise ValueError("stabilisation is for 2-colourings")
    blocks = N ** n
    cube = c.table.reshape(c.rows, blocks, N)
    majority = np.zeros((c.rows, blocks), dtype=np.int64)
    exceptions = np.full((c.rows, blocks), -1, dtype=np.int64)
    sets = []
    for xi in range(c.rows):
        current = np.arange(N)
        for k in range(blocks):
            vals = cube[xi, k, current]
            ones = int(vals.sum())
            i = 1 if ones > len(vals) - ones else 0
            majority[xi, k] = i
            current = current[vals == i]
            if len(current) < threshold:
                raise ValueError(f"row {xi}: only {len(current)} positions left after block {k}, "
                                 f"threshold {threshold}; deepen the truncation")
        low = int(current.min()) if len(current) else N
        X = np.union1d(current, np.arange(low))
        sets.append(set(X.tolist()))
        for k in range(blocks):
            bad = X[cube[xi, k, X] != majority[xi, k]]
            if len(bad):
                exceptions[xi, k] = int(bad.max())
    g = exceptions.max(axis=0) + 1 if c.rows else np.zeros(blocks, dtype=np.int64)
    deviations = 0
    for xi in range(c.rows):
        X = np.array(sorted(sets[xi]))
        for k in range(blocks):
            ms = X[X >= g[k]]
            deviations += int(np.count_nonzero(cube[xi, k, ms] != majority[xi, k]))
    return Stabilization(majority, exceptions, sets, g, deviations)
