"""Independent brute-force oracles used by the test-suite.

Nothing here calls the arithmetic, search or classification code under test.

Ordinal oracle
--------------
A well-order ``S`` below ``w^K`` is materialised as its elements whose code digits
are below a truncation bound ``M`` followed by a sentinel top point.  For each
materialised point we record the *level* of the gap of ``S`` in front of it: the
last Cantor exponent of its rank, or 0 when the point has an immediate
predecessor.  Gap levels are local and survive truncation, sums and lexicographic
products only need list surgery, and the order type is read back off the list
by counting the points of level >= d after the last point of level > d.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

K_DIGITS = 5
TRUNC = 5


def ordinal_code(a, k=K_DIGITS):
    """Digit vector of ``a`` read straight from its terms."""
    digits = [0] * k
    for e, c in a.terms:
        digits[k - 1 - int(e)] = c
    return tuple(digits)


def _trailing_zero_count(code):
    n = 0
    for d in reversed(code):
        if d:
            break
        n += 1
    return n


@lru_cache(maxsize=None)
def canonical_levels(code, m=TRUNC):
    """Gap levels of ``{b < a}`` (``a`` given by its digit vector) plus the top point."""
    k = len(code)
    members = [v for v in itertools.product(range(m), repeat=k) if v < code]
    levels = []
    prev = None
    for v in members:
        if prev is None:
            levels.append(0)
        else:
            succ = prev[:-1] + (prev[-1] + 1,)
            levels.append(0 if succ == v else _trailing_zero_count(v))
        prev = v
    if prev is None:
        levels.append(0)
    else:
        succ = prev[:-1] + (prev[-1] + 1,)
        levels.append(0 if succ == code else _trailing_zero_count(code))
    return np.array(levels, dtype=np.int64)


def union_levels(first, second):
    """Gap levels of ``first`` followed by ``second``."""
    return np.concatenate([first, second[1:]]) if len(second) > 1 else first.copy()


def product_levels(index, copies):
    """Gap levels of the lexicographic product: ``index`` many copies of ``copies``."""
    if len(index) == 1 or len(copies) == 1:
        return np.zeros(1, dtype=np.int64)
    lead = int(copies.max())
    n_idx = len(index) - 1
    block = np.tile(copies[:-1], (n_idx, 1))
    starts = np.where(index[:-1] == 0, copies[-1], lead + index[:-1])
    starts[0] = 0
    block[:, 0] = starts
    top = copies[-1] if index[-1] == 0 else lead + index[-1]
    return np.concatenate([block.ravel(), [top]])


def type_of_levels(levels):
    """Cantor normal form of the type of a materialised well-order, as ``[(exp, coef)]``."""
    levels = np.asarray(levels)
    top = len(levels) - 1
    body = levels[1:]
    terms = []
    for d in range(int(levels.max()), -1, -1):
        higher = np.nonzero(body > d)[0]
        start = higher[-1] + 1 if len(higher) else 0
        coef = int(np.count_nonzero(body[start:] >= d)) if top >= 1 else 0
        if coef:
            terms.append((d, coef))
    return terms


def oracle_add(a, b):
    return type_of_levels(union_levels(canonical_levels(ordinal_code(a)),
                                       canonical_levels(ordinal_code(b))))


def oracle_mul(a, b):
    """``b`` copies of ``a``."""
    return type_of_levels(product_levels(canonical_levels(ordinal_code(b)),
                                         canonical_levels(ordinal_code(a))))


@lru_cache(maxsize=None)
def _code_ranks(k=K_DIGITS, m=TRUNC):
    return {v: i for i, v in enumerate(sorted(itertools.product(range(m), repeat=k)))}


def oracle_compare(a, b):
    ranks = _code_ranks()
    ra, rb = ranks[ordinal_code(a)], ranks[ordinal_code(b)]
    return (ra > rb) - (ra < rb)


def as_terms(a):
    return [(int(e), c) for e, c in a.terms]


# finite linear orders

def order_preserving_injection_exists(small, large):
    """Brute force over increasing injections between two finite chains (given as sizes)."""
    return any(True for _ in itertools.combinations(range(large), small))


def finite_typewise_decomposable(n):
    """Search all index sizes and block-size assignments for a typewise decomposition of n."""
    for index_size in range(0, n + 1):
        for blocks in itertools.product(range(0, n + 1), repeat=index_size):
            if sum(blocks) != n:
                continue
            if n <= index_size:
                continue
            if any(n <= b for b in blocks):
                continue
            return True
    return False


# polarised relation on finite grids

def naive_profile(table, colors):
    """best[k][r]: most columns monochromatic in colour k over some r rows.

    Enumerates every subset of the shorter side of the grid directly.
    """
    table = [list(row) for row in np.asarray(table).tolist()]
    rows = len(table)
    cols = len(table[0]) if rows else 0
    best = [[cols] + [0] * rows for _ in range(colors)]
    if rows <= cols:
        for size in range(1, rows + 1):
            for subset in itertools.combinations(range(rows), size):
                for k in range(colors):
                    common = sum(1 for j in range(cols) if all(table[i][j] == k for i in subset))
                    if common > best[k][size]:
                        best[k][size] = common
    else:
        for size in range(1, cols + 1):
            for subset in itertools.combinations(range(cols), size):
                for k in range(colors):
                    count = sum(1 for i in range(rows) if all(table[i][j] == k for j in subset))
                    for r in range(1, count + 1):
                        if size > best[k][r]:
                            best[k][r] = size
    return best


def naive_has_witness(table, colors, targets):
    prof = naive_profile(table, colors)
    rows = np.asarray(table).shape[0]
    for k, (r, s) in enumerate(targets):
        if r <= rows and prof[k][r] >= s:
            return True
    return False


def naive_holds(rows, cols, colors, targets):
    """Enumerate every colouring; True iff each has a monochromatic target rectangle."""
    for cells in itertools.product(range(colors), repeat=rows * cols):
        table = np.array(cells, dtype=np.int64).reshape(rows, cols)
        if not naive_has_witness(table, colors, targets):
            return False
    return True


def naive_sweep(rows, cols):
    """Truth table of every two-colour target shape on an R x C source.

    Returns ``{((r0, s0), (r1, s1)): holds}`` for all targets with r <= R and s <= C.
    Each colouring is enumerated once; its profile then answers all targets.
    """
    profiles = []
    for cells in itertools.product(range(2), repeat=rows * cols):
        table = np.array(cells, dtype=np.int64).reshape(rows, cols)
        profiles.append(naive_profile(table, 2))
    prof = np.array(profiles, dtype=np.int64)  # (colourings, 2, rows+1)
    shapes = [(r, s) for r in range(rows + 1) for s in range(cols + 1)]
    out = {}
    for a in shapes:
        ok_a = prof[:, 0, a[0]] >= a[1]
        for b in shapes:
            out[(a, b)] = bool(np.all(ok_a | (prof[:, 1, b[0]] >= b[1])))
    return out


# ordinary partition relation on finite sets

def naive_homogeneous(colour_of, n, arity, targets):
    """Lexicographically least homogeneous set, trying sizes per colour by brute force.

    ``targets[c]`` is the size wanted in colour ``c``.  Returns ``(set, colour)`` or None.
    """
    found = []
    for c, t in enumerate(targets):
        for cand in itertools.combinations(range(n), t):
            if all(colour_of(s) == c for s in itertools.combinations(cand, arity)):
                found.append((cand, c))
                break
    if not found:
        return None
    return min(found)


# finite order terms, materialised without the normaliser

def materialize(term):
    """Elements of a finite term as a sorted list of comparable keys."""
    from ordpart.ordertype import Fin, Ord, Prod, Reverse, Sum

    if isinstance(term, Fin):
        return [(i,) for i in range(term.n)]
    if isinstance(term, Ord):
        return [(i,) for i in range(int(term.value))]
    if isinstance(term, Sum):
        return [(i, k) for i, part in enumerate(term.parts) for k in materialize(part)]
    if isinstance(term, Prod):
        return [(q, a) for q in materialize(term.right) for a in materialize(term.left)]
    if isinstance(term, Reverse):
        inner = materialize(term.term)
        return [(-i,) for i in range(len(inner) - 1, -1, -1)]
    raise ValueError("infinite term")


def embeds_brute(small_keys, large_keys):
    """Search increasing injections between two materialised finite orders."""
    for image in itertools.combinations(range(len(large_keys)), len(small_keys)):
        if all(large_keys[image[i]] < large_keys[image[i + 1]] for i in range(len(image) - 1)):
            return True
    return False
