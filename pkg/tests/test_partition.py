import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ordpart.partition import (
    BudgetExceeded, Coloring, RectangleWitness, RelationQuery, WitnessError, find_homogeneous,
    holds, parse_targets, pigeonhole_bound, verify_witness,
)

from oracles import naive_has_witness, naive_holds


def grid(rows, cols, fn, colors=2):
    return Coloring.from_table(np.fromfunction(fn, (rows, cols), dtype=int).astype(int), colors)


def test_verify_examples():
    zero = Coloring.from_table(np.zeros((3, 3), dtype=int), 2)
    assert verify_witness(zero, RectangleWitness((0, 1), (0, 2), 0))
    diag = grid(2, 2, lambda i, j: i == j)
    assert not verify_witness(diag, RectangleWitness((0,), (0,), 0))
    with pytest.raises(WitnessError):
        verify_witness(diag, RectangleWitness((0, 2), (0,), 0))


def test_verify_checks_target_sizes():
    zero = Coloring.from_table(np.zeros((3, 3), dtype=int), 2)
    q = RelationQuery.uniform(3, 3, 2, 3, 2)
    assert not verify_witness(zero, RectangleWitness((0, 1), (0, 2), 0), q)
    assert verify_witness(zero, RectangleWitness((0, 1), (0, 1, 2), 0), q)


def test_find_homogeneous_examples():
    zero = Coloring.from_table(np.zeros((4, 4), dtype=int), 2)
    w = find_homogeneous(zero, RelationQuery(4, 4, ((4, 4), (1, 1))))
    assert w == RectangleWitness((0, 1, 2, 3), (0, 1, 2, 3), 0)

    parity = grid(4, 4, lambda i, j: (i + j) % 2)
    w = find_homogeneous(parity, RelationQuery.uniform(4, 4, 2, 2, 2))
    assert w is not None and verify_witness(parity, w)


def test_less_than_grid_has_a_witness():
    # row 1 of c(i,j) = [i<j] is all zero, so a 1x2 colour-0 rectangle exists
    less = grid(2, 2, lambda i, j: i < j)
    q = RelationQuery(2, 2, ((1, 2), (2, 1)))
    assert less.table.tolist() == [[0, 1], [0, 0]]
    assert find_homogeneous(less, q) == RectangleWitness((1,), (0, 1), 0)


def test_antidiagonal_grid_has_no_witness():
    anti = grid(2, 2, lambda i, j: i != j)
    assert find_homogeneous(anti, RelationQuery(2, 2, ((1, 2), (2, 1)))) is None


def test_holds_examples():
    q = RelationQuery(2, 2, ((1, 2), (2, 1)))
    res = holds(q)
    assert not res.holds
    assert res.counterexample.table.tolist() == [[0, 1], [1, 0]]
    assert find_homogeneous(res.counterexample, q) is None
    assert holds(RelationQuery(1, 1, ((1, 1), (1, 1)))).holds
    assert holds(RelationQuery.uniform(7, 3, 2, 2, 2)).holds


def test_pigeonhole_examples():
    assert pigeonhole_bound(2, 1, 2) == 7
    assert pigeonhole_bound(1, 1, 2) == 2
    assert holds(RelationQuery.uniform(2, 2, 2, 2, 1)).holds
    for m, n in [(1, 1), (2, 3), (3, 2)]:
        assert pigeonhole_bound(m, n, 1) == 1
    with pytest.raises(ValueError):
        pigeonhole_bound(0, 1, 2)


def test_pigeonhole_bound_for_three_row_target():
    n_rows = pigeonhole_bound(1, 2, 3)
    assert holds(RelationQuery.uniform(n_rows, 3, 3, 3, 1)).holds
    assert not holds(RelationQuery.uniform(n_rows - 1, 3, 3, 3, 1)).holds


def test_budget_exceeded_reports_progress():
    with pytest.raises(BudgetExceeded) as info:
        holds(RelationQuery.uniform(8, 4, 2, 3, 2), budget=5)
    assert info.value.partial["nodes"] == 6
    assert info.value.partial["deepest_prefix"]


def test_parallel_matches_serial():
    q = RelationQuery.uniform(6, 3, 2, 2, 2)
    a, b = holds(q, workers=1), holds(q, workers=2)
    assert a.holds == b.holds
    assert a.counterexample == b.counterexample


def test_json_roundtrip():
    c = grid(2, 3, lambda i, j: (i * j) % 2)
    assert Coloring.from_json(json.dumps(c.to_json())) == c
    q = RelationQuery(2, 2, ((1, 2), (2, 1)))
    assert q.to_json() == {"rows": 2, "cols": 2, "targets": [[1, 2], [2, 1]]}
    assert RelationQuery.from_json(q.to_json()) == q
    w = RectangleWitness((1, 0), (2,), 1)
    assert RectangleWitness.from_json(w.to_json()) == w


def test_parse_targets():
    assert parse_targets("1 2 / 2 1") == ((1, 2), (2, 1))
    assert parse_targets("2 / 2", colors=3) == ((2, 2),) * 3
    with pytest.raises(ValueError):
        parse_targets("1 2 / 2")


def test_coloring_validation():
    with pytest.raises(ValueError):
        Coloring(1, 2, 2, [[0, 2]])


tables = st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=200, deadline=None)
@given(tables, st.data())
def test_find_homogeneous_sound_and_complete(table, data):
    c = Coloring.from_table(table, 2)
    targets = tuple((data.draw(st.integers(0, c.rows)), data.draw(st.integers(0, c.cols))) for _ in range(2))
    q = RelationQuery(c.rows, c.cols, targets)
    w = find_homogeneous(c, q)
    assert (w is not None) == naive_has_witness(c.table, 2, targets)
    if w is not None:
        assert verify_witness(c, w, q)


small_queries = st.tuples(st.integers(1, 4), st.integers(1, 3)).flatmap(
    lambda rc: st.tuples(st.just(rc[0]), st.just(rc[1]),
                         st.tuples(st.tuples(st.integers(1, rc[0]), st.integers(1, rc[1])),
                                   st.tuples(st.integers(1, rc[0]), st.integers(1, rc[1])))))


@settings(max_examples=60, deadline=None)
@given(small_queries)
def test_holds_agrees_with_naive_enumeration(query):
    rows, cols, targets = query
    assert holds(RelationQuery(rows, cols, targets)).holds == naive_holds(rows, cols, 2, targets)


@settings(max_examples=80, deadline=None)
@given(small_queries, st.sampled_from(["row", "col", "shrink0", "shrink1"]))
def test_monotonicity(query, how):
    rows, cols, targets = query
    if not holds(RelationQuery(rows, cols, targets)).holds:
        return
    (r0, s0), (r1, s1) = targets
    if how == "row":
        bigger = RelationQuery(rows + 1, cols, targets)
    elif how == "col":
        bigger = RelationQuery(rows, cols + 1, targets)
    elif how == "shrink0":
        bigger = RelationQuery(rows, cols, ((max(r0 - 1, 0), s0), (r1, s1)))
    else:
        bigger = RelationQuery(rows, cols, ((r0, s0), (r1, max(s1 - 1, 0))))
    assert holds(bigger).holds


@settings(max_examples=80, deadline=None)
@given(small_queries)
def test_colour_symmetry(query):
    rows, cols, targets = query
    q = RelationQuery(rows, cols, targets)
    swapped = RelationQuery(rows, cols, targets[::-1])
    a, b = holds(q), holds(swapped)
    assert a.holds == b.holds
    if not a.holds:
        flipped = Coloring.from_table(1 - a.counterexample.table, 2)
        assert find_homogeneous(flipped, swapped) is None
