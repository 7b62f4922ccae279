"""Deciding small polarised relations and checking certificates."""

import numpy as np

from ordpart.partition import Coloring, RelationQuery, find_homogeneous, holds, pigeonhole_bound, verify_witness

# (2/2) does not arrow (1 2 / 2 1): the checker returns a colouring without a witness
q = RelationQuery(2, 2, ((1, 2), (2, 1)))
res = holds(q)
print(q, "holds" if res.holds else "fails")
print(res.counterexample.table)
print("re-checked:", find_homogeneous(res.counterexample, q) is None)

# the pigeonhole bound for (N / 3) -> (2 / 2)_2
N = pigeonhole_bound(2, 1, 2)
print(f"pigeonhole bound {N}:", holds(RelationQuery.uniform(N, 3, 2, 2, 2)).holds,
      f"/ at {N - 1}:", holds(RelationQuery.uniform(N - 1, 3, 2, 2, 2)).holds)

rng = np.random.default_rng(1)
c = Coloring.from_table(rng.integers(0, 2, size=(6, 6)), 2)
w = find_homogeneous(c, RelationQuery.uniform(6, 6, 2, 3, 2))
print("random 6x6 colouring, 2x3 rectangle:", w, "verified" if w and verify_witness(c, w) else "")
