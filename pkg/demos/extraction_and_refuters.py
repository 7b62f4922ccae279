"""Rectangle extraction on finite truncations, and the finite refuters."""

import numpy as np

from ordpart.constructions import TupleColoring, pattern_rectangle_pipeline, power_sum_driver
from ordpart.ordertype import Fin, OmegaStar, Sum
from ordpart.partition import Coloring, verify_witness
from ordpart.witnesses import (
    build_E, desk_instance, orr_shuffle, refute_one_fiber, refute_zero_rectangle,
)

rng = np.random.default_rng(7)

c = TupleColoring.random(1, 1, 20, rng)
rep = pattern_rectangle_pipeline(c, 2)
print("pattern pipeline:", rep.colour, rep.witness, verify_witness(c.as_coloring(), rep.witness))

# w*2 x w*2 truncated at 20 digits, colour 1 on one diagonal and a little noise;
# some seeds leave too little room and are reported as insufficient
for seed in range(4):
    r = np.random.default_rng(seed)
    table = (r.random((40, 40)) < 0.003).astype(np.int64)
    table[:20, :20] |= np.eye(20, dtype=np.int64)
    res = power_sum_driver(2, 2, 2, Coloring.from_table(table, 2), 20)
    print(f"power-sum driver, seed {seed}:", res.status, res.witness.shape if res.witness else res.failing_block,
          "steps", [s.block for s in res.trace if s.invariant])

dec, scale, chain = desk_instance()
E = build_E(chain, scale, dec)
everything = [(n, k) for n in range(dec.blocks) for k in range(dec.depth)]
print("refute {all rows} x Y:", refute_zero_rectangle(E, range(8), everything).to_json()["pair"])
print("refute {3} x block 2:", refute_one_fiber(E, 3, [(2, k) for k in range(dec.depth)]).pair)

sm = orr_shuffle(Sum([Fin(2), OmegaStar]), [3, 1, 2, 4, 1])
print("shuffle 2 + w* onto blocks 3,1,2,4,1: sigma", sm.sigma, "missed", sm.missed, "bound", sm.bound)
