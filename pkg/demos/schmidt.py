"""Shrinking a strategy to the support of its state, and swapping in a maximally entangled state."""

import numpy as np

from qhom.catalog import catalog_get
from qhom.games import (
    check_perfect,
    embed_strategy,
    probability_table,
    schmidt_reduce,
    to_maximally_entangled,
    verify_special_form,
)

a = catalog_get("magic-square-A").payload
b = catalog_get("magic-square-B").payload
s = catalog_get("magic-square-strategy").payload

big = embed_strategy(s, 8, 8, np.random.default_rng(1))
small = schmidt_reduce(big)
print("embedded:", (big.dim_a, big.dim_b), "reduced:", (small.dim_a, small.dim_b))

t0, t1 = probability_table(s, a, b), probability_table(small, a, b)
gap = max(abs(complex(t0[q][k]) - complex(t1[q][k])) for q in t0 for k in t0[q])
print(f"largest probability change: {gap:.2e}")

w = catalog_get("magic-square-weighted-strategy").payload
print("weighted state is perfect:", check_perfect(w, a, b).passed)
print("but not of special form:", not verify_special_form(w, a, b).passed)
m = to_maximally_entangled(w, a, b)
print("after replacing the state:", verify_special_form(m, a, b).passed)
