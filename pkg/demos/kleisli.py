"""Quantum distributions, the graded monad and composing certificates."""

import random

from qhom.catalog import catalog_get
from qhom.qmonad import (
    cert_to_kleisli,
    eta,
    kleisli_compose,
    lift,
    mu,
    pushforward,
    relabel_dim,
    unit_inner,
    unit_outer,
    verify_qdist,
    verify_qhom,
)
from qhom.sampling import random_qdist
from qhom.structures import complete_graph, identity

k3 = complete_graph(3)
rng = random.Random(1)

p = random_qdist(2, k3.universe, rng, k3)
print("a random 2-dimensional distribution on K3:")
for x, m in p.items():
    print("  ", x, m)
print("valid:", verify_qdist(p).passed)
print("eta(v1):", eta("v1", k3))

# both unit laws come back to p after forgetting the trivial grade
print("mu . unit_outer = id:", relabel_dim(mu(unit_outer(p)), 2) == p)
print("mu . unit_inner = id:", relabel_dim(mu(unit_inner(p)), 2) == p)

q = random_qdist(2, k3.universe, rng, k3)
mid = random_qdist(2, [p, q], rng)
top = random_qdist(1, [mid, random_qdist(2, [q], rng)], rng)
print("flattened grade:", mu(mid).dim)
print("associativity:", mu(pushforward(mu, top)) == mu(mu(top)))

rot = catalog_get("k3-rotation").payload
col = catalog_get("c5-colouring").payload
both = kleisli_compose(col, rot)
print("C5 -> K3 -> K3 composite verifies:", verify_qhom(both).passed)

sq = catalog_get("magic-square-cert").payload
same = kleisli_compose(sq, lift(identity(sq.target)))
print("composing with an identity lift changes nothing:", same == sq)
h = cert_to_kleisli(sq)
print("as a Kleisli map, variable A goes to", h("A"))
