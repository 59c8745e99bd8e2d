"""Graph homomorphisms as boolean constraint systems."""

from fractions import Fraction

from qhom.linalg import Matrix
from qhom.qmonad import QHomCert
from qhom.structures import complete_graph, cycle_graph, find_homomorphism, graph
from qhom.translations import (
    bcs_brute_force_satisfiable,
    graph_pair_to_bcs,
    verify_graph_qhom,
)

for g, h, label in [
    (complete_graph(2), complete_graph(2), "K2 -> K2"),
    (cycle_graph(5), complete_graph(3), "C5 -> K3"),
    (complete_graph(3), complete_graph(2), "K3 -> K2"),
]:
    bcs = graph_pair_to_bcs(g, h)
    print(f"{label}: {len(bcs.variables)} variables, {len(bcs.constraints)} constraints,",
          "satisfiable" if bcs_brute_force_satisfiable(bcs) else "unsatisfiable",
          "| homomorphism:", find_homomorphism(g, h) is not None)

# an edge u-v sent to K4 with non-commuting qubit measurements:
# fine for the weaker graph notion, not for the commuting one
def ket(v):
    c = Matrix.column(v)
    return (c @ c.H).scale(Fraction(1) / (c.H @ c)[0, 0])

i2 = Matrix.identity(2)
p0, pp = ket([1, 0]), ket([1, 1])
g = graph(["u", "v"], [("u", "v")])
k4 = complete_graph(4)
cert = QHomCert(2, g, k4, {("u", "v1"): p0, ("u", "v2"): i2 - p0, ("v", "v3"): pp, ("v", "v4"): i2 - pp})
print(verify_graph_qhom(g, k4, cert).summary())
