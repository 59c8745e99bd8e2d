"""The magic square: no classical assignment, a perfect two-qubit-pair strategy."""

from qhom.catalog import catalog_get
from qhom.games import check_perfect, strategy_from_cert, verify_special_form, winning_probability
from qhom.qmonad import verify_qhom
from qhom.structures import find_homomorphism
from qhom.translations import bcs_brute_force_satisfiable, verify_operator_solution

bcs = catalog_get("magic-square-bcs").payload
a = catalog_get("magic-square-A").payload
b = catalog_get("magic-square-B").payload

print("variables:", " ".join(bcs.variables))
for i, c in enumerate(bcs.constraints):
    print(f"  R{i} on {c.scope}: {len(c.satisfying())} satisfying assignments")

# rows multiply to +1, columns too except the last one
print("classically satisfiable:", bcs_brute_force_satisfiable(bcs))
print("homomorphism A -> B:", find_homomorphism(a, b))

sol = catalog_get("magic-square-opsol").payload
print("Pauli operator solution passes:", verify_operator_solution(bcs, sol).passed)

cert = catalog_get("magic-square-cert").payload
rep = verify_qhom(cert)
print(f"d={cert.dim} certificate:", rep.summary())

s = strategy_from_cert(cert)
lo, mean = winning_probability(s, a, b)
print("winning probability: min", lo, "mean", mean)
print("perfect:", check_perfect(s, a, b).passed)
print(verify_special_form(s, a, b).summary())
