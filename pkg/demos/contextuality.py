"""Strong contextuality as failure of a homomorphism, and quantum witnesses for it."""

from qhom.catalog import catalog_get
from qhom.translations import (
    check_state_independent_witness,
    check_state_witness,
    empirical_to_csp,
    is_strongly_contextual,
)

for name in ("pr-box", "ghz-model", "magic-square-model", "bell-full-support"):
    e = catalog_get(name).payload
    sizes = [len(c.support) for c in e.contexts]
    print(f"{name:20s} contexts={len(e.contexts)} supports={sizes} strongly contextual={is_strongly_contextual(e)}")

# the PR box as a CSP: one constraint per context
k = empirical_to_csp(catalog_get("pr-box").payload)
for c in k.constraints:
    print("  ", c.scope, sorted(c.allowed))

ghz = catalog_get("ghz-model").payload
psi = catalog_get("ghz-state").payload
pvms = catalog_get("ghz-pvms").payload

# GHZ needs its state: forbidden outcomes vanish on psi, not as operators
print("GHZ, with state:", check_state_witness(ghz, psi, pvms).passed)
print("GHZ, state independent:", check_state_independent_witness(ghz, pvms).passed)

square = catalog_get("magic-square-model").payload
sq_pvms = catalog_get("magic-square-pvms").payload
print("magic square, state independent:", check_state_independent_witness(square, sq_pvms).passed)
