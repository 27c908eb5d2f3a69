"""Three-stage, third-order methods: conditions, closed-form family, named members."""

from fractions import Fraction as Fr

from rkderive.algebra import format_poly
from rkderive.conditions import generate_conditions
from rkderive.solver import ExcludedLocusError, solve_order3_family

cs = generate_conditions(3, 3)
print(f"{len(cs)} order conditions for s = p = 3:")
for label, eq in zip(cs.labels, cs.equations):
    print(f"  [{label}]  {format_poly(eq)} = 0")

fam = solve_order3_family()
print("\nfamily in the free nodes c2, c3:")
for k, v in fam.solution.items():
    print(f"  {k} = {v}")
print("excluded where:", ", ".join(format_poly(d) + " = 0" for d in fam.excluded))

for c2, c3 in [(Fr(1, 2), Fr(1)), (Fr(1, 3), Fr(2, 3)), (Fr(-1), Fr(1))]:
    vals = fam.specialize({"c2": c2, "c3": c3}).values()
    print(f"\nc2={c2}, c3={c3}:", {k: str(v) for k, v in vals.items()})

try:
    fam.specialize({"c2": Fr(2, 3), "c3": Fr(2, 3)})
except ExcludedLocusError as exc:
    print("\nas expected:", exc)
