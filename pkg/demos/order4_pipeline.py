"""Four stages, order four: 19 conditions, interreduction, the c4 = 1 proof, the family."""

from fractions import Fraction as Fr

from rkderive.algebra import format_poly
from rkderive.conditions import generate_conditions
from rkderive.solver import order4_basis, solve_order4_equal_c, solve_order4_family

print("raw conditions:", len(generate_conditions(4, 4)))
basis, c4_is_one = order4_basis()
print("after the row-sum substitution and interreduction:")
for p in basis:
    print("  ", format_poly(p))
print("c4 - 1 lies in the ideal:", c4_is_one)

fam = solve_order4_family()
print("\ngeneral family (free c2, c3):")
for k in ("b1", "b2", "b3", "b4", "a32", "a42", "a43"):
    print(f"  {k} = {fam[k]}")
print("3/8 rule from c2=1/3, c3=2/3:",
      {k: str(v) for k, v in fam.specialize({"c2": Fr(1, 3), "c3": Fr(2, 3)}).values().items()})

eq = solve_order4_equal_c()
print("\nc2 = c3 = u, one free weight r1:")
for k, v in eq.solution.items():
    print(f"  {k} = {v}")
print("r1 = 1/3 gives the classic method:",
      {k: str(v) for k, v in eq.specialize({"r1": Fr(1, 3)}).values().items()})
