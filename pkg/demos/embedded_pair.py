"""Third-order weights sharing the stages of the 3/8 rule, plus one extra stage."""

from fractions import Fraction as Fr

from rkderive.tableau import catalogue, embed_lower_order, to_latex

fam = embed_lower_order(catalogue()["kutta38"])
print("embedded weights, free parameter r1:")
for k, v in fam.family.solution.items():
    print(f"  {k} = {v}")

pair = fam.pair(r1=Fr(1, 6))
full, hat = pair.verify()
print("\nextended scheme order 4:", full.satisfied, "| embedded weights order 3:", hat.satisfied)
print(to_latex(pair.extended))
