"""Measured convergence rates for catalogue methods on y' = y and y' = x + y."""

from fractions import Fraction as Fr

from rkderive.harness import PROBLEMS, estimate_order
from rkderive.tableau import catalogue, embed_lower_order

cat = catalogue()
methods = {k: cat[k] for k in ("improved-euler", "kutta3", "heun3", "rk4", "kutta38")}
methods["3/8 embedded, r1=1/6"] = embed_lower_order(cat["kutta38"]).pair(r1=Fr(1, 6)).hat_method
methods["rk4, b1-1/100, b2+1/100"] = cat["rk4"].perturbed(2, Fr(1, 100)).perturbed(1, Fr(-1, 100))

for problem in ("exp", "linear"):
    print(f"problem {problem}")
    for name, t in methods.items():
        rep = estimate_order(t, PROBLEMS[problem], Fr(1, 10), 5)
        print(f"  {name:<26} observed {rep.observed:.3f}")
