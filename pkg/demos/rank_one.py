"""The A1 spherical function: both routes, and the finite slice against the
two-term SL(2) formula.

    python demos/rank_one.py
"""
from fractions import Fraction

from affsatake import cartan_type, satake
from affsatake.spherical import rankOneClosedForm

ct = cartan_type("A1")
lam = ct.coweight(0, [2], 5)
dis, mac, diff = satake(ct, lam, 6)
print("routes differ at:", diff or "nowhere")

print("\ncoefficient of e^mu at q = 3 (depth <= 6):")
for mu, c in dis.series.sorted_items():
    print(f"  c={mu[0]:>3} f={mu[1]:>3}   {c!s:<24} {c.at_v2(Fraction(1, 3))}")

two = rankOneClosedForm(ct, lam, 1)
sl = {mu: c for mu, c in dis.series.terms.items() if mu[0] == 0}
print("\ne^{0c} slice equals J_1 + J_{w_1}:", sl == two)
