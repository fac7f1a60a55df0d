"""Compare the symmetrizer sum with the product M and its reciprocal.

    python demos/hzero.py [depth]
"""
import sys

from affsatake import cartan_type
from affsatake.spherical import compareHZero

D = int(sys.argv[1]) if len(sys.argv) > 1 else 6
for name in ("A1", "A2"):
    ct = cartan_type(name)
    cmp = compareHZero(ct, D)
    print(f"{name}, depth {D}: central={cmp.central} "
          f"== M: {cmp.matches_product}   == 1/M: {cmp.matches_reciprocal}")
    for n in range(1, D // ct.coxeter_number + 1):
        mu = -ct.C * n
        print(f"   e^{{-{n}c}}:  symmetrizer {cmp.symmetrizer.coeff(mu)!s:<30}"
              f" M {cmp.product.coeff(mu)!s}")
