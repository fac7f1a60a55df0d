"""Build theta_mu in the affine Hecke algebra along several conjugation paths
and check that every path gives the same element.

    python demos/theta_paths.py [count] [seed]
"""
import random
import sys

from affsatake import cartan_type
from affsatake import hecke as H

count = int(sys.argv[1]) if len(sys.argv) > 1 else 5
rng = random.Random(int(sys.argv[2]) if len(sys.argv) > 2 else 0)
ct = cartan_type("A2")
for _ in range(count):
    mu = H.sampleMultiPath(ct, rng)
    runs = H.thetaPaths(ct, mu)
    same = all(r.element == runs[0].element for r in runs)
    print(f"mu={tuple(mu)}  paths={len(runs)}  terms={len(runs[0].element.terms)}  agree={same}")
