"""The standard quadratic transformation of the plane is not stable.

Run with ``python3 demos/cremona_instability.py``.
"""
import warnings

from surfdyn import cremona as cr
from surfdyn.growth import classify
from surfdyn.io import Catalog

C = cr.standard_cremona()
print("sigma =", C.describe())
print("sigma(1:2:3) =", tuple(cr.evaluate(C, (1, 2, 3))))
print("sigma is undefined at the coordinate points:",
      [cr.evaluate(C, p) is None for p in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]])

# (b*c : a*c : a*b) composed with itself collapses to the identity after the
# common factor a*b*c is removed: the degree sequence alternates.
print("sigma o sigma =", cr.compose_reduce(C, C).describe())
print("deg sigma^n, n = 1..8:", cr.degree_sequence(C, 8))

cert = cr.stability_check(C, C, 10)
print("stability:", cert.describe())
print("  the line a=0 is squashed onto (1:0:0), where sigma is undefined;")
print("  so (sigma^2)^* = id differs from (sigma^*)^2 = [4].")

# The lattice model still carries P = [2]; its verdict is flagged formal.
M = Catalog()["cremona"].pullback()
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    g = classify(M.P, M.stability)
print(f"formal verdict from P = [2]: rho = {g.rho.exact}, gk = {g.gk_verdict.value}, formal = {g.formal}")
for w in caught:
    print("  warning:", w.message)
