"""Products of subspaces of k(t) and the recurrence f(n) = f(n-1) + f(m(n))."""
from surfdyn import curves
from surfdyn.io import Catalog

cat = Catalog()
for name in ("curve-constant", "curve-doubling", "curve-linear", "curve-nonmonomial"):
    e = cat[name]
    r = curves.product_growth(e.family(), min(e.family_spec()["n_max"], 10))
    print(f"{name}: e_n = {r.e}")
    print(f"  d_n = {r.d}, violations = {r.violations}")

print()
for label, rule, n in [("m = ceil(sqrt n)", curves.sqrt_rule, 10**5),
                       ("m = n - 1", curves.shift_rule(1), 60),
                       ("m = n - 2", curves.shift_rule(2), 60)]:
    s = curves.recurrence_lower_bound(1, rule, n)
    print(f"{label:17} n = {n:>6}: local exponent {s.exponent:8.4f}, rate {s.rate:.10f}")
print("ceil(sqrt n) gives f ~ n^2 / log n; the local exponent creeps toward 2.")
