"""Growth data, GK verdicts and Riemann-Roch sequences across the catalog."""
import warnings

from surfdyn.growth import classify
from surfdyn.hilbert import fit_growth, hilbert_sequence
from surfdyn.io import Catalog

warnings.simplefilter("ignore")
cat = Catalog()

print(f"{'entry':18} {'rho':>4} {'j':>2} {'case':24} {'geometric':15} {'gk':12} {'h fit':>14}")
for e in cat.of_kind("map"):
    M = e.pullback()
    g = classify(M.P, M.stability, e.spec.get("fibration", False))
    n_max = 60 if g.rho.is_one() else 20
    seq = hilbert_sequence(e.lattice(), M, e.ample(), n_max)
    rho_h, j_h = fit_growth(seq.h[1:])
    tag = " (formal)" if g.formal else ""
    print(f"{e.name:18} {g.rho.describe().split()[0]:>4} {g.j:>2} {g.case.value:24} "
          f"{g.geometric.value:15} {g.gk_verdict.value:12} {f'({rho_h:.3f}, {j_h})':>14}{tag}")

print()
print("For rho = 1 the h-sequence grows like n^(j+2), and GK = j + 3.")
print("For rho > 1 it grows like rho^(2n): (D_n.D_n) dominates and the ring has exponential growth.")

e = cat["fibration-j1"]
seq = hilbert_sequence(e.lattice(), e.pullback(), e.ample(), 6)
print()
print("fibration-j1, D = F + S on P^1 x P^1:")
print(" n  D_n       (D_n.D_n)  h(n)")
for n, coeffs, dd, _, h in seq.rows():
    print(f"{n:2}  {str(coeffs):9} {dd:9}  {h}")
