"""A stable quadratic map with dynamical degree 2 and three unbalanced points.

sigma = tau o phi, where tau is the standard quadratic transformation and
phi(a, b, c) = (a + b, b + c, a + c).  Its iterates double in degree, the
orbits of contracted curves never hit a fundamental point, and the points
blown down by sigma^-1 are undefined for every forward iterate checked.
"""
from surfdyn import cremona as cr
from surfdyn.growth import classify
from surfdyn.hilbert import fit_growth, hilbert_sequence
from surfdyn.io import Catalog

S, Si = cr.tau_phi(), cr.tau_phi_inverse()
print("sigma    =", S.describe())
print("sigma^-1 =", Si.describe())
print("degrees:", cr.degree_sequence(S, 5))
cert = cr.stability_check(S, Si, 12)
print("stability:", cert.describe())

scan = cr.unbalanced_scan(S, Si, 10)
for ev in scan.evidence:
    print(f"  p = {tuple(ev.point)}: backward orbit defined for {len(ev.backward_orbit) - 1} steps, "
          f"sigma^k undefined at k = {list(ev.undefined_at)}")
print(" ", scan.caveat)

M = cr.to_pullback_data(S, Si, stability=cert)
g = classify(M.P, M.stability)
print(f"lattice model: P = {M.P}, rho = {g.rho.exact}, gk = {g.gk_verdict.value}")

e = Catalog()["nongeom-rho2"]
seq = hilbert_sequence(e.lattice(), e.pullback(), e.ample(), 20)
rate, _ = fit_growth(seq.h[1:])
print(f"h(n) = C(2^n + 1, 2): fitted rate {rate:.4f}, close to rho^2 = 4")
