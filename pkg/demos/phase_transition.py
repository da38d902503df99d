"""The Riesz family -sign(s) * theta^(-s) crosses from CPD to not-CPD.

For s > 0 these geodesic kernels are singular and (on the projective
plane) conditionally positive definite; pushing s negative eventually
produces a certified negative coefficient.  The scan brackets the
truncated crossing point by bisection.  The bracket depends on the
truncation degree N and creeps upward as N grows, which the printout
makes visible.
"""

from zonalpd.posdef import scan_riesz
from zonalpd.spaces import make_space

rp2 = make_space("RP2")

for N in (12, 24, 48):
    res = scan_riesz(rp2, "geodesic", -0.9, -0.3, step=0.1,
                     N=N, bisect_tol=0.02, digits=30)
    lo, hi = res.bracket
    print(f"RP2, N={N:2d}: last not-CPD s = {lo:+.4f}, "
          f"first all-nonnegative s = {hi:+.4f}")

print()
print("grid verdicts at N=48:")
res = scan_riesz(rp2, "geodesic", -0.9, -0.3, step=0.1, N=48, digits=30)
for s, v, fn in zip(res.s_values, res.verdicts, res.first_negatives):
    extra = f"  (first negative at n={fn})" if fn is not None else ""
    print(f"  s={s:+.2f}  {v.classification}{extra}")

print()
print("RP3 behaves the same way, with the crossing much closer to 0:")
res = scan_riesz(make_space("RP3"), "geodesic", -0.5, 0.0, step=0.125,
                 N=48, bisect_tol=0.125, digits=30)
print(f"  bracket {res.bracket}, so CPD holds from s = {res.cpd_onset} on")
