"""Chordal Riesz kernels certify positive; geodesic ones need not.

The chordal distance is itself a positive definite construction, so
chi^(-s) keeps nonnegative coefficients on every catalog space.  The
geodesic distance has no such protection: on CP2 the kernel +theta
(s = -1) already fails.  On the sphere the same kernel survives, but only
because the even coefficients vanish identically there; the report marks
them "0" rather than "+".
"""

from zonalpd.kernels import parse_kernel
from zonalpd.spaces import make_space
from zonalpd.transform import certify_coefficients

N = 12


def show(space_name: str, kernel_text: str) -> None:
    sp = make_space(space_name)
    rep = certify_coefficients(sp, parse_kernel(kernel_text, sp), N=N,
                               target_digits=30)
    signs = " ".join(f"{e.sign:>2s}" for e in rep.entries)
    print(f"  {space_name:4s} {kernel_text:22s} [{signs}]")


print(f"certified signs for n = 0 .. {N}:")
print()
print("chordal, s = 1:")
for name in ("S2", "RP2", "CP2", "HP2"):
    show(name, "riesz-chordal:s=1")

print()
print("geodesic, s = -1 (the kernel is +theta, bounded):")
for name in ("S2", "S4", "RP2", "CP2"):
    show(name, "riesz-geodesic:s=-1")

print()
print("on S2 and S4 the zeros at even n >= 2 are structural: theta(-t)")
print("and -theta(t) differ by a constant when alpha = beta, so those")
print("coefficients cancel exactly (the n = 0 term is just the negative")
print("mean).  CP2 has alpha != beta and genuine negative coefficients")
print("instead.")
