"""Emit src/janossy/_dop853.py: the Dormand-Prince 8(5,3) tableau as literals.

The constants are taken from scipy's DOP853 implementation (Hairer & Wanner's
published coefficients) so that both kernels can run without scipy.
"""
import sys

from scipy.integrate._ivp import dop853_coefficients as co

n = co.N_STAGES
lines = ['"""Dormand-Prince 8(5,3) tableau (generated by scripts/gen_dop853.py)."""', "",
         f"N_STAGES = {n}", "", f"C = {[float(x) for x in co.C[:n]]!r}", "", "A = ["]
for i in range(n):
    lines.append(f"    {[float(x) for x in co.A[i, :n]]!r},")
lines += ["]", "", f"B = {[float(x) for x in co.B]!r}", "",
          f"E3 = {[float(x) for x in co.E3]!r}", "", f"E5 = {[float(x) for x in co.E5]!r}", ""]
out = "\n".join(lines)
if len(sys.argv) > 1:
    open(sys.argv[1], "w").write(out)
else:
    print(out)
