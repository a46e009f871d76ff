"""Growth of the a = 4 kernel along xi = 1.

In two dimensions the kernel stays below 1 + 2 sqrt(2/pi) and tends to 2
in modulus on the ray xi = 1. In dimension m the same ray grows like
z^{(m-2)/2}; the fitted log-log slopes show it.
"""
import math

import numpy as np

from radkernel.closed_forms import kernel_a4_dim2, kernel_a4_even
from radkernel.methods import fit_exponent
from radkernel.reports import ScanConfig
from radkernel.types import GeomPoint

hb1 = 1 + 2 * math.sqrt(2 / math.pi)
sup = max(abs(kernel_a4_dim2(GeomPoint.from_theta(z, th)).value)
          for z in np.linspace(0, 200, 801) for th in np.linspace(0, math.pi, 61))
print(f"sup |K_4^2| on z <= 200: {sup:.6f}  (bound {hb1:.6f})")
for z in (5.0, 20.0, 50.0, 200.0):
    print(f"|K_4^2({z:g}, 1)| = {abs(kernel_a4_dim2(GeomPoint(z, 1.0)).value):.5f}")

for m in (2, 4, 6, 8):
    cfg = ScanConfig(a=4.0, m=m, z_min=10.0, z_max=100.0, z_count=12, z_log=True, theta_count=1)
    fit = fit_exponent(cfg).exponent_fit
    print(f"m={m}: slope {fit['slope']:.4f} +- {fit['stderr']:.4f}  (expected {(m - 2) / 2:g})")

print("K_4^4(80, 1) / K_4^4(40, 1) =",
      abs(kernel_a4_even(4, GeomPoint(80.0, 1.0)).value) / abs(kernel_a4_even(4, GeomPoint(40.0, 1.0)).value))
