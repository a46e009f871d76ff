"""The kernel series against its two classical limits.

At a = 2 the kernel is the Fourier exponential e^{-i z xi}; at a = 1 it is
a Bessel function of sqrt(2 z (1 + xi)). The series knows nothing about
either, so the agreement below is a check of the series machinery.
"""
import cmath
import math

import numpy as np

from radkernel.closed_forms import kernel_a1
from radkernel.kernel import kernel_series
from radkernel.types import GeomPoint, KernelParams

print(f"{'m':>2} {'z':>5} {'xi':>6}  {'|series - exp|':>15}  {'|series - bessel|':>17}")
for m in (2, 3, 6):
    for z in (0.5, 3.0, 6.0):
        for xi in (-0.7, 0.2, 1.0):
            g = GeomPoint(z, xi)
            d2 = abs(kernel_series(KernelParams(2, m), g).value - cmath.exp(-1j * z * xi))
            d1 = abs(kernel_series(KernelParams(1, m), g).value - kernel_a1(m, g).value)
            print(f"{m:2d} {z:5.1f} {xi:6.2f}  {d2:15.2e}  {d1:17.2e}")

# away from the classical cases the series still starts at 1
for a in (0.5, 3.0, 8.0):
    v = kernel_series(KernelParams(a, 3), GeomPoint(0.0, 0.3)).value
    print(f"a={a:g}: K(0, xi) = {v}")
print("sup of |K_1^3| on a z <= 50 grid:",
      max(abs(kernel_a1(3, GeomPoint(z, x)).value) for z in np.linspace(0, 50, 101)
          for x in np.linspace(-1, 1, 21)), "(bounded by 1)")
print("cos(sqrt 6) =", math.cos(math.sqrt(6)), " K_1^2(2, 0.5) =", kernel_a1(2, GeomPoint(2.0, 0.5)).value)
