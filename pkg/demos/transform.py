"""The transform applied by quadrature.

The function exp(-|x|^a / a) is mapped to itself for every a; at a = 2
this is the Gaussian and the Fourier transform.
"""
import numpy as np

from radkernel.kernel import TransformGrid, transform_apply
from radkernel.types import KernelParams

ys = np.array([[0.0, 0.0], [0.5, 0.3], [1.0, -1.0], [0.0, 1.5]])
for a, R in ((2.0, 9.0), (4.0, 3.6), (1.0, 45.0)):
    p = KernelParams(a, 2)
    grid = TransformGrid(R=R, panels=30 if a == 1 else 8)
    out = transform_apply(p, lambda X: np.exp(-np.linalg.norm(X, axis=1) ** a / a), ys, grid=grid, tol=1e-8)
    exact = np.exp(-np.linalg.norm(ys, axis=1) ** a / a)
    print(f"a={a:g}: max |F f - f| = {np.max(np.abs(out - exact)):.2e}")
