"""One kernel value, four independent routes.

series    the Bessel-Gegenbauer expansion
closed    a closed form (a = 2 here)
laplace   Bromwich inversion of the Laplace-domain kernel
integral  a Prabhakar-function integral representation

The uncorrected form of the integral representation does not give the
kernel; its value is shown after the table.
"""
from radkernel.errors import DomainError
from radkernel.integral_rep import kernel_via_integral
from radkernel.methods import crosscheck, evaluate
from radkernel.types import GeomPoint, KernelParams

g = GeomPoint(1.0, 0.4)
for a, m in ((2.0, 2), (3.0, 3), (4.0, 2)):
    p = KernelParams(a, m)
    print(f"a={a:g}, m={m}")
    for meth in ("series", "closed", "laplace", "integral"):
        try:
            ev = evaluate(p, g, meth)
        except DomainError as exc:
            print(f"  {meth:8s} -- {exc}")
            continue
        print(f"  {meth:8s} {ev.value:.12f}  err {ev.err:.1e}")
print("uncorrected integral form at a=2:", kernel_via_integral(KernelParams(2, 2), g, form="paper").value)

rep = crosscheck(KernelParams(2, 2), [0.5, 1.5, 3.0], [0.0, 1.0, 2.5])
for pair, r in rep.config["pairs"].items():
    print(f"{pair:18s} max dev {r['max_dev']:.1e}  ratio to combined err {r['max_ratio']:.2f}")
