"""The Airy function and the rescaled kernel behind the boundary potential.

Ai is evaluated from its Maclaurin series for |x| <= 6 and the classical
asymptotic expansions beyond.  The kernel A(x) = 3^(-1/3) Ai(3^(-1/3) x)
absorbs the factor 3 of v_t + v_xxx = 0, and its second derivative comes
from the transported ODE A'' = (x/3) A rather than numerical
differentiation, so the identity below holds to roundoff.
"""

import numpy as np

from nlskdv import airy_kernel, airy_kernel_d2, airy_standard

print("reference values")
for x in (0.0, 1.0, -1.0, 5.0, -5.0):
    print(f"  Ai({x:+.0f}) = {airy_standard(x):+.12f}")
print(f"  Ai(60)  = {airy_standard(60.0)} (underflow clamp)")

xs = np.linspace(-20.0, 20.0, 2001)
gap = np.max(np.abs(airy_kernel_d2(xs) - xs / 3.0 * airy_kernel(xs)))
print(f"ODE identity |A'' - (x/3) A| on [-20, 20]: max {gap:.2e}")

print("kernel vs the standard Ai (scaling identity):")
for x in (0.0, 2.0, -3.0):
    print(f"  A({x:+.0f}) = {airy_kernel(x):+.10f} "
          f"= 3^(-1/3) Ai({3 ** (-1 / 3) * x:+.4f})")

# the kernel integrates to 1/3 on the positive axis, which is exactly what
# makes the boundary potential recover its trace with constant one
half = np.linspace(0.0, 40.0, 40001)
print(f"3 * int_0^inf A = {3.0 * np.trapezoid(airy_kernel(half), half):.8f} (trace constant)")
