"""Monodromy of the catenoid cousin and the trace law.

The frame F solves dF = c alpha F along paths in the punctured plane.
Around the end loop the frame picks up a monodromy matrix rho(c); its
trace is pinned by the closed form 2 cos(pi lambda) with
lambda = sqrt(1 - 4c).  This script integrates the loop at a sweep of
curvatures and prints both sides, then shows the small-c linearization
rho(c) ~ I + c * (contour integral of alpha).
"""
import math

import numpy as np

from cmcforge.algebra import frobenius
from cmcforge.nullcurve import monodromy, monodromy_c_derivative
from cmcforge.wdata import catalog

data = catalog("catenoid")
loop = data.loop("end")

print("catenoid end-loop monodromy trace vs 2|cos pi sqrt(1-4c)|")
print("%8s %14s %14s %10s" % ("c", "|trace rho|", "closed form", "error"))
for c in (-0.5, -0.2, -0.05, 0.05, 0.1, 3.0 / 16.0, 0.24):
    rho = monodromy(data, loop, c, tol=1e-11)
    got = abs(np.trace(rho))
    want = 2.0 * abs(math.cos(math.pi * math.sqrt(1.0 - 4.0 * c)))
    print("%8.4f %14.10f %14.10f %10.2e" % (c, got, want, abs(got - want)))

# near c = 0 the monodromy is linear in c, with slope the contour
# integral of the connection form; the defect shrinks quadratically
deriv = monodromy_c_derivative(data, loop)
print("\ncontour integral of alpha over the end loop:")
print(np.array_str(deriv, precision=6, suppress_small=True))
print("\n%10s %12s %8s" % ("c", "defect", "order"))
prev = None
for c in (1e-2, 5e-3, 2.5e-3, 1.25e-3):
    err = frobenius(monodromy(data, loop, c, tol=1e-12)
                    - np.eye(2) - c * deriv)
    order = "" if prev is None else "%.3f" % math.log2(prev / err)
    print("%10.5f %12.3e %8s" % (c, err, order))
    prev = err
