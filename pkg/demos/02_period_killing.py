"""Killing the period of the three-ended surface.

The trinoid's fundamental piece is bounded by three mirror curves.  The
basepoint-normalized frame represents each mirror by a matrix that is
generally *not* unitary; the surface closes up exactly when one constant
gauge moves all of them into SU(2) simultaneously.  The three moves:

  I    pin the first mirror at the identity (automatic at the basepoint),
  II   diagonalize the second one; its eigenvalue xi must be unimodular,
  III  rescale so the third one balances its off-diagonal entries.

This script runs the moves at a curvature inside the certified range,
prints what each step produced, and then walks c upward until the
normalization genuinely breaks down.
"""
import numpy as np

from cmcforge.errors import CmcForgeError
from cmcforge.genus0 import c_range, exists_cmc
from cmcforge.periodkill import classify_commutant, rho_from_word, unitarize
from cmcforge.wdata import catalog

data = catalog("noid(3)")
c = 0.05
res = unitarize(data, c)

print("noid(3) at c=%g" % c)
print("  xi   = %.12f %+.12fi   (|xi| - 1 = %.1e)"
      % (res.xi.real, res.xi.imag, abs(abs(res.xi) - 1)))
print("  beta = %.12f" % res.beta)
for label, rho in res.rep.rhos.items():
    print("  mirror %s: SU(2) residual %.2e" % (label, res.residuals[label]))

cls, axis = classify_commutant(list(res.rep.rhos.values()))
print("  commutant: %s  (irreducible representation)" % cls.name.lower())

# the product of the mirror word around an end reproduces the end
# monodromy up to the spin sign
word = data.params["end_word"]
closing = rho_from_word(res.rep.rhos, word)
print("  closing word %s -> trace %.6f" % (word, np.trace(closing).real))

(lo, _), (_, hi) = c_range(2, 3)
print("\ncertified existence range for three ends: (%s, 0) u (0, %s)"
      % (lo, hi))
for c in (0.10, 0.18, 0.22, 0.23, 0.24):
    try:
        unitarize(data, c)
        status = "unitarizable"
    except CmcForgeError as exc:
        status = "fails: %s" % exc
    ex = exists_cmc(2, 3, c)
    print("  c=%.2f  exists=%-5s flag=%-14s %s"
          % (c, ex.exists, ex.flag, status))
