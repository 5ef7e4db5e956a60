"""Walk through the coordinate transformation that powers everything else.

A radial Schrodinger operator with the critical Hardy weight stack turns,
after one log change of variables per stack level, into a flat 1-d operator
-d^2/ds^2 + W(s) with no singular term at all.  The quadratic forms agree
exactly; this script evaluates both sides by quadrature and prints the match.

Run:  PYTHONPATH=src python3 demos/transform_identity.py
"""

import math

from hardybounds import SquareWell, ZeroPotential, bump, transform_potential
from hardybounds.spectra import kinetic_term, quadratic_form_value

print("=" * 72)
print("1. The transformed potential")
print("=" * 72)
print()
print("V = -1 on (1, 2) after one step becomes W(s) = -e^(2s) on (0, ln 2):")
W = transform_potential(SquareWell(c=1.0, a=1.0, b=2.0), 1)
for s in (-0.5, 0.2, 0.5, 0.8):
    print(f"    W({s:+.2f}) = {W(s):+.6f}")
print()
print("V = -1 on (e, e^2) after two steps becomes -e^(2s) e^(2 e^s) on (0, ln 2):")
W2 = transform_potential(SquareWell(c=1.0, a=math.e, b=math.e**2), 2)
for s in (0.2, 0.5):
    direct = -math.exp(2 * s + 2 * math.exp(s))
    print(f"    W({s:+.2f}) = {W2(s):+.6f}   (direct substitution {direct:+.6f})")

print()
print("=" * 72)
print("2. The quadratic-form identity")
print("=" * 72)
print()
print("dim  depth  potential     original Q      transformed Q   rel. diff")
for d in (1, 2, 3, 5):
    for n in (0, 1):
        lo = 1.0 if (n >= 1 or d % 2 == 0) else 0.0
        u = bump(lo + 0.4, lo + 2.6)
        for V, tag in ((ZeroPotential(), "zero"), (SquareWell(1.0, lo + 0.6, lo + 3.0), "well")):
            qo = quadratic_form_value("original", d, n, u, V=V)
            qt = quadratic_form_value("transformed", d, n, u, V=V)
            scale = max(abs(qo), abs(qt), kinetic_term(u, d))
            print(f"{d:>3}  {n:>5}  {tag:<11}  {qo:+.10f}  {qt:+.10f}  {abs(qo-qt)/scale:.1e}")

print()
print("The identity holds to quadrature accuracy in every dimension and depth;")
print("this is what lets a 1-d tridiagonal eigenvalue count stand in for the")
print("full singular operator.")
