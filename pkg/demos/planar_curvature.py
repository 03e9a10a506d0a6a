"""Curvature of three planar examples, one bivector each.

Run from the repository root:  python3 demos/planar_curvature.py
"""
from pathlib import Path

import numpy as np

from pwarp import curvature as cv
from pwarp.cli import load_manifold
from pwarp.connection import christoffel, laplacian

SPECS = Path(__file__).resolve().parent.parent / "specs"

# Lorentzian plane with a linear bivector c*x1, c = 2
H = load_manifold(SPECS / "H2_1.spec")
p = np.array([1.5, 0.2])
M = cv.at(H, p)
print(H.name, "at", p)
print("  Christoffel symbols G[k][i][j]:")
print(np.round(christoffel(H, p), 6))
print("  K      =", M.sectional([1, 0], [0, 1]))   # -c^2
print("  Ricci  =", M.ricci([1, 0], [1, 0]))
print("  scalar =", M.scalar_curvature())
print("  qualar =", M.qualar())
print("  lap(x1) =", laplacian(H, H.parse("x1"), p))

# the same bivector on the negative definite plane flips the sign
E = load_manifold(SPECS / "E2_2.spec")
print(E.name, "K =", cv.sectional(E, p, [1, 0], [0, 1]))

# round sphere chart with a non-polynomial cometric
S = load_manifold(SPECS / "S2_0.spec")
for th in (0.5, 1.0, 1.5, 2.0):
    q = np.array([th, 0.3])
    print(f"{S.name} theta={th:.1f}  K = {cv.sectional(S, q, [1, 0], [0, 1]): .6f}")

# a sectional curvature depends only on the plane, not on its basis
a, b = np.array([1.0, 0.3]), np.array([-0.2, 1.0])
print("basis change:", M.sectional(a, b), M.sectional(2 * a + b, a - 3 * b))
