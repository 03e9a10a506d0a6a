"""Assemble a warped product and compare closed forms against the direct pipeline.

Run from the repository root:  python3 demos/warped_cross_check.py
"""
from pathlib import Path

import numpy as np

from pwarp import curvature as cv, warped as W
from pwarp.cli import load_warped

SPECS = Path(__file__).resolve().parent.parent / "specs"

w = load_warped(SPECS / "h2xs2.warp")
P = W.assemble(w)
print(P.name, "dim", P.dim, "index", P.index, "coords", P.coords)

pts = W.default_points(w, 10, seed=1)
for variant in ("published", "corrected"):
    res = W.cross_check(w, pts, variant=variant)
    print(f"\nvariant={variant}  passed={res.passed}")
    for r in res.results:
        flag = "" if r.passed else "   <-- disagrees"
        print(f"  {r.suite:11s} {r.case:22s} {r.residual:9.2e}{flag}")

# three routes to the qualar scalar at one point
p = pts[0]
M = cv.at(P, p)
print("\nqualar direct      ", M.qualar())
print("qualar null forms  ", M.qualar_via_null_forms())
print("qualar closed form ", W.qualar_closed_form(w, p))

# with a constant warping function the direct value is negative
w0 = load_warped(SPECS / "h2xe2.warp")
p0 = W.default_points(w0, 1, seed=1)[0]
print("\nh2xe2 (f = 2): direct", cv.qualar(W.assemble(w0), p0),
      " printed display", W.qualar_display_h2xe2(w0, p0))
