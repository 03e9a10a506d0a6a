"""Sample random planes and test the curvature sign statements for warped products.

Run from the repository root:  python3 demos/sign_statements.py
"""
from pathlib import Path

from pwarp import warped as W
from pwarp.cli import load_warped

SPECS = Path(__file__).resolve().parent.parent / "specs"

for name in ("e2xe2", "so3xe2", "so3xe2_nu", "e2xe2_noncasimir"):
    w = load_warped(SPECS / f"{name}.warp")
    rep = W.sign_property_check(w, W.default_points(w, 10, seed=3), planes=200, seed=3)
    print(f"\n{name}: regime {rep.regime}")
    for part, (lo, hi) in rep.ranges.items():
        print(f"  K range {part}: [{lo: .4f}, {hi: .4f}]")
    for c in rep.checks:
        state = "n/a" if not c.applicable else ("holds" if c.passed else "counterexample")
        print(f"  {c.name:34s} {state}")
    if rep.obstruction:
        print("  obstruction:", {k: round(v, 4) for k, v in rep.obstruction.items()})
