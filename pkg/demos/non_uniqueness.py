"""
Many barriers, one transmission curve
=====================================

Transmission fixes the width at each height and nothing else.  Sliding the
two sides of the barrier along x (any split of the width into left and right
turning points) gives a different potential with the same T(E).
"""

import numpy as np

from barrier_inverse import (
    ColdEmission,
    centered_split,
    family_member,
    invert_gamow,
    sample_curve,
    zero_split,
)

E = np.linspace(0.05, 0.95, 100)
T = sample_curve(ColdEmission(1.0, 1.0), "transmission", E)
width = invert_gamow(T, E)

table = width.as_table()
splits = {
    "zero": zero_split,                               # left wall at x = 0
    "centered": centered_split(width),                # symmetric about 0
    "tilted": lambda u: -0.3 * table(u),              # 30% of the width on the left
}

curves = {}
for name, split in splits.items():
    member = family_member(width, split)
    lo, hi = member.support()
    curves[name] = sample_curve(member, "transmission", E).values
    print(f"{name:9s} support [{lo:+.3f}, {hi:+.3f}]")

names = list(curves)
for i, a in enumerate(names):
    for b in names[i + 1:]:
        print(f"max |T_{a} - T_{b}| = {np.max(np.abs(curves[a] - curves[b])):.2e}")
