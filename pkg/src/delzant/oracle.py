"""Monte-Carlo cross-check for the exact polygon moments.

Verification only: nothing in the exact pipeline imports this module.
"""

from __future__ import annotations

import numpy as np

from .polygon import MomentPolygon


def mc_moment_oracle(P: MomentPolygon, i: int, j: int, samples: int = 1_000_000,
                     seed: int = 0) -> tuple[float, float]:
    """Estimate the integral of ``x**i y**j`` over ``P`` by rejection sampling.

    Points are drawn uniformly from the bounding box; the estimate is the box
    area times the mean of the masked integrand.  Returns ``(estimate, stderr)``.
    """
    if samples < 1000:
        raise ValueError("use at least 1000 samples")
    verts = np.array([[float(x), float(y)] for x, y in P.vertices])
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(lo, hi, size=(samples, 2))

    inside = np.ones(samples, dtype=bool)
    nxt = np.roll(verts, -1, axis=0)
    for a, b in zip(verts, nxt):
        ex, ey = b - a
        inside &= ex * (pts[:, 1] - a[1]) - ey * (pts[:, 0] - a[0]) >= 0

    box = float(np.prod(hi - lo))
    vals = np.where(inside, pts[:, 0] ** i * pts[:, 1] ** j, 0.0) * box
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(samples))
