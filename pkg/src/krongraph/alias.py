"""Walker/Vose alias tables for O(1) discrete sampling."""

import numpy as np

from .errors import ZeroTotalWeight


class AliasTable:
    """Alias table over ``len(weights)`` outcomes.

    Building is O(n); each draw costs two uniforms and one table lookup.
    """

    def __init__(self, weights):
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or len(w) == 0:
            raise ZeroTotalWeight("weights must be a non-empty 1-d sequence")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        total = w.sum()
        if total <= 0:
            raise ZeroTotalWeight("total weight is zero")

        n = len(w)
        w = w / w.max()  # keeps n * w / total finite for huge weights
        scaled = w * (n / w.sum())
        prob = np.ones(n, dtype=np.float64)
        alias = np.arange(n, dtype=np.int64)

        small = [i for i in range(n) if scaled[i] < 1.0]
        large = [i for i in range(n) if scaled[i] >= 1.0]
        scaled = scaled.tolist()
        while small and large:
            s = small.pop()
            g = large.pop()
            prob[s] = scaled[s]
            alias[s] = g
            scaled[g] = (scaled[g] + scaled[s]) - 1.0
            if scaled[g] < 1.0:
                small.append(g)
            else:
                large.append(g)
        # leftovers are 1 up to rounding
        for i in small + large:
            prob[i] = 1.0
            alias[i] = i

        self.n = n
        self.prob = prob
        self.alias = alias

    def sample(self, rng, size):
        """Draw ``size`` outcomes; consumes ``2 * size`` uniforms from ``rng``."""
        u = rng.random((size, 2))
        idx = np.minimum((u[:, 0] * self.n).astype(np.int64), self.n - 1)
        keep = u[:, 1] < self.prob[idx]
        return np.where(keep, idx, self.alias[idx])

    def probabilities(self):
        """Outcome probabilities implied by the table (for checking)."""
        p = self.prob / self.n
        out = p.copy()
        np.add.at(out, self.alias, (1.0 - self.prob) / self.n)
        return out
