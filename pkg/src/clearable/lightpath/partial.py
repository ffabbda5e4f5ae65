"""Light-path tree for any ``n <= d**t`` over exactly ``n`` words.

The missing leaves ``n .. d**t - 1`` are painted black by an artificial
history installed by the first write.  Until then ``n`` itself waits in
``A[0]``, which nothing reads while the root is white.
"""

from __future__ import annotations

from collections import Counter

from ..arena import Region
from ..words import ClearableArray
from .core import WHITE, LightPathTree, RootCell, check_params


class PartialLightPathArray(ClearableArray):
    name = "lightpath-partial"

    def __init__(self, region: Region, n: int, d: int, t: int, roots_region: Region | None = None, init: bool = True):
        w = region.w
        check_params(d, t, w)
        if not 1 <= n <= d ** t:
            raise ValueError(f"n={n} must lie in [1, d**t={d ** t}]")
        self.n, self.d, self.t = n, d, t
        self.w = self.b = w
        if roots_region is None:
            roots_region = region.sub(0, 1)
            region = region.sub(1, n)
        self.region = region.sub(0, n)
        self.cases: Counter = Counter()
        A = self.region
        self.tree = LightPathTree(A, d, t, RootCell(roots_region, 0), w, universe=lambda: A.load(0), cases=self.cases)
        if init:
            self.tree.roots.set(WHITE)
            A.store(0, n)

    @staticmethod
    def cells_needed(n: int) -> int:
        return n + 1

    def read(self, l: int) -> int:
        return self.tree.read(l)

    def write(self, l: int, x: int) -> None:
        self.tree.write(l, x)

    def space_bits(self) -> int:
        return self.n * self.w + 2

    def validate(self, shadow):
        return self.tree.validate(dict(shadow), self.n)

    def iter_written(self):
        """Exact written positions; padding leaves are never reported."""
        return self.tree.iter_black(self.n)
