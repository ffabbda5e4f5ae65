"""Build any implemented method from a name and a few parameters.

Every builder sizes a fresh arena exactly for its structure, so the same
(method, parameters, fill, seed) always produces the same arena contents.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .arena import Arena
from .baselines import INSTANCES, Folklore, Navarro, trie_cells, trie_instance
from .extensions import PackedArray, WithDefault
from .lightpath.array import ClearableWordArray
from .lightpath.core import LightPathArray
from .lightpath.forest import Forest
from .lightpath.partial import PartialLightPathArray
from .oracle import OracleArray
from .words import ceil_log2, ClearableArray

METHODS = INSTANCES + (
    "folklore", "navarro", "lightpath-core", "lightpath-partial", "forest",
    "clearable-array", "packed", "with-default", "oracle",
)
ALIASES = {"lightpath": "clearable-array", "core": "lightpath-core", "partial": "lightpath-partial"}


class UsageError(ValueError):
    """Parameters that do not describe a buildable structure."""


@dataclass(frozen=True)
class Params:
    method: str
    n: int
    w: int = 64
    t: int | None = None
    b: int | None = None
    h: int | None = None

    @property
    def entry_bits(self) -> int:
        """Bits per client entry, as seen by the operation generator."""
        if self.method == "packed" or (self.method in INSTANCES and self.b):
            return self.b or self.w
        return self.w


def default_g(l: int) -> int:
    return l + 1


def tree_shape(n: int, t: int | None, w: int) -> tuple[int, int]:
    """Degree and height of a single tree covering ``n`` leaves with ``2dt <= w``.

    Without ``t`` the tree is binary.  With ``t`` the degree is the least power
    of two whose ``t``-th power reaches ``n``.
    """
    if t is None:
        d, t = 2, max(1, ceil_log2(n))
    else:
        d = 2
        while d ** t < n:
            d *= 2
    if 2 * d * t > w:
        raise UsageError(f"no tree with d^t >= n={n} fits 2dt <= w={w} (d={d}, t={t})")
    return d, t


def resolve(method: str) -> str:
    method = ALIASES.get(method, method)
    if method not in METHODS:
        raise UsageError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    return method


def _need_t(p: Params) -> int:
    if p.t is None or p.t < 1:
        raise UsageError(f"{p.method} needs --t >= 1")
    return p.t


def cells(p: Params) -> int:
    m, n, w = p.method, p.n, p.w
    if n < 1:
        raise UsageError("n must be positive")
    if m in INSTANCES:
        return trie_cells(m, n, p.b or w, w)
    if m == "folklore":
        return Folklore.cells_needed(n, w)
    if m == "navarro":
        return Navarro.cells_needed(n, p.b or w, p.h or 0, w)
    if m == "lightpath-core":
        d, t = tree_shape(n, p.t, w)
        return LightPathArray.cells_needed(d, t)
    if m == "lightpath-partial":
        tree_shape(n, p.t, w)
        return PartialLightPathArray.cells_needed(n)
    if m == "forest":
        return Forest.cells_needed(n, _need_t(p), w)
    if m in ("clearable-array", "with-default"):
        if n >= 1 << w:
            raise UsageError(f"n must be below 2**{w}")
        return ClearableWordArray.cells_needed(n, _need_t(p), w)
    if m == "packed":
        b = p.b or w
        if not 1 <= b <= w:
            raise UsageError(f"--b must lie in [1, {w}]")
        return PackedArray.cells_needed(n, b, _need_t(p), w)
    if m == "oracle":
        return OracleArray.cells_needed(n)
    raise UsageError(f"unknown method {m!r}")


def build(p: Params, arena: Arena, g: Callable[[int], int] = default_g, init: bool = True) -> ClearableArray:
    m, n, w = p.method, p.n, p.w
    region = arena.region()
    if m in INSTANCES:
        return trie_instance(m, region, n, p.b or w, init=init)
    if m == "folklore":
        return Folklore(region, n, init=init)
    if m == "navarro":
        return Navarro(region, n, p.b or w, p.h or 0, init=init)
    if m == "lightpath-core":
        d, t = tree_shape(n, p.t, w)
        return LightPathArray(region, d, t, init=init)
    if m == "lightpath-partial":
        d, t = tree_shape(n, p.t, w)
        return PartialLightPathArray(region, n, d, t, init=init)
    if m == "forest":
        return Forest(region, n, p.t, init=init)
    if m == "clearable-array":
        return ClearableWordArray(region, n, p.t, init=init)
    if m == "with-default":
        return WithDefault(g, ClearableWordArray(region, n, p.t, init=init))
    if m == "packed":
        return PackedArray(region, n, p.b or w, p.t, init=init)
    if m == "oracle":
        return OracleArray(region, n, init=init)
    raise UsageError(f"unknown method {m!r}")


def make(p: Params, fill: str = "zeros", seed: int = 0, g: Callable[[int], int] = default_g) -> ClearableArray:
    """Fresh arena of exactly the right size plus the structure initialized in it."""
    arena = Arena(cells(p), p.w, fill, seed)
    return build(p, arena, g)


def initial_values(p: Params, g: Callable[[int], int] = default_g) -> Callable[[int], int] | None:
    """The reference starting value per position, ``None`` for all zeros."""
    return g if p.method == "with-default" else None
