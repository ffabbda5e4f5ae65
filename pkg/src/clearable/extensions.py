"""Packed b-bit entries, a non-zero initial value function and written-block
enumeration on top of the clearable word array."""

from __future__ import annotations

from typing import Callable

from .arena import Region
from .lightpath.array import ClearableWordArray, redundancy_bound
from .words import ClearableArray, mask


def _cdiv(a: int, b: int) -> int:
    return -(-a // b)


class PackedArray(ClearableArray):
    """``n`` entries of ``b`` bits packed into ``ceil(n*b/w)`` words.

    Full words live in a clearable word array; a partially used last word is
    a plain cell zeroed at init.  Layout: ``[last word?][inner array]``.
    """

    name = "packed"

    def __init__(self, region: Region, n: int, b: int, t: int, init: bool = True):
        w = region.w
        if not 1 <= b <= w:
            raise ValueError(f"b={b} must lie in [1, {w}]")
        if n < 1:
            raise ValueError("n must be positive")
        self.n, self.b, self.t, self.w = n, b, t, w
        self.words = _cdiv(n * b, w)
        self.full = (n * b) // w
        self.has_last = self.full < self.words
        off = 1 if self.has_last else 0
        self.last = region.sub(0, 1) if self.has_last else None
        self.inner = None
        if self.full:
            inner_cells = ClearableWordArray.cells_needed(self.full, t, w)
            self.inner = ClearableWordArray(region.sub(off, inner_cells), self.full, t, init=init)
            off += inner_cells
        self.region = region.sub(0, off)
        if init and self.has_last:
            self.last.store(0, 0)

    @staticmethod
    def cells_needed(n: int, b: int, t: int, w: int) -> int:
        full = (n * b) // w
        cells = 1 if full * w < n * b else 0
        if full:
            cells += ClearableWordArray.cells_needed(full, t, w)
        return cells

    @property
    def cases(self):
        return self.inner.cases if self.inner is not None else {}

    def _get(self, q: int) -> int:
        return self.inner.read(q) if q < self.full else self.last.load(0)

    def _put(self, q: int, x: int) -> None:
        if q < self.full:
            self.inner.write(q, x)
        else:
            self.last.store(0, x)

    def read(self, l: int) -> int:
        w, b = self.w, self.b
        q, s = divmod(l * b, w)
        x = self._get(q) >> s
        if s + b > w:
            x |= self._get(q + 1) << (w - s)
        return x & mask(b)

    def write(self, l: int, x: int) -> None:
        w, b = self.w, self.b
        assert 0 <= x < (1 << b), "value does not fit in b bits"
        q, s = divmod(l * b, w)
        lo = min(b, w - s)
        word = self._get(q)
        self._put(q, (word & ~(mask(lo) << s)) | ((x & mask(lo)) << s))
        if lo < b:
            word = self._get(q + 1)
            self._put(q + 1, (word & ~mask(b - lo)) | (x >> lo))

    def space_bits(self) -> int:
        bits = self.inner.space_bits() if self.inner is not None else 0
        return bits + (self.w if self.has_last else 0)

    def bound_bits(self) -> int:
        """Allowed total: ``n*b`` plus the word-array redundancy plus last-word slack."""
        slack = self.words * self.w - self.n * self.b
        return self.n * self.b + redundancy_bound(self.n, self.t, self.w) + slack + (1 if self.full else 0)


class WithDefault(ClearableArray):
    """Entries start at ``g(l)`` instead of 0: values ``0`` and ``g(l)`` trade places."""

    name = "with-default"

    def __init__(self, g: Callable[[int], int], inner: ClearableArray):
        self.g = g
        self.inner = inner
        self.n = inner.n
        self.w = inner.w
        self.b = inner.b
        self.region = inner.region

    @property
    def cases(self):
        return getattr(self.inner, "cases", {})

    def read(self, l: int) -> int:
        x = self.inner.read(l)
        gl = self.g(l)
        if x == 0:
            return gl
        return 0 if x == gl else x

    def write(self, l: int, x: int) -> None:
        gl = self.g(l)
        if x == gl:
            x = 0
        elif x == 0:
            x = gl
        self.inner.write(l, x)

    def space_bits(self) -> int:
        return self.inner.space_bits()


def block_size(array) -> int:
    """Positions per block reported by :func:`iter_written_blocks`."""
    if isinstance(array, WithDefault):
        return block_size(array.inner)
    if isinstance(array, ClearableWordArray):
        return array.block_size()
    return getattr(array, "c", 1)


def iter_written_blocks(array):
    """Blocks holding at least one written position, for any structure that can tell.

    Exact positions for the tree over single words and the folklore array;
    large-word blocks for the forest and the self-contained array.
    """
    if isinstance(array, WithDefault):
        return iter_written_blocks(array.inner)
    if hasattr(array, "iter_written_blocks"):
        return array.iter_written_blocks()
    if hasattr(array, "iter_written"):
        return array.iter_written()
    if hasattr(array, "written"):
        return iter(sorted(array.written()))
    raise TypeError(f"{type(array).__name__} cannot enumerate written positions")
