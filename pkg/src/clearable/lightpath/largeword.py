"""Groups of ``c`` consecutive cells read and written as one ``c*w``-bit word."""

from __future__ import annotations

import sys
from array import array

from ..arena import Region

# array typecodes by cell width; all four are fixed-size on common platforms
_CODES = {8: "B", 16: "H", 32: "I", 64: "Q"}
_SWAP = sys.byteorder != "little"


def pack(cells: list[int], w: int) -> int:
    a = array(_CODES[w], cells)
    if _SWAP:
        a.byteswap()
    return int.from_bytes(a.tobytes(), "little")


def unpack(value: int, count: int, w: int) -> list[int]:
    a = array(_CODES[w], value.to_bytes(count * (w // 8), "little"))
    if _SWAP:
        a.byteswap()
    return a.tolist()


class LargeWordStore:
    """Large word ``k`` occupies cells ``[k*c, k*c + c)``; cell ``k*c + s``
    holds bits ``[s*w, s*w + w)`` of the value."""

    def __init__(self, region: Region, c: int):
        self.region = region
        self.c = c
        self.w = region.w
        self.width = c * region.w

    def __len__(self) -> int:
        return len(self.region) // self.c

    def load(self, k: int) -> int:
        return pack(self.region.load_many(k * self.c, self.c), self.w)

    def store(self, k: int, x: int) -> None:
        self.region.store_many(k * self.c, unpack(x, self.c, self.w))

    def peek(self, k: int) -> int:
        base = k * self.c
        return pack([self.region.peek(base + s) for s in range(self.c)], self.w)


class OffsetStore:
    """Window of another store starting at large word ``base``."""

    def __init__(self, inner, base: int):
        self.inner = inner
        self.base = base

    def load(self, k: int) -> int:
        return self.inner.load(self.base + k)

    def store(self, k: int, x: int) -> None:
        self.inner.store(self.base + k, x)

    def peek(self, k: int) -> int:
        return self.inner.peek(self.base + k)
