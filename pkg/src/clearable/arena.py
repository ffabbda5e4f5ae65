"""Simulated uninitialized memory.

An :class:`Arena` is a fixed number of ``w``-bit cells.  Cells that were never
stored to return deterministic garbage chosen by a fill policy; the structures
under test are expected to read such cells and must not care what they hold.
Every load and store is counted.

Fill policies:

``zeros``  every cell reads 0.
``ones``   every cell reads ``2**w - 1``.
``alt``    even cells read ``0x55..55``, odd cells ``0xAA..AA``.
``rand``   cell ``i`` reads ``splitmix64(splitmix64(seed) ^ i) mod 2**w``.
"""

from __future__ import annotations

from .words import alt_mask, mask

FILL_POLICIES = ("zeros", "ones", "alt", "rand")
_ALIASES = {"alternating": "alt", "random": "rand", "seeded-random": "rand"}

_M64 = (1 << 64) - 1


class ArenaFault(IndexError):
    """Access outside the cells owned by a structure."""


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


def normalize_fill(fill: str) -> str:
    fill = _ALIASES.get(fill, fill)
    if fill not in FILL_POLICIES:
        raise ValueError(f"unknown fill policy {fill!r}")
    return fill


class Arena:
    def __init__(self, size: int, w: int = 64, fill: str = "zeros", seed: int = 0):
        if w > 64:
            raise ValueError("cells are at most 64 bits wide")
        self.size = size
        self.w = w
        self.fill = normalize_fill(fill)
        self.seed = seed
        self.mask = mask(w)
        self.reads = 0
        self.writes = 0
        self._cells: dict[int, int] = {}
        self._salt = splitmix64(seed)
        self._even = alt_mask(w // 2)
        self._odd = self._even << 1

    def garbage(self, i: int) -> int:
        """What cell ``i`` holds before anything is stored there."""
        fill = self.fill
        if fill == "zeros":
            return 0
        if fill == "ones":
            return self.mask
        if fill == "alt":
            return self._odd if i & 1 else self._even
        return splitmix64(self._salt ^ i) & self.mask

    def load(self, i: int) -> int:
        if i < 0 or i >= self.size:
            raise ArenaFault(f"load from cell {i} outside arena of {self.size}")
        self.reads += 1
        v = self._cells.get(i)
        return self.garbage(i) if v is None else v

    def store(self, i: int, x: int) -> None:
        if i < 0 or i >= self.size:
            raise ArenaFault(f"store to cell {i} outside arena of {self.size}")
        assert 0 <= x <= self.mask, f"value {x:#x} does not fit in {self.w} bits"
        self.writes += 1
        self._cells[i] = x

    def load_many(self, i: int, count: int) -> list[int]:
        """``count`` consecutive loads starting at cell ``i``."""
        if i < 0 or i + count > self.size:
            raise ArenaFault(f"load of cells {i}..{i + count - 1} outside arena of {self.size}")
        self.reads += count
        get = self._cells.get
        out = [get(q) for q in range(i, i + count)]
        if None in out:
            out = [self.garbage(i + k) if v is None else v for k, v in enumerate(out)]
        return out

    def store_many(self, i: int, values: list[int]) -> None:
        if i < 0 or i + len(values) > self.size:
            raise ArenaFault(f"store to cells {i}..{i + len(values) - 1} outside arena of {self.size}")
        assert all(0 <= x <= self.mask for x in values), "value does not fit in a cell"
        self.writes += len(values)
        cells = self._cells
        for q, x in enumerate(values, i):
            cells[q] = x

    def peek(self, i: int) -> int:
        """Uncounted load, for validators and debugging."""
        v = self._cells.get(i)
        return self.garbage(i) if v is None else v

    def poke(self, i: int, x: int) -> None:
        """Uncounted store, used for fault injection in tests."""
        self._cells[i] = x & self.mask

    @property
    def written(self) -> set[int]:
        return set(self._cells)

    def snapshot_counters(self) -> tuple[int, int, int]:
        return self.reads, self.writes, len(self._cells)

    def region(self, start: int = 0, length: int | None = None) -> Region:
        if length is None:
            length = self.size - start
        if start < 0 or start + length > self.size:
            raise ArenaFault("region does not fit in arena")
        return Region(self, start, length)


class Region:
    """A bounds-checked window ``[start, start + length)`` of an arena."""

    __slots__ = ("arena", "start", "length", "w")

    def __init__(self, arena: Arena, start: int, length: int):
        self.arena = arena
        self.start = start
        self.length = length
        self.w = arena.w

    def load(self, i: int) -> int:
        if i < 0 or i >= self.length:
            raise ArenaFault(f"load from cell {i} outside region of {self.length}")
        return self.arena.load(self.start + i)

    def store(self, i: int, x: int) -> None:
        if i < 0 or i >= self.length:
            raise ArenaFault(f"store to cell {i} outside region of {self.length}")
        self.arena.store(self.start + i, x)

    def load_many(self, i: int, count: int) -> list[int]:
        if i < 0 or i + count > self.length:
            raise ArenaFault(f"load of cells {i}..{i + count - 1} outside region of {self.length}")
        return self.arena.load_many(self.start + i, count)

    def store_many(self, i: int, values: list[int]) -> None:
        if i < 0 or i + len(values) > self.length:
            raise ArenaFault(f"store to cells {i}..{i + len(values) - 1} outside region of {self.length}")
        self.arena.store_many(self.start + i, values)

    def peek(self, i: int) -> int:
        return self.arena.peek(self.start + i)

    def poke(self, i: int, x: int) -> None:
        self.arena.poke(self.start + i, x)

    def sub(self, start: int, length: int | None = None) -> Region:
        if length is None:
            length = self.length - start
        if start < 0 or start + length > self.length:
            raise ArenaFault("subregion does not fit")
        return Region(self.arena, self.start + start, length)

    def __len__(self) -> int:
        return self.length


class BitField:
    """Bit-granular access to a region of ``w``-bit cells (LSB-first)."""

    def __init__(self, region: Region):
        self.region = region
        self.w = region.w
        self.mask = mask(region.w)

    def get(self, pos: int, width: int) -> int:
        """Read ``width <= w`` bits starting at bit ``pos``."""
        if width == 0:
            return 0
        w = self.w
        q, off = divmod(pos, w)
        v = self.region.load(q) >> off
        if off + width > w:
            v |= self.region.load(q + 1) << (w - off)
        return v & ((1 << width) - 1)

    def set(self, pos: int, width: int, value: int) -> None:
        if width == 0:
            return
        w = self.w
        q, off = divmod(pos, w)
        lo = min(width, w - off)
        m = ((1 << lo) - 1) << off
        if lo == w:
            self.region.store(q, value & self.mask)
        else:
            old = self.region.load(q)
            self.region.store(q, (old & ~m) | ((value << off) & m))
        if lo < width:
            rest = width - lo
            m2 = (1 << rest) - 1
            old = self.region.load(q + 1)
            self.region.store(q + 1, (old & ~m2) | ((value >> lo) & m2))

    def fill(self, start: int, end: int, word_pattern=None) -> None:
        """Overwrite bits ``[start, end)``.

        ``word_pattern(q)`` gives the full-word bit pattern wanted in cell ``q``;
        omitted means zeros.  Cells only partly covered are merged.
        """
        w = self.w
        q = start // w
        while q * w < end:
            lo = max(start, q * w) - q * w
            hi = min(end, q * w + w) - q * w
            pat = 0 if word_pattern is None else word_pattern(q)
            if lo == 0 and hi == w:
                self.region.store(q, pat)
            else:
                m = ((1 << (hi - lo)) - 1) << lo
                old = self.region.load(q)
                self.region.store(q, (old & ~m) | (pat & m))
            q += 1
