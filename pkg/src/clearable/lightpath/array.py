"""Self-contained clearable word array: operations need only the memory.

Cell 0 is the discriminator.  When it is 0 the array is plain: ``A[l]`` holds
``x_l`` in cell ``1 + l`` (the all-black representation).  When it is 1 the
first six words of ``A`` form a header::

    A[0] = n    A[1] = t (capped at w)    A[2..5] = representation words

and the tree count ``N`` over large words of ``C_PRIME`` cells picks the layout.

Few roots (``N < 2w``): ``A[2..5]`` are the ``2N`` root bits and the trees
live directly on ``A``.  The header sits in the first large word, whose
remaining 16 cells still hold a history.  That large word always belongs to
the first nonblack tree: the first large words of tree 0 and of the first
nonblack tree are kept swapped, and the swap is moved along as trees turn
black.  When the last tree turns black the swap is undone and the
discriminator drops to 0.

Many roots (``N >= 2w``): ``A[2]`` and ``A[3]`` are the partial root-bit word
and folklore counter of a forest over 16-cell large words placed after the
header; ``A[4..5]`` are reserved and cleared at init, which keeps the
initialization cost the same for both layouts.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from ..arena import Region
from ..words import ClearableArray, alt_mask, lsb, mask
from .core import BLACK, GRAY, WHITE, LightPathTree
from .forest import Forest, tree_degree
from .largeword import pack, unpack

C_PRIME = 22
HIST_CELLS = 16
HEADER = 6
MASKED = -1


def _cdiv(a: int, b: int) -> int:
    return -(-a // b)


def redundancy_bound(n: int, t: int, w: int) -> int:
    """``ceil(n * (t / (2w))**t)`` in exact integer arithmetic."""
    return -(-n * t ** t // (2 * w) ** t)


@dataclass(frozen=True)
class Layout:
    n: int
    t: int
    t_cap: int
    d: int
    D: int
    n_lw: int
    N: int
    L: int
    few: bool

    def tree_size(self, i: int) -> int:
        return min(self.D, self.n_lw - i * self.D)


@lru_cache(maxsize=256)
def layout(n: int, t: int, w: int) -> Layout:
    t_cap = min(t, w)
    d = tree_degree(t_cap, w)
    D = d ** t_cap
    n_lw = n // C_PRIME
    N = _cdiv(n_lw, D)
    return Layout(n, t, t_cap, d, D, n_lw, N, n - n_lw * C_PRIME, N < 2 * w)


class _Store:
    """Large words of one tree as seen through the interchange."""

    __slots__ = ("arr", "i", "base")

    def __init__(self, arr: ClearableWordArray, i: int, base: int):
        self.arr, self.i, self.base = arr, i, base

    def load(self, k: int) -> int:
        return self.arr._lw_load(self.arr._phys(self.i, self.base, k))

    def store(self, k: int, x: int) -> None:
        self.arr._lw_store(self.arr._phys(self.i, self.base, k), x)

    def peek(self, k: int) -> int:
        return self.arr._lw_peek(self.arr._phys(self.i, self.base, k))


class _Root:
    __slots__ = ("arr", "i")

    def __init__(self, arr: ClearableWordArray, i: int):
        self.arr, self.i = arr, i

    def get(self) -> int:
        return self.arr._root_get(self.i)

    def set(self, color: int) -> None:
        self.arr._root_set(self.i, color)

    def peek(self) -> int:
        return self.arr._root_get(self.i, peek=True)


class ClearableWordArray(ClearableArray):
    """Clearable array of ``n`` words with O(t) access and at most
    ``ceil(n (t/2w)**t)`` bits of redundancy.

    The constructor is the only place ``n`` and ``t`` are passed in; reads and
    writes recover them from the header.
    """

    name = "clearable-array"

    def __init__(self, region: Region, n: int, t: int, init: bool = True):
        w = region.w
        if not 1 <= n < (1 << w):
            raise ValueError(f"n={n} must lie in [1, 2**{w})")
        if t < 1:
            raise ValueError("t must be positive")
        self.w = self.b = w
        self.n, self.t = n, t
        self.region = region.sub(0, self.cells_needed(n, t, w))
        self.A = self.region.sub(1, n)
        self.cases: Counter = Counter()
        self.gray_visits = 0
        self._f: int | None = None
        self._lay: Layout | None = None
        self._trees: dict[tuple, LightPathTree] = {}
        self._forests: dict[tuple, Forest] = {}
        self._altw = alt_mask(w // 2)
        self._hist_mask = mask(HIST_CELLS * w)
        if init:
            self._init(n, t)

    @staticmethod
    def cells_needed(n: int, t: int, w: int) -> int:
        lay = layout(n, t, w)
        if lay.N == 0 or lay.few:
            return 1 + n
        return 1 + HEADER + Forest.cells_needed(n, lay.t_cap, w, own_aux=False)

    def _init(self, n: int, t: int) -> None:
        lay = layout(n, t, self.w)
        R, A = self.region, self.A
        if lay.N == 0:
            # too small for a single large word: clear it outright
            R.store(0, 0)
            A.store_many(0, [0] * n)
            return
        R.store(0, 1)
        if lay.few:
            # the tail clear covers the leftover words; it may overlap the
            # header when n is small, so it goes first
            A.store_many(n - (C_PRIME - 1), [0] * (C_PRIME - 1))
        else:
            self._forest(lay).clear_tail(C_PRIME - 1)
        A.store_many(0, [n, lay.t_cap, 0, 0, 0, 0])

    # -- header and representation ---------------------------------------------

    def _begin(self) -> Layout | None:
        """Read the header at the start of an operation."""
        if self.region.load(0) == 0:
            self._lay = None
            self._f = None
            return None
        n = self.A.load(0)
        t = self.A.load(1)
        lay = layout(n, t, self.w)
        self._lay = lay
        if lay.few:
            self._f = self._first_nonblack(lay, -1)
        return lay

    def _root_words(self, lay: Layout) -> int:
        return _cdiv(2 * lay.N, self.w)

    def _first_nonblack(self, lay: Layout, blackened: int) -> int | None:
        w = self.w
        for q in range(self._root_words(lay)):
            word = self.A.load(2 + q)
            if q == blackened * 2 // w:
                word |= BLACK << ((2 * blackened) % w)
            live = ~(word >> 1) & self._altw
            hi = 2 * lay.N - q * w
            if hi < w:
                live &= mask(hi)
            if live:
                return (q * w + lsb(live)) >> 1
        return None

    def _root_get(self, i: int, peek: bool = False) -> int:
        if self._f is None:
            return BLACK
        q, s = divmod(2 * i, self.w)
        word = self.A.peek(2 + q) if peek else self.A.load(2 + q)
        return (word >> s) & 3

    def _root_set(self, i: int, color: int) -> None:
        if color == BLACK and i == self._f:
            self._move_interchange(i)
            if self._f is None:
                return
        q, s = divmod(2 * i, self.w)
        word = self.A.load(2 + q)
        self.A.store(2 + q, (word & ~(3 << s)) | (color << s))

    def _move_interchange(self, f: int) -> None:
        """Tree ``f`` is turning black: hand large word 0 to the next nonblack tree."""
        lay = self._lay
        D = lay.D
        nxt = self._first_nonblack(lay, f)
        hist_f = self._lw_load(MASKED)
        if nxt is not None:
            hist_next = self._lw_load(nxt * D) & self._hist_mask
            first = self._lw_load(f * D) if f else hist_f
            self._lw_store(MASKED, hist_next)
            self._lw_store(nxt * D, first)
            if f:
                self._lw_store(f * D, hist_f)
            self._f = nxt
            self.cases["interchange"] += 1
            return
        # last tree: undo the swap and fall back to the plain layout
        if f:
            first = self._lw_load(f * D)
            self._lw_store(0, first)
            self._lw_store(f * D, hist_f)
        else:
            self._lw_store(0, hist_f)
        self.region.store(0, 0)
        self._f = None
        self.cases["all-black"] += 1

    def _phys(self, i: int, base: int, k: int) -> int:
        if k == 0 and self._f is not None:
            if i == self._f:
                return MASKED
            if i == 0:
                return self._f * self._lay.D
        return base + k

    def _lw_load(self, p: int) -> int:
        if p == MASKED:
            return pack(self.A.load_many(HEADER, HIST_CELLS), self.w)
        return pack(self.A.load_many(p * C_PRIME, C_PRIME), self.w)

    def _lw_store(self, p: int, x: int) -> None:
        if p == MASKED:
            assert x >> (HIST_CELLS * self.w) == 0, "large word 0 only has room for a history"
            self.A.store_many(HEADER, unpack(x, HIST_CELLS, self.w))
        else:
            self.A.store_many(p * C_PRIME, unpack(x, C_PRIME, self.w))

    def _lw_peek(self, p: int) -> int:
        if p == MASKED:
            return pack([self.A.peek(HEADER + s) for s in range(HIST_CELLS)], self.w)
        return pack([self.A.peek(p * C_PRIME + s) for s in range(C_PRIME)], self.w)

    def _tree(self, lay: Layout, i: int) -> LightPathTree:
        key = (lay.n, lay.t, i)
        tr = self._trees.get(key)
        if tr is None:
            tr = LightPathTree(_Store(self, i, i * lay.D), lay.d, lay.t_cap, _Root(self, i), HIST_CELLS * self.w,
                               universe=lay.tree_size(i), cases=self.cases)
            self._trees[key] = tr
        return tr

    def _forest(self, lay: Layout) -> Forest:
        key = (lay.n, lay.t)
        fo = self._forests.get(key)
        if fo is None:
            body = self.region.sub(1 + HEADER)
            fo = Forest(body, lay.n, lay.t_cap, init=False,
                        partial_cell=self.A.sub(2, 1), counter_cell=self.A.sub(3, 1))
            fo.cases = self.cases
            self._forests[key] = fo
        return fo

    # -- client operations --------------------------------------------------------

    def read(self, l: int) -> int:
        lay = self._begin()
        if lay is None:
            return self.A.load(l)
        if not lay.few:
            return self._forest(lay).read(l)
        big, s = divmod(l, C_PRIME)
        if big >= lay.n_lw:
            return self.A.load(l)
        i, k = divmod(big, lay.D)
        return (self._tree(lay, i).read(k) >> (s * self.w)) & mask(self.w)

    def write(self, l: int, x: int) -> None:
        assert 0 <= x < (1 << self.w), "value does not fit in a word"
        lay = self._begin()
        if lay is None:
            self.A.store(l, x)
            return
        if not lay.few:
            self._forest(lay).write(l, x)
            return
        big, s = divmod(l, C_PRIME)
        if big >= lay.n_lw:
            self.A.store(l, x)
            return
        i, k = divmod(big, lay.D)
        tr = self._tree(lay, i)
        sh = s * self.w
        old = tr.read(k)
        tr.write(k, (old & ~(mask(self.w) << sh)) | (x << sh))

    # -- accounting and inspection ----------------------------------------------------

    def representation(self) -> str:
        if self.region.peek(0) == 0:
            return "all-black"
        lay = layout(self.A.peek(0), self.A.peek(1), self.w)
        return "few-roots" if lay.few else "forest"

    def space_bits(self) -> int:
        rep = self.representation()
        if rep != "forest":
            return self.n * self.w + 1
        fo = self._forest(layout(self.n, self.t, self.w))
        M = fo.p.M
        return self.n * self.w + 1 + HEADER * self.w + 3 * M * self.w

    def bound_bits(self) -> int:
        return self.n * self.w + redundancy_bound(self.n, self.t, self.w)

    def block_size(self) -> int:
        return C_FOREST_CELLS if self.representation() == "forest" else C_PRIME

    def iter_written_blocks(self):
        """Large-word blocks containing a written position (leftover words excluded).

        Block ``k`` covers positions ``[k*s, k*s + s)`` with ``s = block_size()``.
        """
        self.gray_visits = 0
        lay = self._begin()
        if lay is None:
            yield from range(self.n // C_PRIME)
            return
        if not lay.few:
            fo = self._forest(lay)
            yield from fo.iter_written_blocks()
            self.gray_visits = fo.gray_visits
            return
        for i in range(lay.N):
            color = self._root_get(i)
            if color == WHITE:
                continue
            base = i * lay.D
            tr = self._tree(lay, i)
            for leaf in tr.iter_black(lay.tree_size(i)):
                yield base + leaf
            self.gray_visits += tr.gray_visits

    def validate(self, shadow):
        errors = []
        w = self.w
        if self.region.peek(0) == 0:
            for l in range(self.n):
                if self.A.peek(l) != shadow.get(l, 0):
                    errors.append((3, f"plain word {l} holds {self.A.peek(l):#x}"))
                    break
            return errors
        n, t = self.A.peek(0), self.A.peek(1)
        if (n, t) != (self.n, min(self.t, w)):
            return [("H", f"header holds n={n}, t={t}")]
        lay = layout(n, t, w)
        if not lay.few:
            return self._forest(lay).validate(shadow)
        self._lay = lay
        self._f = self._first_nonblack_peek(lay)
        blocks: dict[int, int] = {}
        for l, x in shadow.items():
            big, s = divmod(l, C_PRIME)
            if big < lay.n_lw:
                blocks[big] = blocks.get(big, 0) | (x << (s * w))
        for q in range(lay.L):
            pos = lay.n_lw * C_PRIME + q
            if self.A.peek(pos) != shadow.get(pos, 0):
                errors.append((3, f"leftover word {pos} holds {self.A.peek(pos):#x}"))
        for i in range(lay.N):
            base = i * lay.D
            m = lay.tree_size(i)
            black = {b - base: v for b, v in blocks.items() if base <= b < base + m}
            for err in self._tree(lay, i).validate(black, m):
                errors.append((err[0], f"tree {i}: {err[1]}"))
        return errors

    def _first_nonblack_peek(self, lay: Layout) -> int | None:
        for i in range(lay.N):
            if self._root_get(i, peek=True) != BLACK:
                return i
        return None


C_FOREST_CELLS = 16
