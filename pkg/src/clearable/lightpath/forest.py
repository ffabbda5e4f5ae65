"""Clearable array for arbitrary ``n`` built from light-path trees over large words.

Client words are grouped into large words of ``c`` cells.  The large words are
cut into ranges of ``d**t`` and each range is one partial light-path tree.  The
up to ``c - 1`` words that do not fill a large word are plain cells cleared at
init.

Root colors: with a single tree, one cell bit says black or not, and a gray
root is told from a white one by the root navigation vector in large word 0
(all white there is impossible for a gray root).  With several trees, the
``2N`` root bits are packed ``w`` to a word (tree ``i`` at bit ``2i mod w`` of
word ``2i div w``); the full words live in a folklore array and the partial
word is cleared at init.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from ..arena import Region
from ..baselines import Folklore
from ..words import ClearableArray, ceil_log2, mask, msb
from .core import BLACK, GRAY, WHITE, LightPathTree
from .largeword import LargeWordStore, OffsetStore

C_FOREST = 16


def _cdiv(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class ForestParams:
    n: int
    t: int
    w: int
    c: int
    t_cap: int
    d: int
    D: int
    n_lw: int
    N: int
    L: int
    M: int
    has_partial: bool

    def tree_size(self, i: int) -> int:
        return min(self.D, self.n_lw - i * self.D)


def tree_degree(t: int, w: int) -> int:
    """Largest power of two not above ``8w/t``."""
    return 1 << msb((8 * w) // t)


def forest_params(n: int, t: int, w: int, c: int = C_FOREST) -> ForestParams:
    if n < 1 or t < 1:
        raise ValueError("n and t must be positive")
    t_cap = min(t, w)
    d = tree_degree(t_cap, w)
    D = d ** t_cap
    n_lw = n // c
    N = _cdiv(n_lw, D)
    M = (2 * N) // w if N > 1 else 0
    return ForestParams(n, t, w, c, t_cap, d, D, n_lw, N, n - n_lw * c, M, N > 1 and (2 * N) % w != 0)


class SingleRoot:
    """One black/nonblack bit; white vs gray is read off large word 0."""

    def __init__(self, cell: Region, store, shift: int, navmask: int):
        self.cell = cell
        self.store = store
        self.shift = shift
        self.navmask = navmask

    def get(self) -> int:
        if self.cell.load(0) & 1:
            return BLACK
        return GRAY if (self.store.load(0) >> self.shift) & self.navmask else WHITE

    def peek(self) -> int:
        if self.cell.peek(0) & 1:
            return BLACK
        return GRAY if (self.store.peek(0) >> self.shift) & self.navmask else WHITE

    def set(self, color: int) -> None:
        if color == BLACK:
            self.cell.store(0, 1)
        elif color == WHITE:
            self.cell.store(0, 0)
            # only the cells under the root navigation vector need clearing
            w = self.store.w
            lo, hi = self.shift // w, (self.shift + self.navmask.bit_length() - 1) // w
            self.store.region.store_many(lo, [0] * (hi - lo + 1))
        # gray: the bit already says nonblack and the tree writes the history next


class PackedRoots:
    """``2N`` root bits: full words through a folklore array, the rest in one cell."""

    def __init__(self, folk: Folklore | None, partial: Region | None, M: int, w: int):
        self.folk = folk
        self.partial = partial
        self.M = M
        self.w = w

    def word(self, q: int) -> int:
        return self.folk.read(q) if q < self.M else self.partial.load(0)

    def set_word(self, q: int, x: int) -> None:
        if q < self.M:
            self.folk.write(q, x)
        else:
            self.partial.store(0, x)

    def get(self, i: int) -> int:
        q, s = divmod(2 * i, self.w)
        return (self.word(q) >> s) & 3

    def set(self, i: int, color: int) -> None:
        q, s = divmod(2 * i, self.w)
        word = self.word(q)
        self.set_word(q, (word & ~(3 << s)) | (color << s))

    def trees_touched(self, N: int):
        """Indices of trees whose root might be nonwhite, from written words only."""
        per = self.w // 2
        qs = sorted(self.folk.written()) if self.folk is not None else []
        if self.partial is not None:
            qs.append(self.M)
        for q in qs:
            yield from range(q * per, min(N, q * per + per))


class TreeRoot:
    def __init__(self, packed: PackedRoots, i: int):
        self.packed = packed
        self.i = i

    def get(self) -> int:
        return self.packed.get(self.i)

    def set(self, color: int) -> None:
        self.packed.set(self.i, color)

    def peek(self) -> int:
        return self.packed.get(self.i)


class Forest(ClearableArray):
    """Light-path forest for any ``n``; operations need ``n`` and ``t`` (kept on
    the object here, supplied from a header by the self-contained array).

    Layout: ``[data: n][aux][folklore: M words + two tables]`` where aux is the
    single root bit (one tree) or the partial root word and the folklore
    counter (several trees).  A caller can supply the aux cells instead.
    """

    name = "forest"

    def __init__(self, region: Region, n: int, t: int, c: int = C_FOREST, init: bool = True,
                 partial_cell: Region | None = None, counter_cell: Region | None = None):
        w = region.w
        self.p = p = forest_params(n, t, w, c)
        self.n, self.t, self.c = n, t, c
        self.w = self.b = w
        self.wmask = mask(w)
        external = partial_cell is not None or counter_cell is not None
        off = n
        if not external:
            if p.N == 1 or p.has_partial:
                partial_cell = region.sub(off, 1)
                off += 1
            if p.M:
                counter_cell = region.sub(off, 1)
                off += 1
        folk = None
        if p.M:
            fcells = Folklore.cells_needed(p.M, w, w, own_counter=False)
            folk = Folklore(region.sub(off, fcells), p.M, entry_bits=w, init=False, counter=counter_cell)
            off += fcells
        self.region = region.sub(0, off)
        data = region.sub(0, n)
        self.lw = LargeWordStore(data.sub(0, p.n_lw * c), c)
        self.leftover = data.sub(p.n_lw * c, p.L)
        self.cases: Counter = Counter()
        self.gray_visits = 0
        self._trees: dict[int, LightPathTree] = {}
        self._folk = folk
        self._partial = partial_cell
        self._counter = counter_cell
        if p.N == 1:
            self._single = SingleRoot(partial_cell, self.lw, 2 * p.d * (p.t_cap - 1), mask(2 * p.d))
        elif p.N > 1:
            self.packed = PackedRoots(folk, partial_cell if p.has_partial else None, p.M, w)
        if init:
            self.init_roots()
            self.clear_tail(p.L)

    @classmethod
    def cells_needed(cls, n: int, t: int, w: int, c: int = C_FOREST, own_aux: bool = True) -> int:
        p = forest_params(n, t, w, c)
        total = n
        if own_aux:
            total += (1 if p.N == 1 or p.has_partial else 0) + (1 if p.M else 0)
        if p.M:
            total += Folklore.cells_needed(p.M, w, w, own_counter=False)
        return total

    def init_roots(self) -> None:
        p = self.p
        if p.N == 1:
            self._single.set(WHITE)
        elif p.N > 1:
            if p.has_partial:
                self._partial.store(0, 0)
            if p.M:
                self._counter.store(0, 0)

    def clear_tail(self, count: int) -> None:
        """Zero the last ``count`` data cells (at least the leftover words)."""
        data = self.region.sub(0, self.n)
        count = min(count, self.n)
        data.store_many(self.n - count, [0] * count)

    def tree(self, i: int) -> LightPathTree:
        tr = self._trees.get(i)
        if tr is None:
            p = self.p
            roots = self._single if p.N == 1 else TreeRoot(self.packed, i)
            tr = LightPathTree(OffsetStore(self.lw, i * p.D), p.d, p.t_cap, roots, 16 * self.w,
                               universe=p.tree_size(i), cases=self.cases)
            self._trees[i] = tr
        return tr

    def read(self, l: int) -> int:
        p = self.p
        big, s = divmod(l, self.c)
        if big >= p.n_lw:
            return self.leftover.load(l - p.n_lw * self.c)
        i, k = divmod(big, p.D)
        return (self.tree(i).read(k) >> (s * self.w)) & self.wmask

    def write(self, l: int, x: int) -> None:
        p = self.p
        big, s = divmod(l, self.c)
        if big >= p.n_lw:
            self.leftover.store(l - p.n_lw * self.c, x)
            return
        i, k = divmod(big, p.D)
        tr = self.tree(i)
        sh = s * self.w
        old = tr.read(k)
        tr.write(k, (old & ~(self.wmask << sh)) | (x << sh))

    def root_bits(self) -> int:
        p = self.p
        if p.N == 0:
            return 0
        if p.N == 1:
            return 1
        return 2 * p.N + 2 * p.M * self.w + ceil_log2(p.M + 1)

    def space_bits(self) -> int:
        return self.n * self.w + self.root_bits()

    def nonwhite_trees(self):
        p = self.p
        if p.N == 1:
            return [0]
        if p.N > 1:
            return list(self.packed.trees_touched(p.N))
        return []

    def iter_written_blocks(self):
        """Indices of large words holding at least one written position.

        Leftover words past the last full large word are not tracked.
        """
        p = self.p
        self.gray_visits = 0
        for i in self.nonwhite_trees():
            tr = self.tree(i)
            m = p.tree_size(i)
            for leaf in tr.iter_black(m):
                yield i * p.D + leaf
            self.gray_visits += tr.gray_visits

    def validate(self, shadow):
        p = self.p
        errors = []
        blocks: dict[int, int] = {}
        c, w = self.c, self.w
        for l, x in shadow.items():
            big, s = divmod(l, c)
            if big >= p.n_lw:
                continue
            blocks[big] = blocks.get(big, 0) | (x << (s * w))
        for q in range(p.L):
            want = shadow.get(p.n_lw * c + q, 0)
            if self.leftover.peek(q) != want:
                errors.append((3, f"leftover word {q} holds {self.leftover.peek(q):#x}, expected {want:#x}"))
        for i in range(p.N):
            base = i * p.D
            m = p.tree_size(i)
            black = {b - base: v for b, v in blocks.items() if base <= b < base + m}
            for err in self.tree(i).validate(black, m):
                errors.append((err[0], f"tree {i}: {err[1]}"))
        return errors
