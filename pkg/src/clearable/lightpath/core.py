"""Light-path tree over a complete d-ary tree of height t.

Leaves are the indices ``0 .. d**t - 1``.  A leaf is white until written and
black afterwards; an inner node is white or black when all leaves below it
are, and gray otherwise.  Only the root color is stored explicitly.  Every
other color is recovered from *histories*: the concatenated navigation
vectors (child colors, 2 bits per child) of the nodes on a light path, kept in
the word of the path's leftmost leaf (its historian).  A black historian's own
value is parked in the white leaf that ends the path (its proxy).

The tree is written against two small protocols so the same code runs on
plain words and on large words:

* ``store``: ``load(i)``, ``store(i, x)``, ``peek(i)`` on leaf words;
* ``roots``: ``get()``, ``set(color)``, ``peek()`` on the root color.
"""

from __future__ import annotations

from collections import Counter
from typing import Callable

from ..arena import Region
from ..words import ClearableArray, alt_mask, lsb, mask, msb

WHITE, GRAY, BLACK = 0, 1, 2
COLOR_NAMES = ("white", "gray", "black")


class RootCell:
    """Root color kept in the low two bits of a dedicated cell."""

    def __init__(self, region: Region, index: int = 0):
        self.region = region
        self.index = index

    def get(self) -> int:
        return self.region.load(self.index) & 3

    def set(self, color: int) -> None:
        self.region.store(self.index, color)

    def peek(self) -> int:
        return self.region.peek(self.index) & 3


def check_params(d: int, t: int, width: int) -> int:
    """Validate ``(d, t)`` against the history width; return ``log2 d``."""
    if d < 2 or d & (d - 1):
        raise ValueError(f"d={d} must be a power of two >= 2")
    if t < 1:
        raise ValueError("t must be positive")
    if 2 * d * t > width:
        raise ValueError(f"2*d*t={2 * d * t} exceeds the {width}-bit history word")
    return msb(d)


class LightPathTree:
    """Clearable array of ``d**t`` leaf words with O(t) read and write.

    ``universe`` gives the number of real leaves (an int, or a callable
    consulted once, on the first write).  Leaves at or beyond it are treated
    as black padding and their words are never touched.
    """

    def __init__(self, store, d: int, t: int, roots, width: int,
                 universe: int | Callable[[], int] | None = None, cases: Counter | None = None):
        self.logd = check_params(d, t, width)
        self.A = store
        self.roots = roots
        self.d, self.t = d, t
        self.D = 1 << (self.logd * t)
        self.navmask = mask(2 * d)
        self.alt = alt_mask(d)
        self.blackpat = self.alt << 1
        self.hmask = mask(2 * d * t)
        self.universe = self.D if universe is None else universe
        self.cases = Counter() if cases is None else cases
        self.gray_visits = 0

    # -- navigation ----------------------------------------------------------

    def slot(self, j: int) -> int:
        """Bit offset of a height-``j`` navigation vector in a history."""
        return 2 * self.d * (j - 1)

    def digit(self, l: int, j: int) -> int:
        """Index of the child of the height-``j`` ancestor of ``l`` leading to ``l``."""
        return (l >> (self.logd * (j - 1))) & (self.d - 1)

    def leftmost_leaf(self, j: int, k: int) -> int:
        return k << (self.logd * j)

    def nav(self, H: int, j: int) -> int:
        return (H >> (2 * self.d * (j - 1))) & self.navmask

    def preferred(self, nav: int) -> int:
        """Leftmost gray child, else leftmost white child."""
        g = nav & self.alt
        if g:
            return lsb(g) >> 1
        white = ~(nav | (nav >> 1)) & self.alt
        if not white:
            raise ValueError("an all-black node has no preferred child")
        return lsb(white) >> 1

    def path_end(self, H: int, j: int, k: int) -> int:
        """Leaf ending the light path through gray node ``(j, k)``."""
        logd = self.logd
        while j > 0:
            nav = (H >> (2 * self.d * (j - 1))) & self.navmask
            pc = self.preferred(nav)
            k = (k << logd) | pc
            j -= 1
            if j and ((nav >> (2 * pc)) & 3) == WHITE:
                return k << (logd * j)
        return k

    def spine_color(self, H: int, j: int) -> int:
        """Color of the leftmost leaf below a height-``j`` node on ``H``'s path."""
        while j > 0:
            c = (H >> (2 * self.d * (j - 1))) & 3
            if c != GRAY:
                return c
            j -= 1
        return GRAY  # unreachable for well-formed histories

    def fresh(self, j: int, l: int) -> tuple[int, int]:
        """History and proxy of a node at height ``j`` whose only black leaf is ``l``."""
        hist = 0
        for jj in range(j, 0, -1):
            hist |= (GRAY if jj > 1 else BLACK) << (2 * self.d * (jj - 1) + 2 * self.digit(l, jj))
        low = l & (self.d - 1)
        return hist, (l - low) | (0 if low else 1)

    # -- client operations ------------------------------------------------------

    def read(self, l: int) -> int:
        color = self.roots.get()
        if color == WHITE:
            return 0
        if color == BLACK:
            return self.A.load(l)
        i = self._descend(l)
        return 0 if i < 0 else self.A.load(i)

    def write(self, l: int, x: int) -> None:
        self._blacken(l)
        if self.roots.get() == BLACK:
            self.A.store(l, x)
            return
        i = self._descend(l)
        assert i >= 0, "leaf still white after blackening"
        self.A.store(i, x)

    def _descend(self, l: int) -> int:
        """Word holding ``l``'s value under a gray root, or -1 if ``l`` is white."""
        A, d, logd, alt, navmask = self.A, self.d, self.logd, self.alt, self.navmask
        h = 0
        H = A.load(0) & self.hmask
        j, k = self.t, 0
        while True:
            s = 2 * d * (j - 1)
            nav = (H >> s) & navmask
            ci = (l >> (logd * (j - 1))) & (d - 1)
            col = (nav >> (2 * ci)) & 3
            if col != GRAY:
                break
            kc = (k << logd) | ci
            if nav & alt & ((1 << (2 * ci)) - 1):
                # a gray left sibling makes this child the top of a new light path
                h = kc << (logd * (j - 1))
                H = A.load(h) & self.hmask
            j -= 1
            k = kc
        if col == WHITE:
            return -1
        if l != h:
            return l
        # l is a black historian; its value sits at the end of the light path
        # through the last gray node examined
        return self.path_end(H, j, k)

    # -- phase 1 of write ---------------------------------------------------------

    def _materialize(self, m: int) -> None:
        """Gray root whose history paints leaves ``m .. D-1`` black."""
        d, logd = self.d, self.logd
        hist, lo, j = 0, 0, self.t
        while j >= 1:
            span = logd * (j - 1)
            rel = m - lo
            ib = rel >> span
            rem = rel & ((1 << span) - 1)
            nav = self.blackpat & ~((1 << (2 * ib)) - 1)
            if rem:
                nav ^= 3 << (2 * ib)
            hist |= nav << (2 * d * (j - 1))
            if not rem:
                break
            lo += ib << span
            j -= 1
        self.roots.set(GRAY)
        self.A.store(0, hist)
        self.cases["materialize"] += 1

    def _blacken(self, l: int) -> None:
        A, d, logd, alt, navmask = self.A, self.d, self.logd, self.alt, self.navmask
        color = self.roots.get()
        if color == BLACK:
            return
        if color == WHITE:
            m = self.universe() if callable(self.universe) else self.universe
            if m < self.D:
                self._materialize(m)
            else:
                hist, _ = self.fresh(self.t, l)
                self.roots.set(GRAY)
                A.store(0, hist)
                self.cases["root-gray"] += 1
                return
        # descend through gray nodes, remembering each one's nav and light path
        nodes = []
        tops = [(self.t, 0, 0, A.load(0) & self.hmask)]
        H = tops[0][3]
        j, k = self.t, 0
        while True:
            nav = (H >> (2 * d * (j - 1))) & navmask
            nodes.append((j, k, nav, len(tops) - 1))
            ci = (l >> (logd * (j - 1))) & (d - 1)
            col = (nav >> (2 * ci)) & 3
            if col != GRAY:
                break
            kc = (k << logd) | ci
            if nav & alt & ((1 << (2 * ci)) - 1):
                h = kc << (logd * (j - 1))
                H = A.load(h) & self.hmask
                tops.append((j - 1, kc, h, H))
            j -= 1
            k = kc
        if col == BLACK:
            return
        if j > 1:
            # first white node on the path turns gray
            self._recolor(l, nodes[-1], tops, GRAY)
            return
        # l is a white leaf below gray ancestors only: the last node on the
        # path with a nonblack sibling turns black, or the root does
        for idx in range(len(nodes) - 1, -1, -1):
            jj, _, nav, _ = nodes[idx]
            ci = (l >> (logd * (jj - 1))) & (d - 1)
            if ~(nav >> 1) & alt & ~(1 << (2 * ci)):
                self._recolor(l, nodes[idx], tops, BLACK)
                return
        self.roots.set(BLACK)
        if l != 0:
            A.store(0, A.load(l))
        self.cases["root-black"] += 1

    def _recolor(self, l: int, znode, tops, new: int) -> None:
        """Recolor the child ``v`` of gray node ``z`` on the path to ``l``."""
        A, d, logd = self.A, self.d, self.logd
        jz, kz, navz, ti = znode
        ju, _, hu, Hu = tops[ti]
        ci = (l >> (logd * (jz - 1))) & (d - 1)
        jv = jz - 1
        kv = (kz << logd) | ci
        navz2 = (navz & ~(3 << (2 * ci))) | (new << (2 * ci))
        pc_old = self.preferred(navz)
        pc_new = self.preferred(navz2)
        pu = self.path_end(Hu, jz, kz)
        hu_black = self.spine_color(Hu, ju) == BLACK
        below = (1 << (2 * d * (jz - 1))) - 1

        # new light path of u below z
        Hoff = 0
        jy, ky = jv, (kz << logd) | pc_new
        if pc_new == ci:
            hist_below, pu2 = self.fresh(jv, l)
        elif jy == 0:
            hist_below, pu2 = 0, ky
        elif ((navz2 >> (2 * pc_new)) & 3) == WHITE:
            hist_below, pu2 = 0, ky << (logd * jy)
        else:
            if pc_new == pc_old:
                hist_below = Hu & below
            else:
                # y was a top node; its history joins u's path
                Hoff = A.load(ky << (logd * jy)) & self.hmask
                hist_below = Hoff & below
            pu2 = self.path_end(hist_below, jy, ky)
        keep = ~((1 << (2 * d * jz)) - 1)
        A.store(hu, (Hu & keep) | (navz2 << (2 * d * (jz - 1))) | hist_below)

        if new == GRAY:
            if pc_new == ci:
                # Case 1: v becomes z's preferred child
                if hu_black and pu2 != pu:
                    A.store(pu2, A.load(pu))
                if ((navz >> (2 * pc_old)) & 3) == GRAY:
                    # the old preferred child starts a light path of its own
                    hstar = ((kz << logd) | pc_old) << (logd * jv)
                    if pu != hstar:
                        A.store(pu, A.load(hstar))
                    A.store(hstar, Hu & ((1 << (2 * d * jv)) - 1))
                self.cases["case1"] += 1
            else:
                # Case 4: v becomes a top node
                hist, _ = self.fresh(jv, l)
                A.store(kv << (logd * jv), hist)
                self.cases["case4"] += 1
        elif pc_old == ci:
            # Case 2: v was z's preferred child and is now black
            if pc_new != ci and jy and ((navz2 >> (2 * pc_new)) & 3) == GRAY:
                hstar = ky << (logd * jy)
                if self.spine_color(Hoff, jy) == BLACK:
                    A.store(hstar, A.load(pu2))
            if hu_black and pu2 != pu:
                A.store(pu2, A.load(pu))
            self.cases["case2"] += 1
        elif jv == 0:
            # Case 3: a leaf with a white left sibling; no light path moves
            self.cases["case3"] += 1
        else:
            # Case 5: v was a top node and l was its proxy
            hv = kv << (logd * jv)
            if hv != l:
                A.store(hv, A.load(l))
            self.cases["case5"] += 1

    # -- inspection --------------------------------------------------------------

    def iter_black(self, m: int | None = None):
        """Black real leaves, found by a depth-first search over gray nodes.

        The number of gray nodes visited is left in ``gray_visits``.
        """
        m = self.D if m is None else m
        self.gray_visits = 0
        color = self.roots.get()
        if color == WHITE:
            return
        if color == BLACK:
            yield from range(m)
            return
        d, logd = self.d, self.logd
        stack = [(self.t, 0, self.A.load(0) & self.hmask)]
        while stack:
            j, k, H = stack.pop()
            if j < 0:
                # a black subtree, stored as its leaf range
                yield from range(k, H)
                continue
            self.gray_visits += 1
            nav = self.nav(H, j)
            span = logd * (j - 1)
            # children pushed right to left so leaves come out in order
            for i in range(d - 1, -1, -1):
                col = (nav >> (2 * i)) & 3
                kc = (k << logd) | i
                if col == BLACK:
                    lo = kc << span
                    if lo < m:
                        stack.append((-1, lo, min(m, lo + (1 << span))))
                elif col == GRAY:
                    if nav & self.alt & ((1 << (2 * i)) - 1):
                        H2 = self.A.load(kc << span) & self.hmask
                    else:
                        H2 = H
                    stack.append((j - 1, kc, H2))

    def validate(self, black: dict[int, int], m: int | None = None) -> list[tuple]:
        """Recompute colors and light paths from ``black`` (leaf -> value) and
        check the storage invariants word by word.

        Invariant ids: 1 root color, 2 historian holds history, 3 black
        non-historian holds its value, 4 proxy of a black historian holds
        the historian's value; ``S`` structural properties.
        """
        m = self.D if m is None else m
        return _Checker(self, black, m).run()


class _Checker:
    def __init__(self, tree: LightPathTree, black: dict[int, int], m: int):
        import bisect

        self.tree = tree
        self.black = black
        self.m = m
        self.keys = sorted(b for b in black if b < m)
        self._bisect = bisect.bisect_left
        self.memo: dict[tuple[int, int], int] = {}

    def color(self, j: int, k: int) -> int:
        key = (j, k)
        c = self.memo.get(key)
        if c is not None:
            return c
        lo = k << (self.tree.logd * j)
        hi = lo + (1 << (self.tree.logd * j))
        real_hi = min(hi, self.m)
        count = 0
        if lo < real_hi:
            count = self._bisect(self.keys, real_hi) - self._bisect(self.keys, lo)
        count += max(0, hi - max(lo, self.m))
        c = WHITE if count == 0 else BLACK if count == hi - lo else GRAY
        self.memo[key] = c
        return c

    def navvec(self, j: int, k: int) -> int:
        nav = 0
        for i in range(self.tree.d):
            nav |= self.color(j - 1, (k << self.tree.logd) | i) << (2 * i)
        return nav

    def run(self) -> list[tuple]:
        tree, errors = self.tree, []
        A = tree.A
        rc = self.color(tree.t, 0)
        stored = tree.roots.peek()
        if stored == WHITE and not self.keys:
            # padding is only painted black by the first write
            return errors
        if stored != rc:
            errors.append((1, f"root bits say {COLOR_NAMES[stored]}, tree is {COLOR_NAMES[rc]}"))
            return errors
        if rc == WHITE:
            return errors
        if rc == BLACK:
            for l in self.keys:
                if A.peek(l) != self.black[l]:
                    errors.append((3, f"leaf {l} holds {A.peek(l):#x}, expected {self.black[l]:#x}"))
            return errors
        # enumerate light paths by definition
        paths = []  # (top j, top k, historian, proxy, history)
        on_path: Counter = Counter()
        stack = [(tree.t, 0, True)]
        while stack:
            j, k, is_top = stack.pop()
            for i in range(tree.d):
                if self.color(j - 1, (k << tree.logd) | i) == GRAY:
                    stack.append((j - 1, (k << tree.logd) | i, None))
            if is_top is None:
                nav = self.navvec(j + 1, k >> tree.logd)
                pos = k & (tree.d - 1)
                is_top = bool(nav & tree.alt & ((1 << (2 * pos)) - 1))
            if not is_top:
                continue
            hist, jj, kk = 0, j, k
            while jj > 0:
                on_path[(jj, kk)] += 1
                nav = self.navvec(jj, kk)
                hist |= nav << tree.slot(jj)
                kk = (kk << tree.logd) | tree.preferred(nav)
                jj -= 1
            paths.append((j, k, tree.leftmost_leaf(j, k), kk, hist))
        for (j, k), cnt in on_path.items():
            if cnt != 1:
                errors.append(("S", f"node ({j},{k}) lies on {cnt} light paths"))
        historians = [p[2] for p in paths]
        proxies = [p[3] for p in paths]
        if len(set(historians)) != len(historians):
            errors.append(("S", "a leaf is historian of two light paths"))
        for j, k, h, p, hist in paths:
            if self.color(0, p) != WHITE:
                errors.append(("S", f"proxy {p} of top ({j},{k}) is not white"))
            if p >= self.m:
                errors.append(("S", f"proxy {p} beyond the {self.m} real leaves"))
            for other_h, other_p in zip(historians, proxies):
                if (other_h, other_p) == (h, p):
                    continue
                if other_h == p or other_p == h:
                    errors.append(("S", f"leaf shared as historian and proxy across paths ({h},{p})"))
                lo, hi = min(h, p), max(h, p)
                for q in (other_h, other_p):
                    if lo < q < hi:
                        errors.append(("S", f"leaf {q} lies strictly between historian {h} and proxy {p}"))
        hist_set = set(historians)
        for j, k, h, p, hist in paths:
            got = A.peek(h) & tree.hmask
            if got != hist:
                errors.append((2, f"historian {h} of top ({j},{k}) holds {got:#x}, expected {hist:#x}"))
            if self.color(0, h) == BLACK and h < self.m:
                if A.peek(p) != self.black[h]:
                    errors.append((4, f"proxy {p} holds {A.peek(p):#x}, expected value of historian {h}"))
        for l in self.keys:
            if l not in hist_set and A.peek(l) != self.black[l]:
                errors.append((3, f"leaf {l} holds {A.peek(l):#x}, expected {self.black[l]:#x}"))
        return errors


class LightPathArray(ClearableArray):
    """Standalone tree of ``d**t`` words plus a header cell for the root bits.

    Space is charged as ``n*w + 2``: the header cell carries two meaningful bits.
    """

    name = "lightpath-core"

    def __init__(self, region: Region, d: int, t: int, init: bool = True):
        w = region.w
        check_params(d, t, w)
        self.d, self.t = d, t
        self.n = d ** t
        self.w = self.b = w
        self.region = region.sub(0, self.n + 1)
        self.cases: Counter = Counter()
        self.tree = LightPathTree(self.region.sub(1, self.n), d, t, RootCell(self.region, 0), w, cases=self.cases)
        if init:
            self.tree.roots.set(WHITE)

    @staticmethod
    def cells_needed(d: int, t: int) -> int:
        return d ** t + 1

    def read(self, l: int) -> int:
        return self.tree.read(l)

    def write(self, l: int, x: int) -> None:
        self.tree.write(l, x)

    def space_bits(self) -> int:
        return self.n * self.w + 2

    def validate(self, shadow):
        return self.tree.validate(dict(shadow))

    def iter_written(self):
        """Exact written positions, in increasing order."""
        return self.tree.iter_black()
