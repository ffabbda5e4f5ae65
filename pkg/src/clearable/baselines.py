"""Earlier initializable arrays: the trie method, its named instances, the
folklore code/inverse-code table and Navarro's trie/folklore hybrid."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arena import BitField, Region
from .words import ClearableArray, ceil_log2, mask


def _cdiv(a: int, b: int) -> int:
    return -(-a // b)


def _repeat(v: int, b: int, w: int) -> int:
    """``v`` repeated every ``b`` bits, long enough to cut any aligned word from."""
    rep = 0
    for i in range((w + b) // b + 2):
        rep |= v << (i * b)
    return rep


class Folklore(ClearableArray):
    """Constant-time array with code tables ``f``/``f_inv`` and a counter ``k``.

    Data words are indexed by code.  ``entry_bits`` defaults to
    ``ceil(log2 n)`` with tables packed tightly; callers that want whole-word
    table entries pass ``entry_bits=w``.

    Layout: ``[data: n][f table][f_inv table][k]``.  A caller may keep the
    counter elsewhere by passing a one-cell ``counter`` region.
    """

    name = "folklore"

    def __init__(self, region: Region, n: int, v: int = 0, entry_bits: int | None = None, init: bool = True,
                 counter: Region | None = None):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.w = region.w
        self.b = region.w
        self.v = v
        self.e = ceil_log2(n) if entry_bits is None else entry_bits
        tw = _cdiv(n * self.e, self.w)
        if len(region) < self.cells_needed(n, self.w, entry_bits, counter is None):
            raise ValueError("region too small for folklore array")
        self.region = region
        self.data = region.sub(0, n)
        self.f = BitField(region.sub(n, tw))
        self.finv = BitField(region.sub(n + tw, tw))
        if counter is None:
            self._kreg, self._kcell = region, n + 2 * tw
        else:
            self._kreg, self._kcell = counter, 0
        if init:
            self._kreg.store(self._kcell, 0)

    @staticmethod
    def cells_needed(n: int, w: int, entry_bits: int | None = None, own_counter: bool = True) -> int:
        e = ceil_log2(n) if entry_bits is None else entry_bits
        return n + 2 * _cdiv(n * e, w) + (1 if own_counter else 0)

    def _code(self, l: int, k: int) -> int:
        """Code of ``l`` or -1 when the table entry is garbage."""
        e = self.e
        j = self.f.get(l * e, e)
        if j < k and self.finv.get(j * e, e) == l:
            return j
        return -1

    def counter(self) -> int:
        return self._kreg.load(self._kcell)

    def read(self, l: int) -> int:
        j = self._code(l, self._kreg.load(self._kcell))
        return self.v if j < 0 else self.data.load(j)

    def write(self, l: int, x: int) -> None:
        k = self._kreg.load(self._kcell)
        j = self._code(l, k)
        if j < 0:
            e = self.e
            j = k
            self.f.set(l * e, e, j)
            self.finv.set(j * e, e, l)
            self._kreg.store(self._kcell, k + 1)
        self.data.store(j, x)

    def is_written(self, l: int) -> bool:
        return self._code(l, self._kreg.load(self._kcell)) >= 0

    def written(self):
        """Indices in code order (first-write order)."""
        e = self.e
        for j in range(self._kreg.load(self._kcell)):
            yield self.finv.get(j * e, e)

    def counter_bits(self) -> int:
        return ceil_log2(self.n + 1)

    def space_bits(self) -> int:
        return self.n * self.w + 2 * self.n * self.e + self.counter_bits()

    def validate(self, shadow):
        errors = []
        k = self._kreg.peek(self._kcell)
        seen = set()
        e = self.e
        for j in range(k):
            l = self.finv.get(j * e, e)
            if self.f.get(l * e, e) != j:
                errors.append(("f(finv(j)) != j", j))
            seen.add(l)
        if seen != set(shadow):
            errors.append(("valid codes differ from written set", sorted(seen ^ set(shadow))[:5]))
        return errors


@dataclass
class TrieConfig:
    """Degree sequence (leaf side first) plus how many top levels are preprocessed."""

    degrees: tuple[int, ...]
    preprocessed: int = 0
    counts: list[int] = field(default_factory=list)

    def resolve(self, n: int, b: int) -> None:
        """Round degrees up so the root is a single node covering ``n*b`` leaves."""
        degrees = [max(1, d) for d in self.degrees]
        h = len(degrees)
        if not 0 <= self.preprocessed <= h:
            raise ValueError("preprocessed levels out of range")
        counts = [n * b]
        for i in range(h - 1):
            counts.append(_cdiv(counts[-1], degrees[i]))
        degrees[h - 1] = counts[-1]
        counts.append(1)
        self.degrees = tuple(degrees)
        self.counts = counts


INSTANCES = ("plain", "simple", "hierarchic", "simple-h", "shv")


def instance_config(name: str, n: int, b: int, w: int) -> TrieConfig:
    if name == "plain":
        return TrieConfig((n * b,), preprocessed=1)
    if name == "simple":
        return TrieConfig((b, n), preprocessed=1)
    if name == "hierarchic":
        degrees = [b]
        count = n
        while count > 1:
            degrees.append(w)
            count = _cdiv(count, w)
        return TrieConfig(tuple(degrees))
    if name == "simple-h":
        return TrieConfig((b, _cdiv(n, w), w))
    if name == "shv":
        return TrieConfig((b, w, _cdiv(n, w)), preprocessed=1)
    raise ValueError(f"unknown trie instance {name!r}")


class TrieArray(ClearableArray):
    """Tree of "initialized?" bits over ``n*b`` leaf bits.

    Height-``i`` nodes have ``degrees[i-1]`` children.  The bits of each level
    are packed ``w`` to a word, node ``(i, k)`` at bit ``k`` of its level.
    A node whose bit is 1 has initialized children.
    """

    def __init__(self, region: Region, n: int, b: int, config: TrieConfig, v: int = 0, name: str = "trie", init: bool = True):
        if not 1 <= b <= region.w:
            raise ValueError("entry width must be in [1, w]")
        self.n, self.b, self.w, self.v = n, b, region.w, v
        self.name = name
        config.resolve(n, b)
        self.config = config
        self.h = h = len(config.degrees)
        self.counts = config.counts
        self.stored = [False] + [i <= h - config.preprocessed for i in range(1, h + 1)]
        # prefix[i] = leaf bits under one height-i node
        self.prefix = [1]
        for d in config.degrees:
            self.prefix.append(self.prefix[-1] * d)
        self.fields: list[BitField | None] = []
        offset = 0
        for i in range(h + 1):
            if i == 0 or self.stored[i]:
                cells = _cdiv(self.counts[i], self.w)
                self.fields.append(BitField(region.sub(offset, cells)))
                offset += cells
            else:
                self.fields.append(None)
        self.region = region.sub(0, offset)
        self._rep = _repeat(v, b, self.w)
        if init:
            self._init()

    @classmethod
    def cells_needed(cls, n: int, b: int, config: TrieConfig, w: int) -> int:
        config = TrieConfig(config.degrees, config.preprocessed)
        config.resolve(n, b)
        h = len(config.degrees)
        total = _cdiv(config.counts[0], w)
        for i in range(1, h + 1):
            if i <= h - config.preprocessed:
                total += _cdiv(config.counts[i], w)
        return total

    def _init(self) -> None:
        top = self.h - self.config.preprocessed
        if top == self.h:
            self.fields[self.h].set(0, 1, 0)
        else:
            # the first stored level below the preprocessed block gets cleared
            self._clear_children(top + 1, 0, whole_level=True)

    def _data_pattern(self, q: int) -> int:
        return (self._rep >> ((q * self.w) % self.b)) & mask(self.w)

    def _clear_children(self, i: int, k: int, whole_level: bool = False) -> None:
        if whole_level:
            lo, hi = 0, self.counts[i - 1]
        else:
            d = self.config.degrees[i - 1]
            lo, hi = k * d, min((k + 1) * d, self.counts[i - 1])
        f = self.fields[i - 1]
        if i == 1:
            f.fill(lo, hi, self._data_pattern if self.v else None)
        else:
            f.fill(lo, hi)

    def read(self, l: int) -> int:
        pos = l * self.b
        for i in range(self.h, 0, -1):
            f = self.fields[i]
            if f is not None and not f.get(pos // self.prefix[i], 1):
                return self.v
        return self.fields[0].get(pos, self.b)

    def write(self, l: int, x: int) -> None:
        pos = l * self.b
        for i in range(self.h, 0, -1):
            f = self.fields[i]
            if f is None:
                continue
            k = pos // self.prefix[i]
            if not f.get(k, 1):
                self._clear_children(i, k)
                f.set(k, 1, 1)
        self.fields[0].set(pos, self.b, x)

    def space_bits(self) -> int:
        return self.n * self.b + sum(self.counts[i] for i in range(1, self.h + 1) if self.stored[i])


def trie_instance(name: str, region: Region, n: int, b: int | None = None, v: int = 0, init: bool = True) -> TrieArray:
    b = region.w if b is None else b
    return TrieArray(region, n, b, instance_config(name, n, b, region.w), v=v, name=name, init=init)


def trie_cells(name: str, n: int, b: int, w: int) -> int:
    return TrieArray.cells_needed(n, b, instance_config(name, n, b, w), w)


class Navarro(ClearableArray):
    """Hierarchic truncated above height ``h+1``.

    The bits of the height-``h+1`` nodes are packed ``w`` to a word and those
    words live in a folklore array with whole-word table entries; word ``q``
    holds the nodes of rank ``q*w .. q*w+w-1``.
    """

    name = "navarro"

    def __init__(self, region: Region, n: int, b: int | None = None, h: int = 0, v: int = 0, init: bool = True):
        w = region.w
        b = w if b is None else b
        if h < 0:
            raise ValueError("h must be non-negative")
        self.n, self.b, self.w, self.h, self.v = n, b, w, h, v
        self.counts = counts = self._counts(n, h, w)
        top = h + 1
        self.M = _cdiv(counts[top], w)
        offset = 0
        self.data = BitField(region.sub(0, _cdiv(n * b, w)))
        offset += _cdiv(n * b, w)
        self.fields = [self.data]
        for j in range(1, top):
            cells = _cdiv(counts[j], w)
            self.fields.append(BitField(region.sub(offset, cells)))
            offset += cells
        fcells = Folklore.cells_needed(self.M, w, entry_bits=w)
        self.top = Folklore(region.sub(offset, fcells), self.M, entry_bits=w, init=init)
        self.region = region.sub(0, offset + fcells)
        self._rep = _repeat(v, b, w)

    @staticmethod
    def _counts(n: int, h: int, w: int) -> list[int]:
        counts = [n, n]
        for _ in range(h):
            counts.append(_cdiv(counts[-1], w))
        return counts

    @classmethod
    def cells_needed(cls, n: int, b: int, h: int, w: int) -> int:
        counts = cls._counts(n, h, w)
        total = _cdiv(n * b, w) + sum(_cdiv(counts[j], w) for j in range(1, h + 1))
        return total + Folklore.cells_needed(_cdiv(counts[h + 1], w), w, entry_bits=w)

    def _rank(self, l: int, j: int) -> int:
        return l // (self.w ** (j - 1))

    def _clear_children(self, j: int, k: int) -> None:
        if j == 1:
            b = self.b
            self.data.fill(k * b, k * b + b, (lambda q: (self._rep >> ((q * self.w) % b)) & mask(self.w)) if self.v else None)
        else:
            w = self.w
            self.fields[j - 1].fill(k * w, min(k * w + w, self.counts[j - 1]))

    def read(self, l: int) -> int:
        top = self.h + 1
        r = self._rank(l, top)
        if not (self.top.read(r // self.w) >> (r % self.w)) & 1:
            return self.v
        for j in range(self.h, 0, -1):
            if not self.fields[j].get(self._rank(l, j), 1):
                return self.v
        return self.data.get(l * self.b, self.b)

    def write(self, l: int, x: int) -> None:
        top = self.h + 1
        w = self.w
        r = self._rank(l, top)
        word = self.top.read(r // w)
        if not (word >> (r % w)) & 1:
            self._clear_children(top, r)
            self.top.write(r // w, word | (1 << (r % w)))
        for j in range(self.h, 0, -1):
            k = self._rank(l, j)
            f = self.fields[j]
            if not f.get(k, 1):
                self._clear_children(j, k)
                f.set(k, 1, 1)
        self.data.set(l * self.b, self.b, x)

    def space_bits(self) -> int:
        return self.n * self.b + sum(self.counts[1 : self.h + 1]) + self.top.space_bits()
