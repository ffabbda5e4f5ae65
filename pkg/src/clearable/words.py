"""Word-RAM primitives and the clearable-array contract.

Words are plain Python ints kept in ``[0, 2**w)``; every structure carries its
own word length ``w``.  ``msb``/``lsb`` use ``int.bit_length`` (CPython lowers it
to a count-leading-zeros instruction); the ``*_portable`` variants compute the
same answers with de Bruijn multiplication on 64-bit chunks and are kept for
cross-checking.
"""

from __future__ import annotations

import abc

WORD_SIZES = (8, 16, 32, 64)

_M64 = (1 << 64) - 1
_DEBRUIJN = 0x03F79D71B4CB0A89
_DEBRUIJN_TABLE = [0] * 64
for _i in range(64):
    _DEBRUIJN_TABLE[((_DEBRUIJN << _i) & _M64) >> 58] = _i
del _i


def mask(width: int) -> int:
    return (1 << width) - 1


def msb(x: int) -> int:
    """Index of the highest set bit of ``x``."""
    if x <= 0:
        raise ValueError("msb of a non-positive value")
    return x.bit_length() - 1


def lsb(x: int) -> int:
    """Index of the lowest set bit of ``x``."""
    if x <= 0:
        raise ValueError("lsb of a non-positive value")
    return (x & -x).bit_length() - 1


def _lsb64(x: int) -> int:
    # x & -x isolates the lowest one; the de Bruijn product puts a unique
    # 6-bit pattern in the top bits.
    return _DEBRUIJN_TABLE[(((x & -x) * _DEBRUIJN) & _M64) >> 58]


def _msb64(x: int) -> int:
    x |= x >> 1
    x |= x >> 2
    x |= x >> 4
    x |= x >> 8
    x |= x >> 16
    x |= x >> 32
    return _lsb64(x ^ (x >> 1))


def lsb_portable(x: int, width: int = 64) -> int:
    if x <= 0:
        raise ValueError("lsb of a non-positive value")
    for base in range(0, width, 64):
        chunk = (x >> base) & _M64
        if chunk:
            return base + _lsb64(chunk)
    raise ValueError("value wider than width")


def msb_portable(x: int, width: int = 64) -> int:
    if x <= 0:
        raise ValueError("msb of a non-positive value")
    top = (width + 63) // 64 * 64
    for base in range(top - 64, -1, -64):
        chunk = (x >> base) & _M64
        if chunk:
            return base + _msb64(chunk)
    raise ValueError("value wider than width")


def alt_mask(dt: int, width: int | None = None) -> int:
    """Return ``(2**(2*dt) - 1) // 3``, the pattern ``0101...01`` of ``2*dt`` bits.

    ``2**(2*dt)`` is never formed, so the computation stays inside a word of
    ``width`` bits even when ``2*dt == width``.
    """
    if dt < 1:
        raise ValueError("dt must be positive")
    if width is not None and 2 * dt > width:
        raise ValueError(f"2*dt={2 * dt} exceeds word width {width}")
    # all-ones of 2dt bits built as 2 * (2**(2dt-1) - 1) + 1
    ones = ((1 << (2 * dt - 1)) - 1) * 2 + 1
    return ones // 3


def ceil_log2(n: int) -> int:
    """Smallest ``e`` with ``2**e >= n`` (0 for n <= 1)."""
    return 0 if n <= 1 else (n - 1).bit_length()


class ClearableArray(abc.ABC):
    """An array of ``n`` entries of ``b`` bits that reads as all zeros after init.

    Subclasses keep every bit of state in an :class:`~clearable.arena.Arena`
    region so that probe counts and fill-policy independence are observable.
    """

    name = "abstract"

    n: int
    w: int
    b: int

    @abc.abstractmethod
    def read(self, l: int) -> int: ...

    @abc.abstractmethod
    def write(self, l: int, x: int) -> None: ...

    @abc.abstractmethod
    def space_bits(self) -> int:
        """Total bits occupied, auxiliary state included."""

    def redundancy(self) -> int:
        return self.space_bits() - self.n * self.b

    def validate(self, shadow: dict[int, int]) -> list:
        """Check internal invariants against the client's written values.

        The default has nothing to check.
        """
        return []

    def __len__(self) -> int:
        return self.n
