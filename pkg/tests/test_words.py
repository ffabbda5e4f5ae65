import random

import pytest
from hypothesis import given, strategies as st

from clearable.words import alt_mask, ceil_log2, lsb, lsb_portable, mask, msb, msb_portable


def test_msb_lsb_examples():
    assert msb(0b01100100) == 6
    assert msb(1) == 0
    assert msb(mask(64)) == 63
    assert lsb(0b01100100) == 2
    assert lsb(1 << 63) == 63
    assert lsb(0b1010) == 1


def test_alt_mask_values():
    assert alt_mask(8) == 0x5555
    assert alt_mask(1) == 0b01
    full = alt_mask(32)
    assert (3 * full + 1) % 2**64 == 0


def test_exhaustive_w8():
    for x in range(1, 256):
        assert 2 ** msb(x) <= x < 2 ** (msb(x) + 1)
        assert x % 2 ** lsb(x) == 0 and (x >> lsb(x)) & 1
        assert msb_portable(x, 8) == msb(x)
        assert lsb_portable(x, 8) == lsb(x)


@given(st.integers(min_value=1, max_value=2**64 - 1))
def test_portable_matches_builtin(x):
    assert msb_portable(x) == msb(x)
    assert lsb_portable(x) == lsb(x)


def test_zero_rejected():
    with pytest.raises(ValueError):
        msb(0)
    with pytest.raises(ValueError):
        lsb(0)


def test_ceil_log2():
    assert [ceil_log2(n) for n in (1, 2, 3, 4, 5, 1024, 1025)] == [0, 1, 2, 2, 3, 10, 11]
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 2**40)
        assert 2 ** ceil_log2(n) >= n > 2 ** (ceil_log2(n) - 1) or n == 1
