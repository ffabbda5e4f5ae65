import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from clearable.arena import Arena
from clearable.lightpath.array import C_PRIME, ClearableWordArray, layout, redundancy_bound
from clearable.oracle import check_equivalence, generate_ops

FILLS = ("zeros", "ones", "alt", "rand")


def _arr(n, t, w=64, fill="rand", seed=0):
    return ClearableWordArray(Arena(ClearableWordArray.cells_needed(n, t, w), w, fill, seed).region(), n, t)


def test_bound_examples():
    assert redundancy_bound(2**20, 2, 64) == 256
    assert redundancy_bound(2**20, 20, 64) == 1


def test_init_writes():
    for n in (1, 5, 21):
        a = _arr(n, 2)
        assert a.region.arena.writes == n + 1 and a.representation() == "all-black"
    for t in (1, 2, 3):
        seen = {_arr(n, t).region.arena.writes for n in (22, 23, 50, 1000, 2**20, 2**22, 3 * 10**7)}
        assert seen == {28}


def test_header_survives_writes():
    n, t = C_PRIME * 400, 2
    a = _arr(n, t, fill="ones", seed=3)
    rng = random.Random(0)
    for _ in range(300):
        a.write(rng.randrange(n), rng.getrandbits(64))
        assert a.A.peek(0) == n and a.A.peek(1) == t
    assert a.representation() == "few-roots"


@pytest.mark.parametrize("fill", FILLS)
def test_fresh_reads(fill):
    a = _arr(10**5, 2, fill=fill, seed=7)
    arena = a.region.arena
    for l in range(0, 10**5, 4999):
        before = arena.reads
        assert a.read(l) == 0
        assert arena.reads - before <= 3 + 4 + 2 * C_PRIME


@pytest.mark.parametrize("n", [C_PRIME * 40, C_PRIME * 40 + 13])
@pytest.mark.parametrize("t", (1, 2, 3))
def test_full_sweep_reaches_all_black(n, t):
    a = _arr(n, t, fill="alt", seed=n)
    order = list(range(n))
    random.Random(t).shuffle(order)
    vals = {l: (l * 2654435761) % 2**64 for l in order}
    for i, l in enumerate(order):
        a.write(l, vals[l])
        if i % 97 == 0:
            assert a.read(order[i // 2]) == vals[order[i // 2]]
    assert a.region.peek(0) == 0
    assert [a.A.peek(l) for l in range(n)] == [vals[l] for l in range(n)]
    assert a.space_bits() == n * 64 + 1
    assert sorted(a.iter_written_blocks()) == list(range(n // C_PRIME))


def _tree_sweep_ops(n, lay, perm, rng):
    ops = []
    for i in perm:
        blocks = list(range(i * lay.D, min((i + 1) * lay.D, lay.n_lw)))
        rng.shuffle(blocks)
        for b in blocks:
            l = b * C_PRIME + rng.randrange(C_PRIME)
            ops.append(("W", l, rng.randrange(1 << 16)))
            ops.append(("R", rng.randrange(n)))
    ops += [("R", l) for l in range(0, n, 5)]
    return ops


@pytest.mark.parametrize("n", [C_PRIME * 128 * 3, C_PRIME * 128 * 3 + 5])
def test_interchange_every_tree_order(n):
    w, t = 16, 1
    lay = layout(n, t, w)
    assert lay.N == 3 and lay.few
    for perm in itertools.permutations(range(lay.N)):
        rng = random.Random(str(perm))
        ops = _tree_sweep_ops(n, lay, perm, rng)
        v = check_equivalence(lambda: _arr(n, t, w, "rand", 1), n, ops, validate=True)
        assert v.ok, (perm, v.divergence)
        # the swap moves each time the first nonblack tree turns black early
        moves = sum(1 for k, i in enumerate(perm[:-1]) if i < min(perm[k + 1:]))
        assert v.cases["interchange"] == moves and v.cases["all-black"] == 1


def test_many_roots_layout():
    n, t, w = C_PRIME * 256 * 64 + 10, 1, 32
    for fill in FILLS:
        a = _arr(n, t, w, fill)
        assert a.representation() == "forest"
        assert a.space_bits() <= n * w + redundancy_bound(n, t, w)
        ops = generate_ops(n, 1500, "uniform", 2, bits=w)
        assert check_equivalence(lambda: _arr(n, t, w, fill, 2), n, ops).ok


def test_iterator_example():
    a = _arr(10**5, 2)
    assert list(a.iter_written_blocks()) == []
    for l in (3, 700, 12345):
        a.write(l, 1)
    assert sorted(a.iter_written_blocks()) == [0, 700 // C_PRIME, 12345 // C_PRIME]


def test_validator_flags_damaged_header():
    a = _arr(C_PRIME * 5, 1, fill="zeros")
    a.write(3, 4)
    assert a.validate({3: 4}) == []
    a.region.arena.poke(1 + 1, 7)
    assert a.validate({3: 4})


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 255), st.integers(1, 9), st.sampled_from(FILLS), st.integers(0, 1000))
def test_small_words_match_oracle(n, t, fill, seed):
    ops = generate_ops(n, 150, ("uniform", "crafted", "write-once")[seed % 3], seed, bits=8)
    v = check_equivalence(lambda: _arr(n, t, 8, fill, seed), n, ops, validate=True)
    assert v.ok, v.divergence
