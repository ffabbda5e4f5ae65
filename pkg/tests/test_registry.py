import pytest

from clearable.registry import METHODS, Params, UsageError, cells, initial_values, make, resolve, tree_shape


def test_tree_shape():
    assert tree_shape(1, None, 64) == (2, 1)
    assert tree_shape(1024, None, 64) == (2, 10)
    assert tree_shape(100, 3, 64) == (8, 3)
    with pytest.raises(UsageError):
        tree_shape(1000, 3, 64)  # d = 16 needs 2dt = 96 > 64
    with pytest.raises(UsageError):
        tree_shape(10**5, None, 64)


def test_aliases_and_unknown():
    assert resolve("lightpath") == "clearable-array"
    assert resolve("core") == "lightpath-core"
    with pytest.raises(UsageError):
        resolve("bogus")


@pytest.mark.parametrize("method", METHODS)
def test_arena_is_sized_exactly(method):
    t = None if method in ("lightpath-core", "lightpath-partial") else 2
    p = Params(method, 1000, t=t, b=5 if method == "packed" else None)
    arr = make(p, "rand", 1)
    assert arr.region.arena.size == cells(p)
    assert len(arr.region) <= cells(p)
    assert arr.read(999) == (1000 if method == "with-default" else 0)


def test_initial_values():
    assert initial_values(Params("folklore", 5)) is None
    assert initial_values(Params("with-default", 5, t=1))(4) == 5


def test_needs_t():
    with pytest.raises(UsageError):
        cells(Params("clearable-array", 10))
