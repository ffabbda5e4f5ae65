"""Ground truth and differential replay.

``OracleArray`` is the eagerly cleared array the clever structures are
compared against.  ``check_equivalence`` replays an operation list against a
structure and a dict-backed reference model and reports the first divergence.

Operations are tuples ``("W", l, x)`` and ``("R", l)``; on disk they are the
LF-terminated lines ``W <l> <x>`` and ``R <l> [<expected>]``.
"""

from __future__ import annotations

import bisect
import hashlib
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .arena import Region
from .words import ClearableArray, mask

DISTRIBUTIONS = ("uniform", "zipf", "crafted", "write-once")
CRAFTED_ORDERS = ("leftmost-first", "rightmost-first", "middle-out", "permutation", "stride", "reverse-stride")


class OracleArray(ClearableArray):
    """Plain array whose init explicitly zeroes all ``n`` cells."""

    name = "oracle"

    def __init__(self, region: Region, n: int, init: bool = True):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.w = self.b = region.w
        self.region = region.sub(0, n)
        if init:
            for i in range(n):
                self.region.store(i, 0)

    @staticmethod
    def cells_needed(n: int) -> int:
        return n

    def read(self, l: int) -> int:
        return self.region.load(l)

    def write(self, l: int, x: int) -> None:
        self.region.store(l, x)

    def space_bits(self) -> int:
        return self.n * self.w


# -- operation generators ---------------------------------------------------


def _value(rng: random.Random, l: int, bits: int) -> int:
    r = rng.random()
    if r < 0.1:
        return 0
    if r < 0.2:
        # also the default value g(l) = l + 1 used by the with_default tests
        return (l + 1) & mask(bits)
    return rng.getrandbits(bits)


def crafted_order(n: int, kind: str, rng: random.Random, stride: int = 2) -> list[int]:
    """Orders that steer the light-path case analysis into specific branches."""
    if kind == "leftmost-first":
        return list(range(n))
    if kind == "rightmost-first":
        return list(range(n - 1, -1, -1))
    if kind == "middle-out":
        mid = n // 2
        order = [mid]
        for off in range(1, n):
            for cand in (mid - off, mid + off):
                if 0 <= cand < n:
                    order.append(cand)
        return order[:n]
    if kind == "permutation":
        order = list(range(n))
        rng.shuffle(order)
        return order
    if kind in ("stride", "reverse-stride"):
        order = []
        s = max(2, stride)
        for phase in range(s):
            order.extend(range(phase, n, s))
        return order if kind == "stride" else order[::-1]
    raise ValueError(f"unknown crafted order {kind!r}")


def generate_ops(n: int, count: int, dist: str = "uniform", seed: int = 0, bits: int = 64,
                 order: str | None = None, stride: int = 2) -> list[tuple]:
    """Deterministic operation list over indices ``[0, n)``.

    ``uniform``: half reads, half writes, uniform indices.  ``zipf``: same mix,
    indices drawn with weight ``1/rank**1.1`` over a seeded shuffle.
    ``write-once``: every index written at most once, 80% reads.  ``crafted``:
    writes every index in one of :data:`CRAFTED_ORDERS` (picked by seed unless
    given), each write followed by reads near it, then uniform traffic.
    """
    rng = random.Random(f"{dist}:{seed}:{n}")
    ops: list[tuple] = []
    if dist == "uniform":
        for _ in range(count):
            l = rng.randrange(n)
            ops.append(("W", l, _value(rng, l, bits)) if rng.random() < 0.5 else ("R", l))
    elif dist == "zipf":
        perm = list(range(n))
        rng.shuffle(perm)
        cum = []
        total = 0.0
        for r in range(n):
            total += 1.0 / (r + 1) ** 1.1
            cum.append(total)
        for _ in range(count):
            l = perm[min(n - 1, bisect.bisect_left(cum, rng.random() * total))]
            ops.append(("W", l, _value(rng, l, bits)) if rng.random() < 0.5 else ("R", l))
    elif dist == "write-once":
        fresh = list(range(n))
        rng.shuffle(fresh)
        for _ in range(count):
            l = rng.randrange(n)
            if fresh and rng.random() < 0.2:
                l = fresh.pop()
                ops.append(("W", l, _value(rng, l, bits)))
            else:
                ops.append(("R", l))
    elif dist == "crafted":
        kind = order or CRAFTED_ORDERS[seed % len(CRAFTED_ORDERS)]
        for l in crafted_order(n, kind, rng, stride):
            if len(ops) >= count:
                break
            ops.append(("W", l, _value(rng, l, bits)))
            ops.append(("R", l))
            ops.append(("R", rng.randrange(n)))
        while len(ops) < count:
            l = rng.randrange(n)
            ops.append(("W", l, _value(rng, l, bits)) if rng.random() < 0.5 else ("R", l))
        del ops[count:]
    else:
        raise ValueError(f"unknown distribution {dist!r}")
    return ops


# -- ops files ---------------------------------------------------------------


def format_ops(ops: Iterable[tuple]) -> str:
    lines = []
    for op in ops:
        lines.append(" ".join(str(p) for p in op))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_ops(text: str) -> list[tuple]:
    ops = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        try:
            if parts[0] == "W" and len(parts) == 3:
                ops.append(("W", int(parts[1]), int(parts[2])))
            elif parts[0] == "R" and len(parts) in (2, 3):
                ops.append(("R", *map(int, parts[1:])))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse {line!r}") from None
    return ops


# -- differential replay ------------------------------------------------------


@dataclass
class Verdict:
    ok: bool
    ops_run: int = 0
    divergence: dict | None = None
    read_digest: str = ""
    init_writes: int = 0
    max_read_probes: int = 0
    max_write_probes: int = 0
    cases: Counter = field(default_factory=Counter)

    def report(self, **context) -> str:
        """One JSON line describing a failure (empty dict fields on success)."""
        payload = dict(context)
        payload["ok"] = self.ok
        payload["divergence"] = self.divergence
        return json.dumps(payload, sort_keys=True)


def check_equivalence(build: Callable[[], ClearableArray], n: int, ops: list[tuple], *,
                      initial: Callable[[int], int] | None = None,
                      validate: bool = False, check_range: bool = True) -> Verdict:
    """Replay ``ops`` on ``build()`` and on a reference model.

    ``initial(l)`` is the reference's starting value (0 by default).  With
    ``validate`` the structure's own invariant checker runs after every write.
    A read carrying a third field must also return that value.  With
    ``check_range`` off, out-of-range indices reach the structure (and the
    arena's bounds check) instead of being rejected up front.
    The returned digest covers every value read, so runs that agree on all
    reads have equal digests.
    """
    array = build()
    arena = _arena_of(array)
    init_writes = arena.writes if arena is not None else 0
    shadow: dict[int, int] = {}
    digest = hashlib.sha256()
    verdict = Verdict(ok=True, init_writes=init_writes)
    for idx, op in enumerate(ops):
        l = op[1]
        if check_range and not 0 <= l < n:
            raise ValueError(f"op {idx}: index {l} outside [0, {n})")
        before = arena.reads + arena.writes if arena is not None else 0
        try:
            if op[0] == "W":
                array.write(l, op[2])
                shadow[l] = op[2]
                got = expected = None
            else:
                got = array.read(l)
                expected = shadow[l] if l in shadow else (initial(l) if initial else 0)
                if len(op) > 2 and op[2] != expected:
                    verdict.ok = False
                    verdict.divergence = {"op": idx, "kind": "trace", "index": l, "expected": op[2], "model": expected}
                    break
        except Exception as exc:  # a fault is a divergence, not a harness crash
            verdict.ok = False
            verdict.divergence = {"op": idx, "kind": "fault", "error": f"{type(exc).__name__}: {exc}"}
            break
        if arena is not None:
            cost = arena.reads + arena.writes - before
            if op[0] == "W":
                verdict.max_write_probes = max(verdict.max_write_probes, cost)
            else:
                verdict.max_read_probes = max(verdict.max_read_probes, cost)
        if op[0] == "R":
            digest.update(got.to_bytes(32, "little"))
            if got != expected:
                verdict.ok = False
                verdict.divergence = {"op": idx, "kind": "value", "index": l, "expected": expected, "got": got}
                break
        elif validate:
            errors = array.validate(shadow)
            if errors:
                verdict.ok = False
                verdict.divergence = {"op": idx, "kind": "invariant", "violations": [str(e) for e in errors[:5]]}
                break
        verdict.ops_run = idx + 1
    verdict.read_digest = digest.hexdigest()
    cases = getattr(array, "cases", None)
    if cases:
        verdict.cases.update(cases)
    return verdict


def _arena_of(array):
    region = getattr(array, "region", None)
    return region.arena if region is not None else None
