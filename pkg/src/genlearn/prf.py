"""The DDH length-doubling PRG, the GGM keyed function, and query oracles.

The keyed function walks a binary tree: the key sits at the root and each
input bit (leftmost bit first) picks which half of the stretched seed to
descend into.  Seeds and outputs live in the canonical set {1, ..., q};
the fold map ``f_p`` carries group elements back into that set so the
generator can be iterated.

Oracle handles are stateful (query counters, memo tables) and single
owner; everything else here is pure.
"""

from __future__ import annotations

import json
import random
from typing import Callable

from .numtheory import GroupInstance, f_p

__all__ = [
    "QueryBudgetExceeded",
    "check_bits",
    "prg_eval",
    "ggm_walk",
    "prf_eval",
    "keyed_function",
    "LazyRandomFunction",
    "MembershipOracle",
    "RandomExampleOracle",
    "ValueExampleOracle",
]


class QueryBudgetExceeded(RuntimeError):
    """An oracle was queried beyond its configured budget."""


def check_bits(bits: str, length: int | None = None) -> None:
    """Validate an ASCII bitstring, optionally of a required length."""
    if not isinstance(bits, str) or any(c not in "01" for c in bits):
        raise ValueError(f"not a bitstring: {bits!r}")
    if length is not None and len(bits) != length:
        raise ValueError(f"bitstring {bits!r} has length {len(bits)}, expected {length}")


def _check_key(inst: GroupInstance, b: int) -> None:
    if not 1 <= b <= inst.q:
        raise ValueError(f"seed/key {b} outside canonical range 1..{inst.q}")


def prg_eval(inst: GroupInstance, b: int) -> tuple[int, int]:
    """Stretch one seed into two: (f_p(g^b), f_p(g_a^b))."""
    _check_key(inst, b)
    return (
        f_p(inst.p, pow(inst.g, b, inst.p)),
        f_p(inst.p, pow(inst.g_a, b, inst.p)),
    )


def ggm_walk(inst: GroupInstance, key: int, bits: str) -> int:
    """Walk the GGM tree from ``key`` along ``bits`` (any length, left first)."""
    check_bits(bits)
    _check_key(inst, key)
    b = key
    for ch in bits:
        base = inst.g if ch == "0" else inst.g_a
        b = f_p(inst.p, pow(base, b, inst.p))
    return b


def prf_eval(inst: GroupInstance, key: int, x: str) -> int:
    """The keyed function F(key, x) for an n-bit input x; output in {1, ..., q}."""
    check_bits(x, inst.n)
    return ggm_walk(inst, key, x)


def keyed_function(inst: GroupInstance, key: int) -> Callable[[str], int]:
    """F(key, .) as a plain callable on n-bit strings."""
    _check_key(inst, key)
    return lambda x: prf_eval(inst, key, x)


class LazyRandomFunction:
    """A uniformly random function {0,1}^n -> {1, ..., q}, memoized.

    Values are drawn on first query and cached, which is distributionally
    identical to pre-tabulating the full function but works for domains of
    size 2^n.
    """

    def __init__(self, n_bits: int, q: int, rng: random.Random):
        self.n_bits = n_bits
        self.q = q
        self.table: dict[str, int] = {}
        self._rng = rng

    def __call__(self, x: str) -> int:
        check_bits(x, self.n_bits)
        if x not in self.table:
            self.table[x] = self._rng.randint(1, self.q)
        return self.table[x]


class MembershipOracle:
    """MQ-style handle: query f at chosen points, with counting and a budget."""

    def __init__(self, fn: Callable[[str], int], n_bits: int, max_queries: int | None = None):
        self._fn = fn
        self.n_bits = n_bits
        self.max_queries = max_queries
        self.count = 0
        self.queried: set[str] = set()
        self.transcript: list[dict] = []

    def query(self, x: str) -> int:
        check_bits(x, self.n_bits)
        if self.max_queries is not None and self.count >= self.max_queries:
            raise QueryBudgetExceeded(f"membership oracle budget {self.max_queries} exhausted")
        self.count += 1
        value = self._fn(x)
        self.queried.add(x)
        self.transcript.append({"query": x, "response": value})
        return value

    def transcript_json(self) -> str:
        return json.dumps(self.transcript)


class RandomExampleOracle:
    """PEX-style handle: each draw returns (x, f(x)) with x uniform."""

    def __init__(
        self,
        fn: Callable[[str], int],
        n_bits: int,
        rng: random.Random,
        max_queries: int | None = None,
    ):
        self._fn = fn
        self.n_bits = n_bits
        self._rng = rng
        self.max_queries = max_queries
        self.count = 0
        self.transcript: list[dict] = []

    def draw(self) -> tuple[str, int]:
        if self.max_queries is not None and self.count >= self.max_queries:
            raise QueryBudgetExceeded(f"example oracle budget {self.max_queries} exhausted")
        self.count += 1
        x = format(self._rng.getrandbits(self.n_bits), f"0{self.n_bits}b")
        value = self._fn(x)
        self.transcript.append({"query": x, "response": value})
        return x, value

    def transcript_json(self) -> str:
        return json.dumps(self.transcript)


class ValueExampleOracle(RandomExampleOracle):
    """RPEX variant: draws return only f(x), hiding the sampled point."""

    def draw(self) -> int:  # type: ignore[override]
        return super().draw()[1]
