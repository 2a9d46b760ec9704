"""Distributions built from Boolean functions, and their exact generators.

A function c on n bits induces the distribution uniform on the 2^n strings
x || c(x).  This module provides the induced generator, seed padding and
seed permutation (which leave the distribution untouched), the best
possible under-seeded generator, and a brute-force classifier that
enumerates every function on a small seed space and partitions it into
exact and non-exact generators for the target.

All arithmetic here is exact rational: the statements being checked are
equalities, and float comparison would weaken them.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .distributions import DistTable, GeneratorSpec, bin_n, exact_table

__all__ = [
    "BoolFn",
    "Permutation",
    "gen_from_function",
    "function_table",
    "disagreement_prob",
    "padded_generator",
    "permuted_generator",
    "optimal_short_generator",
    "ExactGeneratorReport",
    "classify_exact_generators",
]

CLASSIFY_BUDGET = 4096  # largest function family we will enumerate outright


@dataclass(frozen=True)
class BoolFn:
    """A Boolean function on n bits, stored as its 2^n-entry truth table.

    ``table[i]`` is the output on the input with big-endian value i.
    """

    n: int
    table: str

    def __post_init__(self):
        if len(self.table) != 1 << self.n or any(c not in "01" for c in self.table):
            raise ValueError(f"truth table must be {1 << self.n} bits")

    def __call__(self, bits: str) -> str:
        if len(bits) != self.n:
            raise ValueError(f"input {bits!r} is not {self.n} bits")
        return self.table[int(bits, 2)]

    def to_hex(self) -> str:
        """The table packed big-endian into hex (width ceil(2^n / 4))."""
        return format(int(self.table, 2), f"0{-(-len(self.table) // 4)}x")

    @classmethod
    def from_hex(cls, n: int, hexstr: str) -> "BoolFn":
        size = 1 << n
        return cls(n, format(int(hexstr, 16), f"0{size}b"))

    @classmethod
    def random(cls, n: int, rng: random.Random) -> "BoolFn":
        return cls(n, format(rng.getrandbits(1 << n), f"0{1 << n}b"))


@dataclass(frozen=True)
class Permutation:
    """A bijection on {0,1}^m, stored as the image table over seed values."""

    m: int
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != 1 << self.m:
            raise ValueError(f"mapping must have {1 << self.m} entries")
        # Bijectivity is checked outright up to m = 16; beyond that the
        # table itself would be the bottleneck, not this check.
        if self.m <= 16 and sorted(self.mapping) != list(range(1 << self.m)):
            raise ValueError("mapping is not a bijection")

    def apply(self, bits: str) -> str:
        if len(bits) != self.m:
            raise ValueError(f"input {bits!r} is not {self.m} bits")
        return bin_n(self.mapping[int(bits, 2)], self.m)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other)).apply(x) = self(other(x))."""
        if self.m != other.m:
            raise ValueError("permutation sizes differ")
        return Permutation(self.m, tuple(self.mapping[v] for v in other.mapping))

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(m, tuple(range(1 << m)))

    @classmethod
    def random(cls, m: int, rng: random.Random) -> "Permutation":
        values = list(range(1 << m))
        rng.shuffle(values)
        return cls(m, tuple(values))


def gen_from_function(c: BoolFn) -> GeneratorSpec:
    """The canonical generator x -> x || c(x)."""
    return GeneratorSpec(
        seed_bits=c.n,
        out_bits=c.n + 1,
        eval_fn=lambda x: x + c(x),
        kind="boolfn",
    )


def function_table(c: BoolFn) -> DistTable:
    """The induced distribution: 1/2^n on each string x || c(x)."""
    return exact_table(gen_from_function(c), exact=True)


def disagreement_prob(h: BoolFn, c: BoolFn) -> Fraction:
    """Pr over uniform inputs that h and c differ, as an exact fraction."""
    if h.n != c.n:
        raise ValueError("function arities differ")
    hamming = sum(a != b for a, b in zip(h.table, c.table))
    return Fraction(hamming, 1 << h.n)


def padded_generator(c: BoolFn, m: int) -> GeneratorSpec:
    """Evaluate c on the n-bit prefix of an m-bit seed (m >= n); still exact."""
    if m < c.n:
        raise ValueError(f"seed width {m} below function arity {c.n}")
    return GeneratorSpec(
        seed_bits=m,
        out_bits=c.n + 1,
        eval_fn=lambda s: s[: c.n] + c(s[: c.n]),
        kind="padded",
    )


def permuted_generator(c: BoolFn, m: int, perm: Permutation) -> GeneratorSpec:
    """The padded generator composed with a seed permutation; still exact."""
    if perm.m != m:
        raise ValueError(f"permutation acts on {perm.m} bits, seeds have {m}")
    padded = padded_generator(c, m)
    return GeneratorSpec(
        seed_bits=m,
        out_bits=c.n + 1,
        eval_fn=lambda s: padded.eval(perm.apply(s)),
        kind="permuted",
    )


def optimal_short_generator(c: BoolFn, m: int) -> GeneratorSpec:
    """The best generator with m < n seed bits: 1/2^m on 2^m support strings.

    Ties are broken deterministically: the lexicographically first 2^m
    support strings x || c(x) are covered.  Achieves total variation
    exactly 1 - 2^(m-n) to the target, which no m-bit generator beats.
    """
    if m >= c.n:
        raise ValueError(f"seed width {m} is not short for arity {c.n}")

    def eval_fn(seed: str) -> str:
        x = bin_n(int(seed, 2), c.n)
        return x + c(x)

    return GeneratorSpec(seed_bits=m, out_bits=c.n + 1, eval_fn=eval_fn, kind="custom")


@dataclass(frozen=True)
class ExactGeneratorReport:
    """Outcome of enumerating every m-bit-seed generator for a target.

    A generator is identified with its output tuple over seeds in value
    order.  ``matches_characterization`` records whether the exact set
    equals {padded composed with a seed permutation}.
    """

    n: int
    m: int
    total_functions: int
    exact_functions: tuple[tuple[str, ...], ...]
    raw_permutation_count: int
    distinct_permuted_count: int
    matches_characterization: bool

    @property
    def exact_count(self) -> int:
        return len(self.exact_functions)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "total_functions": self.total_functions,
            "exact_count": self.exact_count,
            "raw_permutation_count": self.raw_permutation_count,
            "distinct_permuted_count": self.distinct_permuted_count,
            "matches_characterization": self.matches_characterization,
        }


def classify_exact_generators(c: BoolFn, m: int) -> ExactGeneratorReport:
    """Enumerate all maps {0,1}^m -> {0,1}^(n+1) and find the exact ones.

    Feasible only for tiny (n, m): the family has (2^(n+1))^(2^m) members
    and anything past 4096 is refused.  The report compares the enumerated
    exact set against the permuted-padded family.
    """
    n = c.n
    seeds = 1 << m
    total = (1 << (n + 1)) ** seeds
    if total > CLASSIFY_BUDGET:
        raise ValueError(f"{total} candidate functions exceed the budget {CLASSIFY_BUDGET}")

    # Exactness test, per combo: every support string of the target hit by
    # exactly seeds / 2^n of the seeds (so probability 1/2^n each) and
    # nothing off-support ever hit.
    target_support = sorted(function_table(c).support())
    outputs = [bin_n(v, n + 1) for v in range(1 << (n + 1))]
    exact = set()
    for combo in itertools.product(outputs, repeat=seeds):
        counts = Counter(combo)
        if len(counts) == len(target_support) and all(
            counts.get(y, 0) * (1 << n) == seeds for y in target_support
        ):
            exact.add(combo)

    padded = padded_generator(c, m) if m >= n else None
    permuted = set()
    if padded is not None:
        for images in itertools.permutations(range(seeds)):
            permuted.add(tuple(padded.eval(bin_n(images[s], m)) for s in range(seeds)))

    return ExactGeneratorReport(
        n=n,
        m=m,
        total_functions=total,
        exact_functions=tuple(sorted(exact)),
        raw_permutation_count=math.factorial(seeds),
        distinct_permuted_count=len(permuted),
        matches_characterization=exact == permuted,
    )
