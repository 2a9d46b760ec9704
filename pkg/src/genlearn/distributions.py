"""Distribution concept classes, exact probability tables, and distances.

Bitstrings are plain Python strings of '0'/'1', big-endian: ``bin_n(6, 4)``
is ``"0110"`` and the leftmost character is the first bit a generator or
keyed function consumes.  A generator is a deterministic map from m seed
bits to output bits; the distribution it induces weights each output y by
the fraction of seeds mapped to y.

Two table arithmetic modes exist: exact ``Fraction`` entries (default for
seed spaces up to 2^16) and floats beyond.  The identity checks in
:mod:`genlearn.boolfn` rely on the exact mode.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .numtheory import GroupInstance
from .prf import check_bits, prf_eval

__all__ = [
    "bin_n",
    "bits_to_int",
    "GeneratorSpec",
    "encode_params",
    "decode_params",
    "kgen_eval",
    "gen_eval",
    "kgen_spec",
    "gen_spec",
    "uniform_spec",
    "SampleOracle",
    "DistTable",
    "exact_table",
    "empirical_table",
    "uniform_table",
    "kl_divergence",
    "tv_distance",
    "write_samples",
    "read_samples",
    "write_table",
    "read_table",
]

EXACT_SEED_LIMIT = 16  # rational tables up to 2**16 seeds
ENUMERATION_LIMIT = 20  # hard budget for exhaustive seed enumeration


def bin_n(value: int, width: int) -> str:
    """Big-endian ``width``-bit encoding of a non-negative integer."""
    if width < 1:
        raise ValueError("width must be positive")
    if value < 0:
        raise ValueError("value must be non-negative")
    if value >= 1 << width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return format(value, f"0{width}b")


def bits_to_int(bits: str) -> int:
    check_bits(bits)
    return int(bits, 2)


@dataclass(frozen=True)
class GeneratorSpec:
    """Executable description of a classical generator.

    ``eval_fn`` must be total on {0,1}^seed_bits and produce strings of
    exactly ``out_bits`` bits; ``kind`` tags the construction variant.
    """

    seed_bits: int
    out_bits: int
    eval_fn: Callable[[str], str]
    kind: str = "custom"

    def eval(self, seed: str) -> str:
        check_bits(seed, self.seed_bits)
        out = self.eval_fn(seed)
        check_bits(out, self.out_bits)
        return out


def encode_params(inst: GroupInstance) -> str:
    """Fixed-width parameter encoding BIN_n(p) || BIN_n(g) || BIN_n(g_a)."""
    n = inst.n
    return bin_n(inst.p, n) + bin_n(inst.g, n) + bin_n(inst.g_a, n)


def decode_params(bits: str) -> tuple[int, int, int]:
    """Split a 3n-bit parameter suffix back into (p, g, g_a)."""
    check_bits(bits)
    if len(bits) % 3 != 0 or not bits:
        raise ValueError(f"parameter encoding length {len(bits)} is not a multiple of 3")
    n = len(bits) // 3
    return bits_to_int(bits[:n]), bits_to_int(bits[n : 2 * n]), bits_to_int(bits[2 * n :])


def kgen_eval(inst: GroupInstance, key: int, x: str) -> str:
    """x || BIN_n(F(key, x)); output length 2n."""
    check_bits(x, inst.n)
    return x + bin_n(prf_eval(inst, key, x), inst.n)


def gen_eval(inst: GroupInstance, key: int, x: str) -> str:
    """x || BIN_n(F(key, x)) || BIN_3n(params); output length 5n."""
    return kgen_eval(inst, key, x) + encode_params(inst)


def kgen_spec(inst: GroupInstance, key: int) -> GeneratorSpec:
    return GeneratorSpec(
        seed_bits=inst.n,
        out_bits=2 * inst.n,
        eval_fn=lambda x: kgen_eval(inst, key, x),
        kind="kgen",
    )


def gen_spec(inst: GroupInstance, key: int) -> GeneratorSpec:
    return GeneratorSpec(
        seed_bits=inst.n,
        out_bits=5 * inst.n,
        eval_fn=lambda x: gen_eval(inst, key, x),
        kind="gen",
    )


def uniform_spec(width: int) -> GeneratorSpec:
    """The identity generator: uniform over ``width``-bit strings."""
    return GeneratorSpec(seed_bits=width, out_bits=width, eval_fn=lambda s: s, kind="custom")


class SampleOracle:
    """SAMPLE handle for a generator: fresh uniform seed per draw."""

    def __init__(self, spec: GeneratorSpec, rng: random.Random):
        self.spec = spec
        self._rng = rng
        self.count = 0

    def sample(self) -> str:
        self.count += 1
        seed = format(self._rng.getrandbits(self.spec.seed_bits), f"0{self.spec.seed_bits}b")
        return self.spec.eval(seed)


@dataclass(frozen=True, eq=True)
class DistTable:
    """A finite probability table over n-bit strings.

    Entries absent from ``probs`` have probability zero.  Values are
    either all ``Fraction`` (exact mode, sums checked exactly) or floats
    (sums checked to 1e-12).
    """

    n_bits: int
    probs: dict

    def __post_init__(self):
        total = 0
        for bits, prob in self.probs.items():
            check_bits(bits, self.n_bits)
            if prob < 0:
                raise ValueError(f"negative probability for {bits}")
            total += prob
        if self.is_exact():
            if total != 1:
                raise ValueError(f"exact table sums to {total}, not 1")
        elif abs(total - 1) > 1e-12:
            raise ValueError(f"table sums to {total}, outside tolerance")

    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.probs.values())

    def prob(self, bits: str):
        check_bits(bits, self.n_bits)
        return self.probs.get(bits, Fraction(0) if self.is_exact() else 0.0)

    def support(self) -> set[str]:
        return {bits for bits, prob in self.probs.items() if prob > 0}

    def to_float(self) -> "DistTable":
        return DistTable(self.n_bits, {b: float(v) for b, v in self.probs.items()})


def exact_table(spec: GeneratorSpec, exact: bool | None = None) -> DistTable:
    """The exact induced table of a generator, by full seed enumeration.

    ``exact=None`` picks rational arithmetic for seed spaces up to
    2^16 and floats beyond; the enumeration budget is 2^20 seeds.
    """
    m = spec.seed_bits
    if m > ENUMERATION_LIMIT:
        raise ValueError(f"seed space 2^{m} exceeds the 2^{ENUMERATION_LIMIT} enumeration budget")
    if exact is None:
        exact = m <= EXACT_SEED_LIMIT
    unit = Fraction(1, 1 << m) if exact else 1.0 / (1 << m)
    probs: dict = {}
    for v in range(1 << m):
        y = spec.eval(format(v, f"0{m}b"))
        probs[y] = probs.get(y, 0) + unit
    return DistTable(spec.out_bits, probs)


def empirical_table(samples: Iterable[str]) -> DistTable:
    """Frequency estimates from observed samples (exact fractions)."""
    counts: dict[str, int] = {}
    total = 0
    width = None
    for s in samples:
        if width is None:
            width = len(s)
        check_bits(s, width)
        counts[s] = counts.get(s, 0) + 1
        total += 1
    if total == 0:
        raise ValueError("no samples")
    return DistTable(width, {s: Fraction(c, total) for s, c in counts.items()})


def uniform_table(n_bits: int) -> DistTable:
    unit = Fraction(1, 1 << n_bits)
    return DistTable(n_bits, {bin_n(v, n_bits): unit for v in range(1 << n_bits)})


def kl_divergence(p: DistTable, q: DistTable) -> float:
    """Base-2 relative entropy sum_x P(x) log2(P(x)/Q(x)), in bits.

    Terms with P(x) = 0 contribute nothing; any x with P(x) > 0 but
    Q(x) = 0 makes the divergence +inf (returned as a sentinel, not
    raised).  Tiny negative float round-off is clamped to 0.
    """
    if p.n_bits != q.n_bits:
        raise ValueError(f"domain mismatch: {p.n_bits} vs {q.n_bits} bits")
    total = 0.0
    for bits, prob in p.probs.items():
        if prob == 0:
            continue
        q_prob = q.probs.get(bits, 0)
        if q_prob == 0:
            return math.inf
        total += float(prob) * math.log2(float(Fraction(prob) / Fraction(q_prob)))
    if -1e-9 < total < 0.0:
        return 0.0
    return total


def tv_distance(p: DistTable, q: DistTable):
    """Total variation distance (half L1); exact when both tables are exact."""
    if p.n_bits != q.n_bits:
        raise ValueError(f"domain mismatch: {p.n_bits} vs {q.n_bits} bits")
    total = 0
    # Sorted union keeps float summation order independent of hash seeding.
    for bits in sorted(set(p.probs) | set(q.probs)):
        total += abs(p.probs.get(bits, 0) - q.probs.get(bits, 0))
    return total / 2


def write_samples(path, samples: Iterable[str]) -> None:
    """One bitstring per line, ASCII, newline-terminated."""
    with open(path, "w", encoding="ascii") as fh:
        for s in samples:
            fh.write(s + "\n")


def read_samples(path) -> list[str]:
    with open(path, encoding="ascii") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    for line in lines:
        check_bits(line)
    return lines


def write_table(path, table: DistTable) -> None:
    """JSON map bitstring -> decimal probability, keys sorted."""
    with open(path, "w", encoding="ascii") as fh:
        json.dump({b: float(v) for b, v in sorted(table.probs.items())}, fh, indent=2)
        fh.write("\n")


def read_table(path) -> DistTable:
    with open(path, encoding="ascii") as fh:
        raw = json.load(fh)
    if not raw:
        raise ValueError("empty distribution table")
    width = len(next(iter(raw)))
    return DistTable(width, {b: float(v) for b, v in raw.items()})
