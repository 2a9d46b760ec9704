"""One-sample key recovery by GGM tree reversal, and the generator learner.

Given a single record ``x || BIN_n(F(key, x)) || BIN_3n(params)`` the key
is recovered exactly: walk the tree backwards, at each level unfolding the
value into the residue group and taking a discrete log in the base the
input bit selected.  A generic discrete-log engine (baby-step giant-step
by default) plays the exact-dlog oracle, so exactness holds at bit sizes
where sqrt(q) work is feasible; ``max_n`` caps that (default 40,
configurable).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .distributions import GeneratorSpec, SampleOracle, bits_to_int, decode_params, gen_spec
from .numtheory import GroupInstance, discrete_log, f_p_inv, validate_instance
from .prf import check_bits

__all__ = [
    "InvalidSampleError",
    "LearnedGenerator",
    "learn_key",
    "learn_from_sample",
    "pac_generator_learn",
]


class InvalidSampleError(ValueError):
    """A sample fails the 5n-bit layout or its suffix is not a valid instance."""


@dataclass(frozen=True)
class LearnedGenerator:
    """An exactly recovered generator: instance, key, and executable spec."""

    inst: GroupInstance
    key: int
    spec: GeneratorSpec
    samples_used: int = 1

    def to_json_dict(self) -> dict[str, str]:
        out = self.inst.to_json_dict()
        out["key"] = str(self.key)
        return out


def learn_key(inst: GroupInstance, x: str, fx: int, engine: str = "bsgs") -> int:
    """Invert F(., x) at the observed output fx; returns the unique key.

    Walks levels j = n down to 1: unfold the current value into QR_p, then
    dlog base g (bit 0) or base g_a (bit 1).  Exactly inverts the forward
    walk for genuine outputs; corrupted inputs surface as range errors.
    """
    check_bits(x, inst.n)
    if not 1 <= fx <= inst.q:
        raise ValueError(f"function value {fx} outside canonical range 1..{inst.q}")
    b = fx
    for ch in reversed(x):
        y = f_p_inv(inst.p, b)
        base = inst.g if ch == "0" else inst.g_a
        b = discrete_log(inst.p, base, y, engine=engine)
    return b


def learn_from_sample(sample: str, engine: str = "bsgs", max_n: int = 40) -> LearnedGenerator:
    """Parse one 5n-bit sample and recover the exact generator behind it."""
    try:
        check_bits(sample)
    except ValueError as exc:
        raise InvalidSampleError(str(exc)) from exc
    if len(sample) % 5 != 0 or len(sample) < 15:
        raise InvalidSampleError(
            f"malformed length {len(sample)}: samples are 5n bits with n >= 3"
        )
    n = len(sample) // 5
    if n > max_n:
        raise ValueError(f"n = {n} beyond the dlog feasibility cap {max_n}")
    x = sample[:n]
    value_bits = sample[n : 2 * n]
    p, g, g_a = decode_params(sample[2 * n :])
    try:
        inst = validate_instance(p, g, g_a, n=n)
    except ValueError as exc:
        raise InvalidSampleError(f"sample suffix is not a valid instance: {exc}") from exc
    fx = bits_to_int(value_bits)
    if not 1 <= fx <= inst.q:
        raise InvalidSampleError(f"encoded value {fx} outside canonical range 1..{inst.q}")
    key = learn_key(inst, x, fx, engine=engine)
    return LearnedGenerator(inst=inst, key=key, spec=gen_spec(inst, key))


def pac_generator_learn(
    oracle: SampleOracle,
    epsilon: float | None = None,
    delta: float | None = None,
    engine: str = "bsgs",
    max_n: int = 40,
) -> LearnedGenerator:
    """Learn the exact generator behind a SAMPLE handle from one draw.

    ``epsilon`` and ``delta`` are accepted for interface fidelity with the
    usual (eps, delta) learner contract and deliberately ignored: the
    returned generator is exact (zero divergence to the target), which is
    stronger than any (eps, delta) guarantee.  Sample complexity is
    recorded on the result and is always 1.
    """
    del epsilon, delta
    before = oracle.count
    sample = oracle.sample()
    learned = learn_from_sample(sample, engine=engine, max_n=max_n)
    return replace(learned, samples_used=oracle.count - before)
