"""Safe-prime quadratic-residue groups, the QR <-> Z_q fold map, and discrete logs.

Conventions used throughout the package:

* A *safe prime* is a prime p = 2q + 1 with q prime.  QR_p, the group of
  quadratic residues mod p, is then cyclic of prime order q, and every
  element except 1 generates it.
* Exponents live in the canonical residue set {1, ..., q}, with q standing
  in for the mathematical residue 0 (g**q == 1 mod p).  ``discrete_log``
  therefore never returns 0; it returns q instead.
* Usable group instances additionally require q odd, i.e. p % 4 == 3.
  The single safe prime this excludes is p = 5: there -1 is itself a
  quadratic residue, so the fold map ``f_p`` (x -> x or p - x) is not a
  bijection onto {1, ..., q} and key recovery degenerates.  p = 7 is the
  smallest usable instance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

__all__ = [
    "SearchBudgetError",
    "GroupInstance",
    "is_prime",
    "is_safe_prime",
    "safe_primes_below",
    "canonical_exponent",
    "is_qr",
    "qr_set",
    "mod_exp",
    "f_p",
    "f_p_inv",
    "discrete_log",
    "generate_instance",
    "validate_instance",
]

# Full trial division below this bound decides primality of anything < 2**32
# outright and strips small factors from larger candidates cheaply.
_TRIAL_BOUND = 1 << 16

# Miller-Rabin with these bases is a proven deterministic test for all
# n < 3_317_044_064_679_887_385_961_981 (> 2**81).
_MR_PROVEN_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_PROVEN_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_ROUNDS = 64


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * limit
    flags[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return [i for i in range(limit) if flags[i]]


_SMALL_PRIMES = _sieve(_TRIAL_BOUND)


def _miller_rabin(n: int, bases) -> bool:
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in bases:
        a %= n
        if a in (0, 1, n - 1):
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality test: exact below 2**32, error < 2**-80 above.

    Trial division by all primes below 2**16 first (which fully decides
    n < 2**32), then Miller-Rabin: the proven deterministic base set below
    ~2**81, and 64 rounds with bases derived deterministically from n
    beyond that, keeping the test reproducible across runs.
    """
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if sp * sp > n:
            return True
        if n % sp == 0:
            return n == sp
    if n < _MR_PROVEN_LIMIT:
        return _miller_rabin(n, _MR_PROVEN_BASES)
    base_rng = random.Random(n)
    bases = [base_rng.randrange(2, n - 1) for _ in range(_MR_ROUNDS)]
    return _miller_rabin(n, bases)


def is_safe_prime(p: int) -> bool:
    """True iff p and (p - 1) / 2 are both prime."""
    if p < 5 or p % 2 == 0:
        return False
    return is_prime(p) and is_prime((p - 1) // 2)


def safe_primes_below(limit: int, odd_q_only: bool = False) -> list[int]:
    """All safe primes below ``limit``, ascending.

    With ``odd_q_only`` the degenerate p = 5 (q = 2) is dropped, leaving
    exactly the primes usable as group instances.
    """
    start = 7 if odd_q_only else 5
    return [p for p in range(start, limit, 2) if is_safe_prime(p)]


def canonical_exponent(e: int, q: int) -> int:
    """Map an integer exponent to the canonical residue set {1, ..., q}."""
    r = e % q
    return q if r == 0 else r


def is_qr(p: int, x: int) -> bool:
    """Euler's criterion: x is a quadratic residue mod the safe prime p."""
    if not 1 <= x <= p - 1:
        raise ValueError(f"element {x} out of range for modulus {p}")
    return pow(x, (p - 1) // 2, p) == 1


def qr_set(p: int) -> set[int]:
    """The full set of quadratic residues mod p, by brute-force squaring."""
    return {x * x % p for x in range(1, p)}


def mod_exp(p: int, base: int, e: int) -> int:
    """base**e mod p (square-and-multiply via the builtin)."""
    if not 1 <= base <= p - 1:
        raise ValueError(f"base {base} out of range for modulus {p}")
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return pow(base, e, p)


def f_p(p: int, x: int) -> int:
    """Fold a quadratic residue into {1, ..., q}: x if x <= q, else p - x."""
    q = (p - 1) // 2
    if not is_qr(p, x):
        raise ValueError(f"{x} is not a quadratic residue mod {p}")
    return x if x <= q else p - x


def f_p_inv(p: int, y: int) -> int:
    """Inverse fold: the unique quadratic residue in {y, p - y}.

    Requires q odd (p % 4 == 3): exactly one of y and p - y is then a
    residue.  For p = 5 neither may be, in which case this raises.
    """
    q = (p - 1) // 2
    if not 1 <= y <= q:
        raise ValueError(f"value {y} outside canonical range 1..{q}")
    cand = y if is_qr(p, y) else p - y
    if not is_qr(p, cand):
        raise ValueError(f"no quadratic-residue preimage of {y} mod {p} (degenerate p)")
    return cand


def discrete_log(p: int, base: int, y: int, engine: str = "bsgs") -> int:
    """Solve base**e == y mod p for e in {1, ..., q}, q = (p - 1) / 2.

    ``base`` must be a generator of QR_p (any residue != 1) and ``y`` a
    residue.  The mathematical residue 0 is reported as canonical q.
    Engines: "brute" walks all q powers, "bsgs" is baby-step giant-step
    with O(sqrt(q)) time and memory.
    """
    q = (p - 1) // 2
    if base == 1:
        raise ValueError("base 1 does not generate the residue group")
    if not is_qr(p, base):
        raise ValueError(f"base {base} is not a quadratic residue mod {p}")
    if not is_qr(p, y):
        raise ValueError(f"target {y} is not a quadratic residue mod {p}")
    if engine == "brute":
        acc = 1
        for e in range(1, q + 1):
            acc = (acc * base) % p
            if acc == y:
                return e
        raise ValueError(f"no discrete log of {y} base {base} mod {p}")
    if engine == "bsgs":
        m = 1
        while m * m < q:
            m += 1
        baby = {}
        acc = 1
        for j in range(m):
            baby.setdefault(acc, j)
            acc = (acc * base) % p
        stride = pow(base, -m, p)
        cur = y
        for i in range(m + 1):
            if cur in baby:
                return canonical_exponent(i * m + baby[cur], q)
            cur = (cur * stride) % p
        raise ValueError(f"no discrete log of {y} base {base} mod {p}")
    raise ValueError(f"unknown discrete log engine {engine!r}")


@dataclass(frozen=True)
class GroupInstance:
    """A QR group instance (p, q, g, g^a); the public parameterization.

    ``a_secret`` is retained only when an instance is generated in test
    mode; public views carry ``None`` there.
    """

    n: int
    p: int
    q: int
    g: int
    g_a: int
    a_secret: int | None = None

    def public(self) -> "GroupInstance":
        """The instance with the secret exponent stripped."""
        if self.a_secret is None:
            return self
        return replace(self, a_secret=None)

    def to_json_dict(self) -> dict[str, str]:
        """Decimal-string fields in fixed order: n, p, q, g, g_a[, a_secret]."""
        out = {
            "n": str(self.n),
            "p": str(self.p),
            "q": str(self.q),
            "g": str(self.g),
            "g_a": str(self.g_a),
        }
        if self.a_secret is not None:
            out["a_secret"] = str(self.a_secret)
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "GroupInstance":
        try:
            p = int(data["p"])
            g = int(data["g"])
            g_a = int(data["g_a"])
            n = int(data["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed instance record: {exc}") from exc
        a_secret = int(data["a_secret"]) if "a_secret" in data else None
        inst = validate_instance(p, g, g_a, n=n, a_secret=a_secret)
        if "q" in data and int(data["q"]) != inst.q:
            raise ValueError("inconsistent q field in instance record")
        return inst


def validate_instance(
    p: int, g: int, g_a: int, n: int | None = None, a_secret: int | None = None
) -> GroupInstance:
    """Check the instance invariants and package the fields.

    Raises ValueError if p is not a usable safe prime (q odd), if g or g_a
    is not a non-identity quadratic residue, or if a supplied secret
    exponent does not reproduce g_a.
    """
    if not is_safe_prime(p):
        raise ValueError(f"{p} is not a safe prime")
    q = (p - 1) // 2
    if q % 2 == 0:
        raise ValueError(f"p = {p} has even q = {q}; the fold map degenerates")
    if n is None:
        n = p.bit_length()
    elif p.bit_length() != n:
        raise ValueError(f"p = {p} is not an {n}-bit prime")
    for name, el in (("g", g), ("g_a", g_a)):
        if not 1 <= el <= p - 1:
            raise ValueError(f"{name} = {el} out of range mod {p}")
        if el == 1 or not is_qr(p, el):
            raise ValueError(f"{name} = {el} is not a non-identity residue mod {p}")
    if a_secret is not None:
        if not 1 <= a_secret <= q - 1:
            raise ValueError(f"secret exponent {a_secret} outside 1..{q - 1}")
        if pow(g, a_secret, p) != g_a:
            raise ValueError("secret exponent does not reproduce g_a")
    return GroupInstance(n=n, p=p, q=q, g=g, g_a=g_a, a_secret=a_secret)


class SearchBudgetError(RuntimeError):
    """No safe prime found within the rejection-sampling budget."""


def generate_instance(
    n: int,
    rng: random.Random,
    keep_secret: bool = False,
    max_attempts: int = 200_000,
) -> GroupInstance:
    """Sample an n-bit group instance: safe prime, generator, and g^a.

    Candidates are uniform odd n-bit integers with the top bit set; p = 5
    is rejected along with non-safe-primes (see module docstring).  The
    generator comes from squaring a uniform element of {2, ..., p - 2}
    and rejecting 1.  The exponent a is uniform over {1, ..., q - 1}:
    a = q (i.e. 0 mod q) would give g_a = 1, leaving dlog base g_a
    undefined.
    """
    if n < 3:
        raise ValueError(f"n = {n} too small: the smallest usable safe prime, 7, needs 3 bits")
    p = None
    for _ in range(max_attempts):
        cand = (1 << (n - 1)) | rng.getrandbits(n - 1) | 1
        if cand % 4 == 3 and is_safe_prime(cand):
            p = cand
            break
    if p is None:
        raise SearchBudgetError(f"no {n}-bit safe prime found in {max_attempts} attempts")
    q = (p - 1) // 2
    while True:
        g = pow(rng.randrange(2, p - 1), 2, p)
        if g != 1:
            break
    a = rng.randrange(1, q)
    g_a = pow(g, a, p)
    return GroupInstance(n=n, p=p, q=q, g=g, g_a=g_a, a_secret=a if keep_secret else None)
