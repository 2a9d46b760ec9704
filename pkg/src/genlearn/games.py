"""Monte-Carlo harnesses: distinguisher games, the inference exam, and the
learner-to-inference reduction.

All games take an integer master seed; per-trial randomness is derived
from (seed, role label, trial index), so runs are reproducible bit for
bit and both arms of the distinguisher game see the identical stream of
group instances (coupled randomness).  Confidence intervals are Hoeffding
bounds at fixed 99% confidence.

The distinguisher game serves an adversary either the keyed function with
a uniform key or a lazily tabulated uniformly random function, through a
membership-query or random-example handle, and reports the acceptance
rate gap.  The inference game makes a strategy pick a fresh "exam string"
after its query phase and identify the true function value among a
shuffled pair.  ``learner_to_inference`` turns any sample-consuming
generator learner into an inference strategy by simulating its sample
oracle through membership queries.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .distributions import GeneratorSpec, bin_n, bits_to_int, encode_params, uniform_spec
from .learner import learn_key, pac_generator_learn
from .numtheory import GroupInstance, generate_instance
from .prf import (
    LazyRandomFunction,
    MembershipOracle,
    QueryBudgetExceeded,
    RandomExampleOracle,
    check_bits,
    keyed_function,
    prf_eval,
)
from .seeding import make_rng

__all__ = [
    "HOEFFDING_ALPHA",
    "hoeffding_halfwidth",
    "AdvantageEstimate",
    "InferenceTranscript",
    "InferenceResult",
    "run_distinguisher_game",
    "run_inference_game",
    "key_learner_adversary",
    "make_constant_adversary",
    "coin_flip_adversary",
    "KeyLearnerStrategy",
    "RandomGuessStrategy",
    "ReplayStrategy",
    "exact_generator_learner",
    "uniform_distribution_learner",
    "LearnerInferenceReduction",
    "learner_to_inference",
]

HOEFFDING_ALPHA = 0.01  # two-sided 99% confidence throughout


def hoeffding_halfwidth(trials: int) -> float:
    """Half-width of the Hoeffding 99% interval for one empirical rate."""
    return math.sqrt(math.log(2 / HOEFFDING_ALPHA) / (2 * trials))


def default_query_budget(n: int) -> int:
    """Per-trial oracle budget standing in for "polynomial time": 10 n^2."""
    return 10 * n * n


def _random_bits(rng: random.Random, n: int) -> str:
    return format(rng.getrandbits(n), f"0{n}b")


# ---------------------------------------------------------------------------
# Distinguisher game (keyed function vs. random function)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdvantageEstimate:
    """Acceptance rates of an adversary against the two arms of the game.

    ``trials`` is the total count, split evenly; ``ci_halfwidth`` is the
    99% Hoeffding half-width for the *difference* of the two independent
    rates (twice the single-rate half-width at trials/2).
    """

    game: str
    flavor: str
    n: int
    trials: int
    p_real: float
    p_random: float
    advantage: float
    ci_halfwidth: float
    invalid_real: int
    invalid_random: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "game": self.game,
            "flavor": self.flavor,
            "n": self.n,
            "trials": self.trials,
            "p_real": self.p_real,
            "p_random": self.p_random,
            "advantage": self.advantage,
            "ci": self.ci_halfwidth,
            "invalid_real": self.invalid_real,
            "invalid_random": self.invalid_random,
            "seed": self.seed,
        }


def run_distinguisher_game(
    adversary,
    flavor: str,
    n: int,
    trials: int,
    seed: int,
    query_budget: int | None = None,
) -> AdvantageEstimate:
    """Estimate an adversary's advantage at telling keyed from random.

    ``adversary(params, oracle, rng) -> accept bit`` receives the public
    instance and a flavored oracle: "mq" serves membership queries, "pex"
    random examples.  Trials split evenly between the keyed and random
    arms, and both arms replay the same per-index instances and keys.  A
    trial whose adversary overruns the query budget is invalidated and
    excluded from the rates.
    """
    if flavor not in ("mq", "pex"):
        raise ValueError(f"unknown oracle flavor {flavor!r}")
    if trials < 2 or trials % 2 != 0:
        raise ValueError("trials must be an even count >= 2")
    budget = default_query_budget(n) if query_budget is None else query_budget
    per_arm = trials // 2

    instances = [generate_instance(n, make_rng(seed, "instance", i)) for i in range(per_arm)]
    keys = [make_rng(seed, "key", i).randint(1, inst.q) for i, inst in enumerate(instances)]

    def run_arm(arm: str) -> tuple[int, int]:
        accepts = 0
        invalid = 0
        for i, inst in enumerate(instances):
            if arm == "real":
                fn = keyed_function(inst, keys[i])
            else:
                fn = LazyRandomFunction(n, inst.q, make_rng(seed, "randfn", i))
            if flavor == "mq":
                oracle = MembershipOracle(fn, n, max_queries=budget)
            else:
                oracle = RandomExampleOracle(
                    fn, n, make_rng(seed, f"pex-{arm}", i), max_queries=budget
                )
            rng = make_rng(seed, f"adversary-{arm}", i)
            try:
                accepts += 1 if adversary(inst.public(), oracle, rng) else 0
            except QueryBudgetExceeded:
                invalid += 1
        return accepts, invalid

    accepts_real, invalid_real = run_arm("real")
    accepts_random, invalid_random = run_arm("random")
    valid_real = max(per_arm - invalid_real, 1)
    valid_random = max(per_arm - invalid_random, 1)
    p_real = accepts_real / valid_real
    p_random = accepts_random / valid_random
    return AdvantageEstimate(
        game="distinguish",
        flavor=flavor,
        n=n,
        trials=trials,
        p_real=p_real,
        p_random=p_random,
        advantage=p_real - p_random,
        ci_halfwidth=2 * hoeffding_halfwidth(per_arm),
        invalid_real=invalid_real,
        invalid_random=invalid_random,
        seed=seed,
    )


def key_learner_adversary(engine: str = "bsgs"):
    """Adversary that recovers a key from one example and spot-checks it.

    Works against both flavors: under "mq" it picks its own probe points,
    under "pex" it uses two drawn examples.  Against the keyed arm the
    spot check always matches; against a random function it matches with
    probability about 1/q.
    """

    def adversary(params: GroupInstance, oracle, rng: random.Random) -> int:
        n = params.n
        if isinstance(oracle, MembershipOracle):
            x1 = _random_bits(rng, n)
            v1 = oracle.query(x1)
            while True:
                x2 = _random_bits(rng, n)
                if x2 != x1:
                    break
            v2 = oracle.query(x2)
        else:
            x1, v1 = oracle.draw()
            while True:
                x2, v2 = oracle.draw()
                if x2 != x1:
                    break
        key = learn_key(params, x1, v1, engine=engine)
        return 1 if prf_eval(params, key, x2) == v2 else 0

    return adversary


def make_constant_adversary(output: int):
    """Adversary that ignores the oracle and always answers ``output``."""

    def adversary(params, oracle, rng) -> int:
        return output

    return adversary


def coin_flip_adversary(params, oracle, rng: random.Random) -> int:
    return rng.randrange(2)


# ---------------------------------------------------------------------------
# Inference game (query phase, then a self-chosen exam)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InferenceTranscript:
    """One inference trial: the query log, exam pair as presented, and outcome."""

    queries: tuple[tuple[str, int], ...]
    exam_string: str
    exam_pair: tuple[int, int]
    true_index: int
    guess: int
    passed: bool
    violation: bool = False


@dataclass(frozen=True)
class InferenceResult:
    game: str
    n: int
    trials: int
    passes: int
    violations: int
    invalid: int
    pass_rate: float
    ci_halfwidth: float
    seed: int
    transcripts: tuple[InferenceTranscript, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "game": self.game,
            "n": self.n,
            "trials": self.trials,
            "passes": self.passes,
            "violations": self.violations,
            "invalid": self.invalid,
            "pass_rate": self.pass_rate,
            "ci": self.ci_halfwidth,
            "seed": self.seed,
        }


def run_inference_game(
    strategy_factory,
    n: int,
    trials: int,
    seed: int,
    query_budget: int | None = None,
    keep_transcripts: bool = False,
    game_name: str = "infer",
) -> InferenceResult:
    """Play the exam game: fresh instance and key per trial.

    The strategy object exposes ``choose_exam(params, oracle, rng)`` and
    ``guess(pair, rng) -> index``.  The harness enforces exam freshness (a
    reused query point is a protocol violation, scored as a failed trial),
    draws the decoy value uniformly from {1, ..., q}, and shuffles the
    pair before presenting it.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    budget = default_query_budget(n) if query_budget is None else query_budget
    passes = violations = invalid = 0
    transcripts: list[InferenceTranscript] = []

    for i in range(trials):
        inst = generate_instance(n, make_rng(seed, "instance", i))
        key = make_rng(seed, "key", i).randint(1, inst.q)
        oracle = MembershipOracle(keyed_function(inst, key), n, max_queries=budget)
        strategy = strategy_factory()
        rng = make_rng(seed, "strategy", i)
        exam_rng = make_rng(seed, "exam", i)
        try:
            exam = strategy.choose_exam(inst.public(), oracle, rng)
            check_bits(exam, n)
        except QueryBudgetExceeded:
            invalid += 1
            continue
        except ValueError:
            violations += 1
            continue
        queries = tuple((entry["query"], entry["response"]) for entry in oracle.transcript)
        if exam in oracle.queried:
            # Freshness rule: the exam string must be new.  Hard-enforced.
            violations += 1
            if keep_transcripts:
                transcripts.append(
                    InferenceTranscript(queries, exam, (0, 0), 0, 0, False, violation=True)
                )
            continue
        true_value = prf_eval(inst, key, exam)
        decoy = exam_rng.randint(1, inst.q)
        true_index = exam_rng.randrange(2)
        pair = (true_value, decoy) if true_index == 0 else (decoy, true_value)
        guess = strategy.guess(pair, rng)
        passed = guess == true_index
        passes += 1 if passed else 0
        if keep_transcripts:
            transcripts.append(
                InferenceTranscript(queries, exam, pair, true_index, guess, passed)
            )

    scored = trials - invalid
    return InferenceResult(
        game=game_name,
        n=n,
        trials=trials,
        passes=passes,
        violations=violations,
        invalid=invalid,
        pass_rate=passes / scored if scored else 0.0,
        ci_halfwidth=hoeffding_halfwidth(max(scored, 1)),
        seed=seed,
        transcripts=tuple(transcripts) if keep_transcripts else None,
    )


class KeyLearnerStrategy:
    """Inference via exact key recovery: one query, then a certain answer.

    Predicts the function value at a fresh exam point from the recovered
    key; fails only when the decoy collides with the true value (the pair
    is then two equal numbers and the shuffled index is a coin toss).
    """

    def __init__(self, engine: str = "bsgs"):
        self.engine = engine
        self._predicted: int | None = None

    def choose_exam(self, params: GroupInstance, oracle: MembershipOracle, rng) -> str:
        x1 = _random_bits(rng, params.n)
        v1 = oracle.query(x1)
        key = learn_key(params, x1, v1, engine=self.engine)
        while True:
            exam = _random_bits(rng, params.n)
            if exam != x1:
                break
        self._predicted = prf_eval(params, key, exam)
        return exam

    def guess(self, pair: tuple[int, int], rng) -> int:
        if pair[0] == self._predicted and pair[1] != self._predicted:
            return 0
        if pair[1] == self._predicted and pair[0] != self._predicted:
            return 1
        return rng.randrange(2)


class RandomGuessStrategy:
    """Queries nothing, picks a random exam string, guesses a coin flip."""

    def choose_exam(self, params: GroupInstance, oracle, rng) -> str:
        return _random_bits(rng, params.n)

    def guess(self, pair, rng) -> int:
        return rng.randrange(2)


class ReplayStrategy:
    """Misbehaving reference strategy: replays a queried point as its exam."""

    def choose_exam(self, params: GroupInstance, oracle: MembershipOracle, rng) -> str:
        x = _random_bits(rng, params.n)
        oracle.query(x)
        return x

    def guess(self, pair, rng) -> int:
        return rng.randrange(2)


# ---------------------------------------------------------------------------
# Learner-to-inference reduction
# ---------------------------------------------------------------------------


def exact_generator_learner(oracle, n: int, epsilon, delta, rng, engine: str = "bsgs"):
    """Generator learner backed by one-sample exact key recovery (needs
    parameter-suffix samples)."""
    return pac_generator_learn(oracle, epsilon, delta, engine=engine).spec


def uniform_distribution_learner(oracle, n: int, epsilon, delta, rng) -> GeneratorSpec:
    """Degenerate learner: ignores its samples, returns uniform 2n-bit noise."""
    return uniform_spec(2 * n)


class _SimulatedSampleOracle:
    """Serves SAMPLE queries through a membership handle.

    Each sample draws x uniformly, queries the keyed function, and returns
    x || BIN_n(F(k,x)), with the parameter suffix appended in "gen" form.
    The points used are recorded: the wrapped learner's whole view of the
    function flows through here.
    """

    def __init__(self, params: GroupInstance, mq: MembershipOracle, form: str, rng):
        if form not in ("kgen", "gen"):
            raise ValueError(f"unknown sample form {form!r}")
        self._params = params
        self._mq = mq
        self._form = form
        self._rng = rng
        self._suffix = encode_params(params) if form == "gen" else ""
        self.used: list[str] = []

    @property
    def count(self) -> int:
        return len(self.used)

    def sample(self) -> str:
        n = self._params.n
        x = _random_bits(self._rng, n)
        value = self._mq.query(x)
        self.used.append(x)
        return x + bin_n(value, n) + self._suffix


class LearnerInferenceReduction:
    """Wrap a generator learner as an inference strategy factory.

    Per trial: simulate the learner's sample oracle via membership
    queries, draw one string x || y from the generator it returns, then
    play out three cases: a fresh x becomes the exam and y is matched
    against the presented pair (case a/b); a reused x, or a learner
    failure, falls back to a fresh random exam and a coin-flip guess
    (case c).  ``case_log`` collects one of "a"/"b"/"c" per trial.
    """

    def __init__(self, dist_learner, epsilon: float | None = None, delta: float = 0.5,
                 form: str = "gen"):
        if form not in ("kgen", "gen"):
            raise ValueError(f"unknown sample form {form!r}")
        self.dist_learner = dist_learner
        self.epsilon = epsilon
        self.delta = delta
        self.form = form
        self.case_log: list[str] = []

    def __call__(self):
        return _ReductionStrategy(self)


class _ReductionStrategy:
    def __init__(self, owner: LearnerInferenceReduction):
        self._owner = owner
        self._y: int | None = None
        self._case = "c"

    def choose_exam(self, params: GroupInstance, oracle: MembershipOracle, rng) -> str:
        owner = self._owner
        n = params.n
        # Default accuracy targets handed to the learner: log2(n) and 1/2.
        epsilon = owner.epsilon if owner.epsilon is not None else math.log2(n)
        sim = _SimulatedSampleOracle(params, oracle, owner.form, rng)
        sample_x: str | None = None
        try:
            spec = owner.dist_learner(sim, n, epsilon, owner.delta, rng)
            drawn = spec.eval(_random_bits(rng, spec.seed_bits))
            sample_x = drawn[:n]
            self._y = bits_to_int(drawn[n : 2 * n])
        except ValueError:
            sample_x = None  # learner failure: uniform-guess fallback
            self._y = None
        used = set(sim.used)
        if sample_x is not None and sample_x not in used:
            self._case = "a_or_b"
            return sample_x
        self._case = "c"
        self._y = None
        while True:
            exam = _random_bits(rng, n)
            if exam not in used:
                return exam

    def guess(self, pair: tuple[int, int], rng) -> int:
        case = self._case
        guess = rng.randrange(2)
        if self._y is not None:
            match0 = pair[0] == self._y
            match1 = pair[1] == self._y
            if match0 or match1:
                case = "a"
                if match0 != match1:
                    guess = 0 if match0 else 1
            else:
                case = "b"
        self._owner.case_log.append(case)
        return guess


def learner_to_inference(
    dist_learner, epsilon: float | None = None, delta: float = 0.5, form: str = "gen"
) -> LearnerInferenceReduction:
    """Convenience constructor mirroring the class; see LearnerInferenceReduction."""
    return LearnerInferenceReduction(dist_learner, epsilon=epsilon, delta=delta, form=form)
