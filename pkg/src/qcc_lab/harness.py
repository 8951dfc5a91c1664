"""Deterministic two-party protocol runner and its measurement utilities.

A protocol is a pair of deterministic next-action functions behind one
`step` method: given (party, own input, shared randomness, bits received so
far) it returns an `Action` that sends zero or more bits and may halt with
a +/-1 output.  The runner asks a party again only after new bits arrive
for it, so consecutive bits from one sender always come from a single
action; Alice is asked first.  Every run is a pure function of
(protocol, input_A, input_B, lambda), which is what makes transcripts
replayable by a single party during certificate verification.

Costs count every transmitted bit from both parties.  A run that exceeds
its bit budget raises NonHaltingError instead of truncating.

Note: a party that halts silently while its peer keeps transmitting cannot
be replayed from the transcript alone; none of the shipped protocols do
this, and `verify_certificate` documents the same restriction.
"""

from __future__ import annotations

import abc
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvariantError, NonHaltingError, ProtocolError
from .oracle import JointProbs, SignVector
from .tolerances import TRACE_ATOL


class Party(Enum):
    ALICE = "A"
    BOB = "B"

    @property
    def peer(self) -> "Party":
        return Party.BOB if self is Party.ALICE else Party.ALICE


ALICE = Party.ALICE
BOB = Party.BOB


@dataclass(frozen=True)
class Action:
    """One move: send the given bits, then halt iff output is set."""

    send: tuple[int, ...] = ()
    output: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "send", tuple(int(b) for b in self.send))
        if any(b not in (0, 1) for b in self.send):
            raise ProtocolError(f"sent bits must be 0/1, got {self.send}")
        if self.output is not None and self.output not in (-1, 1):
            raise ProtocolError(f"output must be +/-1, got {self.output!r}")


@dataclass(frozen=True)
class CheckResult:
    """Accept/reject verdict with a human-readable reason on reject."""

    accepted: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.accepted


@dataclass(frozen=True)
class Transcript:
    """Ordered public record of every transmitted bit with its sender."""

    entries: tuple[tuple[Party, int], ...]

    def __post_init__(self):
        entries = tuple((Party(p), int(b)) for p, b in self.entries)
        if any(b not in (0, 1) for _, b in entries):
            raise InvariantError("transcript bits must be 0/1")
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def tokens(self) -> str:
        """Dump as a string over the four tokens A0, A1, B0, B1."""
        return "".join(f"{p.value}{b}" for p, b in self.entries)

    @classmethod
    def from_tokens(cls, text: str) -> "Transcript":
        if len(text) % 2:
            raise InvariantError(f"token string has odd length: {text!r}")
        entries = []
        for i in range(0, len(text), 2):
            who, bit = text[i], text[i + 1]
            if who not in "AB" or bit not in "01":
                raise InvariantError(f"bad token {text[i:i+2]!r} at offset {i}")
            entries.append((Party(who), int(bit)))
        return cls(tuple(entries))


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one deterministic run."""

    y_a: int
    y_b: int
    transcript: Transcript
    t: int
    lam: object
    lam_index: Optional[int] = None

    @property
    def g(self) -> int:
        """Joint success indicator [y_A = +1 and y_B = +1]."""
        return int(self.y_a == 1 and self.y_b == 1)


@dataclass(frozen=True, eq=False)
class RandomnessSpace:
    """Finite weighted set of shared-randomness points; weights sum to 1."""

    points: tuple
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        points = tuple(self.points)
        weights = tuple(Fraction(w) for w in self.weights)
        if not points:
            raise InvariantError("randomness space needs at least one point")
        if len(points) != len(weights):
            raise InvariantError(f"{len(points)} points vs {len(weights)} weights")
        if any(w < 0 for w in weights):
            raise InvariantError("weights must be nonnegative")
        if sum(weights) != 1:
            raise InvariantError(f"weights sum to {sum(weights)}, expected 1")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, points) -> "RandomnessSpace":
        points = tuple(points)
        return cls(points, (Fraction(1, len(points)),) * len(points))

    def __len__(self) -> int:
        return len(self.points)

    def sample_index(self, rng: np.random.Generator) -> int:
        cdf = np.cumsum(np.array([float(w) for w in self.weights]))
        return int(np.searchsorted(cdf, rng.random(), side="right"))

    def sample(self, rng: np.random.Generator):
        return self.points[self.sample_index(rng)]


class Protocol(abc.ABC):
    """Base contract for pluggable protocols."""

    name: str = "protocol"
    lambda_space = None  # natural randomness source; subclasses set it

    @abc.abstractmethod
    def step(self, party: Party, own_input, lam, received: tuple[int, ...]) -> Action:
        """Next action for `party` given everything it can see."""

    def default_cap(self, input_a, input_b) -> int:
        """Bit budget 10n + 64, with n the larger sized-input length."""
        n = 0
        for value in (input_a, input_b):
            try:
                n = max(n, len(value))
            except TypeError:
                pass
        return 10 * n + 64

    def outcome_table(self, input_a, input_b, space: RandomnessSpace):
        """Optional fast path: per-point (y_a, y_b, t) rows matching `run`.

        Return None to use the generic per-point runner.  Implementations
        must agree with `run` exactly; tests replay random points.
        """
        return None

    def exact_distribution(self, input_a, input_b, space: RandomnessSpace):
        """Optional closed-form law, identical to enumerating every point."""
        return None

    def batch_outcomes(self, input_a, input_b, space, rng, count: int):
        """Optional vectorized sampler returning (y_a, y_b, t) arrays."""
        return None


def worker_count() -> int:
    """Thread cap from QCC_LAB_THREADS (default 1; aggregation stays ordered)."""
    raw = os.environ.get("QCC_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_ordered(fn, items: Sequence):
    if worker_count() == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        return list(pool.map(fn, items))


def run(protocol: Protocol, input_a, input_b, lam, *, cap: Optional[int] = None,
        lam_index: Optional[int] = None) -> RunRecord:
    """Execute one deterministic run and record outputs, transcript, cost."""
    if cap is None:
        cap = protocol.default_cap(input_a, input_b)
    received = {ALICE: [], BOB: []}
    acted_at = {ALICE: -1, BOB: -1}
    outputs: dict[Party, Optional[int]] = {ALICE: None, BOB: None}
    own_input = {ALICE: input_a, BOB: input_b}
    entries: list[tuple[Party, int]] = []

    while outputs[ALICE] is None or outputs[BOB] is None:
        progressed = False
        for party in (ALICE, BOB):
            if outputs[party] is not None:
                continue
            if acted_at[party] >= len(received[party]):
                continue  # nothing new since its last action
            action = protocol.step(party, own_input[party], lam, tuple(received[party]))
            if not isinstance(action, Action):
                raise ProtocolError(f"step returned {type(action).__name__}, not Action")
            acted_at[party] = len(received[party])
            progressed = True
            for bit in action.send:
                if len(entries) >= cap:
                    raise NonHaltingError(
                        f"{protocol.name} exceeded the {cap}-bit budget",
                        partial_transcript=Transcript(tuple(entries)),
                    )
                entries.append((party, bit))
                received[party.peer].append(bit)
            if action.output is not None:
                outputs[party] = action.output
        if not progressed:
            raise ProtocolError(
                f"{protocol.name} deadlocked: no party can act "
                f"(transcript so far: {Transcript(tuple(entries)).tokens()!r})"
            )

    transcript = Transcript(tuple(entries))
    return RunRecord(outputs[ALICE], outputs[BOB], transcript, len(transcript),
                     lam, lam_index)


def _finite_rows(protocol: Protocol, input_a, input_b,
                 space: RandomnessSpace) -> list[tuple[int, int, int]]:
    rows = protocol.outcome_table(input_a, input_b, space)
    if rows is not None:
        rows = list(rows)
        if len(rows) != len(space):
            raise ProtocolError(
                f"outcome_table returned {len(rows)} rows for {len(space)} points"
            )
        return rows
    out = []
    for index, lam in enumerate(space.points):
        rec = run(protocol, input_a, input_b, lam, lam_index=index)
        out.append((rec.y_a, rec.y_b, rec.t))
    return out


def output_distribution(protocol: Protocol, input_a, input_b,
                        space: RandomnessSpace) -> JointProbs:
    """Exact joint law of (y_A, y_B) by weighted enumeration of the space.

    Protocols may supply the same law in closed form via
    `exact_distribution`; equivalence with enumeration is covered by tests.
    """
    closed = protocol.exact_distribution(input_a, input_b, space)
    if closed is not None:
        return closed
    mass = {(1, 1): Fraction(0), (-1, 1): Fraction(0),
            (1, -1): Fraction(0), (-1, -1): Fraction(0)}
    for (y_a, y_b, _), weight in zip(_finite_rows(protocol, input_a, input_b, space),
                                     space.weights):
        mass[(y_a, y_b)] += weight
    return JointProbs(mass[(1, 1)], mass[(-1, 1)], mass[(1, -1)], mass[(-1, -1)])


@dataclass(frozen=True)
class SampleStats:
    """Monte Carlo estimate of the joint law plus cost telemetry."""

    probs: JointProbs
    t_mean: float
    t_max: int
    samples: int
    seed: object


def _sampled_rows(protocol: Protocol, input_a, input_b, space, samples: int,
                  rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    batch = protocol.batch_outcomes(input_a, input_b, space, rng, samples)
    if batch is not None:
        y_a, y_b, t = (np.asarray(arr) for arr in batch)
        if not (len(y_a) == len(y_b) == len(t) == samples):
            raise ProtocolError("batch_outcomes returned arrays of the wrong length")
        return y_a, y_b, t
    y_a = np.empty(samples, dtype=np.int8)
    y_b = np.empty(samples, dtype=np.int8)
    t = np.empty(samples, dtype=np.int64)
    for i in range(samples):
        rec = run(protocol, input_a, input_b, space.sample(rng))
        y_a[i], y_b[i], t[i] = rec.y_a, rec.y_b, rec.t
    return y_a, y_b, t


def sample_distribution(protocol: Protocol, input_a, input_b, space=None, *,
                        samples: int, seed=0) -> SampleStats:
    """Estimate the joint law with a seeded generator; seed is reported back."""
    if samples < 1:
        raise InvariantError(f"need a positive sample count, got {samples}")
    space = space if space is not None else protocol.lambda_space
    rng = np.random.default_rng(seed)
    y_a, y_b, t = _sampled_rows(protocol, input_a, input_b, space, samples, rng)
    probs = JointProbs(
        float(np.count_nonzero((y_a == 1) & (y_b == 1))) / samples,
        float(np.count_nonzero((y_a == -1) & (y_b == 1))) / samples,
        float(np.count_nonzero((y_a == 1) & (y_b == -1))) / samples,
        float(np.count_nonzero((y_a == -1) & (y_b == -1))) / samples,
    )
    return SampleStats(probs, float(t.mean()), int(t.max()), samples, seed)


@dataclass(frozen=True)
class Scenario:
    """One comparison target: protocol inputs plus the predicted joint law."""

    input_a: object
    input_b: object
    target: JointProbs
    label: str = ""


@dataclass(frozen=True)
class ScenarioResult:
    label: str
    computed: JointProbs
    target: JointProbs
    error_max: float
    error_pp: float
    passed_full: Optional[bool]
    passed_restricted: Optional[bool]


@dataclass(frozen=True)
class BlqmsReport:
    """Per-scenario comparison of simulated laws against quantum targets.

    `passed_restricted` checks p_pp alone (the joint +1 outcome); the full
    check compares all four probabilities.  In sampled mode both flags are
    None and only the error magnitudes are reported.
    """

    results: tuple[ScenarioResult, ...]
    mode: str  # "exact", "float", or "sampled"
    samples: Optional[int]
    seed: object

    @property
    def all_full(self) -> Optional[bool]:
        flags = [r.passed_full for r in self.results]
        return None if None in flags else all(flags)

    @property
    def all_restricted(self) -> Optional[bool]:
        flags = [r.passed_restricted for r in self.results]
        return None if None in flags else all(flags)

    @property
    def worst_error(self) -> float:
        return max((r.error_max for r in self.results), default=0.0)


def _law_errors(computed: JointProbs, target: JointProbs) -> tuple[float, float]:
    deltas = [abs(c - t) for c, t in zip(
        (computed.p_pp, computed.p_mp, computed.p_pm, computed.p_mm),
        (target.p_pp, target.p_mp, target.p_pm, target.p_mm))]
    return float(max(deltas)), float(deltas[0])


def check_exact_blqms(protocol: Protocol, scenarios: Iterable[Scenario], space=None, *,
                      samples: Optional[int] = None, seed=0) -> BlqmsReport:
    """Compare the protocol's output law against each scenario's target.

    Finite spaces are enumerated exactly: rational laws must match the
    target exactly, float laws within TRACE_ATOL.  With `samples` set, the
    law is estimated instead and no pass flags are assigned.
    """
    scenarios = list(scenarios)
    space = space if space is not None else protocol.lambda_space

    if samples is None:
        if not isinstance(space, RandomnessSpace):
            raise InvariantError("exact checking needs a finite RandomnessSpace; "
                                 "pass samples= for sampled spaces")

        def check(scenario: Scenario) -> ScenarioResult:
            computed = output_distribution(protocol, scenario.input_a,
                                           scenario.input_b, space)
            error_max, error_pp = _law_errors(computed, scenario.target)
            exact = computed.exact and scenario.target.exact
            tol = 0 if exact else TRACE_ATOL
            return ScenarioResult(
                scenario.label, computed, scenario.target, error_max, error_pp,
                passed_full=error_max <= tol,
                passed_restricted=error_pp <= tol,
            )

        results = _map_ordered(check, scenarios)
        mode = "exact" if all(r.computed.exact and r.target.exact for r in results) else "float"
        return BlqmsReport(tuple(results), mode, None, None)

    def estimate(indexed: tuple[int, Scenario]) -> ScenarioResult:
        index, scenario = indexed
        stats = sample_distribution(protocol, scenario.input_a, scenario.input_b,
                                    space, samples=samples,
                                    seed=np.random.SeedSequence([_seed_int(seed), index]))
        error_max, error_pp = _law_errors(stats.probs, scenario.target)
        return ScenarioResult(scenario.label, stats.probs, scenario.target,
                              error_max, error_pp, None, None)

    results = _map_ordered(estimate, list(enumerate(scenarios)))
    return BlqmsReport(tuple(results), "sampled", samples, seed)


def _seed_int(seed) -> int:
    if isinstance(seed, (int, np.integer)):
        return int(seed)
    raise InvariantError(f"seed must be an integer, got {seed!r}")


@dataclass(frozen=True)
class PairMoments:
    """Cost moments for one input pair; tails map threshold M to mass(T >= M)."""

    label: str
    moments: tuple  # E[T^k] for k = 1..k_max
    tails: dict
    stderrs: Optional[tuple] = None


@dataclass(frozen=True)
class MomentReport:
    entries: tuple[PairMoments, ...]
    k_max: int
    mode: str
    samples: Optional[int]
    seed: object

    def worst(self, k: int):
        """Max over pairs of E[T^k]; the order-k cost of the protocol."""
        return max(entry.moments[k - 1] for entry in self.entries)


def describe_input(value) -> str:
    if isinstance(value, SignVector):
        return value.to_text()
    if isinstance(value, (tuple, list)) and all(isinstance(x, float) for x in value):
        return "(" + ", ".join(f"{x:.6g}" for x in value) + ")"
    return str(value)


def pair_label(input_a, input_b) -> str:
    return f"{describe_input(input_a)}|{describe_input(input_b)}"


def empirical_moments(protocol: Protocol, pairs: Sequence[tuple], space=None, *,
                      k_max: int = 2, tail_thresholds: Sequence[int] = (),
                      samples: Optional[int] = None, seed=0) -> MomentReport:
    """Moments E[T^k] up to k_max per input pair, exact or sampled.

    Finite spaces give exact rational moments and tail masses; sampled mode
    reports estimates with standard errors (ddof=1).
    """
    if k_max < 1:
        raise InvariantError(f"k_max must be at least 1, got {k_max}")
    space = space if space is not None else protocol.lambda_space

    if samples is None:
        if not isinstance(space, RandomnessSpace):
            raise InvariantError("exact moments need a finite RandomnessSpace")

        def measure(pair) -> PairMoments:
            input_a, input_b = pair
            rows = _finite_rows(protocol, input_a, input_b, space)
            moments = tuple(
                sum((w * t**k for (_, _, t), w in zip(rows, space.weights)),
                    start=Fraction(0))
                for k in range(1, k_max + 1)
            )
            tails = {
                m: sum((w for (_, _, t), w in zip(rows, space.weights) if t >= m),
                       start=Fraction(0))
                for m in tail_thresholds
            }
            return PairMoments(pair_label(input_a, input_b), moments, tails)

        return MomentReport(tuple(_map_ordered(measure, list(pairs))),
                            k_max, "exact", None, None)

    def estimate(indexed) -> PairMoments:
        index, (input_a, input_b) = indexed
        rng = np.random.default_rng(np.random.SeedSequence([_seed_int(seed), index]))
        _, _, t = _sampled_rows(protocol, input_a, input_b, space, samples, rng)
        t = t.astype(float)
        moments, stderrs = [], []
        for k in range(1, k_max + 1):
            powered = t**k
            moments.append(float(powered.mean()))
            spread = float(powered.std(ddof=1)) if samples > 1 else 0.0
            stderrs.append(spread / samples**0.5)
        tails = {m: float(np.count_nonzero(t >= m)) / samples for m in tail_thresholds}
        return PairMoments(pair_label(input_a, input_b), tuple(moments), tails,
                           tuple(stderrs))

    entries = _map_ordered(estimate, list(enumerate(pairs)))
    return MomentReport(tuple(entries), k_max, "sampled", samples, seed)


def tail_mass(protocol: Protocol, input_a, input_b, space: RandomnessSpace,
              threshold: int) -> Fraction:
    """Exact randomness mass of runs with T >= threshold."""
    if not isinstance(space, RandomnessSpace):
        raise InvariantError("tail_mass needs a finite RandomnessSpace")
    rows = _finite_rows(protocol, input_a, input_b, space)
    return sum((w for (_, _, t), w in zip(rows, space.weights) if t >= threshold),
               start=Fraction(0))
