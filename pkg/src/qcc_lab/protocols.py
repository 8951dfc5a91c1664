"""Reference protocols pluggable into the harness.

Three constructions with very different cost profiles:

  * send_all_reply: Alice ships her whole sign vector, Bob samples the
    exact joint law off a shared rational grid and replies with Alice's
    outcome bit.  Exact on the promise family at n + 1 bits per run.
  * toner_bacon: the classic 1-bit simulation of projective measurements
    on the singlet state, driven by two shared uniform sphere points.
  * constant: transmits nothing and outputs fixed values; a deliberately
    wrong baseline for failure-path tests.

The send-all-reply construction is this package's own exact baseline for
the restricted sign-vector family; it makes no claim about simulating
arbitrary measurements with bounded communication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import InvariantError, PromiseViolationError
from .harness import ALICE, Action, Party, Protocol, RandomnessSpace
from .oracle import JointProbs, SignVector


def _sgn(x: float) -> int:
    """Sign with the 0 -> +1 convention used throughout."""
    return 1 if x >= 0 else -1


@lru_cache(maxsize=4096)
def _cumulative_law(a_coords: tuple, b_coords: tuple) -> tuple[Fraction, Fraction, Fraction]:
    """Cumulative joint-law thresholds for outcome order pp, mp, pm, mm."""
    a, b = SignVector(a_coords), SignVector(b_coords)
    n, dot = a.n, a.dot(b)
    if dot not in (0, n):
        raise PromiseViolationError(
            f"send_all_reply inputs must satisfy the promise, got a.b = {dot}"
        )
    plus_plus = Fraction(dot * dot, n**3)
    marginal = Fraction(1, n)
    return plus_plus, marginal, 2 * marginal - plus_plus


_QUANTILE_OUTCOMES = ((1, 1), (-1, 1), (1, -1), (-1, -1))


def _quantile_outcome(lam: Fraction, cuts: tuple[Fraction, Fraction, Fraction]) -> tuple[int, int]:
    for cut, outcome in zip(cuts, _QUANTILE_OUTCOMES):
        if lam < cut:
            return outcome
    return _QUANTILE_OUTCOMES[3]


@dataclass(frozen=True, eq=False)
class SendAllReplyProtocol(Protocol):
    """Alice sends all n coordinate bits; Bob samples the law and replies.

    Shared randomness is one rational from the uniform grid
    {0, 1/Q, ..., (Q-1)/Q} with Q a multiple of n^3, so every quantile
    threshold lands exactly on grid boundaries and the output law is exact.
    Cost is n + 1 bits on every run.
    """

    n: int
    grid_size: Optional[int] = None

    name = "send_all_reply"

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise InvariantError(f"n must be even and at least 2, got {self.n}")
        grid = self.n**3 if self.grid_size is None else int(self.grid_size)
        if grid <= 0 or grid % self.n**3:
            raise InvariantError(
                f"grid_size must be a positive multiple of n^3 = {self.n**3}, got {grid}"
            )
        object.__setattr__(self, "grid_size", grid)
        space = RandomnessSpace.uniform(
            tuple(Fraction(k, grid) for k in range(grid)))
        object.__setattr__(self, "lambda_space", space)

    def _own_vector(self, value) -> SignVector:
        vec = value if isinstance(value, SignVector) else SignVector(tuple(value))
        if vec.n != self.n:
            raise InvariantError(f"input length {vec.n} does not match protocol n = {self.n}")
        return vec

    def step(self, party: Party, own_input, lam, received: tuple[int, ...]) -> Action:
        own = self._own_vector(own_input)
        if party is ALICE:
            if not received:
                return Action(send=own.to_bits())
            return Action(output=2 * received[0] - 1)
        if len(received) < self.n:
            return Action()  # still waiting for Alice's coordinates
        heard = SignVector.from_bits(received[: self.n])
        cuts = _cumulative_law(heard.coords, own.coords)
        y_a, y_b = _quantile_outcome(lam, cuts)
        return Action(send=((1 + y_a) // 2,), output=y_b)

    def outcome_table(self, input_a, input_b, space):
        a = self._own_vector(input_a)
        b = self._own_vector(input_b)
        cuts = _cumulative_law(a.coords, b.coords)
        t = self.n + 1
        return [(*_quantile_outcome(lam, cuts), t) for lam in space.points]

    def exact_distribution(self, input_a, input_b, space) -> Optional[JointProbs]:
        # closed interval counts; exact only on this protocol's own grid
        if space is not self.lambda_space:
            return None
        a = self._own_vector(input_a)
        b = self._own_vector(input_b)
        c1, c2, c3 = _cumulative_law(a.coords, b.coords)
        return JointProbs(c1, c2 - c1, c3 - c2, 1 - c3)


class SpherePairSampler:
    """Sampled-mode randomness: two independent uniform unit 3-vectors."""

    def sample(self, rng: np.random.Generator) -> tuple[tuple, tuple]:
        pair = self.sample_batch(rng, 1)
        return tuple(float(x) for x in pair[0][0]), tuple(float(x) for x in pair[1][0])

    def sample_batch(self, rng: np.random.Generator, count: int):
        draws = rng.normal(size=(2, count, 3))
        norms = np.linalg.norm(draws, axis=-1, keepdims=True)
        while not (norms > 0).all():  # astronomically rare degenerate draw
            bad = (norms <= 0)[..., 0]
            draws[bad] = rng.normal(size=(int(bad.sum()), 3))
            norms = np.linalg.norm(draws, axis=-1, keepdims=True)
        draws /= norms
        return draws[0], draws[1]


def _unit3(value) -> np.ndarray:
    vec = np.asarray(value, dtype=float)
    if vec.shape != (3,):
        raise InvariantError(f"inputs must be 3-vectors, got shape {vec.shape}")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > 1e-9:
        raise InvariantError(f"input norm {norm!r} is not 1 within 1e-9")
    return vec


@dataclass(frozen=True, eq=False)
class TonerBaconProtocol(Protocol):
    """One-bit simulation of singlet-state spin correlations.

    Alice outputs -sgn(a.l1) and sends c = sgn(a.l1) sgn(a.l2); Bob outputs
    sgn(b.(l1 + c l2)).  Over uniform (l1, l2) this reproduces
    E(y_A y_B) = -a.b with unbiased marginals, at exactly 1 bit per run.
    """

    name = "toner_bacon"
    lambda_space = SpherePairSampler()

    def step(self, party: Party, own_input, lam, received: tuple[int, ...]) -> Action:
        own = _unit3(own_input)
        lam1, lam2 = (np.asarray(part, dtype=float) for part in lam)
        if party is ALICE:
            s1 = _sgn(float(own @ lam1))
            s2 = _sgn(float(own @ lam2))
            return Action(send=((1 + s1 * s2) // 2,), output=-s1)
        if not received:
            return Action()  # Bob moves only after Alice's bit
        c = 2 * received[0] - 1
        return Action(output=_sgn(float(own @ (lam1 + c * lam2))))

    def batch_outcomes(self, input_a, input_b, space, rng, count: int):
        if not hasattr(space, "sample_batch"):
            return None
        a, b = _unit3(input_a), _unit3(input_b)
        lam1, lam2 = space.sample_batch(rng, count)
        s1 = np.where(lam1 @ a >= 0, 1, -1)
        s2 = np.where(lam2 @ a >= 0, 1, -1)
        y_a = -s1
        y_b = np.where((lam1 + s1[:, None] * s2[:, None] * lam2) @ b >= 0, 1, -1)
        return y_a, y_b, np.ones(count, dtype=np.int64)

    @staticmethod
    def grid_space(points_per_sphere: int) -> RandomnessSpace:
        """Finite Fibonacci-sphere product grid; an approximate quadrature."""
        if points_per_sphere < 1 or points_per_sphere > 128:
            raise InvariantError("points_per_sphere must be in 1..128")
        golden = math.pi * (3 - math.sqrt(5))
        single = []
        for i in range(points_per_sphere):
            z = 1 - (2 * i + 1) / points_per_sphere
            radius = math.sqrt(max(0.0, 1 - z * z))
            theta = golden * i
            single.append((radius * math.cos(theta), radius * math.sin(theta), z))
        return RandomnessSpace.uniform(
            tuple((p, q) for p in single for q in single))


@dataclass(frozen=True, eq=False)
class ConstantProtocol(Protocol):
    """Outputs fixed values with zero communication; a broken baseline."""

    y_a: int = 1
    y_b: int = 1

    name = "constant"
    lambda_space = RandomnessSpace.uniform((0,))

    def __post_init__(self):
        if self.y_a not in (-1, 1) or self.y_b not in (-1, 1):
            raise InvariantError("constant outputs must be +/-1")

    def step(self, party: Party, own_input, lam, received: tuple[int, ...]) -> Action:
        return Action(output=self.y_a if party is ALICE else self.y_b)


def _build_send_all_reply(params: dict) -> SendAllReplyProtocol:
    if "n" not in params:
        raise InvariantError("send_all_reply needs parameter n")
    return SendAllReplyProtocol(n=int(params["n"]),
                                grid_size=params.get("grid_size"))


def _build_toner_bacon(params: dict) -> TonerBaconProtocol:
    return TonerBaconProtocol()


def _build_constant(params: dict) -> ConstantProtocol:
    return ConstantProtocol(y_a=int(params.get("y_a", 1)),
                            y_b=int(params.get("y_b", 1)))


_FACTORIES = {
    "send_all_reply": (_build_send_all_reply, {"n", "grid_size"}),
    "toner_bacon": (_build_toner_bacon, set()),
    "constant": (_build_constant, {"y_a", "y_b"}),
}

PROTOCOL_NAMES = tuple(sorted(_FACTORIES))


def make_protocol(name: str, **params) -> Protocol:
    """Build a registered protocol by name; unknown names or keys error."""
    if name not in _FACTORIES:
        raise InvariantError(f"unknown protocol {name!r}; choose from {PROTOCOL_NAMES}")
    factory, allowed = _FACTORIES[name]
    supplied = {k: v for k, v in params.items() if v is not None}
    stray = set(supplied) - allowed
    if stray:
        raise InvariantError(f"{name} does not accept parameters {sorted(stray)}")
    return factory(supplied)
