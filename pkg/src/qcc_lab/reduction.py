"""From cheap-on-average protocols to one-sided certificates.

Pipeline: check that no diagonal input pair puts randomness mass 1/(2n)
or more on runs costing at least M bits; greedily partition the 2^n sign
vectors into cells, each owning one shared-randomness point that makes
every member accept below budget; then a certificate for "my input is in
your cell" is just the cell index plus the full run transcript, which one
party alone can replay and audit.  The formula evaluators at the bottom
quantify why such certificates cannot stay short for protocols that are
cheap at every order.

Certificate wire format (MSB-first, zero-padded to a byte boundary):

    [entry count: 16 bits big-endian]
    [cell index - 1: ceil(log2(2 n^2)) bits big-endian]
    [per transcript entry: sender bit (Alice=0, Bob=1), payload bit]

The 16-bit count prefix is framing only; the quoted certificate length
is index width + 2 * entries, without prefix or padding.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .dj import promise_pairs
from .errors import InvariantError, PartitionError, QccLabError
from .harness import (ALICE, Action, CheckResult, Party, Protocol,
                      RandomnessSpace, Transcript, pair_label, run, tail_mass)
from .oracle import SignVector


def cell_index_width(n: int) -> int:
    """ceil(log2(2 n^2)): bits reserved for the cell index field."""
    if n < 2:
        raise InvariantError(f"n must be at least 2, got {n}")
    return (2 * n * n - 1).bit_length()


@dataclass(frozen=True)
class TailReport:
    """Worst-case mass of runs with T >= threshold over the checked pairs."""

    ok: bool
    n: int
    threshold_bits: int
    mass_bound: Fraction  # masses must stay strictly below 1/(2n)
    worst_mass: Fraction
    worst_pair: str
    pairs_checked: int


def check_tail_hypothesis(protocol: Protocol, n: int, threshold_bits: int,
                          space: Optional[RandomnessSpace] = None,
                          pairs: Optional[Sequence[tuple]] = None) -> TailReport:
    """Check mass(T >= M) < 1/(2n) for every pair (default: all promise pairs)."""
    space = space if space is not None else protocol.lambda_space
    if pairs is None:
        pairs = list(promise_pairs(n))
    bound = Fraction(1, 2 * n)
    worst = Fraction(0)
    worst_pair = ""
    for input_a, input_b in pairs:
        mass = tail_mass(protocol, input_a, input_b, space, threshold_bits)
        if mass > worst or not worst_pair:
            worst, worst_pair = mass, pair_label(input_a, input_b)
    return TailReport(worst < bound, n, threshold_bits, bound, worst,
                      worst_pair, len(pairs))


@dataclass(frozen=True)
class PartitionCell:
    """Inputs sharing one randomness point that accepts them all below budget."""

    vectors: tuple[SignVector, ...]
    lam_index: int
    lam: object


@dataclass(frozen=True, eq=False)
class Partition:
    """Greedy cover of all sign vectors by accepting randomness points."""

    n: int
    threshold_bits: int
    cells: tuple[PartitionCell, ...]

    @property
    def cell_count(self) -> int:
        return len(self.cells)

    @property
    def within_bound(self) -> bool:
        """Cell count within 2 n^2, as guaranteed when the tail check holds."""
        return self.cell_count <= 2 * self.n * self.n

    @cached_property
    def _locator(self) -> dict:
        table = {}
        for j, cell in enumerate(self.cells, start=1):
            for vec in cell.vectors:
                table[vec.coords] = (j, cell)
        return table

    def cell_of(self, a: SignVector) -> tuple[int, PartitionCell]:
        """1-based cell index and cell for an input; errors if uncovered."""
        try:
            return self._locator[a.coords]
        except KeyError:
            raise InvariantError(f"input {a.to_text()} is not covered") from None

    def table(self) -> "DerandomizationTable":
        return DerandomizationTable(self.n, tuple(c.lam for c in self.cells))

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "threshold_bits": self.threshold_bits,
            "cell_count": self.cell_count,
            "within_2n2_bound": self.within_bound,
            "table_digest": self.table().digest,
            "cells": [
                {
                    "lam_index": cell.lam_index,
                    "lam": _canon_lambda(cell.lam),
                    "vectors_hex": [v.to_hex() for v in cell.vectors],
                }
                for cell in self.cells
            ],
        }


def partition_inputs(protocol: Protocol, n: int, threshold_bits: int,
                     space: Optional[RandomnessSpace] = None) -> Partition:
    """Greedy partition: repeatedly take the point accepting the most inputs.

    Acceptance for input a at point lam means g(a, a, lam) = 1 with strictly
    fewer than threshold_bits transmitted.  Ties pick the lowest point index;
    an input accepted nowhere raises PartitionError naming it.
    """
    space = space if space is not None else protocol.lambda_space
    if not isinstance(space, RandomnessSpace):
        raise InvariantError("partitioning needs a finite RandomnessSpace")
    vectors = list(SignVector.all_vectors(n))
    acceptors: dict[tuple, set[int]] = {}
    for vec in vectors:
        good = set()
        for index, lam in enumerate(space.points):
            record = run(protocol, vec, vec, lam, lam_index=index)
            if record.g == 1 and record.t < threshold_bits:
                good.add(index)
        if not good:
            raise PartitionError(
                f"input {vec.to_text()} accepts nowhere below {threshold_bits} bits",
                witness=vec)
        acceptors[vec.coords] = good

    remaining = list(vectors)
    cells = []
    while remaining:
        best_index, best_count = -1, 0
        for index in range(len(space)):
            count = sum(1 for vec in remaining if index in acceptors[vec.coords])
            if count > best_count:  # ties keep the lowest index
                best_index, best_count = index, count
        if best_count == 0:
            raise PartitionError("no randomness point accepts any remaining input")
        members = tuple(v for v in remaining if best_index in acceptors[v.coords])
        cells.append(PartitionCell(members, best_index, space.points[best_index]))
        remaining = [v for v in remaining if best_index not in acceptors[v.coords]]
    return Partition(n, threshold_bits, tuple(cells))


def _canon_lambda(lam) -> str:
    if isinstance(lam, Fraction):
        return f"{lam.numerator}/{lam.denominator}"
    if isinstance(lam, bool):
        raise InvariantError("boolean randomness points are not canonical")
    if isinstance(lam, int):
        return str(lam)
    if isinstance(lam, float):
        return repr(lam)
    if isinstance(lam, (tuple, list)):
        return "(" + ",".join(_canon_lambda(x) for x in lam) + ")"
    raise InvariantError(f"cannot canonicalize randomness point {lam!r}")


@dataclass(frozen=True, eq=False)
class DerandomizationTable:
    """Shared map from 1-based cell index to randomness point.

    Both parties must hold the same table; the content digest lets them
    prove it without exchanging the table itself.
    """

    n: int
    entries: tuple

    @cached_property
    def digest(self) -> str:
        body = f"n={self.n};" + ";".join(_canon_lambda(x) for x in self.entries)
        return hashlib.sha256(body.encode()).hexdigest()

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class DjCertificate:
    """Cell index plus full transcript; enough for one-sided replay."""

    n: int
    j: int  # 1-based cell index
    transcript: Transcript

    def __post_init__(self):
        if self.j < 1 or self.j - 1 >= 1 << cell_index_width(self.n):
            raise InvariantError(
                f"cell index {self.j} does not fit {cell_index_width(self.n)} bits")
        if len(self.transcript) > 0xFFFF:
            raise InvariantError("transcript too long for the 16-bit count prefix")

    @property
    def bit_length(self) -> int:
        """Quoted length: index width + 2 bits per transcript entry."""
        return cell_index_width(self.n) + 2 * len(self.transcript)

    def serialize(self) -> bytes:
        bits: list[int] = []
        _push_bits(bits, len(self.transcript), 16)
        _push_bits(bits, self.j - 1, cell_index_width(self.n))
        for party, payload in self.transcript:
            bits.append(0 if party is ALICE else 1)
            bits.append(payload)
        return _pack_bits(bits)

    @classmethod
    def deserialize(cls, blob: bytes, n: int) -> "DjCertificate":
        width = cell_index_width(n)
        if len(blob) < 2:
            raise InvariantError("certificate shorter than its count prefix")
        bits = _unpack_bits(blob)
        count = _take_int(bits, 0, 16)
        total = 16 + width + 2 * count
        if len(blob) != (total + 7) // 8:
            raise InvariantError(
                f"certificate is {len(blob)} bytes, expected {(total + 7) // 8}")
        if any(bits[total:]):
            raise InvariantError("nonzero padding bits")
        j = _take_int(bits, 16, width) + 1
        entries = []
        for k in range(count):
            offset = 16 + width + 2 * k
            sender = ALICE if bits[offset] == 0 else Party.BOB
            entries.append((sender, bits[offset + 1]))
        return cls(n, j, Transcript(tuple(entries)))


def _push_bits(bits: list[int], value: int, width: int) -> None:
    if value < 0 or value >= 1 << width:
        raise InvariantError(f"value {value} does not fit {width} bits")
    bits.extend((value >> (width - 1 - i)) & 1 for i in range(width))


def _pack_bits(bits: list[int]) -> bytes:
    padded = bits + [0] * (-len(bits) % 8)
    out = bytearray()
    for i in range(0, len(padded), 8):
        byte = 0
        for b in padded[i:i + 8]:
            byte = (byte << 1) | b
        out.append(byte)
    return bytes(out)


def _unpack_bits(blob: bytes) -> list[int]:
    bits = []
    for byte in blob:
        bits.extend((byte >> (7 - i)) & 1 for i in range(8))
    return bits


def _take_int(bits: list[int], start: int, width: int) -> int:
    value = 0
    for b in bits[start:start + width]:
        value = (value << 1) | b
    return value


def build_certificate(a: SignVector, partition: Partition,
                      protocol: Protocol) -> DjCertificate:
    """Honest certificate for input a: its cell index and the replayed run."""
    j, cell = partition.cell_of(a)
    record = run(protocol, a, a, cell.lam, lam_index=cell.lam_index)
    if record.g != 1 or record.t >= partition.threshold_bits:
        raise PartitionError(
            f"replay broke the cell promise for {a.to_text()} "
            f"(g={record.g}, t={record.t})", witness=a)
    return DjCertificate(partition.n, j, record.transcript)


def verify_certificate(party: Party, own: SignVector, cert: DjCertificate,
                       table: DerandomizationTable,
                       protocol: Protocol) -> CheckResult:
    """Replay one side against the transcript; accept iff it matches and
    the own output is +1.

    The party consumes peer bits from the transcript as its incoming
    messages and checks every bit the transcript attributes to itself
    against what it would actually send.  Protocol-level rejections
    (promise violations, malformed actions) reject rather than raise.
    Protocols whose parties halt silently before the peer stops
    transmitting are outside this verifier's contract (see harness notes).
    """
    if cert.n != table.n:
        return CheckResult(False, f"certificate n={cert.n} vs table n={table.n}")
    if not 1 <= cert.j <= len(table):
        return CheckResult(False, f"cell index {cert.j} outside 1..{len(table)}")
    lam = table.entries[cert.j - 1]
    entries = cert.transcript.entries
    received: list[int] = []
    pos = 0
    while True:
        while pos < len(entries) and entries[pos][0] is not party:
            received.append(entries[pos][1])
            pos += 1
        try:
            action = protocol.step(party, own, lam, tuple(received))
        except QccLabError as exc:
            return CheckResult(False, f"protocol rejected: {exc}")
        if not isinstance(action, Action):
            return CheckResult(False, "protocol returned a malformed action")
        for bit in action.send:
            if pos >= len(entries):
                return CheckResult(False, "transcript ends before own bits do")
            sender, logged = entries[pos]
            if sender is not party:
                return CheckResult(
                    False, f"transcript entry {pos} is the peer's, not ours")
            if logged != bit:
                return CheckResult(
                    False, f"own bit at entry {pos} is {bit}, transcript says {logged}")
            pos += 1
        if action.output is not None:
            if any(sender is party for sender, _ in entries[pos:]):
                return CheckResult(False, "transcript claims own bits after halting")
            if action.output != 1:
                return CheckResult(False, "own output is -1")
            return CheckResult(True, "")
        if not action.send:
            if pos >= len(entries):
                return CheckResult(False, "transcript exhausted before halting")
            return CheckResult(False, f"desync at entry {pos}: expected to receive")


def m_of_n(n: int) -> float:
    """Budget curve 0.003 n / log2 n."""
    if n < 2:
        raise InvariantError(f"n must be at least 2, got {n}")
    return 0.003 * n / math.log2(n)


def moment_bound_forms(n: int, k: int) -> tuple[float, float]:
    """Both arrangements of the order-k bound: direct, and routed through
    m_of_n as m_of_n(n)**k / (0.006 n).  Algebraically equal; exposed
    separately so callers can check the agreement themselves.
    """
    if n < 2 or n % 2 or k < 1:
        raise InvariantError(f"need even n >= 2 and k >= 1, got n={n}, k={k}")
    direct = 0.5 * (0.003 * n) ** (k - 1) / math.log2(n) ** k
    via_threshold = m_of_n(n) ** k / (0.006 * n)
    return direct, via_threshold


def moment_bound(n: int, k: int) -> float:
    """Order-k cost bound 0.5 (0.003 n)^(k-1) / (log2 n)^k.

    Evaluated in two algebraically equal arrangements that must agree to
    1e-12 relative; a disagreement means a transcription slip in one.
    """
    direct, via_threshold = moment_bound_forms(n, k)
    if not math.isclose(direct, via_threshold, rel_tol=1e-12):
        raise InvariantError(
            f"moment bound arrangements disagree: {direct!r} vs {via_threshold!r}")
    return direct


def contradiction_holds(n: int) -> bool:
    """True when the certificate construction forces a budget the curve denies.

    Compares 0.0035 n / (log2 n + 3) - log2 n - 0.5 against m_of_n(n);
    strictly greater means no protocol can sit on the budget curve at n.
    """
    if n < 2:
        raise InvariantError(f"n must be at least 2, got {n}")
    lhs = 0.0035 * n / (math.log2(n) + 3) - math.log2(n) - 0.5
    return lhs > m_of_n(n)


def contradiction_threshold(limit: int = 10_000_002) -> int:
    """Smallest even n where contradiction_holds, found by even bisection.

    Verifies the claim at the limit, at spot checks above it, and that the
    threshold is a genuine sign change (holds there, fails two below).
    """
    if limit < 4 or limit % 2:
        raise InvariantError(f"limit must be even and at least 4, got {limit}")
    if not contradiction_holds(limit):
        raise InvariantError(f"contradiction does not hold at limit {limit}")
    for probe in (limit, 2 * limit, 16 * limit):
        if not contradiction_holds(probe):
            raise InvariantError(f"contradiction fails above the limit at {probe}")
    low, high = 4, limit  # low fails, high holds
    if contradiction_holds(low):
        return low
    while high - low > 2:
        mid = (low + high) // 2
        mid -= mid % 2
        if mid in (low, high):
            break
        if contradiction_holds(mid):
            high = mid
        else:
            low = mid
    if not contradiction_holds(high) or contradiction_holds(high - 2):
        raise InvariantError("threshold bisection did not isolate a sign change")
    return high
