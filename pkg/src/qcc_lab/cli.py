"""Command-line front end.

Subcommands
-----------
predict    joint law and expectations for one measurement scenario
simulate   run a protocol on one input pair (exact law or sampled)
verify     audit a protocol's output law against the targets, all promise pairs
dj         reject certificates and certificate-size formulas (cert/verify/bounds)
reduce     acceptance-mass audit, tail check, greedy partition, certificates
bounds     budget and moment formula table over n and k

Exit codes: 0 success, 2 bad input or usage, 3 a checked property failed
(law mismatch, tail violation, partition failure, rejected certificate).

Reports are deterministic for fixed arguments and seed: no timestamps,
fixed key order, floats at 15 significant digits, rationals as "p/q"
strings with a float rendition alongside.  The seed is echoed in every
report even when unused.

Scenario JSON for `predict`:

    {"state": "maximally_entangled" | "singlet" | {"matrix": M},
     "n": 4,                          # required for maximally_entangled
     "alice": SPEC, "bob": SPEC}

where SPEC is one of {"vector": "+-+-" or [1,-1,...]} for a sign-vector
projector, {"bloch": [x,y,z]} for a qubit observable, {"projector": M},
or {"observable": M}; matrix cells are numbers or [re, im] pairs.

CSV column orders (fixed): predict -> p_pp,p_mp,p_pm,p_mm,e_ab,e_a,e_b;
bounds -> n,k,n1_lower_bound,m_of_n,moment_bound,contradiction.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Optional

import numpy as np

from .dj import (auy_min_n1, check_promise, n0_certificate, n0_upper_bound,
                 n0_verify, n1_lower_bound, promise_pairs, promise_scenarios,
                 RejectCertificate)
from .errors import (InvariantError, NonHaltingError, PartitionError,
                     QccLabError)
from .harness import (ALICE, BOB, RandomnessSpace, check_exact_blqms,
                      empirical_moments, output_distribution, pair_label,
                      sample_distribution)
from .oracle import (BinaryObservable, DensityMatrix, JointProbs, Projector,
                     SignVector, bloch_observable, maximally_entangled,
                     observable_to_projector, predict_joint_probs,
                     probs_to_expectations, sign_vector_projector, singlet)
from .protocols import PROTOCOL_NAMES, make_protocol
from .reduction import (build_certificate, check_tail_hypothesis,
                        contradiction_holds, m_of_n, moment_bound_forms,
                        partition_inputs, verify_certificate)


def _float_text(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise InvariantError(f"cannot serialize non-finite value {x!r}")
    return f"{x:.15g}"


def _scalar_text(value) -> Optional[str]:
    """JSON token for a scalar, or None when value is a container."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _float_text(float(value))
    if isinstance(value, Fraction):
        return json.dumps(f"{value.numerator}/{value.denominator}")
    if isinstance(value, str):
        return json.dumps(value)
    return None


def _write_json(value, out: io.StringIO, level: int) -> None:
    token = _scalar_text(value)
    if token is not None:
        out.write(token)
        return
    pad = "  " * level
    if isinstance(value, dict):
        if not value:
            out.write("{}")
            return
        out.write("{\n")
        items = list(value.items())
        for i, (key, item) in enumerate(items):
            if not isinstance(key, str):
                raise InvariantError(f"report keys must be strings, got {key!r}")
            out.write("  " * (level + 1) + json.dumps(key) + ": ")
            _write_json(item, out, level + 1)
            out.write(",\n" if i + 1 < len(items) else "\n")
        out.write(pad + "}")
        return
    if isinstance(value, (list, tuple)):
        entries = list(value)
        if not entries:
            out.write("[]")
            return
        if all(_scalar_text(x) is not None for x in entries):
            out.write("[" + ", ".join(_scalar_text(x) for x in entries) + "]")
            return
        out.write("[\n")
        for i, item in enumerate(entries):
            out.write("  " * (level + 1))
            _write_json(item, out, level + 1)
            out.write(",\n" if i + 1 < len(entries) else "\n")
        out.write(pad + "]")
        return
    raise InvariantError(f"cannot serialize {type(value).__name__} in a report")


def canonical_json(report: dict) -> str:
    """Deterministic pretty JSON: fixed key order, floats at 15 digits."""
    out = io.StringIO()
    _write_json(report, out, 0)
    out.write("\n")
    return out.getvalue()


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return _float_text(float(value))
    if isinstance(value, Fraction):
        return _float_text(float(value))
    return str(value)


def render_csv(columns: list[str], rows: list[list]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(cell) for cell in row])
    return out.getvalue()


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _probs_dict(probs: JointProbs) -> dict:
    return {"p_pp": probs.p_pp, "p_mp": probs.p_mp,
            "p_pm": probs.p_pm, "p_mm": probs.p_mm}


def _floats(mapping: dict) -> dict:
    return {key: float(value) for key, value in mapping.items()}


def _parse_sign_vector(value) -> SignVector:
    if isinstance(value, str):
        return SignVector.parse(value)
    if isinstance(value, (list, tuple)):
        return SignVector(tuple(int(x) for x in value))
    raise InvariantError(f"expected a sign vector, got {value!r}")


def _parse_unit3(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise InvariantError(f"expected three comma-separated components, got {text!r}")
    return tuple(float(p) for p in parts)


def _parse_matrix(rows) -> np.ndarray:
    def cell(c):
        if isinstance(c, bool):
            raise InvariantError("matrix cells must be numbers, not booleans")
        if isinstance(c, (list, tuple)):
            if len(c) != 2:
                raise InvariantError("matrix cells are numbers or [re, im] pairs")
            return complex(float(c[0]), float(c[1]))
        return complex(float(c))
    if not isinstance(rows, (list, tuple)) or not rows:
        raise InvariantError("matrix must be a nonempty list of rows")
    return np.array([[cell(c) for c in row] for row in rows], dtype=complex)


def _parse_party(doc: dict, key: str, exact_state: bool) -> Projector:
    spec = doc.get(key)
    if not isinstance(spec, dict):
        raise InvariantError(f'scenario needs an object under "{key}"')
    kinds = [k for k in ("vector", "bloch", "projector", "observable") if k in spec]
    if len(kinds) != 1:
        raise InvariantError(
            f'"{key}" needs exactly one of vector/bloch/projector/observable')
    kind = kinds[0]
    if kind == "vector":
        return sign_vector_projector(_parse_sign_vector(spec[kind]), exact=exact_state)
    if kind == "bloch":
        direction = spec[kind]
        if not isinstance(direction, (list, tuple)) or len(direction) != 3:
            raise InvariantError('"bloch" takes a 3-component direction')
        return observable_to_projector(bloch_observable([float(x) for x in direction]))
    if kind == "projector":
        return Projector(_parse_matrix(spec[kind]))
    return observable_to_projector(BinaryObservable(_parse_matrix(spec[kind])))


def _load_scenario(path: str) -> tuple[Projector, Projector, DensityMatrix]:
    with open(path, encoding="utf-8") as handle:
        doc = json.load(handle)
    if not isinstance(doc, dict):
        raise InvariantError("scenario file must hold a JSON object")
    state_spec = doc.get("state", "maximally_entangled")
    if state_spec == "maximally_entangled":
        n = doc.get("n")
        if not isinstance(n, int):
            raise InvariantError('maximally_entangled state needs an integer "n"')
        state = maximally_entangled(n)
    elif state_spec == "singlet":
        state = singlet(exact=False)
    elif isinstance(state_spec, dict) and "matrix" in state_spec:
        state = DensityMatrix(_parse_matrix(state_spec["matrix"]))
    else:
        raise InvariantError(f"unrecognized state spec {state_spec!r}")
    proj_a = _parse_party(doc, "alice", state.exact)
    proj_b = _parse_party(doc, "bob", state.exact)
    return proj_a, proj_b, state


def _load_protocol_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as handle:
        config = json.load(handle)
    if not isinstance(config, dict):
        raise InvariantError("protocol config must be a JSON object")
    return config


def _build_protocol(args) -> object:
    params = _load_protocol_config(getattr(args, "protocol_config", None))
    n = getattr(args, "n", None)
    if args.protocol == "send_all_reply" and n is not None:
        params.setdefault("n", n)
    return make_protocol(args.protocol, **params)


def _require_even_n(n: int) -> int:
    if n < 2 or n % 2:
        raise InvariantError(f"n must be even and at least 2, got {n}")
    return n


EXHAUSTIVE_N_LIMIT = 16  # 2^n enumeration beyond this is not desk-scale


def _guard_exhaustive(n: int) -> None:
    if n > EXHAUSTIVE_N_LIMIT:
        raise InvariantError(
            f"exhaustive enumeration is capped at n = {EXHAUSTIVE_N_LIMIT}, got {n}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_predict(args) -> int:
    proj_a, proj_b, state = _load_scenario(args.scenario)
    probs = predict_joint_probs(proj_a, proj_b, state)
    triple = probs_to_expectations(probs)
    probs_map = _probs_dict(probs)
    expectations = {"e_ab": triple.e_ab, "e_a": triple.e_a, "e_b": triple.e_b}
    if args.format == "csv":
        columns = ["p_pp", "p_mp", "p_pm", "p_mm", "e_ab", "e_a", "e_b"]
        values = [*probs_map.values(), *expectations.values()]
        _emit(render_csv(columns, [values]), args.out)
        return 0
    report = {
        "command": "predict",
        "scenario": args.scenario,
        "seed": args.seed,
        "exact": probs.exact,
        "probs": probs_map if probs.exact else _floats(probs_map),
        "probs_float": _floats(probs_map),
        "expectations": expectations if probs.exact else _floats(expectations),
        "expectations_float": _floats(expectations),
    }
    _emit(canonical_json(report), args.out)
    return 0


def cmd_simulate(args) -> int:
    if args.protocol == "toner_bacon":
        if args.a is None or args.b is None:
            raise InvariantError("toner_bacon needs --a and --b unit 3-vectors")
        input_a, input_b = _parse_unit3(args.a), _parse_unit3(args.b)
    elif args.protocol == "send_all_reply":
        if args.a is None or args.b is None:
            raise InvariantError("send_all_reply needs --a and --b sign vectors")
        input_a, input_b = SignVector.parse(args.a), SignVector.parse(args.b)
        if args.n is None:
            args.n = input_a.n
    else:
        input_a = SignVector.parse(args.a) if args.a else SignVector((1, 1))
        input_b = SignVector.parse(args.b) if args.b else input_a
    protocol = _build_protocol(args)
    report = {
        "command": "simulate",
        "protocol": args.protocol,
        "input_a": args.a if args.a else input_a.to_text(),
        "input_b": args.b if args.b else input_b.to_text(),
        "seed": args.seed,
    }
    if args.samples is None:
        space = protocol.lambda_space
        if not isinstance(space, RandomnessSpace):
            raise InvariantError(
                f"{args.protocol} has no finite randomness space; pass --samples")
        probs = output_distribution(protocol, input_a, input_b, space)
        moments = empirical_moments(protocol, [(input_a, input_b)], space, k_max=1)
        report["mode"] = "exact"
        report["probs"] = _probs_dict(probs)
        report["probs_float"] = _floats(_probs_dict(probs))
        report["t_mean"] = moments.entries[0].moments[0]
    else:
        stats = sample_distribution(protocol, input_a, input_b,
                                    samples=args.samples, seed=args.seed)
        probs = stats.probs
        report["mode"] = "sampled"
        report["samples"] = stats.samples
        report["probs"] = _floats(_probs_dict(probs))
        report["t_mean"] = stats.t_mean
        report["t_max"] = stats.t_max
    triple = probs_to_expectations(probs)
    report["expectations_float"] = {"e_ab": float(triple.e_ab),
                                    "e_a": float(triple.e_a),
                                    "e_b": float(triple.e_b)}
    _emit(canonical_json(report), args.out)
    return 0


def cmd_verify(args) -> int:
    n = _require_even_n(args.n)
    _guard_exhaustive(n)
    if args.protocol == "toner_bacon":
        raise InvariantError(
            "verify enumerates sign-vector promise pairs; audit toner_bacon "
            "with simulate against the singlet expectations")
    protocol = _build_protocol(args)
    space = protocol.lambda_space
    if args.samples is None and not isinstance(space, RandomnessSpace):
        raise InvariantError(
            f"{args.protocol} has no finite randomness space; pass --samples")
    scenarios = promise_scenarios(n)
    report_obj = check_exact_blqms(protocol, scenarios, samples=args.samples,
                                   seed=args.seed)
    failures = [r.label for r in report_obj.results
                if r.passed_full is False or r.passed_restricted is False]
    report = {
        "command": "verify",
        "protocol": args.protocol,
        "n": n,
        "seed": args.seed,
        "mode": report_obj.mode,
        "samples": report_obj.samples,
        "scenarios": len(report_obj.results),
        "all_full": report_obj.all_full,
        "all_restricted": report_obj.all_restricted,
        "worst_error": report_obj.worst_error,
        "failures": failures[:20],
        "failure_count": len(failures),
    }
    _emit(canonical_json(report), args.out)
    if report_obj.all_full is False or report_obj.all_restricted is False:
        return 3
    return 0


def cmd_dj_cert(args) -> int:
    a = SignVector.parse(args.a)
    b = SignVector.parse(args.b)
    dot = check_promise(a, b)
    if dot == a.n:
        raise InvariantError(
            "vectors agree everywhere; reject certificates cover the a.b = 0 "
            "case (accepting runs are certified via the reduce pipeline)")
    cert = n0_certificate(a, b)
    report = {
        "command": "dj cert",
        "n": a.n,
        "seed": args.seed,
        "index": cert.index,
        "alpha": cert.alpha,
        "bits": "".join(str(bit) for bit in cert.encode(a.n)),
        "bit_length": cert.bit_length(a.n),
        "bit_bound": n0_upper_bound(a.n),
    }
    _emit(canonical_json(report), args.out)
    return 0


def cmd_dj_verify(args) -> int:
    own = SignVector.parse(args.vector)
    if any(ch not in "01" for ch in args.cert) or not args.cert:
        raise InvariantError("--cert takes the certificate's 0/1 bit string")
    cert = RejectCertificate.decode([int(ch) for ch in args.cert], own.n)
    party = ALICE if args.party == "A" else BOB
    verdict = n0_verify(party, own, cert)
    report = {
        "command": "dj verify",
        "n": own.n,
        "seed": args.seed,
        "party": args.party,
        "index": cert.index,
        "alpha": cert.alpha,
        "accepted": verdict.accepted,
        "reason": verdict.reason,
    }
    _emit(canonical_json(report), args.out)
    return 0 if verdict.accepted else 3


def cmd_dj_bounds(args) -> int:
    rows = []
    for n in args.n:
        _require_even_n(n)
        trivial_cost = n + 1
        width = n0_upper_bound(n)
        rows.append({
            "n": n,
            "n0_upper_bound": width,
            "n1_lower_bound": n1_lower_bound(n),
            "n1_vacuous": n1_lower_bound(n) < 0,
            "d_trivial": trivial_cost,
            "auy_min_n1": auy_min_n1(trivial_cost, width),
        })
    report = {"command": "dj bounds", "seed": args.seed, "rows": rows}
    _emit(canonical_json(report), args.out)
    return 0


def cmd_reduce(args) -> int:
    n = _require_even_n(args.n)
    _guard_exhaustive(n)
    if args.protocol == "toner_bacon":
        raise InvariantError("reduce needs a sign-vector protocol "
                             "(send_all_reply or constant)")
    protocol = _build_protocol(args)
    space = protocol.lambda_space
    if not isinstance(space, RandomnessSpace):
        raise InvariantError("reduce needs a finite randomness space")
    threshold = args.M if args.M is not None else n + 2
    report = {
        "command": "reduce",
        "protocol": args.protocol,
        "n": n,
        "M": threshold,
        "seed": args.seed,
    }
    failed = False

    # the partition construction presumes the protocol reproduces the
    # target acceptance mass on every promise pair; audit that first
    law_report = check_exact_blqms(protocol, promise_scenarios(n))
    witness = next((r for r in law_report.results if not r.passed_restricted), None)
    report["acceptance_mass"] = {
        "ok": witness is None,
        "pairs": len(law_report.results),
        "witness": None if witness is None else {
            "pair": witness.label,
            "measured_p_pp": float(witness.computed.p_pp),
            "target_p_pp": float(witness.target.p_pp),
        },
    }
    if witness is not None:
        report["partition"] = None
        _emit(canonical_json(report), args.out)
        return 3

    tail = check_tail_hypothesis(protocol, n, threshold, space)
    report["tail"] = {
        "ok": tail.ok,
        "threshold_bits": tail.threshold_bits,
        "mass_bound": tail.mass_bound,
        "worst_mass": tail.worst_mass,
        "worst_pair": tail.worst_pair,
        "pairs_checked": tail.pairs_checked,
    }
    failed = failed or not tail.ok

    try:
        partition = partition_inputs(protocol, n, threshold, space)
    except PartitionError as exc:
        report["partition"] = {"ok": False, "witness": str(exc)}
        _emit(canonical_json(report), args.out)
        return 3
    table = partition.table()
    report["partition"] = {
        "ok": True,
        "cells": partition.cell_count,
        "cell_bound": 2 * n * n,
        "within_bound": partition.within_bound,
        "table_digest": table.digest,
    }
    failed = failed or not partition.within_bound

    total = passed = 0
    max_bits = 0
    for a in SignVector.all_vectors(n):
        cert = build_certificate(a, partition, protocol)
        max_bits = max(max_bits, cert.bit_length)
        ok_a = verify_certificate(ALICE, a, cert, table, protocol)
        ok_b = verify_certificate(BOB, a, cert, table, protocol)
        total += 1
        passed += bool(ok_a.accepted and ok_b.accepted)
    report["completeness"] = {"ok": passed == total, "passed": passed,
                              "total": total}
    failed = failed or passed != total

    reject_pairs = [(a, b) for a, b in promise_pairs(n) if a.dot(b) == 0]
    jointly_accepted = 0
    for a, b in reject_pairs:
        cert = build_certificate(a, partition, protocol)
        ok_a = verify_certificate(ALICE, a, cert, table, protocol)
        ok_b = verify_certificate(BOB, b, cert, table, protocol)
        jointly_accepted += bool(ok_a.accepted and ok_b.accepted)
    report["soundness"] = {"ok": jointly_accepted == 0,
                           "pairs": len(reject_pairs),
                           "jointly_accepted": jointly_accepted}
    failed = failed or jointly_accepted > 0

    reference_bits = 2 * math.log2(n) + 2 * threshold
    report["certificate_bits"] = {"max": max_bits,
                                  "reference": reference_bits,
                                  "within_reference": max_bits <= reference_bits}
    failed = failed or max_bits > reference_bits

    _emit(canonical_json(report), args.out)
    return 3 if failed else 0


def cmd_bounds(args) -> int:
    rows = []
    for n in args.n:
        _require_even_n(n)
        for k in args.k:
            direct, via_threshold = moment_bound_forms(n, k)
            if not math.isclose(direct, via_threshold, rel_tol=1e-12):
                raise InvariantError(
                    f"moment bound arrangements disagree at n={n}, k={k}")
            rows.append({
                "n": n,
                "k": k,
                "n1_lower_bound": n1_lower_bound(n),
                "m_of_n": m_of_n(n),
                "moment_bound": direct,
                "contradiction": contradiction_holds(n),
            })
    if args.format == "csv":
        columns = ["n", "k", "n1_lower_bound", "m_of_n", "moment_bound",
                   "contradiction"]
        _emit(render_csv(columns, [[row[c] for c in columns] for row in rows]),
              args.out)
        return 0
    report = {"command": "bounds", "seed": args.seed, "rows": rows}
    _emit(canonical_json(report), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser wiring


def _add_common(sub: argparse.ArgumentParser, fmt: bool = False) -> None:
    sub.add_argument("--out", help="write the report to this path instead of stdout")
    sub.add_argument("--seed", type=int, default=0,
                     help="random seed, echoed in the report (default 0)")
    if fmt:
        sub.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcc-lab",
        description="Exact oracles, classical protocols, and certificate "
                    "audits for binary measurements on shared states.")
    commands = parser.add_subparsers(dest="command", required=True)

    predict = commands.add_parser("predict", help="joint law for one scenario")
    predict.add_argument("--scenario", required=True, help="scenario JSON path")
    _add_common(predict, fmt=True)
    predict.set_defaults(func=cmd_predict)

    simulate = commands.add_parser("simulate", help="run a protocol on one pair")
    simulate.add_argument("--protocol", required=True, choices=PROTOCOL_NAMES)
    simulate.add_argument("--n", type=int, help="input length (send_all_reply)")
    simulate.add_argument("--a", help="Alice's input (sign vector or x,y,z)")
    simulate.add_argument("--b", help="Bob's input (sign vector or x,y,z)")
    simulate.add_argument("--samples", type=int,
                          help="Monte Carlo sample count (default: exact)")
    simulate.add_argument("--protocol-config",
                          help="JSON file of extra protocol parameters")
    _add_common(simulate)
    simulate.set_defaults(func=cmd_simulate)

    verify = commands.add_parser(
        "verify", help="audit the output law against all promise-pair targets")
    verify.add_argument("--protocol", required=True, choices=PROTOCOL_NAMES)
    verify.add_argument("--n", type=int, required=True)
    verify.add_argument("--samples", type=int,
                        help="sampled mode (no pass flags, errors only)")
    verify.add_argument("--protocol-config")
    _add_common(verify)
    verify.set_defaults(func=cmd_verify)

    dj = commands.add_parser("dj", help="reject certificates and size formulas")
    dj_commands = dj.add_subparsers(dest="dj_command", required=True)

    dj_cert = dj_commands.add_parser("cert", help="witness that the inputs differ")
    dj_cert.add_argument("--a", required=True)
    dj_cert.add_argument("--b", required=True)
    _add_common(dj_cert)
    dj_cert.set_defaults(func=cmd_dj_cert)

    dj_verify = dj_commands.add_parser("verify", help="check a reject certificate")
    dj_verify.add_argument("--party", required=True, choices=("A", "B"))
    dj_verify.add_argument("--vector", required=True, help="the party's own input")
    dj_verify.add_argument("--cert", required=True, help="certificate bit string")
    _add_common(dj_verify)
    dj_verify.set_defaults(func=cmd_dj_verify)

    dj_bounds = dj_commands.add_parser("bounds", help="certificate-size formulas")
    dj_bounds.add_argument("--n", type=int, nargs="+", required=True)
    _add_common(dj_bounds)
    dj_bounds.set_defaults(func=cmd_dj_bounds)

    reduce_cmd = commands.add_parser(
        "reduce", help="tail check, partition, and certificate round trip")
    reduce_cmd.add_argument("--protocol", required=True, choices=PROTOCOL_NAMES)
    reduce_cmd.add_argument("--n", type=int, required=True)
    reduce_cmd.add_argument("--M", type=int,
                            help="bit budget (default n + 2)")
    reduce_cmd.add_argument("--protocol-config")
    _add_common(reduce_cmd)
    reduce_cmd.set_defaults(func=cmd_reduce)

    bounds = commands.add_parser("bounds", help="budget and moment formula table")
    bounds.add_argument("--n", type=int, nargs="+", required=True)
    bounds.add_argument("--k", type=int, nargs="+", default=[1, 2, 3])
    _add_common(bounds, fmt=True)
    bounds.set_defaults(func=cmd_bounds)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PartitionError, NonHaltingError) as exc:
        print(f"finding: {exc}", file=sys.stderr)
        return 3
    except QccLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
