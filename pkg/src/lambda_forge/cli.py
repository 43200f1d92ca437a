"""Command-line surface: machine-readable JSON in, JSON out.

Exit codes: 0 ok, 1 error, 2 facet violation / non-member, 3 infeasible.
All numbers are exact (rational strings, or {a, b} pairs for values with
a sqrt(2) part); --float renders decimals for human reading only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .field import FieldElem, ONE
from .clifford import CliffordTableau
from .cnc import CncSet, is_maximal_cnc
from .gf2 import PauliPoint, span
from .orbit import (
    clifford_orbit_keys,
    enumerate_family,
    family_operator_keys,
    isotropic_poset,
    mixture_identities_report,
    poset_dot,
    verify_update_rules,
)
from .pauli import QOperator
from .polytope import is_vertex, membership
from .simulate import (
    descriptor_from_json,
    distribution_to_json,
    exact_distribution,
    sample,
    steps_from_json,
)
from .stabilizer import Assignment, enumerate_stabilizer_states, state_to_json

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2
EXIT_INFEASIBLE = 3


def _emit(status: str, payload, diagnostics: str = "", as_float: bool = False) -> int:
    doc = {"status": status, "payload": payload, "diagnostics": diagnostics}
    if as_float:
        doc = _floatify(doc)
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return {"ok": EXIT_OK, "violation": EXIT_VIOLATION, "infeasible": EXIT_INFEASIBLE}.get(
        status, EXIT_ERROR
    )


def _floatify(obj):
    if isinstance(obj, dict):
        if set(obj) == {"a", "b"}:
            return float(FieldElem(Fraction(obj["a"]), Fraction(obj["b"])))
        return {k: _floatify(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_floatify(v) for v in obj]
    if isinstance(obj, str):
        try:
            return float(Fraction(obj))
        except ValueError:
            return obj
    return obj


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _load_operator(path: str) -> QOperator:
    return QOperator.from_json(_load_json(path))


# -- subcommands ---------------------------------------------------------------


def cmd_membership(args) -> int:
    X = _load_operator(args.operator)
    cert = membership(X)
    payload = cert.to_json()
    if args.vertex and cert.is_member:
        ok, rank = is_vertex(X, cert)
        payload["vertex"] = ok
        payload["active_rank"] = rank
    status = "ok" if cert.is_member else "violation"
    diag = "" if cert.is_member else f"violated facet {cert.violation}"
    return _emit(status, payload, diag, args.float)


def cmd_vertex(args) -> int:
    X = _load_operator(args.operator)
    cert = membership(X)
    if not cert.is_member:
        return _emit(
            "violation",
            cert.to_json(),
            f"not a member: facet {cert.violation}",
            args.float,
        )
    ok, rank = is_vertex(X, cert)
    payload = {"vertex": ok, "active_rank": rank, "active_facets": cert.active}
    return _emit("ok", payload, "", args.float)


def cmd_enumerate_stabilizers(args) -> int:
    states = enumerate_stabilizer_states(args.n)
    payload = {"n": args.n, "count": len(states)}
    if not args.counts_only:
        payload["states"] = [state_to_json(I, s) for I, s in states]
    return _emit("ok", payload, "", args.float)


def cmd_cnc(args) -> int:
    c = CncSet.from_json(_load_json(args.cncset))
    payload = {"n": c.n, "operator": c.operator().to_json()}
    if c.n <= 2:
        payload["maximal"] = is_maximal_cnc(c.omega)
    if args.update:
        a = PauliPoint.from_label(args.update)
        pieces = c.measure_update(a, args.outcome)
        payload["update"] = {
            "axis": args.update,
            "outcome": args.outcome,
            "pieces": [
                {"weight": str(w), "state": piece.to_json()} for w, piece in pieces
            ],
        }
    return _emit("ok", payload, "", args.float)


def cmd_orbit(args) -> int:
    if args.count:
        fam = enumerate_family()
        same = family_operator_keys() == clifford_orbit_keys()
        payload = {"count": len(fam), "matches_clifford_orbit": same}
        return _emit("ok" if same else "violation", payload, "", args.float)
    if args.verify_updates:
        stats = verify_update_rules(jobs=args.jobs)
        stats["weight_profiles"] = {
            "+".join(str(w) for w in k): v for k, v in stats["weight_profiles"].items()
        }
        status = "ok" if stats["mismatches"] == 0 else "violation"
        return _emit(status, stats, "", args.float)
    fam = enumerate_family()
    payload = {"count": len(fam), "vertices": [v.to_json() for v in fam]}
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
        return _emit("ok", {"count": len(fam), "written": args.out}, "", args.float)
    return _emit("ok", payload, "", args.float)


def cmd_phi(args) -> int:
    from .lifting import lift, make_params

    X = _load_operator(args.operator)
    gens = [PauliPoint.from_label(lbl) for lbl in args.j.split(",")]
    J = span(gens)
    bits = [int(b) for b in args.r]
    r = Assignment.from_pairs(list(zip(gens, bits)), J.n)
    tableau = (
        CliffordTableau.from_json(_load_json(args.tableau)) if args.tableau else None
    )
    params = make_params(args.n, J, r, tableau)
    lifted = lift(X, params)
    cert = membership(lifted)
    payload = {
        "lifted": lifted.to_json(),
        "tableau": params.tableau.to_json(),
        "member": cert.is_member,
    }
    if cert.is_member:
        ok, rank = is_vertex(lifted, cert)
        payload["vertex"] = ok
        payload["active_rank"] = rank
    return _emit("ok" if cert.is_member else "violation", payload, "", args.float)


def cmd_reduce(args) -> int:
    from .reduction import ReductionEngine, reduce_static
    from .simulate import LiftState

    doc = _load_json(args.circuit)
    init = descriptor_from_json(doc["initial"])
    if len(init) != 1 or not isinstance(init[0][1], LiftState):
        return _emit("error", None, "reduce expects a lift-type initial state")
    engine = init[0][1].engine
    steps = steps_from_json(doc["steps"], engine.n)
    if any(cond for _, cond in steps):
        return _emit("error", None, "reduce handles non-adaptive sequences")
    coins = [int(b) for b in args.coins] if args.coins else []
    plan = reduce_static(engine, [p for p, _ in steps], coins)
    return _emit("ok", plan, "", args.float)


def cmd_simulate(args) -> int:
    doc = _load_json(args.circuit)
    init = descriptor_from_json(doc["initial"])
    from .simulate import state_qubits

    n = doc.get("n", state_qubits(init[0][1]))
    steps = steps_from_json(doc["steps"], n)
    if args.exact:
        dist = exact_distribution(init, steps, oracle_fallback=args.fallback)
        payload = {"mode": "exact", "distribution": distribution_to_json(dist)}
        return _emit("ok", payload, "", args.float)
    transcripts = sample(
        init, steps, seed=args.seed, shots=args.shots, oracle_fallback=args.fallback
    )
    counts: dict[str, int] = {}
    for t in transcripts:
        key = ",".join("-" if v is None else str(v) for v in t)
        counts[key] = counts.get(key, 0) + 1
    payload = {
        "mode": "sample",
        "seed": args.seed,
        "shots": args.shots,
        "counts": dict(sorted(counts.items())),
    }
    return _emit("ok", payload, "", args.float)


def cmd_poset(args) -> int:
    if args.dot:
        sys.stdout.write(poset_dot() + "\n")
        return EXIT_OK
    return _emit("ok", isotropic_poset(), "", args.float)


def cmd_lemma_check(args) -> int:
    import random

    from .gf2 import all_points
    from .lifting import (
        averaged_trace_identity,
        lift_tensor,
        tail_overlap,
        tail_subspace,
    )
    from .stabilizer import stabilizer_projector

    rng = random.Random(args.seed)
    J = tail_subspace(2, 1)
    states2 = enumerate_stabilizer_states(2)
    head_states = enumerate_stabilizer_states(1)

    overlap_checks = overlap_failures = 0
    for _ in range(args.trials):
        cf = {PauliPoint.zero(1): ONE}
        for p in all_points(1, include_zero=False):
            cf[p] = FieldElem(Fraction(rng.randint(-8, 8), 4))
        X = QOperator(1, cf)
        for rbit in (0, 1):
            r = Assignment(J, [rbit])
            L = lift_tensor(X, J, r)
            for I, s in states2:
                overlap_checks += 1
                if tail_overlap(X, J, r, I, s) != L.trace_inner(
                    stabilizer_projector(I, s)
                ):
                    overlap_failures += 1
    averaged_checks = averaged_failures = 0
    for _ in range(args.trials):
        cf = {}
        for p in all_points(2, include_zero=False):
            cf[p] = FieldElem(Fraction(rng.randint(-8, 8), 4))
        Y = QOperator(2, cf)
        for rbit in (0, 1):
            r = Assignment(J, [rbit])
            for I1, s1 in head_states:
                averaged_checks += 1
                lhs, rhs = averaged_trace_identity(Y, J, r, I1, s1)
                if lhs != rhs:
                    averaged_failures += 1
    mix = mixture_identities_report()
    payload = {
        "tail_overlap": {"checked": overlap_checks, "failures": overlap_failures},
        "averaged_trace": {"checked": averaged_checks, "failures": averaged_failures},
        "mixtures": mix,
    }
    ok = (
        overlap_failures == 0
        and averaged_failures == 0
        and all(v == 0 for k, v in mix.items() if k.startswith("identity"))
    )
    return _emit("ok" if ok else "violation", payload, "", args.float)


def cmd_decompose(args) -> int:
    from .simulate import decompose_known, state_to_descriptor_json

    X = _load_operator(args.operator)
    cert = membership(X)
    if not cert.is_member:
        return _emit("violation", cert.to_json(), "not a polytope member", args.float)
    try:
        terms = decompose_known(X)
    except ValueError as exc:
        return _emit("infeasible", None, str(exc), args.float)
    payload = {
        "terms": [
            {"weight": w.to_json(), "state": state_to_descriptor_json(st)}
            for w, st in terms
        ]
    }
    return _emit("ok", payload, "", args.float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambda-forge",
        description="exact polytope membership, vertex construction, and "
        "measurement simulation for stabilizer-overlap polytopes",
    )
    default_jobs = int(os.environ.get("LAMBDA_FORGE_JOBS", "1"))
    parser.add_argument("--float", action="store_true", help="render decimals")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("membership", help="facet certificate for an operator")
    p.add_argument("operator")
    p.add_argument("--vertex", action="store_true")
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("vertex", help="extremality certificate")
    p.add_argument("operator")
    p.set_defaults(func=cmd_vertex)

    p = sub.add_parser("enumerate-stabilizers", help="all stabilizer states")
    p.add_argument("n", type=int)
    p.add_argument("--counts-only", action="store_true")
    p.set_defaults(func=cmd_enumerate_stabilizers)

    p = sub.add_parser("cnc", help="inspect or update a cnc set")
    p.add_argument("cncset")
    p.add_argument("--update", metavar="AXIS")
    p.add_argument("--outcome", type=int, default=0)
    p.set_defaults(func=cmd_cnc)

    p = sub.add_parser("orbit", help="the 1920-member two-qubit family")
    p.add_argument("--count", action="store_true")
    p.add_argument("--out")
    p.add_argument("--verify-updates", action="store_true")
    p.add_argument("--jobs", type=int, default=default_jobs)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("phi", help="lift an operator through a stabilizer tail")
    p.add_argument("operator")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", required=True, help="comma-separated tail generators")
    p.add_argument("--r", required=True, help="sign bits for the generators")
    p.add_argument("--tableau")
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("reduce", help="rewrite a lifted-run measurement sequence")
    p.add_argument("circuit")
    p.add_argument("--coins", help="coin outcomes to substitute, e.g. 0110")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("simulate", help="exact or sampling simulation")
    p.add_argument("circuit")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fallback", action="store_true",
                   help="allow exact projection fallback for updates without closed form")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("poset", help="isotropic-subspace containment poset")
    p.add_argument("--dot", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("lemma-check", help="run the exact identity suites")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_lemma_check)

    p = sub.add_parser("decompose", help="convex decomposition over known vertices")
    p.add_argument("operator")
    p.set_defaults(func=cmd_decompose)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        return _emit("error", None, str(exc))
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        return _emit("error", None, f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
