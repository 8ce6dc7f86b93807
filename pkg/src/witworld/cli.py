"""Command-line interface.

Verbs: ``prbox``, ``rsp``, ``check-state``, ``check-effect``, ``check-map``,
``assemblage``, ``lhs``.  Exit codes: 0 accepted/success, 1 rejected (a
certificate is printed), 2 inconclusive or unsupported, 64 usage error,
65 malformed input file.  Every verb has a ``--json`` mode; diagnostics go
to standard error.  The environment variable ``WITWORLD_SEED`` supplies
the default search seed.
"""

from __future__ import annotations

import argparse
import itertools
import sys

import numpy as np

from .compose import SearchConfig, composite_effect_check, composite_state_check
from .protocols import (
    best_deterministic_chsh,
    bloch_state,
    builtin_state,
    chsh_value,
    pr_box_kit,
    pr_box_probability,
    rsp_run,
    BUILTIN_STATE_NAMES,
)
from .serialize import (
    MalformedInputError,
    assemblage_to_json,
    dump_json,
    gptvector_from_json,
    linear_map_from_json,
    load_json_file,
    assemblage_from_json,
    steering_inequality_to_json,
    gptvector_to_json,
)
from .steering import (
    BIPARTITE,
    MULTIPARTITE,
    PAPER_ASSEMBLAGE_NAMES,
    lhs_check,
    ns_check,
    paper_assemblage,
)
from .systems import Quantum, hermitian_to_vector
from .transforms import builtin_map, positivity_check, quantum_cp_check, trace_condition_check
from .verdict import ACCEPTED, REJECTED, UNSUPPORTED

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_BAD_INPUT = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _verdict_exit(status: str) -> int:
    if status == ACCEPTED:
        return EXIT_OK
    if status == REJECTED:
        return EXIT_REJECTED
    return EXIT_INCONCLUSIVE


def _cfg_from_args(args) -> SearchConfig:
    base = SearchConfig()
    return SearchConfig(
        grid=args.grid if getattr(args, "grid", None) is not None else base.grid,
        restarts=args.restarts if getattr(args, "restarts", None) is not None else base.restarts,
        seed=args.seed if getattr(args, "seed", None) is not None else base.seed,
        tol=args.tol if getattr(args, "tol", None) is not None else base.tol,
    )


def _add_search_flags(p):
    p.add_argument("--grid", type=int, help="polar grid divisions for sphere scans")
    p.add_argument("--restarts", type=int, help="random restarts for heuristic searches")
    p.add_argument("--seed", type=int, help="search seed (default: WITWORLD_SEED or 0)")
    p.add_argument("--tol", type=float, help="membership tolerance")


def _load_state(spec: str):
    if spec.startswith("builtin:"):
        name = spec[len("builtin:"):]
        try:
            return builtin_state(name)
        except KeyError:
            raise _UsageError(
                f"unknown built-in state {name!r}; choose from {', '.join(BUILTIN_STATE_NAMES)}"
            )
    return gptvector_from_json(load_json_file(spec))


def _load_map(spec: str):
    if spec.startswith("builtin:"):
        name = spec[len("builtin:"):]
        try:
            return builtin_map(name)
        except KeyError:
            raise _UsageError(f"unknown built-in map {name!r}")
    return linear_map_from_json(load_json_file(spec))


class _UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------


def _cmd_prbox(args) -> int:
    kit = pr_box_kit()
    probs = {
        (a, b, x, y): pr_box_probability(kit, a, b, x, y)
        for a, b, x, y in itertools.product(range(2), repeat=4)
    }
    chsh = chsh_value(lambda a, b, x, y: probs[(a, b, x, y)])
    if args.json:
        payload = {
            "probabilities": {
                f"a={a},b={b}|x={x},y={y}": p for (a, b, x, y), p in sorted(probs.items())
            },
            "chsh": chsh,
            "classical_bound": best_deterministic_chsh(),
        }
        print(dump_json(payload))
    else:
        print("x y |  p(00)  p(01)  p(10)  p(11)")
        for x, y in itertools.product(range(2), repeat=2):
            row = "  ".join(f"{probs[(a, b, x, y)]:.4f}" for a, b in itertools.product(range(2), repeat=2))
            print(f"{x} {y} |  {row}")
        print(f"CHSH = {chsh:.4f}")
    return EXIT_OK


def _cmd_rsp(args) -> int:
    def run_payload(run):
        return {
            "psi": {"re": np.real(run.psi).tolist(), "im": np.imag(run.psi).tolist()},
            "branches": [
                {
                    "outcome": b.outcome,
                    "weight": b.weight,
                    "pre_correction": gptvector_to_json(b.pre_correction, matrix_form=True),
                    "post_correction": gptvector_to_json(b.post_correction, matrix_form=True),
                }
                for b in run.branches
            ],
            "trace_distance": run.trace_distance_to_target(),
            "bits_sent": run.bits_sent,
        }

    if args.grid_states:
        n = args.grid_states
        golden = np.pi * (3.0 - np.sqrt(5.0))
        runs = [
            rsp_run(bloch_state(np.arccos(1 - 2 * (i + 0.5) / n), (i * golden) % (2 * np.pi)))
            for i in range(n)
        ]
        worst = max(r.trace_distance_to_target() for r in runs)
        if args.json:
            print(dump_json({"runs": [run_payload(r) for r in runs], "max_trace_distance": worst}))
        else:
            print(f"ran {n} grid states; max trace distance = {worst:.3e}; bits sent = 1 each")
        return EXIT_OK if worst <= 1e-8 else EXIT_REJECTED
    run = rsp_run(bloch_state(args.theta, args.phi))
    dist = run.trace_distance_to_target()
    if args.json:
        print(dump_json(run_payload(run)))
    else:
        print(f"target: theta={args.theta}, phi={args.phi}")
        for b in run.branches:
            print(f"  outcome {b.outcome}: weight {b.weight:.6f}")
        print(f"trace distance to target = {dist:.3e}")
        print(f"bits sent = {run.bits_sent}")
    return EXIT_OK if dist <= 1e-8 else EXIT_REJECTED


def _report_verdict(args, verdict, extra=None) -> int:
    if args.json:
        payload = {
            "status": verdict.status,
            "margin": verdict.margin,
            "detail": verdict.detail,
        }
        if extra:
            payload.update(extra)
        print(dump_json(payload))
    else:
        print(verdict.describe())
    return _verdict_exit(verdict.status)


def _cmd_check_state(args) -> int:
    v = _load_state(args.file)
    verdict = composite_state_check(v, _cfg_from_args(args))
    extra = None
    if verdict.rejected and verdict.witness is not None:
        extra = {"violating_effect": gptvector_to_json(verdict.witness.as_vector())}
        if not args.json:
            print(f"violating product effect: {verdict.witness.as_vector().coeffs}", file=sys.stderr)
    return _report_verdict(args, verdict, extra)


def _cmd_check_effect(args) -> int:
    e = _load_state(args.file)
    verdict = composite_effect_check(e, tol=_cfg_from_args(args).tol, cfg=_cfg_from_args(args))
    extra = None
    if verdict.rejected and verdict.witness is not None:
        w = verdict.witness.as_vector() if hasattr(verdict.witness, "as_vector") else verdict.witness
        extra = {"violating_state": gptvector_to_json(w)}
    return _report_verdict(args, verdict, extra)


def _cmd_check_map(args) -> int:
    t = _load_map(args.file)
    cfg = _cfg_from_args(args)
    if args.test == "positivity":
        return _report_verdict(args, positivity_check(t, cfg))
    if args.test == "cp":
        verdict, min_eig = quantum_cp_check(t, cfg.tol)
        if args.json:
            print(dump_json({"status": verdict.status, "min_choi_eigenvalue": min_eig}))
        else:
            print(f"min Choi eigenvalue = {min_eig:.4f}")
            print(verdict.describe())
        return _verdict_exit(verdict.status)
    mode = "preserving" if args.test == "trace-preserving" else "non-increasing"
    return _report_verdict(args, trace_condition_check(t, mode, cfg))


def _default_gleason_measurements(witness):
    povms = []
    for atom in witness.atoms[:-1]:
        if not isinstance(atom, Quantum) or atom.d != 2:
            raise _UsageError("default gleason measurements need qubit parties")
        z = [hermitian_to_vector(np.diag([1.0, 0.0]).astype(complex)),
             hermitian_to_vector(np.diag([0.0, 1.0]).astype(complex))]
        x = [hermitian_to_vector(np.array([[0.5, s * 0.5], [s * 0.5, 0.5]], dtype=complex))
             for s in (1.0, -1.0)]
        povms.append([z, x])
    return povms


def _cmd_assemblage(args) -> int:
    cfg = _cfg_from_args(args)
    if args.name == "gleason":
        if not args.witness:
            raise _UsageError("assemblage gleason needs --witness FILE|builtin:NAME")
        witness = _load_state(args.witness)
        asm = paper_assemblage(
            "gleason", witness=witness,
            measurements=_default_gleason_measurements(witness), cfg=cfg,
        )
    else:
        asm = paper_assemblage(args.name, cfg=cfg)
    payload = {"name": args.name, "scenario": asm.scenario}
    code = EXIT_OK
    messages = []
    if args.verify_ns:
        if asm.scenario == "instrumental":
            bwi = paper_assemblage("bwi-star-star", cfg=cfg)
            verdict = ns_check(bwi)
            messages.append(f"ns (of the wired assemblage): {verdict.describe()}")
        else:
            verdict = ns_check(asm)
            messages.append(f"ns: {verdict.describe()}")
        payload["ns"] = {"status": verdict.status, "margin": verdict.margin, "detail": verdict.detail}
        code = max(code, _verdict_exit(verdict.status))
    if args.verify_lhs:
        if asm.scenario in (BIPARTITE, MULTIPARTITE):
            verdict, model = lhs_check(asm)
            if verdict.status == ACCEPTED:
                messages.append(f"lhs: feasible ({verdict.detail})")
                payload["lhs"] = {"status": "feasible", "detail": verdict.detail}
            elif verdict.status == REJECTED:
                cert = steering_inequality_to_json(verdict.witness, asm.scenario)
                messages.append(f"lhs: infeasible, certificate value {verdict.witness.value:.6g} > 0")
                payload["lhs"] = {"status": "infeasible", "certificate": cert}
            else:
                messages.append(f"lhs: {verdict.status}")
                payload["lhs"] = {"status": verdict.status}
        else:
            messages.append("lhs: not applicable to this scenario")
            payload["lhs"] = {"status": "not-applicable"}
    if args.emit:
        dump_json(assemblage_to_json(asm), args.emit)
        messages.append(f"wrote {args.emit}")
    if args.json:
        print(dump_json(payload))
    else:
        print(f"{args.name}: scenario {asm.scenario}, outcomes {asm.outcomes}, settings {asm.settings}")
        for msg in messages:
            print(msg)
    return code


def _cmd_lhs(args) -> int:
    asm = assemblage_from_json(load_json_file(args.file))
    if asm.scenario not in (BIPARTITE, MULTIPARTITE):
        print("lhs test supports bipartite or multipartite assemblages", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    verdict, model = lhs_check(asm)
    if verdict.status == REJECTED:
        cert = steering_inequality_to_json(verdict.witness, asm.scenario)
        if args.json:
            print(dump_json({"status": "infeasible", "certificate": cert}))
        else:
            print("infeasible; violated inequality:")
            print(dump_json(cert))
        return EXIT_REJECTED
    if verdict.status == UNSUPPORTED:
        if args.json:
            print(dump_json({"status": "unsupported", "detail": verdict.detail}))
        else:
            print(f"unsupported: {verdict.detail}")
        return EXIT_INCONCLUSIVE
    payload = {
        "status": "feasible",
        "detail": verdict.detail,
        "strategies": len(model.strategies),
    }
    if args.json:
        print(dump_json(payload))
    else:
        print(f"feasible with {len(model.strategies)} strategies; {verdict.detail}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="witworld", description=__doc__)
    parser.add_argument("--threads", type=int, default=1,
                        help="worker hint for searches; output is independent of it")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("prbox", help="print the PR box table and its CHSH value")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_prbox)

    p = sub.add_parser("rsp", help="run remote state preparation")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--grid", dest="grid_states", type=int, metavar="N",
                   help="run a deterministic N-state grid instead of one state")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_rsp)

    p = sub.add_parser("check-state", help="composite cone membership of a state")
    p.add_argument("file", help="JSON file or builtin:NAME")
    _add_search_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_check_state)

    p = sub.add_parser("check-effect", help="validity of an effect")
    p.add_argument("file", help="JSON file or builtin:NAME")
    _add_search_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_check_effect)

    p = sub.add_parser("check-map", help="positivity / CP / trace tests of a map")
    p.add_argument("file", help="JSON file or builtin:NAME")
    p.add_argument("--test", required=True,
                   choices=["positivity", "cp", "trace-preserving", "trace-nonincreasing"])
    _add_search_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_check_map)

    p = sub.add_parser("assemblage", help="build and verify a named assemblage")
    p.add_argument("name", choices=list(PAPER_ASSEMBLAGE_NAMES))
    p.add_argument("--verify-ns", action="store_true")
    p.add_argument("--verify-lhs", action="store_true")
    p.add_argument("--emit", metavar="FILE", help="write the assemblage as JSON")
    p.add_argument("--witness", help="for gleason: JSON file or builtin:NAME")
    _add_search_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_assemblage)

    p = sub.add_parser("lhs", help="shared-randomness feasibility of an assemblage file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_lhs)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads < 1:
        print("--threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MalformedInputError as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
