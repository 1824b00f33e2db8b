"""Command-line front end.

Subcommands: classify, decide, covertable, gadget, oracle, bench.  Reports
go to standard output as single JSON documents (CSV for bench).  Exit codes:
0 success, 2 parse/validation error, 3 size-guard or unsupported-format
diagnostics, 1 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .automaton import (Semantics, ValidationError, automaton_to_json,
                        brute_force_decide, load_automaton)
from .classify import (Classification, HardnessEvidence,
                       IntegerTractableEvidence, VassHardnessEvidence,
                       VassTractableEvidence, classify)
from .coverfun import cover_table, reach_vass_decide
from .hardness import reduce_to_gadget, subset_sum, subset_sum_solve
from .laurent import SizeGuardExceeded, reach_integer, reach_natural
from .targets import (NotExpressibleError, augment_with_negatives,
                      instantiate, load_target)
from . import bench as bench_mod


def _print(doc) -> None:
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _params(ns) -> tuple[int, ...]:
    return tuple(int(x) for x in (ns.params or []))


def _evidence_summary(cls: Classification) -> dict:
    ev = cls.evidence
    if isinstance(ev, IntegerTractableEvidence):
        return {
            "kind": "interval-chains",
            "modulus": ev.modulus,
            "branches": sum(len(plans) for plans in ev.classes.values()),
            "max_rho": max((p.rho for plans in ev.classes.values()
                            for p in plans), default=0),
        }
    if isinstance(ev, HardnessEvidence):
        return {
            "kind": "isolation-witnesses",
            "modulus": ev.modulus,
            "sites": len(ev.sites),
        }
    if isinstance(ev, VassTractableEvidence):
        return {
            "kind": "uniform-upward-closure",
            "delta": ev.delta,
            "max_exceptional_points": ev.bound_m,
        }
    if isinstance(ev, VassHardnessEvidence):
        return {
            "kind": "unbounded-gaps",
            "modulus": ev.modulus,
            "sites": len(ev.sites),
        }
    return {"kind": "unknown"}


def cmd_classify(ns) -> int:
    system = load_target(ns.target)
    sem = Semantics.parse(ns.semantics)
    cls = classify(system, sem)
    _print({
        "semantics": sem.value,
        "side": cls.side,
        "flagged_union_mode": cls.flagged,
        "evidence": _evidence_summary(cls),
    })
    return 0


def _decide(ns):
    a = load_automaton(ns.automaton)
    system = load_target(ns.target)
    sem = Semantics.parse(ns.semantics)
    t = _params(ns)
    if len(t) != system.p:
        raise ValidationError(
            f"target has {system.p} parameters, got {len(t)}")
    report: dict = {"semantics": sem.value, "params": [str(x) for x in t]}
    practical_bound = None
    if not a.is_acyclic and ns.length_bound is None \
            and sem in (Semantics.INTEGER, Semantics.NATURAL):
        # The published conservative bound is astronomically large; decide
        # uses the oracle's default run-length budget and reports it.
        practical_bound = a.state_count * 8
        report["length_bound"] = practical_bound
    bound = ns.length_bound if ns.length_bound is not None else practical_bound

    if sem is Semantics.INTEGER:
        cls = classify(system, sem)
        answer = reach_integer(a, system, t, cls, length_bound=bound,
                               size_guard=ns.size_guard)
        method = "fast" if cls.side == "tractable" else "exact-fallback"
    elif sem is Semantics.NATURAL:
        augmented = augment_with_negatives(system)
        cls = classify(augmented, Semantics.INTEGER)
        answer = reach_natural(a, system, t, cls, length_bound=bound,
                               size_guard=ns.size_guard)
        method = "fast" if cls.side == "tractable" else "exact-fallback"
    else:
        cls = classify(system, sem)
        if cls.side == "tractable":
            answer = reach_vass_decide(a, cls, t)
            method = "fast"
        else:
            result = brute_force_decide(a, sem, instantiate(system, t),
                                        counter_bound=ns.counter_bound,
                                        length_bound=ns.length_bound)
            answer = result.reachable
            method = "oracle"
            report["oracle_bounds"] = {
                "counter": result.counter_bound, "length": result.length_bound}
    report.update({"answer": answer, "method": method, "side": cls.side})
    return a, system, sem, t, report


def cmd_decide(ns) -> int:
    a, system, sem, t, report = _decide(ns)
    if ns.verify:
        concrete = instantiate(system, t)
        oracle = brute_force_decide(a, sem, concrete,
                                    counter_bound=ns.counter_bound,
                                    length_bound=ns.length_bound)
        report["oracle_answer"] = oracle.reachable
        if oracle.reachable and oracle.witness is not None:
            report["witness"] = [[s.src, str(s.weight), s.dst]
                                 for s in oracle.witness]
        if oracle.reachable != report["answer"]:
            report["error"] = "verification disagreement"
            _print(report)
            return 1
    _print(report)
    return 0


def cmd_covertable(ns) -> int:
    a = load_automaton(ns.automaton)
    table = cover_table(a, ns.src, ns.dst)
    _print([[str(u), str(v)] for (u, v) in table.jumps])
    return 0


def cmd_gadget(ns) -> int:
    system = load_target(ns.target)
    sem = Semantics.parse(ns.semantics)
    inst = subset_sum([int(x) for x in ns.items], int(ns.target_sum))
    reduction = reduce_to_gadget(inst, system, sem)
    verdict = subset_sum_solve(inst) is not None
    automaton_doc = automaton_to_json(reduction.automaton)
    sidecar = {
        "params": [str(x) for x in reduction.params],
        "semantics": sem.value,
        "expected_equivalence":
            "reachability instance is positive iff the subset-sum instance is",
        "subset_sum_verdict": verdict,
        "note": reduction.note,
    }
    if ns.out:
        with open(ns.out + ".automaton.json", "w", encoding="utf-8") as fh:
            json.dump(automaton_doc, fh, indent=2)
        with open(ns.out + ".sidecar.json", "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=2)
        _print({"automaton": ns.out + ".automaton.json",
                "sidecar": ns.out + ".sidecar.json",
                "subset_sum_verdict": verdict})
    else:
        _print({"automaton": automaton_doc, "sidecar": sidecar})
    return 0


def cmd_oracle(ns) -> int:
    a = load_automaton(ns.automaton)
    system = load_target(ns.target)
    sem = Semantics.parse(ns.semantics)
    t = _params(ns)
    concrete = instantiate(system, t)
    result = brute_force_decide(a, sem, concrete,
                                counter_bound=ns.counter_bound,
                                length_bound=ns.length_bound)
    report = {
        "answer": result.reachable,
        "bounded": True,
        "counter_bound": result.counter_bound,
        "length_bound": result.length_bound,
    }
    if result.witness is not None:
        report["witness"] = [[s.src, str(s.weight), s.dst]
                             for s in result.witness]
    _print(report)
    return 0


def cmd_bench(ns) -> int:
    states = [int(x) for x in ns.states.split(",")]
    rows = bench_mod.run_bench(states, ns.trials, ns.seed,
                               exact_budget=ns.exact_budget,
                               weight_bits=ns.weight_bits)
    csv_text = bench_mod.rows_to_csv(rows)
    sys.stdout.write(csv_text)
    if ns.out:
        csv_path, png_path = bench_mod.write_outputs(rows, ns.out)
        sys.stderr.write(f"wrote {csv_path} and {png_path}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocreach",
        description="reachability of semilinear targets in one-counter automata")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="dichotomy side of a target system")
    p.add_argument("target")
    p.add_argument("--semantics", required=True, choices=["int", "nat", "vass"])
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decide", help="decide reachability of S[t]")
    p.add_argument("automaton")
    p.add_argument("target")
    p.add_argument("--semantics", required=True, choices=["int", "nat", "vass"])
    p.add_argument("--params", nargs="*", default=[])
    p.add_argument("--verify", action="store_true",
                   help="cross-check with the bounded oracle")
    p.add_argument("--length-bound", type=int, default=None)
    p.add_argument("--counter-bound", type=int, default=None)
    p.add_argument("--size-guard", type=int, default=10 ** 6)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("covertable", help="coverability table of a state pair")
    p.add_argument("automaton")
    p.add_argument("--from", dest="src", type=int, required=True)
    p.add_argument("--to", dest="dst", type=int, required=True)
    p.set_defaults(func=cmd_covertable)

    p = sub.add_parser("gadget", help="emit a subset-sum reduction gadget")
    p.add_argument("target")
    p.add_argument("--semantics", required=True, choices=["int", "nat", "vass"])
    p.add_argument("--items", nargs="+", required=True)
    p.add_argument("--target-sum", required=True)
    p.add_argument("--out", default=None,
                   help="path prefix for the automaton and sidecar files")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("oracle", help="bounded brute-force decision")
    p.add_argument("automaton")
    p.add_argument("target")
    p.add_argument("--semantics", required=True, choices=["int", "nat", "vass"])
    p.add_argument("--params", nargs="*", default=[])
    p.add_argument("--counter-bound", type=int, default=None)
    p.add_argument("--length-bound", type=int, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="tripling vs exact matrix power runtimes")
    p.add_argument("--states", default="20,50,100,200")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=20240601)
    p.add_argument("--exact-budget", type=float, default=5.0)
    p.add_argument("--weight-bits", type=int, default=63)
    p.add_argument("--out", default=None, help="directory for bench.csv/png")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except (NotExpressibleError, SizeGuardExceeded) as exc:
        _print({"error": str(exc), "kind": "unsupported-or-guard"})
        return 3
    except ValidationError as exc:
        _print({"error": str(exc), "kind": "validation"})
        return 2
    except FileNotFoundError as exc:
        _print({"error": str(exc), "kind": "validation"})
        return 2


if __name__ == "__main__":
    sys.exit(main())
