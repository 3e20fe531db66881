"""Command-line front end."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import io
from .attack import check_smart_attack
from .attack_synth import find_risky_pair, pair_attack
from .automata import Fsa
from .errors import DesError
from .fixtures import EXAMPLES
from .resilience import DEFAULT_MAX_STATES, decide_resilient, verify_resilient
from .supercon import DEFAULT_MAX_PATTERNS

EXIT_POSITIVE = 0
EXIT_ERROR = 2
EXIT_NEGATIVE = 3


@dataclass
class RunConfig:
    bound: int = 1
    protected: list = field(default_factory=list)
    max_patterns: int = DEFAULT_MAX_PATTERNS
    max_states: int = DEFAULT_MAX_STATES
    enum_bound: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("bound must be non-negative")
        if self.max_patterns <= 0 or self.max_states <= 0:
            raise ValueError("guards must be positive")

    @classmethod
    def from_args(cls, args):
        protected = [p for p in (getattr(args, "protected", "") or "").split(",") if p]
        return cls(bound=getattr(args, "bound", 1), protected=protected,
                   max_patterns=getattr(args, "max_patterns", DEFAULT_MAX_PATTERNS),
                   max_states=getattr(args, "max_states", DEFAULT_MAX_STATES))


def _emit(obj, out=None):
    text = io.dumps(obj)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_plant(path, cfg: RunConfig) -> Fsa:
    g = io.automaton_from_json(io.load_json(path))
    if g.events is None:
        raise io.FormatError("the plant file must declare an event alphabet")
    alphabet = g.events.with_protected(set(cfg.protected) | g.events.protected)
    return io.with_alphabet(g, alphabet)


def _load_damage(path, g: Fsa) -> Fsa:
    return io.with_alphabet(io.automaton_from_json(io.load_json(path), g.events), g.events)


def _load_supervisor(path, g: Fsa):
    return io.supervisor_from_json(io.load_json(path), g.events)


def cmd_synth_attack(args, cfg):
    g = _load_plant(args.plant, cfg)
    v = _load_supervisor(args.supervisor, g)
    d = _load_damage(args.damage, g)
    pair = find_risky_pair(g, v, d, cfg.bound)
    if pair is None:
        _emit({"attack": None}, args.out)
        return EXIT_NEGATIVE
    a = pair_attack(g, pair)
    _emit({"risky_pair": io.risky_pair_to_json(pair), "attack": io.transducer_to_json(a)}, args.out)
    return EXIT_POSITIVE


def cmd_check_attack(args, cfg):
    g = _load_plant(args.plant, cfg)
    v = _load_supervisor(args.supervisor, g)
    d = _load_damage(args.damage, g)
    data = io.load_json(args.attack)
    a = io.transducer_from_json(data.get("attack", data), g.events)
    rep = a.validate(g.events, cfg.bound, g)
    if not rep:
        raise io.FormatError("; ".join(rep.violations))
    verdict = check_smart_attack(g, v, a, d, args.mode)
    out = verdict.as_dict()
    if verdict.witness:
        out["witness"] = {k: "".join(w) for k, w in verdict.witness.items()}
    _emit(out, args.out)
    return EXIT_POSITIVE if verdict.smart else EXIT_NEGATIVE


def cmd_decide(args, cfg):
    g = _load_plant(args.plant, cfg)
    d = _load_damage(args.damage, g)
    dec = decide_resilient(g, d, cfg.bound, cfg.protected, cfg.max_patterns, cfg.max_states)
    _emit(io.decision_to_json(dec, g.events), args.out)
    return EXIT_POSITIVE if dec.exists else EXIT_NEGATIVE


def cmd_verify(args, cfg):
    g = _load_plant(args.plant, cfg)
    v = _load_supervisor(args.supervisor, g)
    d = _load_damage(args.damage, g)
    rep = verify_resilient(g, v, d, cfg.bound, cfg.protected)
    pair = find_risky_pair(g, v, d, cfg.bound, cfg.protected, strict=False)
    out = {"resilient": rep.ok, "violations": rep.violations}
    if pair is not None:
        out["risky_pair"] = io.risky_pair_to_json(pair)
    _emit(out, args.out)
    return EXIT_POSITIVE if rep.ok else EXIT_NEGATIVE


def cmd_export_dot(args, cfg):
    data = io.load_json(args.artifact)
    text = io.artifact_to_dot(data, args.name)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_POSITIVE


def selftest_results():
    """Run the bundled instances; returns a list of (name, ok, detail)."""
    results = []
    e1 = EXAMPLES["example1"]()
    pair = find_risky_pair(e1.plant, e1.supervisor, e1.damage, e1.n)
    ok = pair is not None and pair.t[:2] == (("d",), ("e",))
    if ok:
        ok = check_smart_attack(e1.plant, e1.supervisor, pair_attack(e1.plant, pair), e1.damage).smart
    results.append(("example1 attack synthesis", ok, pair.as_dict() if pair else None))
    e2 = EXAMPLES["example2"]()
    dec = decide_resilient(e2.plant, e2.damage, e2.n)
    results.append(("example2 resilient supervisor", dec.exists and dec.supervisor == e2.supervisor,
                     io.supervisor_to_json(dec.supervisor, e2.alphabet) if dec.exists else None))
    e3 = EXAMPLES["example3"]()
    dec3 = decide_resilient(e3.plant, e3.damage, e3.n)
    results.append(("example3 decision", dec3.exists, dec3.stats))
    return results


def cmd_selftest(args, cfg):
    results = selftest_results()
    for name, ok, _ in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_POSITIVE if all(ok for _, ok, _ in results) else EXIT_NEGATIVE


def build_parser():
    ap = argparse.ArgumentParser(prog="des-sentinel",
                                 description="Smart sensor attacks and resilient supervisors for discrete-event systems.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, supervisor=True):
        p.add_argument("--plant", required=True)
        if supervisor:
            p.add_argument("--supervisor", required=True)
        p.add_argument("--damage", required=True)
        p.add_argument("--bound", type=int, default=1, help="attack bound n (|fake string| <= n)")
        p.add_argument("--protected", default="", help="comma-separated protected events")
        p.add_argument("--out")

    common(sub.add_parser("synth-attack", help="find a smart weak sensor attack"))
    p = sub.add_parser("check-attack", help="evaluate a given attack")
    common(p)
    p.add_argument("--attack", required=True)
    p.add_argument("--mode", choices=["weak", "strong"], default="weak")
    p = sub.add_parser("decide-resilient", help="decide existence of a resilient supervisor")
    common(p, supervisor=False)
    p.add_argument("--max-patterns", type=int, default=DEFAULT_MAX_PATTERNS)
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    common(sub.add_parser("verify-supervisor", help="search for attacks against a supervisor"))
    p = sub.add_parser("export-dot", help="render an artifact as DOT")
    p.add_argument("artifact")
    p.add_argument("--name", default="G")
    p.add_argument("--out")
    sub.add_parser("selftest", help="run the bundled examples")
    return ap


COMMANDS = {"synth-attack": cmd_synth_attack, "check-attack": cmd_check_attack, "decide-resilient": cmd_decide,
            "verify-supervisor": cmd_verify, "export-dot": cmd_export_dot, "selftest": cmd_selftest}


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_POSITIVE
    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[args.command](args, cfg)
    except (DesError, ValueError, OSError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(err) + "\n")
        return EXIT_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
