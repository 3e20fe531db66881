"""JSON and DOT serialization for automata, supervisors, transducers and results."""
from __future__ import annotations

import json

from .attack import AttackTransducer
from .attack_synth import RiskyPair
from .automata import EPS, Alphabet, Event, Fsa
from .errors import AlphabetError, DesError
from .supercon import SupervisorMap


class FormatError(DesError):
    pass


# -- labels ----------------------------------------------------------------

def format_symbol(sym) -> str:
    """Canonical text for a letter: plain names stay as they are, tuples become "(a|g:{a,c,v})".

    Event strings inside a tuple are bracketed, "[d e]" or "[]", so they
    cannot be confused with a single event name.
    """
    if isinstance(sym, str):
        return sym
    if isinstance(sym, (frozenset, set)):
        return "g:{" + ",".join(sorted(sym)) + "}"
    if isinstance(sym, tuple):
        parts = []
        for c in sym:
            if isinstance(c, tuple):
                parts.append("[" + " ".join(c) + "]")
            else:
                parts.append(format_symbol(c))
        return "(" + "|".join(parts) + ")"
    return str(sym)


def parse_symbol(text: str, alphabet: Alphabet | None = None):
    """Inverse of format_symbol; the alphabet argument is accepted for symmetry."""
    if not (text.startswith("(") and text.endswith(")")):
        return text
    parts = text[1:-1].split("|")
    out = []
    for part in parts:
        if part.startswith("g:{") and part.endswith("}"):
            body = part[3:-1]
            out.append(frozenset(body.split(",")) if body else frozenset())
        elif part.startswith("[") and part.endswith("]"):
            out.append(tuple(part[1:-1].split()))
        else:
            out.append(part)
    return tuple(out)


def state_label(q) -> str:
    if isinstance(q, str):
        return q
    if isinstance(q, (frozenset, set)):
        return "{" + ",".join(sorted(state_label(x) for x in q)) + "}"
    if isinstance(q, tuple):
        return "(" + ",".join(state_label(x) for x in q) + ")"
    if q is None:
        return "-"
    return str(q)


def tokenize(text: str, alphabet: Alphabet | None, names=None) -> tuple:
    """Split concatenated event names by greedy longest match."""
    if names is None:
        if alphabet is None:
            raise FormatError("an alphabet is needed to split observation strings")
        names = alphabet.names
    names = sorted(names, key=len, reverse=True)
    out, i = [], 0
    while i < len(text):
        for nm in names:
            if nm and text.startswith(nm, i):
                out.append(nm)
                i += len(nm)
                break
        else:
            raise FormatError(f"cannot split {text!r} into event names")
    return tuple(out)


# -- automata ----------------------------------------------------------------

def alphabet_to_json(alphabet: Alphabet) -> list:
    return [{"name": e.name, "controllable": e.controllable, "observable": e.observable,
             "protected": e.protected} for e in alphabet]


def alphabet_from_json(data) -> Alphabet:
    try:
        return Alphabet(tuple(Event(d["name"], bool(d.get("controllable", False)),
                                    bool(d.get("observable", True)), bool(d.get("protected", False)))
                              for d in data))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed alphabet: {exc}") from exc


def automaton_to_json(a: Fsa) -> dict:
    labels = [state_label(q) for q in a.states]
    if len(set(labels)) != len(labels):
        labels = [f"q{i}" for i in range(len(a.states))]
    idx = {q: i for i, q in enumerate(a.states)}
    sym_idx = {s: i for i, s in enumerate(a.symbols)}
    trans = sorted(a.transitions, key=lambda t: (idx[t[0]], sym_idx[t[1]], idx[t[2]]))
    out = {}
    if a.events is not None and set(a.symbols) == set(a.events.names):
        out["alphabet"] = alphabet_to_json(a.events)
    else:
        out["symbols"] = [format_symbol(s) for s in a.symbols]
    out["states"] = labels
    out["initial"] = labels[idx[a.initial]]
    out["marked"] = [labels[idx[q]] for q in a.states if q in a.marked]
    out["transitions"] = [[labels[idx[s]], format_symbol(x), labels[idx[d]]] for s, x, d in trans]
    return out


def automaton_from_json(data: dict, alphabet: Alphabet | None = None) -> Fsa:
    try:
        if "alphabet" in data:
            events = alphabet_from_json(data["alphabet"])
            symbols = events.names
        elif "symbols" in data:
            events = None
            symbols = tuple(parse_symbol(s, alphabet) for s in data["symbols"])
        elif alphabet is not None:
            events, symbols = alphabet, alphabet.names
        else:
            raise FormatError("automaton has neither an alphabet nor a symbol list")
        states = tuple(str(s) for s in data["states"])
        trans = frozenset((str(s), parse_symbol(x, alphabet or events), str(d)) for s, x, d in data["transitions"])
        return Fsa(tuple(symbols), states, str(data["initial"]), frozenset(str(m) for m in data.get("marked", [])),
                   trans, events)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed automaton: {exc}") from exc


def with_alphabet(a: Fsa, alphabet: Alphabet) -> Fsa:
    """Re-attach an automaton to a (compatible) event alphabet."""
    unknown = set(a.symbols) - set(alphabet.names)
    if unknown:
        raise AlphabetError(f"events {sorted(unknown)} are not in the plant alphabet")
    return Fsa(alphabet.names, a.states, a.initial, a.marked, a.transitions, alphabet)


# -- supervisors, transducers, results --------------------------------------

def pattern_to_json(gamma, alphabet: Alphabet) -> list:
    return list(alphabet.ordered(gamma))


def supervisor_to_json(v, alphabet: Alphabet) -> dict:
    if isinstance(v, Fsa):
        return automaton_to_json(v)
    keys = sorted(v.entries, key=lambda k: (len(k), [alphabet.names.index(e) for e in k]))
    return {"default": pattern_to_json(v.default, alphabet),
            "entries": {"".join(k): pattern_to_json(v.entries[k], alphabet) for k in keys}}


def supervisor_from_json(data: dict, alphabet: Alphabet):
    if "entries" not in data:
        return with_alphabet(automaton_from_json(data, alphabet), alphabet)
    obs = [e for e in alphabet.names if e in alphabet.observable]

    def pat(lst):
        unknown = set(lst) - set(alphabet.names)
        if unknown:
            raise AlphabetError(f"pattern mentions unknown events {sorted(unknown)}")
        return frozenset(lst) | alphabet.uncontrollable

    entries = {tokenize(k, None, obs): pat(p) for k, p in data["entries"].items()}
    return SupervisorMap(entries, pat(data.get("default", [])))


def transducer_to_json(a: AttackTransducer) -> dict:
    idx = {y: i for i, y in enumerate(a.states)}
    trans = sorted(a.transitions, key=lambda t: (idx[t[0]], t[1] != EPS, t[1], idx[t[3]]))
    return {"states": list(a.states), "initial": a.initial,
            "transitions": [[y, inp, "".join(out), y2] for y, inp, out, y2 in trans]}


def transducer_from_json(data: dict, alphabet: Alphabet) -> AttackTransducer:
    obs = [e for e in alphabet.names if e in alphabet.observable]
    try:
        trans = tuple((str(y), inp, tokenize(out, None, obs), str(y2)) for y, inp, out, y2 in data["transitions"])
        return AttackTransducer(tuple(str(s) for s in data["states"]), str(data["initial"]), trans)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed transducer: {exc}") from exc


def risky_pair_to_json(pair: RiskyPair) -> dict:
    return pair.as_dict()


def risky_pair_from_json(data: dict, alphabet: Alphabet) -> RiskyPair:
    s = tokenize(data["s"], alphabet)
    dec = data["decomposition"]
    segments = tuple((tokenize(u, alphabet), sig) for u, sig in dec[:-1])
    tail = tokenize(dec[-1][0], alphabet)
    t = tuple(tokenize(nu, alphabet) for nu in data["t"])
    return RiskyPair(s, segments, tail, t)


def decision_to_json(decision, alphabet: Alphabet) -> dict:
    out = {"outcome": decision.outcome}
    if decision.exists:
        out["supervisor"] = supervisor_to_json(decision.supervisor, alphabet)
    out["stats"] = decision.stats
    return out


def dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False) + "\n"


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON ({exc})") from exc


# -- DOT -------------------------------------------------------------------

def _q(text) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def automaton_to_dot(a: Fsa, name="G") -> str:
    data = automaton_to_json(a)
    marked = set(data["marked"])
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;", "  __start [shape=point];"]
    for s in sorted(data["states"]):
        shape = "doublecircle" if s in marked else "circle"
        lines.append(f"  {_q(s)} [shape={shape}];")
    lines.append(f"  __start -> {_q(data['initial'])};")
    for s, x, d in sorted(data["transitions"]):
        lines.append(f"  {_q(s)} -> {_q(d)} [label={_q(x)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def transducer_to_dot(a: AttackTransducer, name="A") -> str:
    data = transducer_to_json(a)
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;", "  __start [shape=point];"]
    for s in sorted(data["states"]):
        lines.append(f"  {_q(s)} [shape=doublecircle];")
    lines.append(f"  __start -> {_q(data['initial'])};")
    for y, inp, out, y2 in sorted(data["transitions"]):
        lines.append(f"  {_q(y)} -> {_q(y2)} [label={_q(inp + '/' + (out or EPS))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def map_to_dot(data: dict, name="V") -> str:
    """Observation tree of a supervisor map, one node per listed observation."""
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    names = {e for p in data["entries"].values() for e in p} | set(data.get("default", []))
    keys = sorted(data["entries"], key=lambda k: (len(k), k))
    for k in keys:
        lines.append(f"  {_q(k or EPS)} [shape=box,label={_q((k or EPS) + ' : {' + ','.join(data['entries'][k]) + '}')}];")
    for k in keys:
        toks = tokenize(k, None, names) if k else ()
        if toks:
            parent = "".join(toks[:-1])
            if parent in data["entries"]:
                lines.append(f"  {_q(parent or EPS)} -> {_q(k)} [label={_q(toks[-1])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def artifact_to_dot(data: dict, name="artifact") -> str:
    """Render any artifact JSON produced by this package."""
    if "outcome" in data:
        if "supervisor" not in data:
            return f"digraph {_q(name)} {{\n  {_q(data['outcome'])} [shape=plaintext];\n}}\n"
        return artifact_to_dot(data["supervisor"], name)
    if "attack" in data:
        if data["attack"] is None:
            return f"digraph {_q(name)} {{\n  \"no attack\" [shape=plaintext];\n}}\n"
        return artifact_to_dot(data["attack"], name)
    if "entries" in data:
        return map_to_dot(data, name)
    if "alphabet" in data or "symbols" in data:
        return automaton_to_dot(automaton_from_json(data), name)
    if "transitions" in data and data["transitions"] and len(data["transitions"][0]) == 4:
        trans = tuple((y, inp, (out,) if out else (), y2) for y, inp, out, y2 in data["transitions"])
        return transducer_to_dot(AttackTransducer(tuple(data["states"]), data["initial"], trans), name)
    raise FormatError("unrecognised artifact")
