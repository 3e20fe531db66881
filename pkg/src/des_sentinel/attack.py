"""Sensor-attack model: bounded fake strings, attack transducers, attacked closed loop."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Hashable

from .automata import EPS, Alphabet, Fsa, closed, complete, determinize, is_coreachable, is_empty, meet, project
from .errors import PreconditionError, check_guard
from .supercon import Driver, Report, closed_loop

DEFAULT_MAX_OBS_STRINGS = 100_000


def bounded_obs_strings(alphabet: Alphabet, n: int, limit=DEFAULT_MAX_OBS_STRINGS,
                        exclude_single=()) -> list[tuple]:
    """All observable strings of length <= n in shortlex order (Δ_n).

    ``exclude_single`` drops the listed one-letter strings (used for protected events).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    obs = [e for e in alphabet.names if e in alphabet.observable]
    total = sum(len(obs) ** k for k in range(n + 1))
    check_guard("|Δ_n|", total, limit)
    out = []
    for k in range(n + 1):
        out.extend(product(obs, repeat=k))
    if exclude_single:
        out = [u for u in out if not (len(u) == 1 and u[0] in exclude_single)]
    return out


@dataclass(frozen=True)
class AttackTransducer:
    """Deterministic transducer over Σ_o^ε × Δ_n; every state is marked.

    Transitions are ``(y, input, output, y')`` with ``input`` an observable
    event name or ``"eps"`` and ``output`` a tuple of observable names.
    A missing ``eps`` move is read as an ε/ε self-loop.
    """
    states: tuple
    initial: Hashable
    transitions: tuple

    def __post_init__(self):
        states = set(self.states)
        if self.initial not in states:
            raise ValueError("initial transducer state not declared")
        for y, _, _, y2 in self.transitions:
            if y not in states or y2 not in states:
                raise ValueError(f"transition from {y!r} to {y2!r} uses an undeclared state")

    @property
    def _table(self):
        table = self.__dict__.get("_table_cache")
        if table is None:
            table = {}
            for y, inp, out, y2 in self.transitions:
                table.setdefault((y, inp), []).append((tuple(out), y2))
            self.__dict__["_table_cache"] = table
        return table

    def step(self, y, inp):
        moves = self._table.get((y, inp))
        if not moves:
            return ((), y) if inp == EPS else None
        if len(moves) > 1:
            raise PreconditionError(f"transducer is not input-deterministic at {y!r} on {inp!r}")
        return moves[0]

    def translate(self, word):
        """A(word), or None when the transducer is undefined on ``word``."""
        y, out = self.initial, ()
        for e in word:
            mv = self.step(y, e)
            if mv is None:
                return None
            out += mv[0]
            y = mv[1]
        return out

    def validate(self, alphabet: Alphabet, n=None, plant: Fsa | None = None) -> Report:
        rep = Report()
        for (y, inp), moves in self._table.items():
            if len(moves) > 1:
                rep.fail(f"input-nondeterministic at {y!r} on {inp!r}")
            for out, _ in moves:
                if inp == EPS and out:
                    rep.fail(f"ε input produces output {out!r} at {y!r}")
                if inp != EPS and inp not in alphabet.observable:
                    rep.fail(f"input {inp!r} is not observable")
                if any(e not in alphabet.observable for e in out):
                    rep.fail(f"output {out!r} contains unobservable events")
                if n is not None and len(out) > n:
                    rep.fail(f"output {out!r} longer than bound {n}")
        if plant is not None and rep.ok:
            obs = project(plant, alphabet.observable)
            seen = {(obs.initial, self.initial)}
            queue = deque(seen)
            while queue:
                q, y = queue.popleft()
                for e, q2 in obs.moves(q):
                    mv = self.step(y, e)
                    if mv is None:
                        rep.fail(f"transducer undefined on observation {e!r} at {y!r}")
                        return rep
                    if (q2, mv[1]) not in seen:
                        seen.add((q2, mv[1]))
                        queue.append((q2, mv[1]))
        return rep


def identity_transducer(alphabet: Alphabet) -> AttackTransducer:
    obs = [e for e in alphabet.names if e in alphabet.observable]
    return AttackTransducer(("y0",), "y0", tuple([("y0", EPS, (), "y0")] + [("y0", e, (e,), "y0") for e in obs]))


def replacement_transducer(alphabet: Alphabet, mapping: dict) -> AttackTransducer:
    """Memoryless attack replacing each observed event e by ``mapping.get(e, (e,))``."""
    obs = [e for e in alphabet.names if e in alphabet.observable]
    trans = [("y0", EPS, (), "y0")]
    for e in obs:
        out = mapping.get(e, (e,))
        trans.append(("y0", e, tuple(out) if not isinstance(out, str) else (out,) if out else (), "y0"))
    return AttackTransducer(("y0",), "y0", tuple(trans))


def erase_transducer(alphabet: Alphabet) -> AttackTransducer:
    obs = [e for e in alphabet.names if e in alphabet.observable]
    return replacement_transducer(alphabet, {e: () for e in obs})


def attacked_closed_loop(g: Fsa, v, a: AttackTransducer) -> Fsa:
    """Recognizer of L(V∘A/G): the supervisor is driven by the transducer's output."""
    alphabet = g.events
    drv = Driver(v, alphabet)
    init = (g.initial, a.initial, drv.initial)
    seen = {init: None}
    queue = deque([init])
    trans = set()
    while queue:
        state = queue.popleft()
        x, y, z = state
        gamma = drv.pattern(z)
        for e, x2 in g.moves(x):
            if e not in gamma:
                continue
            if e in alphabet.observable:
                mv = a.step(y, e)
                if mv is None:
                    raise PreconditionError(f"attack undefined on observation {e!r} at transducer state {y!r}")
                out, y2 = mv
                z2 = drv.run(z, out)
            else:
                mv = a.step(y, EPS)
                y2, z2 = mv[1], z
            nxt = (x2, y2, z2)
            trans.add((state, e, nxt))
            if nxt not in seen:
                seen[nxt] = None
                queue.append(nxt)
    marked = {s for s in seen if s[0] in g.marked}
    return Fsa(g.symbols, tuple(seen), init, frozenset(marked), frozenset(trans), alphabet)


def damage_automaton(d: Fsa, alphabet: Alphabet) -> Fsa:
    """Deterministic, complete recognizer with L = Σ* and L_m = L_m(d)."""
    if set(d.symbols) != set(alphabet.names):
        d = Fsa(alphabet.names, d.states, d.initial, d.marked, d.transitions, alphabet)
    return complete(determinize(d))


def damage_in(language: Fsa, d: Fsa) -> Fsa:
    """Recognizer of L(language) ∩ L_m(d), marked-language view."""
    return meet(closed(language), damage_automaton(d, language.events))


def check_damage_precondition(g: Fsa, v, d: Fsa):
    if not is_empty(damage_in(closed_loop(g, v), d)):
        raise PreconditionError("damage language intersects L(V/G)")
    outside = meet(damage_automaton(d, g.events), complement_closed(g))
    if not is_empty(outside):
        raise PreconditionError("damage language is not contained in L(G)")


def complement_closed(g: Fsa) -> Fsa:
    c = complete(determinize(closed(g)))
    return c.with_marked(set(c.states) - set(c.marked))


def is_covert(g: Fsa, v, a: AttackTransducer) -> tuple[bool, tuple | None]:
    """Decide A(P_o(L(G))) ⊆ P_o(L(V/G)); return a violating observation when not covert."""
    alphabet = g.events
    gobs = project(g, alphabet.observable)
    cobs = project(closed_loop(g, v), alphabet.observable)
    init = (gobs.initial, a.initial, cobs.initial)
    seen = {init: ()}
    queue = deque([init])
    while queue:
        state = queue.popleft()
        q, y, c = state
        for e, q2 in gobs.moves(q):
            mv = a.step(y, e)
            if mv is None:
                raise PreconditionError(f"attack undefined on observation {seen[state] + (e,)}")
            out, y2 = mv
            c2 = c
            for o in out:
                c2 = cobs.step(c2, o)
                if c2 is None:
                    return False, seen[state] + (e,)
            nxt = (q2, y2, c2)
            if nxt not in seen:
                seen[nxt] = seen[state] + (e,)
                queue.append(nxt)
    return True, None


def is_observable(k: Fsa, g: Fsa) -> tuple[bool, tuple | None]:
    """Observability of L(k) ⊆ L(G) w.r.t. (L(G), P_o); ``k`` must carry the plant state first."""
    obs = g.events.observable
    init = (k.initial, k.initial)
    seen = {init}
    queue = deque([init])
    while queue:
        p, q = queue.popleft()
        for e in k.enabled(p):
            if not k.successors(q, e) and g.successors(q[0], e):
                return False, (p, q, e)
        for e, p2 in k.moves(p):
            if e in obs:
                for q2 in k.successors(q, e):
                    nxt = (p2, q2)
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
            else:
                nxt = (p2, q)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        for e, q2 in k.moves(q):
            if e not in obs:
                nxt = (p, q2)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return True, None


@dataclass
class Verdict:
    covert: bool
    damage: bool
    control_feasible: bool
    mode: str = "weak"
    witness: dict = field(default_factory=dict)

    @property
    def smart(self) -> bool:
        return self.covert and self.damage and self.control_feasible

    def as_dict(self):
        return {"covert": self.covert, "damage": self.damage, "control_feasible": self.control_feasible,
                "smart": self.smart, "mode": self.mode}


def check_smart_attack(g: Fsa, v, a: AttackTransducer, d: Fsa, mode="weak") -> Verdict:
    """Evaluate the three attackability conditions for a concrete attack."""
    if mode not in ("weak", "strong"):
        raise ValueError("mode must be 'weak' or 'strong'")
    check_damage_precondition(g, v, d)
    covert, bad_obs = is_covert(g, v, a)
    attacked = attacked_closed_loop(g, v, a)
    hit = damage_in(attacked, d)
    if mode == "weak":
        damage = not is_empty(hit)
    else:
        # L(V∘A/G) = closure(L(V∘A/G) ∩ L_dam) iff every reachable product state is coreachable
        damage = not is_empty(hit) and is_coreachable(hit)
    feasible, _ = is_observable(attacked, g)
    witness = {}
    if bad_obs is not None:
        witness["uncovered_observation"] = bad_obs
    return Verdict(covert, damage, feasible, mode, witness)
