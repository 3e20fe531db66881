"""Existence and synthesis of smart weak sensor attacks.

The decision procedure is a breadth-first search for a risky pair (s, t):
a damage string s and a fake observation sequence t, legal for the
supervisor, whose induced pattern sequence lets s run segment by segment.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .attack import (AttackTransducer, bounded_obs_strings, check_damage_precondition,
                     damage_automaton)
from .automata import EPS, Alphabet, Fsa, enumerate_words, project
from .supercon import Driver, Report, closed_loop


@dataclass(frozen=True)
class RiskyPair:
    s: tuple
    segments: tuple      # ((u_1, σ_1), ..., (u_r, σ_r)); u_i are tuples of unobservable events
    tail: tuple          # u_{r+1}
    t: tuple             # (ν_1, ..., ν_r); each ν_i a tuple of observable events

    @property
    def r(self):
        return len(self.t)

    @property
    def observed(self):
        return tuple(sig for _, sig in self.segments)

    def as_dict(self):
        dec = [["".join(u), sig] for u, sig in self.segments] + [["".join(self.tail)]]
        return {"s": "".join(self.s), "decomposition": dec, "t": ["".join(nu) for nu in self.t]}


def decompose(word, alphabet: Alphabet):
    """Split a string into unobservable segments around its observable events."""
    segments, cur = [], []
    for e in word:
        if e in alphabet.observable:
            segments.append((tuple(cur), e))
            cur = []
        else:
            cur.append(e)
    return tuple(segments), tuple(cur)


def fake_choices(alphabet: Alphabet, n, event, protected, delta=None):
    """Fake strings the attacker may emit on observing ``event``."""
    if event in protected:
        return [(event,)]
    if delta is None:
        delta = bounded_obs_strings(alphabet, n)
    return [u for u in delta if not (len(u) == 1 and u[0] in protected)]


def find_risky_pair(g: Fsa, v, d: Fsa, n: int, protected=(), strict=True) -> RiskyPair | None:
    """Shortest risky pair, or None when no smart weak sensor attack exists.

    With ``strict`` the damage precondition L_dam ⊆ L(G) - L(V/G) is enforced;
    without it, damage reachable in the unattacked loop is reported as a pair
    realised by the identity attack.
    """
    alphabet = g.events
    protected = frozenset(protected) | alphabet.protected
    if strict:
        check_damage_precondition(g, v, d)
    dmg = damage_automaton(d, alphabet)
    drv = Driver(v, alphabet)
    cobs = project(closed_loop(g, v), alphabet.observable)
    delta = bounded_obs_strings(alphabet, n)
    choices = {e: fake_choices(alphabet, n, e, protected, delta) for e in alphabet.observable}

    def z_of(obs_state):
        return next(iter(obs_state))[1]

    init = (g.initial, dmg.initial, cobs.initial)
    parent = {init: None}
    queue = deque([init])
    while queue:
        cfg = queue.popleft()
        x, w, c = cfg
        if w in dmg.marked:
            return _rebuild(parent, cfg, alphabet)
        gamma = drv.pattern(z_of(c))
        for e, x2 in g.moves(x):
            if e not in gamma:
                continue
            w2 = dmg.step(w, e)
            if e not in alphabet.observable:
                nxt_cfgs = [((x2, w2, c), None)]
            else:
                nxt_cfgs = []
                for nu in choices[e]:
                    c2 = c
                    for o in nu:
                        c2 = cobs.step(c2, o)
                        if c2 is None:
                            break
                    if c2 is not None:
                        nxt_cfgs.append(((x2, w2, c2), nu))
            for nxt, nu in nxt_cfgs:
                if nxt not in parent:
                    parent[nxt] = (cfg, e, nu)
                    queue.append(nxt)
    return None


def _rebuild(parent, cfg, alphabet):
    events, fakes = [], []
    while parent[cfg] is not None:
        prev, e, nu = parent[cfg]
        events.append(e)
        if nu is not None:
            fakes.append(nu)
        cfg = prev
    events.reverse()
    fakes.reverse()
    segments, tail = decompose(events, alphabet)
    return RiskyPair(tuple(events), segments, tail, tuple(fakes))


def evaluate_v(v, alphabet: Alphabet, obs) -> frozenset:
    """V(obs) evaluated directly from the supervisor's definition."""
    if isinstance(v, Fsa):
        reached = v.run(tuple(obs))
        if not reached:
            return alphabet.uncontrollable
        return frozenset(e for z in reached for e in v.enabled(z))
    return v(tuple(obs))


def in_supervised_observations(g: Fsa, v, t) -> bool:
    """Decide t ∈ P_o(L(V/G)) by a set simulation over plant states."""
    alphabet = g.events

    def closure(states, gamma):
        seen, stack = set(states), list(states)
        while stack:
            x = stack.pop()
            for e, x2 in g.moves(x):
                if e in alphabet.unobservable and e in gamma and x2 not in seen:
                    seen.add(x2)
                    stack.append(x2)
        return seen

    cur = closure({g.initial}, evaluate_v(v, alphabet, ()))
    for k, o in enumerate(t):
        gamma = evaluate_v(v, alphabet, t[:k])
        if o not in gamma:
            return False
        cur = {g.step(x, o) for x in cur} - {None}
        cur = closure(cur, evaluate_v(v, alphabet, t[:k + 1]))
        if not cur:
            return False
    return bool(cur)


def check_risky_pair(g: Fsa, v, d: Fsa, n: int, pair: RiskyPair, protected=()) -> Report:
    """Re-check every risky-pair condition with a string walker independent of the search."""
    alphabet = g.events
    protected = frozenset(protected) | alphabet.protected
    rep = Report()
    rebuilt = tuple(e for u, sig in pair.segments for e in u + (sig,)) + pair.tail
    if rebuilt != tuple(pair.s):
        rep.fail("decomposition does not spell s")
    if not g.accepts(pair.s):
        rep.fail("s is not in L(G)")
    if not d.accepts_marked(pair.s):
        rep.fail("s is not in L_dam")
    if len(pair.t) != len(pair.segments):
        rep.fail("t and s have different numbers of observations")
        return rep
    t_flat = ()
    for i, ((u, sig), nu) in enumerate(zip(pair.segments, pair.t)):
        if any(e in alphabet.observable for e in u) or sig not in alphabet.observable:
            rep.fail(f"segment {i + 1} has the wrong observability shape")
        if len(nu) > n or any(o not in alphabet.observable for o in nu):
            rep.fail(f"ν_{i + 1}={nu!r} is not in Δ_n")
        if sig in protected and tuple(nu) != (sig,):
            rep.fail(f"protected event {sig!r} was altered")
        if sig not in protected and len(nu) == 1 and nu[0] in protected:
            rep.fail(f"ν_{i + 1} inserts a protected event")
        gamma = evaluate_v(v, alphabet, t_flat)
        if not set(u) | {sig} <= gamma:
            rep.fail(f"segment {i + 1} not enabled by V(t^{i})")
        t_flat += tuple(nu)
    if not set(pair.tail) <= evaluate_v(v, alphabet, t_flat):
        rep.fail("final unobservable segment not enabled by V(t)")
    if not in_supervised_observations(g, v, t_flat):
        rep.fail("t is not in P_o(L(V/G))")
    return rep


def pair_attack(g: Fsa, pair: RiskyPair) -> AttackTransducer:
    """Attack map realising a risky pair.

    On the planned observation branch the i-th observation is replaced by ν_i;
    after leaving the branch (or passing its end) the output freezes.
    """
    alphabet = g.events
    plan, fakes = pair.observed, pair.t
    gobs = project(g, alphabet.observable)
    init = (0, gobs.initial)
    ids = {init: "y0"}
    queue = deque([init])
    trans = []
    while queue:
        k, q = cur = queue.popleft()
        trans.append((ids[cur], EPS, (), ids[cur]))
        for e, q2 in gobs.moves(q):
            if k != "F" and k < len(plan) and e == plan[k]:
                out, k2 = tuple(fakes[k]), k + 1
            else:
                out, k2 = (), "F"
            nxt = (k2, q2)
            if nxt not in ids:
                ids[nxt] = f"y{len(ids)}"
                queue.append(nxt)
            trans.append((ids[cur], e, out, ids[nxt]))
    return AttackTransducer(tuple(ids.values()), "y0", tuple(trans))


def synthesize_attack(g: Fsa, v, d: Fsa, n: int, protected=(), strict=True) -> AttackTransducer | None:
    pair = find_risky_pair(g, v, d, n, protected, strict)
    if pair is None:
        return None
    return pair_attack(g, pair)


@dataclass
class PsiAutomaton:
    fsa: Fsa
    alphabet: Alphabet
    driver: Driver
    plant: Fsa
    damage: Fsa

    @property
    def controllable(self) -> frozenset:
        return frozenset(l for l in self.fsa.symbols if l[1] != EPS)

    @property
    def uncontrollable(self) -> frozenset:
        return frozenset(l for l in self.fsa.symbols if l[1] == EPS)

    @staticmethod
    def pi(word):
        return tuple(l[0] for l in word)

    @staticmethod
    def varpi(word):
        return tuple(o for l in word for o in l[2])


def psi_symbols(alphabet: Alphabet, n, protected=()):
    delta = bounded_obs_strings(alphabet, n)
    syms = []
    for e in alphabet.names:
        if e in alphabet.unobservable:
            syms.append((e, EPS, ()))
        else:
            syms.extend((e, e, u) for u in fake_choices(alphabet, n, e, protected, delta))
    return syms


def build_psi(g: Fsa, v, d: Fsa, n: int, transducer: AttackTransducer | None = None,
              protected=()) -> PsiAutomaton:
    """Product of plant, supervisor, attack moves and damage recognizer over Σ×Σ_o^ε×Δ_n.

    Without a transducer the single-state universal attacker is used.
    """
    alphabet = g.events
    protected = frozenset(protected) | alphabet.protected
    syms = psi_symbols(alphabet, n, protected)
    by_event = {}
    for l in syms:
        by_event.setdefault(l[0], []).append(l)
    drv = Driver(v, alphabet)
    dmg = damage_automaton(d, alphabet)
    y0 = "y0" if transducer is None else transducer.initial
    init = (g.initial, drv.initial, y0, dmg.initial)
    seen = {init: None}
    queue = deque([init])
    trans = set()
    while queue:
        state = queue.popleft()
        x, z, y, w = state
        gamma = drv.pattern(z)
        for e, x2 in g.moves(x):
            if e not in gamma:
                continue
            w2 = dmg.step(w, e)
            for (_, obs, u) in by_event[e]:
                if transducer is not None:
                    mv = transducer.step(y, obs)
                    if mv is None or mv[0] != u:
                        continue
                    y2 = mv[1]
                else:
                    y2 = y
                z2 = drv.run(z, u, strict=True)
                if z2 is None:
                    continue
                nxt = (x2, z2, y2, w2)
                trans.add((state, (e, obs, u), nxt))
                if nxt not in seen:
                    seen[nxt] = None
                    queue.append(nxt)
    marked = {s for s in seen if s[0] in g.marked and s[3] in dmg.marked}
    fsa = Fsa(tuple(syms), tuple(seen), init, frozenset(marked), frozenset(trans), None)
    return PsiAutomaton(fsa, alphabet, drv, g, dmg)


def verify_U_conditions(u: Fsa, psi: PsiAutomaton, bound: int) -> Report:
    """Check the attack-language conditions on all words of L(u) up to ``bound``."""
    rep = Report()
    g, drv, alphabet = psi.plant, psi.driver, psi.alphabet
    words = enumerate_words(u, bound)
    if not words or not u.accepts(()):
        rep.fail("U is empty")
        return rep
    unctrl = psi.uncontrollable
    nonblocking = False
    varpi_by_obs = {}
    for s in words:
        if not psi.fsa.accepts(s):
            rep.fail(f"{s!r} is not in L(Ψ)")
            continue
        pi_s = psi.pi(s)
        if psi.damage.accepts_marked(pi_s):
            nonblocking = True
        obs = alphabet.project(pi_s)
        varpi_by_obs.setdefault(obs, set()).add(psi.varpi(s))
        if len(s) == bound:
            continue
        en_u = [l for l in u.symbols if u.accepts(s + (l,))]
        for l in unctrl:
            if psi.fsa.accepts(s + (l,)) and l not in en_u:
                rep.fail(f"uncontrollable {l!r} disabled after {s!r}")
        xs = g.run(pi_s)
        en_g = {e for x in xs for e in g.enabled(x)}
        gamma = drv.pattern(drv.run(drv.initial, psi.varpi(s)))
        if {l[0] for l in en_u} != en_g & gamma:
            rep.fail(f"extended controllability fails after {s!r}")
    if not nonblocking:
        rep.fail("π(U) ∩ L_m(D) is empty (up to the bound)")
    for obs, outs in varpi_by_obs.items():
        if len(outs) > 1:
            rep.fail(f"observation {obs!r} has several fake images {sorted(outs)!r}")
    return rep


def attack_language(g: Fsa, v, d: Fsa, n: int, a: AttackTransducer, protected=()) -> Fsa:
    """Recognizer of the U language induced by a concrete attack."""
    return build_psi(g, v, d, n, transducer=a, protected=protected).fsa
