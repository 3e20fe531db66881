"""Control patterns, supervisors and closed-loop semantics under partial observation."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .automata import Alphabet, Fsa, coreachable_states, project, reachable_states
from .errors import check_guard

DEFAULT_MAX_PATTERNS = 4096


def pattern(alphabet: Alphabet, events=()) -> frozenset:
    """Control pattern built from ``events`` plus every uncontrollable event."""
    return frozenset(events) | alphabet.uncontrollable


def pattern_key(alphabet: Alphabet, gamma) -> int:
    """Bitmask of the controllable part of ``gamma`` over the declared Σ_c order."""
    ctrl = [n for n in alphabet.names if n in alphabet.controllable]
    return sum(1 << i for i, n in enumerate(ctrl) if n in gamma)


class Gamma:
    """The family of all control patterns, iterated by ascending controllable bitmask."""

    def __init__(self, alphabet: Alphabet, max_patterns=DEFAULT_MAX_PATTERNS):
        self.alphabet = alphabet
        self._ctrl = [n for n in alphabet.names if n in alphabet.controllable]
        check_guard("|Γ|", 2 ** len(self._ctrl), max_patterns)

    def __len__(self):
        return 2 ** len(self._ctrl)

    def __iter__(self):
        base = self.alphabet.uncontrollable
        for mask in range(len(self)):
            yield base | frozenset(n for i, n in enumerate(self._ctrl) if mask >> i & 1)

    def __contains__(self, gamma):
        return set(gamma) <= set(self.alphabet.names) and self.alphabet.uncontrollable <= set(gamma)

    def containing(self, event):
        return [g for g in self if event in g]


def control_patterns(alphabet: Alphabet, max_patterns=DEFAULT_MAX_PATTERNS) -> Gamma:
    return Gamma(alphabet, max_patterns)


def format_pattern(gamma, alphabet: Alphabet | None = None) -> str:
    names = alphabet.ordered(gamma) if alphabet else sorted(gamma)
    return "{" + ",".join(names) + "}"


@dataclass(frozen=True)
class SupervisorMap:
    """Finite supervisory control map V: observation strings -> control patterns.

    Observations not listed in ``entries`` receive ``default``.
    """
    entries: dict = field(default_factory=dict)
    default: frozenset = frozenset()

    def __call__(self, obs) -> frozenset:
        return self.entries.get(tuple(obs), self.default)

    def __hash__(self):
        return hash((frozenset(self.entries.items()), self.default))

    @classmethod
    def constant(cls, gamma):
        return cls({}, frozenset(gamma))


BEYOND = "*"
DEAD = "__dead__"


class Driver:
    """Observation-driven view of a supervisor: a state, its pattern, and a step on observables.

    ``step`` is total: for a map it follows V on every observation, for an
    automaton it falls into a dead node (pattern Σ_uc) when δ is undefined.
    """

    def __init__(self, supervisor, alphabet: Alphabet):
        self.alphabet = alphabet
        self.source = supervisor
        if isinstance(supervisor, SupervisorMap):
            prefixes = {()}
            for key in supervisor.entries:
                for i in range(len(key) + 1):
                    prefixes.add(tuple(key[:i]))
            self._prefixes = prefixes
            self.initial = ()
        elif isinstance(supervisor, Fsa):
            self.initial = supervisor.initial
        else:
            raise TypeError(f"unsupported supervisor {type(supervisor).__name__}")

    def pattern(self, z) -> frozenset:
        sup = self.source
        if isinstance(sup, SupervisorMap):
            return sup.default if z == BEYOND else sup(z)
        if z == DEAD:
            return self.alphabet.uncontrollable
        return frozenset(sup.enabled(z))

    def step(self, z, event):
        sup = self.source
        if isinstance(sup, SupervisorMap):
            if z == BEYOND:
                return BEYOND
            nxt = z + (event,)
            return nxt if nxt in self._prefixes else BEYOND
        if z == DEAD:
            return DEAD
        nxt = sup.step(z, event)
        return DEAD if nxt is None else nxt

    def run(self, z, word, strict=False):
        """Feed an observation string; with ``strict`` return None when a letter is not enabled."""
        for e in word:
            if strict and e not in self.pattern(z):
                return None
            z = self.step(z, e)
        return z


def map_to_fsa(v: SupervisorMap, alphabet: Alphabet) -> Fsa:
    """Realize a finite map as an all-marked supervisor automaton with unobservable self-loops."""
    drv = Driver(v, alphabet)
    seen = {drv.initial: None}
    queue = deque([drv.initial])
    trans = set()
    while queue:
        z = queue.popleft()
        for e in alphabet.ordered(drv.pattern(z)):
            nxt = drv.step(z, e) if e in alphabet.observable else z
            trans.add((z, e, nxt))
            if nxt not in seen:
                seen[nxt] = None
                queue.append(nxt)
    return Fsa(alphabet.names, tuple(seen), drv.initial, frozenset(seen), frozenset(trans), alphabet)


def closed_loop(g: Fsa, v) -> Fsa:
    """Recognizer of L(V/G); marked states are those whose plant component is marked."""
    alphabet = g.events
    drv = Driver(v, alphabet)
    init = (g.initial, drv.initial)
    seen = {init: None}
    queue = deque([init])
    trans = set()
    obs = alphabet.observable
    while queue:
        x, z = queue.popleft()
        gamma = drv.pattern(z)
        for e, x2 in g.moves(x):
            if e not in gamma:
                continue
            nxt = (x2, drv.step(z, e) if e in obs else z)
            trans.add(((x, z), e, nxt))
            if nxt not in seen:
                seen[nxt] = None
                queue.append(nxt)
    marked = {s for s in seen if s[0] in g.marked}
    return Fsa(g.symbols, tuple(seen), init, frozenset(marked), frozenset(trans), alphabet)


@dataclass
class Report:
    ok: bool = True
    violations: list = field(default_factory=list)
    info: list = field(default_factory=list)

    def fail(self, msg):
        self.ok = False
        self.violations.append(msg)

    def __bool__(self):
        return self.ok


def validate_supervisor(g: Fsa, v) -> Report:
    """Check uncontrollable preservation and, for automata, the finite-representation clauses."""
    alphabet = g.events
    rep = Report()
    if isinstance(v, Fsa):
        if set(v.marked) != set(v.states):
            rep.fail("supervisor automaton has unmarked states")
        if not v.deterministic:
            rep.fail("supervisor automaton is nondeterministic")
        for z in v.states:
            for e in v.enabled(z):
                if e in alphabet.unobservable and v.successors(z, e) != (z,):
                    rep.fail(f"unobservable event {e!r} does not self-loop at state {z!r}")
        # observation-determinism: the observer of S must have singleton subsets
        obs = project(v, alphabet.observable)
        for subset in obs.states:
            if len(subset) > 1:
                rep.fail(f"observation-equal strings reach distinct states {sorted(map(repr, subset))}")
                break
    cl = closed_loop(g, v)
    for (x, z) in reachable_states(cl):
        for e in g.enabled(x):
            if e in alphabet.uncontrollable and not cl.successors((x, z), e):
                rep.fail(f"uncontrollable event {e!r} disabled at plant state {x!r}")
    # L_m(V/G) = L_m(G) ∩ L(V/G) by construction, so L_m(G)-closedness always holds here
    rep.info.append("closed-loop marked language is L_m(G)-closed")
    return rep


def is_nonblocking(a: Fsa) -> bool:
    co = coreachable_states(a)
    return all(q in co for q in reachable_states(a))


def supervisor_patterns(v, alphabet: Alphabet, obs) -> frozenset:
    """V(obs) for either supervisor representation."""
    drv = Driver(v, alphabet)
    return drv.pattern(drv.run(drv.initial, obs))


def enumerate_maps(observations, patterns, default):
    """Yield every SupervisorMap assigning one of ``patterns`` to each observation."""
    observations = list(observations)
    patterns = list(patterns)

    def rec(i, acc):
        if i == len(observations):
            yield SupervisorMap(dict(acc), frozenset(default))
            return
        for gmm in patterns:
            acc[observations[i]] = gmm
            yield from rec(i + 1, acc)
        acc.pop(observations[i], None)

    yield from rec(0, {})
