"""Finite-automata kernel.

Automata are immutable values. Symbols are arbitrary hashable values: plain
event names for plant-level automata, tuples for product alphabets such as
(observation, pattern). The string ``"eps"`` inside a tuple symbol is an
ordinary letter; there are no silent transitions in an :class:`Fsa`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from .errors import AlphabetError

EPS = "eps"


@dataclass(frozen=True)
class Event:
    name: str
    controllable: bool = True
    observable: bool = True
    protected: bool = False

    def __post_init__(self):
        if not self.name or not isinstance(self.name, str):
            raise AlphabetError("event name must be a non-empty string")
        if self.name == EPS:
            raise AlphabetError(f"'{EPS}' is reserved and cannot name an event")
        if self.protected and not self.observable:
            raise AlphabetError(f"protected event {self.name!r} must be observable")


@dataclass(frozen=True)
class Alphabet:
    events: tuple[Event, ...]

    def __post_init__(self):
        names = [e.name for e in self.events]
        if len(set(names)) != len(names):
            raise AlphabetError(f"duplicate event names in {names}")

    @classmethod
    def build(cls, names, controllable=(), observable=(), protected=()):
        """Convenience constructor from name lists."""
        controllable, observable, protected = set(controllable), set(observable), set(protected)
        return cls(tuple(Event(n, n in controllable, n in observable, n in protected) for n in names))

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)

    def __getitem__(self, name) -> Event:
        return self._by_name[name]

    def __contains__(self, name):
        return name in self._by_name

    @cached_property
    def _by_name(self):
        return {e.name: e for e in self.events}

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.events)

    @cached_property
    def controllable(self) -> frozenset:
        return frozenset(e.name for e in self.events if e.controllable)

    @cached_property
    def uncontrollable(self) -> frozenset:
        return frozenset(e.name for e in self.events if not e.controllable)

    @cached_property
    def observable(self) -> frozenset:
        return frozenset(e.name for e in self.events if e.observable)

    @cached_property
    def unobservable(self) -> frozenset:
        return frozenset(e.name for e in self.events if not e.observable)

    @cached_property
    def protected(self) -> frozenset:
        return frozenset(e.name for e in self.events if e.protected)

    def ordered(self, names: Iterable[str]) -> tuple[str, ...]:
        """Return ``names`` sorted by declaration order."""
        names = set(names)
        return tuple(n for n in self.names if n in names)

    def with_protected(self, protected: Iterable[str]) -> "Alphabet":
        protected = set(protected)
        unknown = protected - set(self.names)
        if unknown:
            raise AlphabetError(f"unknown protected events {sorted(unknown)}")
        return Alphabet(tuple(Event(e.name, e.controllable, e.observable, e.name in protected)
                              for e in self.events))

    def project(self, word: Sequence[str]) -> tuple[str, ...]:
        """Natural projection onto the observable events."""
        obs = self.observable
        return tuple(e for e in word if e in obs)


@dataclass(frozen=True, eq=False)
class Fsa:
    """A (possibly nondeterministic) finite automaton with one initial state."""

    symbols: tuple
    states: tuple
    initial: Hashable
    marked: frozenset
    transitions: frozenset
    events: Alphabet | None = field(default=None)

    def __post_init__(self):
        states = set(self.states)
        if len(states) != len(self.states):
            raise ValueError("duplicate states")
        if self.initial not in states:
            raise ValueError(f"initial state {self.initial!r} not declared")
        if not set(self.marked) <= states:
            raise ValueError("marked states must be declared")
        syms = set(self.symbols)
        for src, sym, dst in self.transitions:
            if src not in states or dst not in states:
                raise ValueError(f"transition {(src, sym, dst)!r} uses an undeclared state")
            if sym not in syms:
                raise AlphabetError(f"transition symbol {sym!r} not in alphabet")

    @classmethod
    def make(cls, symbols, initial, marked, transitions, states=None, events=None):
        """Build an automaton, inferring the state list when not given."""
        transitions = frozenset((s, a, d) for s, a, d in transitions)
        if states is None:
            seen = {initial: None}
            for s, _, d in sorted(transitions, key=repr):
                seen.setdefault(s)
                seen.setdefault(d)
            for m in marked:
                seen.setdefault(m)
            states = tuple(seen)
        return cls(tuple(symbols), tuple(states), initial, frozenset(marked), transitions, events)

    @classmethod
    def plant(cls, alphabet: Alphabet, initial, marked, transitions, states=None):
        return cls.make(alphabet.names, initial, marked, transitions, states, alphabet)

    # --- adjacency -----------------------------------------------------
    @cached_property
    def _out(self):
        out = {q: {} for q in self.states}
        order = {a: i for i, a in enumerate(self.symbols)}
        for s, a, d in self.transitions:
            out[s].setdefault(a, []).append(d)
        for q in out:
            out[q] = {a: tuple(sorted(ds, key=repr))
                      for a, ds in sorted(out[q].items(), key=lambda kv: order[kv[0]])}
        return out

    def successors(self, state, symbol) -> tuple:
        return self._out[state].get(symbol, ())

    def enabled(self, state) -> tuple:
        return tuple(self._out[state])

    def moves(self, state):
        """Yield ``(symbol, target)`` pairs in canonical symbol order."""
        for a, ds in self._out[state].items():
            for d in ds:
                yield a, d

    def step(self, state, symbol):
        """Deterministic successor or ``None``."""
        ds = self._out[state].get(symbol, ())
        if len(ds) > 1:
            raise ValueError(f"nondeterministic move from {state!r} on {symbol!r}")
        return ds[0] if ds else None

    @cached_property
    def deterministic(self) -> bool:
        return all(len(ds) == 1 for m in self._out.values() for ds in m.values())

    def post(self, states: Iterable, symbol) -> frozenset:
        return frozenset(d for q in states for d in self._out[q].get(symbol, ()))

    def run(self, word: Sequence, start=None) -> frozenset:
        cur = frozenset([self.initial if start is None else start])
        for a in word:
            cur = self.post(cur, a)
            if not cur:
                break
        return cur

    def accepts(self, word: Sequence) -> bool:
        """Closed-language membership."""
        return bool(self.run(word))

    def accepts_marked(self, word: Sequence) -> bool:
        return bool(self.run(word) & self.marked)

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return f"Fsa(states={len(self.states)}, transitions={len(self.transitions)}, symbols={len(self.symbols)})"

    def relabel_states(self, fn) -> "Fsa":
        mapping = {q: fn(q) for q in self.states}
        return Fsa(self.symbols, tuple(mapping[q] for q in self.states), mapping[self.initial],
                   frozenset(mapping[q] for q in self.marked),
                   frozenset((mapping[s], a, mapping[d]) for s, a, d in self.transitions), self.events)

    def with_marked(self, marked) -> "Fsa":
        return Fsa(self.symbols, self.states, self.initial, frozenset(marked), self.transitions, self.events)

    def restrict(self, keep) -> "Fsa":
        """Sub-automaton induced by the state subset ``keep`` (must contain the initial state)."""
        keep = set(keep)
        return Fsa(self.symbols, tuple(q for q in self.states if q in keep), self.initial,
                   frozenset(q for q in self.marked if q in keep),
                   frozenset(t for t in self.transitions if t[0] in keep and t[2] in keep), self.events)


def _same_alphabet(a: Fsa, b: Fsa):
    if set(a.symbols) != set(b.symbols):
        raise AlphabetError("automata have different alphabets")


def closed(a: Fsa) -> Fsa:
    """Copy of ``a`` with every state marked, so L_m equals L."""
    return a.with_marked(a.states)


def universal(symbols, events=None) -> Fsa:
    return Fsa.make(symbols, 0, {0}, [(0, s, 0) for s in symbols], events=events)


def empty(symbols, events=None) -> Fsa:
    return Fsa.make(symbols, 0, set(), [], events=events)


def from_words(symbols, words, events=None) -> Fsa:
    """Trie recognizer whose marked language is exactly ``words``."""
    trans, marked = set(), set()
    for w in words:
        w = tuple(w)
        for i, a in enumerate(w):
            trans.add((w[:i], a, w[:i + 1]))
        marked.add(w)
    return Fsa.make(symbols, (), marked, trans, events=events)


def reachable_states(a: Fsa, start=None) -> list:
    start = a.initial if start is None else start
    seen = {start: None}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        for _, d in a.moves(q):
            if d not in seen:
                seen[d] = None
                queue.append(d)
    return list(seen)


def coreachable_states(a: Fsa, targets=None) -> set:
    targets = set(a.marked if targets is None else targets)
    back = {}
    for s, _, d in a.transitions:
        back.setdefault(d, []).append(s)
    seen = set(targets)
    queue = deque(targets)
    while queue:
        q = queue.popleft()
        for s in back.get(q, ()):
            if s not in seen:
                seen.add(s)
                queue.append(s)
    return seen


def accessible(a: Fsa) -> Fsa:
    return a.restrict(reachable_states(a))


def trim(a: Fsa) -> Fsa:
    acc = accessible(a)
    co = coreachable_states(acc)
    keep = [q for q in acc.states if q in co]
    if a.initial not in co:
        return empty(a.symbols, a.events)
    return accessible(acc.restrict(keep))


def is_coreachable(a: Fsa) -> bool:
    """True iff every reachable state can reach a marked state."""
    co = coreachable_states(a)
    return all(q in co for q in reachable_states(a))


def prefix_close(a: Fsa) -> Fsa:
    """Recognizer with L = L_m = closure of L_m(a)."""
    return closed(trim(a))


def meet(a: Fsa, b: Fsa) -> Fsa:
    """Synchronous product restricted to reachable pairs."""
    _same_alphabet(a, b)
    init = (a.initial, b.initial)
    seen = {init: None}
    trans = set()
    queue = deque([init])
    while queue:
        p, q = queue.popleft()
        for sym, da in a.moves(p):
            for db in b.successors(q, sym):
                nxt = (da, db)
                trans.add(((p, q), sym, nxt))
                if nxt not in seen:
                    seen[nxt] = None
                    queue.append(nxt)
    marked = {s for s in seen if s[0] in a.marked and s[1] in b.marked}
    return Fsa(a.symbols, tuple(seen), init, frozenset(marked), frozenset(trans), a.events or b.events)


def determinize(n: Fsa) -> Fsa:
    """Rabin-Scott subset construction; a subset is marked iff it meets ``n.marked``."""
    init = frozenset([n.initial])
    seen = {init: None}
    trans = set()
    queue = deque([init])
    while queue:
        cur = queue.popleft()
        nxt_by_sym = {}
        for q in cur:
            for sym, d in n.moves(q):
                nxt_by_sym.setdefault(sym, set()).add(d)
        for sym, ds in nxt_by_sym.items():
            nxt = frozenset(ds)
            trans.add((cur, sym, nxt))
            if nxt not in seen:
                seen[nxt] = None
                queue.append(nxt)
    marked = {s for s in seen if s & n.marked}
    return Fsa(n.symbols, tuple(seen), init, frozenset(marked), frozenset(trans), n.events)


def silent_closure(a: Fsa, states, silent) -> frozenset:
    seen = set(states)
    stack = list(states)
    while stack:
        q = stack.pop()
        for sym, d in a.moves(q):
            if sym in silent and d not in seen:
                seen.add(d)
                stack.append(d)
    return frozenset(seen)


def project(a: Fsa, keep) -> Fsa:
    """Deterministic recognizer of P(L(a)) and P(L_m(a)) for the projection onto ``keep``."""
    keep = set(keep)
    if not keep <= set(a.symbols):
        raise AlphabetError("projection target must be a subset of the alphabet")
    silent = set(a.symbols) - keep
    symbols = tuple(s for s in a.symbols if s in keep)
    events = None
    if a.events is not None:
        events = Alphabet(tuple(e for e in a.events if e.name in keep))
    init = silent_closure(a, [a.initial], silent)
    seen = {init: None}
    trans = set()
    queue = deque([init])
    while queue:
        cur = queue.popleft()
        for sym in symbols:
            nxt = a.post(cur, sym)
            if not nxt:
                continue
            nxt = silent_closure(a, nxt, silent)
            trans.add((cur, sym, nxt))
            if nxt not in seen:
                seen[nxt] = None
                queue.append(nxt)
    marked = {s for s in seen if s & a.marked}
    return Fsa(symbols, tuple(seen), init, frozenset(marked), frozenset(trans), events)


SINK = "__sink__"


def complete(d: Fsa) -> Fsa:
    """Add an unmarked sink so every (state, symbol) pair has a successor. ``d`` must be deterministic."""
    if not d.deterministic:
        raise ValueError("complete() needs a deterministic automaton")
    trans = set(d.transitions)
    need_sink = False
    for q in d.states:
        en = set(d.enabled(q))
        for s in d.symbols:
            if s not in en:
                trans.add((q, s, SINK))
                need_sink = True
    if not need_sink:
        return d
    for s in d.symbols:
        trans.add((SINK, s, SINK))
    return Fsa(d.symbols, d.states + (SINK,), d.initial, d.marked, frozenset(trans), d.events)


def complement(a: Fsa) -> Fsa:
    """Recognizer of the complement of L_m(a) within Σ*."""
    c = complete(determinize(a))
    return c.with_marked(set(c.states) - set(c.marked))


def difference(a: Fsa, b: Fsa) -> Fsa:
    """Recognizer whose marked language is L_m(a) - L_m(b).

    Use :func:`closed` on the arguments to subtract closed languages.
    """
    _same_alphabet(a, b)
    return meet(a, complement(b))


def union_marked(a: Fsa, b: Fsa) -> Fsa:
    """Marked-language union via a product of the completed determinizations."""
    _same_alphabet(a, b)
    ca, cb = complete(determinize(a)), complete(determinize(b))
    prod = meet(closed(ca), closed(cb))
    marked = {s for s in prod.states if s[0] in ca.marked or s[1] in cb.marked}
    return prod.with_marked(marked)


def is_empty(a: Fsa) -> bool:
    """True iff L_m(a) is empty."""
    return not any(q in a.marked for q in reachable_states(a))


def includes(a: Fsa, b: Fsa, marked=False) -> bool:
    """Decide L(a) ⊆ L(b) (or L_m(a) ⊆ L_m(b) with ``marked=True``)."""
    _same_alphabet(a, b)
    if marked:
        return is_empty(difference(a, b))
    return is_empty(difference(closed(a), closed(b)))


def equivalent(a: Fsa, b: Fsa, marked=False) -> bool:
    return includes(a, b, marked) and includes(b, a, marked)


def enumerate_words(a: Fsa, maxlen: int, marked=False) -> list[tuple]:
    """All words of L(a) (or L_m(a)) of length <= maxlen in shortlex order."""
    out = []
    level = [((), frozenset([a.initial]))]
    for length in range(maxlen + 1):
        nxt = []
        for word, cur in level:
            if not marked or cur & a.marked:
                out.append(word)
            if length == maxlen:
                continue
            for sym in a.symbols:
                dst = a.post(cur, sym)
                if dst:
                    nxt.append((word + (sym,), dst))
        level = nxt
    return out


def relabel(a: Fsa, fn, symbols=None) -> Fsa:
    """Apply a letter-to-letter homomorphism; the result may be nondeterministic."""
    trans = frozenset((s, fn(x), d) for s, x, d in a.transitions)
    if symbols is None:
        seen = {}
        for x in a.symbols:
            seen.setdefault(fn(x))
        symbols = tuple(seen)
    return Fsa(tuple(symbols), a.states, a.initial, a.marked, trans, None)


def expand(a: Fsa, fn, symbols) -> Fsa:
    """Inverse homomorphism: every edge labelled x is replaced by edges for each y in ``fn(x)``."""
    trans = frozenset((s, y, d) for s, x, d in a.transitions for y in fn(x))
    return Fsa(tuple(symbols), a.states, a.initial, a.marked, trans, None)


def query(a: Fsa, kind: str, arg=None):
    """Single entry point for the oracle queries used by tests and the CLI."""
    if kind == "membership":
        return a.accepts(arg), a.accepts_marked(arg)
    if kind == "emptiness":
        return is_empty(a)
    if kind == "inclusion":
        return includes(a, arg)
    if kind == "enumerate":
        return enumerate_words(a, arg)
    raise ValueError(f"unknown query kind {kind!r}")
