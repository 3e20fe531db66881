"""Existence and synthesis of supervisors resilient to smart sensor attacks.

Pipeline: damage language -> pattern sequences (D_ι) -> attacked sequences
(D_ψ) -> observed sequences (D_ν); plant -> augmented plant G_ζ; subtract the
risky pattern prefixes (H); enforce conditional controllability (𝓗); subset
construction P(𝓗); backtracking search for a control feasible Ω; extract V.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .attack import bounded_obs_strings, complement_closed, damage_automaton
from .attack_synth import find_risky_pair
from .automata import (EPS, Alphabet, Fsa, coreachable_states, determinize, enumerate_words, is_empty,
                       meet, project, reachable_states, relabel)
from .errors import PreconditionError, check_guard
from .supercon import (DEFAULT_MAX_PATTERNS, Gamma, Report, SupervisorMap, closed_loop, is_nonblocking)

INIT = "__init__"
IDLE = "__idle__"
DEFAULT_MAX_STATES = 2_000_000
DEFAULT_MAX_MAP_ENTRIES = 10_000


def aug_symbols(alphabet: Alphabet, patterns):
    obs = [e for e in alphabet.names if e in alphabet.observable]
    return tuple((o, gm) for o in [EPS] + obs for gm in patterns)


def g_image(word):
    """Observation image g(w) of an augmented string."""
    return tuple(o for o, _ in word if o != EPS)


def p_image(word):
    return tuple(gm for _, gm in word)


# -- damage side ---------------------------------------------------------

def build_D_iota(d: Fsa, alphabet: Alphabet, patterns) -> Fsa:
    patterns = list(patterns)
    syms = tuple((e, gm) for e in alphabet.names for gm in patterns)
    trans = frozenset((w, (e, gm), w2) for w, e, w2 in d.transitions for gm in patterns if e in gm)
    return Fsa(syms, d.states, d.initial, d.marked, trans, None)


def replacement_strings(alphabet: Alphabet, n: int, protected):
    """Δ_n without the single protected letters."""
    return bounded_obs_strings(alphabet, n, exclude_single=frozenset(protected))


def build_D_psi(d_iota: Fsa, alphabet: Alphabet, n: int, protected=()) -> Fsa:
    """Kept letters stay event names; attackable observations become Δ_n tuples."""
    protected = frozenset(protected) | alphabet.protected
    kept = protected | alphabet.unobservable
    repl = replacement_strings(alphabet, n, protected)
    patterns = list(dict.fromkeys(gm for _, gm in d_iota.symbols))
    syms = [(e, gm) for e in alphabet.names if e in kept for gm in patterns]
    syms += [(u, gm) for u in repl for gm in patterns]
    trans = set()
    for w, (e, gm), w2 in d_iota.transitions:
        if e in kept:
            trans.add((w, (e, gm), w2))
        else:
            trans.update((w, (u, gm), w2) for u in repl)
    return Fsa(tuple(syms), d_iota.states, d_iota.initial, d_iota.marked, frozenset(trans), None)


def build_D_nu(d_psi: Fsa, alphabet: Alphabet, patterns) -> Fsa:
    """Rewrite D_ψ over Σ_o^ε×Γ; multi-letter fakes go through fresh chain states."""
    patterns = list(patterns)
    states = list(d_psi.states)
    trans = set()
    for k, (w, (x, gm), w2) in enumerate(sorted(d_psi.transitions, key=repr)):
        if isinstance(x, str):
            if x in alphabet.observable:
                if x in gm:
                    trans.add((w, (x, gm), w2))
            elif x in gm:
                trans.add((w, (EPS, gm), w2))
            continue
        if not x or x[-1] not in gm:
            continue
        if len(x) == 1:
            trans.add((w, (x[0], gm), w2))
            continue
        chain = [w] + [("nu", k, i) for i in range(1, len(x))] + [w2]
        states.extend(chain[1:-1])
        for i, sym in enumerate(x[:-1]):
            trans.update((chain[i], (sym, g1), chain[i + 1]) for g1 in patterns if sym in g1)
        trans.add((chain[-2], (x[-1], gm), w2))
    return Fsa(aug_symbols(alphabet, patterns), tuple(states), d_psi.initial, d_psi.marked,
               frozenset(trans), None)


# -- plant side ----------------------------------------------------------

def unobservable_reach(g: Fsa, xs, gamma) -> set:
    """States reachable from ``xs`` by unobservable events inside ``gamma``."""
    alphabet = g.events
    seen, stack = set(xs), list(xs)
    while stack:
        x = stack.pop()
        for e, x2 in g.moves(x):
            if e in alphabet.unobservable and e in gamma and x2 not in seen:
                seen.add(x2)
                stack.append(x2)
    return seen


def build_G_zeta(g: Fsa, patterns, max_states=DEFAULT_MAX_STATES) -> Fsa:
    alphabet = g.events
    patterns = list(patterns)
    check_guard("|X|·(|Σ_o|+1)·|Γ|", len(g.states) * (len(alphabet.observable) + 1) * len(patterns), max_states)
    obs = [e for e in alphabet.names if e in alphabet.observable]
    init = (g.initial, INIT, frozenset(alphabet.names))
    seen = {init: None}
    queue = deque()
    trans = set()
    for gm in patterns:
        nxt = (g.initial, EPS, gm)
        trans.add((init, (EPS, gm), nxt))
        if nxt not in seen:
            seen[nxt] = None
            queue.append(nxt)
    while queue:
        state = queue.popleft()
        x, _, gm = state
        if gm & alphabet.unobservable:
            trans.add((state, (EPS, gm), state))
        front = unobservable_reach(g, [x], gm)
        for o in obs:
            if o not in gm:
                continue
            targets = {x2 for y in front for x2 in g.successors(y, o)}
            for x2 in sorted(targets, key=repr):
                for g2 in patterns:
                    nxt = (x2, o, g2)
                    trans.add((state, (o, g2), nxt))
                    if nxt not in seen:
                        seen[nxt] = None
                        queue.append(nxt)
    # a state is marked when the current pattern lets the plant reach X_m silently
    marked = {s for s in seen if s != init and unobservable_reach(g, [s[0]], s[2]) & set(g.marked)}
    if g.initial in g.marked:
        marked.add(init)
    return Fsa(aug_symbols(alphabet, patterns), tuple(seen), init, frozenset(marked), frozenset(trans), None)


def risky_recognizer(d_nu: Fsa, patterns) -> tuple[Fsa, frozenset]:
    """Deterministic recognizer of p(L_m(D_ν)) over Γ and its (absorbing) bad states."""
    r = determinize(relabel(d_nu, lambda l: l[1], symbols=tuple(patterns)))
    return r, frozenset(r.marked)


def build_H(g_zeta: Fsa, d_nu: Fsa, patterns) -> Fsa:
    """Augmented plant minus every string with a risky pattern-sequence prefix.

    States are ``(gz, r)`` with ``r`` the risky recognizer state (None once no
    risky prefix can match any more). The language is prefix-closed by construction.
    """
    r_fsa, bad = risky_recognizer(d_nu, patterns)
    init = (g_zeta.initial, r_fsa.initial)
    seen = {init: None}
    trans = set()
    if r_fsa.initial not in bad:
        queue = deque([init])
        while queue:
            state = queue.popleft()
            gz, r = state
            for l, gz2 in g_zeta.moves(gz):
                r2 = None if r is None else r_fsa.step(r, l[1])
                if r2 in bad:
                    continue
                nxt = (gz2, r2)
                trans.add((state, l, nxt))
                if nxt not in seen:
                    seen[nxt] = None
                    queue.append(nxt)
    marked = {s for s in seen if s[0] in g_zeta.marked}
    return Fsa(g_zeta.symbols, tuple(seen), init, frozenset(marked), frozenset(trans), None)


def sup_conditionally_controllable(h: Fsa, g_zeta: Fsa, alphabet: Alphabet) -> Fsa:
    """Greatest sub-automaton keeping every (ε,γ) continuation after the first letter."""
    keep = set(reachable_states(h))
    while True:
        drop = set()
        for q in keep:
            if q == h.initial:
                continue
            gz = q[0]
            for l in g_zeta.enabled(gz):
                if l[0] == EPS and not any(q2 in keep for q2 in h.successors(q, l)):
                    drop.add(q)
                    break
        if not drop:
            break
        keep -= drop
        if h.initial not in keep:
            break
        sub = h.restrict(keep)
        keep = set(reachable_states(sub))
    if h.initial not in keep:
        keep = {h.initial}
    return h.restrict(keep).restrict(reachable_states(h.restrict(keep)))


def prune_candidates(hh: Fsa, g_zeta: Fsa, alphabet: Alphabet) -> Fsa:
    """Drop states of 𝓗 that cannot lie on any nonblocking resilient candidate.

    A state goes when it loses a required silent letter, when an observation
    allowed by its pattern and by G_ζ has no continuation left, or when it is
    blocking. Repeats to a fixpoint.
    """
    keep = set(reachable_states(hh))
    while True:
        sub = hh.restrict(keep)
        co = coreachable_states(sub)
        drop = {q for q in keep if q not in co}
        for q in keep - drop:
            if q == hh.initial:
                continue
            gz = q[0]
            have = {l[0] for l in sub.enabled(q)}
            need = {l[0] for l in g_zeta.enabled(gz) if l[0] == EPS or l[0] in gz[2]}
            if not need <= have:
                drop.add(q)
        if not drop:
            return sub
        keep -= drop
        if hh.initial not in keep:
            return _only_initial(hh)
        keep = set(reachable_states(hh.restrict(keep)))


def _only_initial(a: Fsa) -> Fsa:
    return Fsa(a.symbols, (a.initial,), a.initial, frozenset({a.initial} & set(a.marked)), frozenset(), a.events)


# -- state estimates (f, h) -----------------------------------------------

class Estimator:
    """The state-estimate map f and the marking coreachability map h.

    With ``lookahead`` the closure after each observation runs over
    γ* ∩ closure(Σ_uo*Σ_o), i.e. it may include one further observable event;
    without it the closure is over unobservable events only.
    """

    def __init__(self, g: Fsa, lookahead=True):
        self.g = g
        self.alphabet = g.events
        self.lookahead = lookahead

    def _forward(self, xs, gamma):
        front = unobservable_reach(self.g, xs, gamma)
        if not self.lookahead:
            return front
        out = set(front)
        for y in front:
            for e, y2 in self.g.moves(y):
                if e in self.alphabet.observable and e in gamma:
                    out.add(y2)
        return out

    def _backward(self, targets, gamma):
        return {x for x in self.g.states if self._forward([x], gamma) & set(targets)}

    @staticmethod
    def patterns(word):
        """(γ_0, γ_1, …, γ_n): the first pattern and each pattern set at an observation."""
        return [word[0][1]] + [gm for o, gm in word[1:] if o != EPS]

    def f(self, word) -> frozenset:
        if not word:
            raise ValueError("f is defined on non-empty augmented strings")
        cur = self._forward([self.g.initial], word[0][1])
        for o, gm in word[1:]:
            if o == EPS:
                continue
            stepped = {x2 for x in cur for x2 in self.g.successors(x, o)}
            cur = self._forward(stepped, gm)
        return frozenset(cur)

    def h(self, word) -> frozenset:
        fs = self.f(word) & set(self.g.marked)
        if not fs:
            return frozenset()
        pats = self.patterns(word)
        u = self._backward(fs, pats[-1])
        acc = set(u)
        for gm in reversed(pats[:-1]):
            u = self._backward(u, gm)
            acc |= u
        return frozenset(acc)


def estimate_maps(g: Fsa, lookahead=True):
    est = Estimator(g, lookahead)
    return est.f, est.h


# -- subset construction P(𝓗) --------------------------------------------

def g_observer(hh: Fsa, alphabet: Alphabet) -> Fsa:
    """Deterministic observer of 𝓗 under g; its states are the information sets U."""
    obs_names = tuple(e for e in alphabet.names if e in alphabet.observable)
    rel = relabel(hh, lambda l: l[0], symbols=(EPS,) + obs_names)
    return project(rel, obs_names)


def build_PH(hh: Fsa, alphabet: Alphabet) -> Fsa:
    """States (σ, U, q); (ε,γ) keeps (σ,U), (σ',γ) advances U through the g-observer."""
    obs = g_observer(hh, alphabet)
    init = (EPS, obs.initial, hh.initial)
    seen = {init: None}
    queue = deque([init])
    trans = set()
    while queue:
        state = queue.popleft()
        sig, u, q = state
        for l, q2 in hh.moves(q):
            if l[0] == EPS:
                nxt = (sig, u, q2)
            else:
                nxt = (l[0], obs.step(u, l[0]), q2)
            trans.add((state, l, nxt))
            if nxt not in seen:
                seen[nxt] = None
                queue.append(nxt)
    marked = {s for s in seen if s[2] in hh.marked}
    return Fsa(hh.symbols, tuple(seen), init, frozenset(marked), frozenset(trans), None)


def information_sets(ph: Fsa) -> list:
    """Distinct (σ, U) classes of P(𝓗) in BFS discovery order."""
    return list(dict.fromkeys((s[0], s[1]) for s in reachable_states(ph)))


# -- control feasible sub-automata ------------------------------------------

@dataclass
class Omega:
    """A control feasible sub-automaton with its class-to-pattern assignment."""
    fsa: Fsa
    assignment: dict
    root: tuple
    edges: dict          # (class, observable event) -> class

    def pattern(self, cls):
        return self.assignment[cls]


@dataclass
class SearchStats:
    nodes: int = 0
    pruned: int = 0
    complete: int = 0
    blocking: int = 0


class _Search:
    def __init__(self, hh: Fsa, g_zeta: Fsa, alphabet: Alphabet, patterns):
        self.hh, self.gz, self.alphabet = hh, g_zeta, alphabet
        self.patterns = list(patterns)
        self.obs = g_observer(hh, alphabet)
        self.root = (EPS, self.obs.initial)
        self.stats = SearchStats()
        self._gz_obs = {}

    def gz_observable(self, gz):
        en = self._gz_obs.get(gz)
        if en is None:
            en = frozenset(l[0] for l in self.gz.enabled(gz) if l[0] != EPS)
            self._gz_obs[gz] = en
        return en

    def explore(self, assign):
        """Forward closure of Ω under a partial assignment.

        Returns ("fail", None), ("pending", class) or ("complete", (states, trans, edges)).
        """
        hh, alphabet = self.hh, self.alphabet
        if self.root not in assign:
            return "pending", self.root
        start = (self.root, hh.initial)
        seen = {start: None}
        queue = deque([start])
        trans, edges, pending = set(), {}, []
        while queue:
            node = queue.popleft()
            cls, q = node
            gamma = assign[cls]
            if q == hh.initial:
                succ = hh.successors(q, (EPS, gamma))
                if not succ:
                    return "fail", None
                moves = [((EPS, gamma), cls, q2) for q2 in succ]
            else:
                moves = []
                if gamma & alphabet.unobservable:
                    succ = hh.successors(q, (EPS, gamma))
                    if not succ:
                        return "fail", None
                    moves += [((EPS, gamma), cls, q2) for q2 in succ]
                for o in sorted(gamma & self.gz_observable(q[0]), key=alphabet.names.index):
                    cls2 = (o, self.obs.step(cls[1], o))
                    if cls2 not in assign:
                        if cls2 not in pending:
                            pending.append(cls2)
                        continue
                    edges[(cls, o)] = cls2
                    letter = (o, assign[cls2])
                    succ = hh.successors(q, letter)
                    if not succ:
                        return "fail", None
                    moves += [(letter, cls2, q2) for q2 in succ]
            for letter, cls2, q2 in moves:
                nxt = (cls2, q2)
                trans.add((node, letter, nxt))
                if nxt not in seen:
                    seen[nxt] = None
                    queue.append(nxt)
        if pending:
            return "pending", pending[0]
        return "complete", (tuple(seen), frozenset(trans), edges)

    def run(self):
        yield from self._rec({})

    def _rec(self, assign):
        self.stats.nodes += 1
        status, info = self.explore(assign)
        if status == "fail":
            self.stats.pruned += 1
            return
        if status == "pending":
            for gm in self.patterns:
                assign[info] = gm
                yield from self._rec(assign)
            del assign[info]
            return
        self.stats.complete += 1
        states, trans, edges = info
        marked = {s for s in states if s[1] in self.hh.marked}
        fsa = Fsa(self.hh.symbols, tuple((c[0], c[1], q) for c, q in states),
                  (EPS, self.obs.initial, self.hh.initial),
                  frozenset((c[0], c[1], q) for c, q in marked),
                  frozenset(((c[0], c[1], q), l, (c2[0], c2[1], q2)) for (c, q), l, (c2, q2) in trans), None)
        if not all(s in coreachable_states(fsa) for s in fsa.states):
            self.stats.blocking += 1
            return
        yield Omega(fsa, dict(assign), self.root, dict(edges))


def iter_control_feasible(hh: Fsa, g_zeta: Fsa, alphabet: Alphabet, patterns, stats=None):
    """Every control feasible Ω in canonical order (classes by discovery, patterns ascending)."""
    search = _Search(hh, g_zeta, alphabet, patterns)
    for om in search.run():
        if stats is not None:
            stats.update(vars(search.stats))
        yield om
    if stats is not None:
        stats.update(vars(search.stats))


def find_control_feasible(hh: Fsa, g_zeta: Fsa, alphabet: Alphabet, patterns) -> Omega | None:
    return next(iter_control_feasible(hh, g_zeta, alphabet, patterns), None)


def check_control_feasible(omega: Fsa, ph: Fsa, g_zeta: Fsa, alphabet: Alphabet) -> Report:
    """Re-check the five control feasibility conditions on a given Ω ⊆ P(𝓗)."""
    rep = Report()
    q0 = ph.initial
    states = set(omega.states)
    if omega.initial != q0:
        rep.fail("Ω does not start at the initial state of P(𝓗)")
    if not states <= set(ph.states):
        rep.fail("Ω has states outside P(𝓗)")
        return rep
    for t in omega.transitions:
        if t not in ph.transitions:
            rep.fail(f"transition {t!r} is not in P(𝓗)")
    if set(reachable_states(omega)) != states:
        rep.fail("Ω has unreachable states")
    by_class = {}
    for s in states:
        if s != q0:
            by_class.setdefault((s[0], s[1]), set()).add(s[2][0][2])
    for cls, pats in by_class.items():
        if len(pats) > 1:
            rep.fail(f"class with last observation {cls[0]!r} carries several patterns")
    for s in states:
        if s == q0:
            continue
        gz = s[2][0]
        gamma = gz[2]
        for l in g_zeta.enabled(gz):
            if l[0] == EPS and not omega.successors(s, l):
                rep.fail(f"uncontrollable {l[0]}-letter disabled at {gz!r}")
        want = {o for o in gamma & alphabet.observable if any(l[0] == o for l in g_zeta.enabled(gz))}
        have = {l[0] for l in omega.enabled(s) if l[0] != EPS}
        if want != have:
            rep.fail(f"enabled observations {sorted(have)} differ from {sorted(want)} at {gz!r}")
        if any(l[0] == EPS and l[1] != gamma for l in omega.enabled(s)):
            rep.fail(f"silent letter with a foreign pattern at {gz!r}")
    for s in states:
        cls = (s[0], s[1])
        for l in omega.enabled(s):
            for s2 in states:
                if (s2[0], s2[1]) != cls or not ph.successors(s2, l):
                    continue
                if set(omega.successors(s2, l)) != set(ph.successors(s2, l)):
                    rep.fail(f"letter {l[0]!r} not closed across the class at {s2[2][0]!r}")
    co = coreachable_states(omega)
    if not states <= co:
        rep.fail("Ω is not co-reachable")
    return rep


# -- candidate languages ------------------------------------------------------

def check_candidate_language(cand: Fsa, hh: Fsa, g: Fsa, g_zeta: Fsa, bound=6, horizon=None,
                             lookahead=True) -> Report:
    """Bounded check of the nonblocking resilient supervisor candidate conditions."""
    rep = Report()
    alphabet = g.events
    est = Estimator(g, lookahead)
    horizon = len(g.states) + 1 if horizon is None else horizon
    words = enumerate_words(cand, bound + horizon)
    inner = [w for w in words if len(w) <= bound]
    wordset = set(words)
    last_pattern = {}
    for s in inner:
        if not hh.accepts(s):
            rep.fail(f"{s!r} is not in S*")
            continue
        if not s:
            continue
        if len(s) < bound + horizon:
            for l in g_zeta.symbols:
                if l[0] == EPS and g_zeta.accepts(s + (l,)) and s + (l,) not in wordset:
                    rep.fail(f"conditional controllability fails after {s!r}")
        gamma = s[-1][1]
        obs = g_image(s)
        if last_pattern.setdefault(obs, gamma) != gamma:
            rep.fail(f"observation {obs!r} leads to two patterns")
        en_c = {l for l in cand.symbols if s + (l,) in wordset}
        en_z = {l for l in g_zeta.symbols if g_zeta.accepts(s + (l,))}
        allowed_obs = gamma & alphabet.observable
        if any(l[0] != EPS and l[0] not in allowed_obs for l in en_c):
            rep.fail(f"observation outside the current pattern after {s!r}")
        need = {l[0] for l in en_z if l[0] != EPS and l[0] in allowed_obs}
        if need != {l[0] for l in en_c if l[0] != EPS}:
            rep.fail(f"enabled observations differ from the augmented plant after {s!r}")
        ext_h = set()
        for t in words:
            if t[:len(s)] == s:
                ext_h |= est.h(t)
        if not est.f(s) <= ext_h:
            rep.fail(f"not nonblocking with respect to G after {s!r}")
    prod = meet(cand.with_marked(set(cand.states)), g_zeta)
    co = coreachable_states(prod, [q for q in prod.states if q[1] in g_zeta.marked])
    rep.info.append(f"state co-reachability of the candidate: {all(q in co for q in prod.states)}")
    return rep


# -- supervisor extraction and the decision procedure --------------------------

def extract_supervisor(omega: Omega, alphabet: Alphabet, max_entries=DEFAULT_MAX_MAP_ENTRIES):
    """Read a supervisor off Ω: a finite map when the class graph unfolds finitely, an automaton otherwise."""
    default = alphabet.uncontrollable
    succ = {}
    for (cls, o), cls2 in omega.edges.items():
        succ.setdefault(cls, []).append((o, cls2))
    for cls in succ:
        succ[cls].sort(key=lambda p: alphabet.names.index(p[0]))
    entries = {}
    cyclic = False

    def walk(cls, obs, path):
        nonlocal cyclic
        if cyclic or len(entries) > max_entries:
            cyclic = True
            return
        if cls in path:
            cyclic = True
            return
        gm = omega.assignment[cls]
        if obs in entries and entries[obs] != gm:
            raise PreconditionError(f"ill-defined supervisor at observation {obs!r}")
        entries[obs] = gm
        for o, cls2 in succ.get(cls, ()):
            walk(cls2, obs + (o,), path | {cls})

    walk(omega.root, (), frozenset())
    if not cyclic:
        return SupervisorMap(entries, default)
    return _class_automaton(omega, alphabet)


def _class_automaton(omega: Omega, alphabet: Alphabet) -> Fsa:
    classes = list(dict.fromkeys([omega.root] + list(omega.assignment)))
    ids = {c: f"s{i}" for i, c in enumerate(classes)}
    trans = set()
    need_idle = False
    for c in classes:
        for e in omega.assignment[c]:
            if e in alphabet.unobservable:
                trans.add((ids[c], e, ids[c]))
            elif (c, e) in omega.edges:
                trans.add((ids[c], e, ids[omega.edges[(c, e)]]))
            else:
                trans.add((ids[c], e, IDLE))
                need_idle = True
    states = tuple(ids[c] for c in classes)
    if need_idle:
        states += (IDLE,)
        trans.update((IDLE, e, IDLE) for e in alphabet.uncontrollable)
    return Fsa(alphabet.names, states, ids[omega.root], frozenset(states), frozenset(trans), alphabet)


@dataclass
class Decision:
    exists: bool
    supervisor: object = None
    omega: Omega | None = None
    stats: dict = field(default_factory=dict)
    verified: bool = False

    @property
    def outcome(self):
        return "exists" if self.exists else "not-exists"


def check_damage_in_plant(g: Fsa, d: Fsa):
    outside = meet(damage_automaton(d, g.events), complement_closed(g))
    if not is_empty(outside):
        raise PreconditionError("damage language is not contained in L(G)")


def verify_resilient(g: Fsa, v, d: Fsa, n: int, protected=()) -> Report:
    """No risky pair (hence no smart sensor attack) and a nonblocking closed loop."""
    rep = Report()
    if not is_nonblocking(closed_loop(g, v)):
        rep.fail("closed loop is blocking")
    pair = find_risky_pair(g, v, d, n, protected, strict=False)
    if pair is not None:
        rep.fail(f"risky pair found: {pair.as_dict()}")
    return rep


@dataclass
class Pipeline:
    patterns: list
    d_iota: Fsa
    d_psi: Fsa
    d_nu: Fsa
    g_zeta: Fsa
    h: Fsa
    hh: Fsa


def build_pipeline(g: Fsa, d: Fsa, n: int, protected=(), max_patterns=DEFAULT_MAX_PATTERNS,
                   max_states=DEFAULT_MAX_STATES) -> Pipeline:
    alphabet = g.events.with_protected(frozenset(protected) | g.events.protected)
    patterns = list(Gamma(alphabet, max_patterns))
    d_iota = build_D_iota(d, alphabet, patterns)
    d_psi = build_D_psi(d_iota, alphabet, n, alphabet.protected)
    d_nu = build_D_nu(d_psi, alphabet, patterns)
    g_zeta = build_G_zeta(g, patterns, max_states)
    h = build_H(g_zeta, d_nu, patterns)
    check_guard("|H|", len(h.states), max_states)
    hh = sup_conditionally_controllable(h, g_zeta, alphabet)
    return Pipeline(patterns, d_iota, d_psi, d_nu, g_zeta, h, hh)


def decide_resilient(g: Fsa, d: Fsa, n: int, protected=(), max_patterns=DEFAULT_MAX_PATTERNS,
                     max_states=DEFAULT_MAX_STATES) -> Decision:
    """Decide whether a nonblocking supervisor with no smart sensor attack exists.

    Every Ω found is checked against the attack search before it is returned;
    Ωs that fail are skipped and the search continues.
    """
    check_damage_in_plant(g, d)
    alphabet = g.events
    stats = {"gamma": 2 ** len(alphabet.controllable),
             "delta": len(bounded_obs_strings(alphabet, n))}
    if damage_automaton(d, alphabet).initial in damage_automaton(d, alphabet).marked:
        stats["reason"] = "empty string is damaging"
        return Decision(False, stats=stats)
    pipe = build_pipeline(g, d, n, protected, max_patterns, max_states)
    stats.update(gzeta_states=len(pipe.g_zeta.states), h_states=len(pipe.h.states),
                 hh_states=len(pipe.hh.states))
    search_stats = {}
    rejected = 0
    for om in iter_control_feasible(pipe.hh, pipe.g_zeta, alphabet, pipe.patterns, search_stats):
        v = extract_supervisor(om, alphabet)
        if verify_resilient(g, v, d, n, protected):
            stats.update(search_stats, classes=len(om.assignment), rejected=rejected)
            return Decision(True, v, om, stats, verified=True)
        rejected += 1
    stats.update(search_stats, rejected=rejected)
    return Decision(False, stats=stats)
