"""Independent reference evaluators.

Everything here works from the raw transition tuples and the textbook
definitions; nothing calls into the product constructions under test.
"""
from itertools import product

EPS = "eps"


def table(fsa):
    t = {}
    for s, a, d in fsa.transitions:
        t.setdefault((s, a), set()).add(d)
    return t


def run_set(fsa, word, start=None):
    t = table(fsa)
    cur = {fsa.initial if start is None else start}
    for a in word:
        cur = {d for q in cur for d in t.get((q, a), ())}
    return cur


def member(fsa, word):
    return bool(run_set(fsa, word))


def member_marked(fsa, word):
    return bool(run_set(fsa, word) & set(fsa.marked))


def all_words(symbols, maxlen):
    for k in range(maxlen + 1):
        yield from product(symbols, repeat=k)


def lang(fsa, maxlen, marked=False):
    """Brute force: every word over the alphabet, filtered by membership."""
    t = table(fsa)
    out = set()
    level = [((), frozenset([fsa.initial]))]
    for k in range(maxlen + 1):
        nxt = []
        for w, cur in level:
            if cur and (not marked or cur & set(fsa.marked)):
                out.add(w)
            if k < maxlen and cur:
                for a in fsa.symbols:
                    nxt.append((w + (a,), frozenset(d for q in cur for d in t.get((q, a), ()))))
        level = nxt
    return out


# -- supervisors -----------------------------------------------------------

def v_of(v, alphabet, obs):
    """V(obs) straight from the definition of either representation."""
    if hasattr(v, "entries"):
        return v.entries.get(tuple(obs), v.default)
    t = table(v)
    z = v.initial
    for o in obs:
        nxt = t.get((z, o))
        if not nxt:
            return alphabet.uncontrollable
        (z,) = nxt
    return frozenset(a for (q, a) in t if q == z)


def supervised_obs(g, v, obs):
    """obs ∈ P_o(L(V/G)), by simulating the plant under the running pattern."""
    al = g.events
    t = table(g)

    def close(xs, gamma):
        seen, stack = set(xs), list(xs)
        while stack:
            x = stack.pop()
            for e in al.unobservable & gamma:
                for x2 in t.get((x, e), ()):
                    if x2 not in seen:
                        seen.add(x2)
                        stack.append(x2)
        return seen

    cur = close({g.initial}, v_of(v, al, ()))
    for k, o in enumerate(obs):
        if o not in v_of(v, al, obs[:k]):
            return False
        cur = close({x2 for x in cur for x2 in t.get((x, o), ())}, v_of(v, al, obs[:k + 1]))
        if not cur:
            return False
    return True


class _Walker:
    """Step semantics of the attacked closed loop, straight from the definitions."""

    def __init__(self, g, v, d, n, protected=()):
        self.al = al = g.events
        self.g, self.v, self.d = g, v, d
        self.protected = set(protected) | set(al.protected)
        obs = [e for e in al.names if e in al.observable]
        self.delta = [()] + [tuple(u) for k in range(1, n + 1) for u in product(obs, repeat=k)]
        self.tg, self.td = table(g), table(d)
        self.is_map = hasattr(v, "entries")
        self.tv = None if self.is_map else table(v)

    def pattern(self, pos):
        if self.is_map:
            return self.v.entries.get(pos, self.v.default)
        if pos is None:
            return self.al.uncontrollable
        return frozenset(a for (q, a) in self.tv if q == pos)

    def advance(self, pos, o):
        if self.is_map:
            return pos + (o,)
        if pos is None:
            return None
        nxt = self.tv.get((pos, o))
        return next(iter(nxt)) if nxt else None

    def close(self, xs, gamma):
        seen, stack = set(xs), list(xs)
        while stack:
            x = stack.pop()
            for e in self.al.unobservable & gamma:
                for x2 in self.tg.get((x, e), ()):
                    if x2 not in seen:
                        seen.add(x2)
                        stack.append(x2)
        return frozenset(seen)

    def feed(self, pos, est, word):
        for o in word:
            if o not in self.pattern(pos):
                return None
            pos = self.advance(pos, o)
            est = self.close({x2 for x in est for x2 in self.tg.get((x, o), ())}, self.pattern(pos))
            if not est:
                return None
        return pos, est

    def start(self):
        root = () if self.is_map else self.v.initial
        return (self.g.initial, frozenset([self.d.initial]), root, self.close({self.g.initial}, self.pattern(root)))

    def moves(self, cfg):
        """Yield (event, fake string, next configuration)."""
        x, ws, pos, est = cfg
        al = self.al
        gamma = self.pattern(pos)
        for e in al.names:
            if e not in gamma:
                continue
            for x2 in self.tg.get((x, e), ()):
                ws2 = frozenset(w2 for w in ws for w2 in self.td.get((w, e), ()))
                if not ws2:
                    continue
                if e not in al.observable:
                    yield e, None, (x2, ws2, pos, est)
                    continue
                for nu in self.delta:
                    if e in self.protected and nu != (e,):
                        continue
                    if e not in self.protected and len(nu) == 1 and nu[0] in self.protected:
                        continue
                    fed = self.feed(pos, est, nu)
                    if fed is not None:
                        yield e, nu, (x2, ws2) + fed

    def done(self, cfg):
        return bool(cfg[1] & set(self.d.marked))


def risky_pairs_bruteforce(g, v, d, n, cap, protected=()):
    """Length of the shortest risky pair with |s| <= cap, or None.

    All (s, t) prefixes of each length are generated level by level; prefixes
    ending in the same configuration have the same continuations, so each
    level keeps one copy per configuration.
    """
    w = _Walker(g, v, d, n, protected)
    level = {w.start()}
    for k in range(cap + 1):
        if any(w.done(c) for c in level):
            return k
        level = {c2 for c in level for _, _, c2 in w.moves(c)}
        if not level:
            return None
    return None


def risky_pairs_literal(g, v, d, n, cap, protected=()):
    """Every (s, t) with |s| <= cap, no merging at all; returns the shortest length or None."""
    w = _Walker(g, v, d, n, protected)
    best = None

    def rec(cfg, k):
        nonlocal best
        if w.done(cfg):
            best = k if best is None else min(best, k)
            return
        if k >= cap or (best is not None and k >= best):
            return
        for _, _, c2 in w.moves(cfg):
            rec(c2, k + 1)

    rec(w.start(), 0)
    return best


def check_pair(g, v, d, n, s, t, protected=()):
    """Direct check of a candidate (s, t) against the risky-pair conditions."""
    al = g.events
    protected = set(protected) | set(al.protected)
    if not member(g, s) or not member_marked(d, s):
        return False
    obs_pos = [i for i, e in enumerate(s) if e in al.observable]
    if len(obs_pos) != len(t):
        return False
    tflat = ()
    k = 0
    for i, e in enumerate(s):
        if e not in v_of(v, al, tflat):
            return False
        if e in al.observable:
            nu = tuple(t[k])
            k += 1
            if len(nu) > n:
                return False
            if e in protected and nu != (e,):
                return False
            if e not in protected and len(nu) == 1 and nu[0] in protected:
                return False
            if any(o not in al.observable for o in nu):
                return False
            tflat += nu
    return supervised_obs(g, v, tflat)


# -- augmented-language maps ---------------------------------------------

def iota(word, patterns):
    choices = [[(e, gm) for gm in patterns if e in gm] for e in word]
    return {tuple(p) for p in product(*choices)}


def psi(aword, alphabet, n, protected):
    obs = [e for e in alphabet.names if e in alphabet.observable]
    delta = [()] + [tuple(u) for k in range(1, n + 1) for u in product(obs, repeat=k)]
    repl = [u for u in delta if not (len(u) == 1 and u[0] in protected)]
    choices = []
    for e, gm in aword:
        if e in protected or e in alphabet.unobservable:
            choices.append([(e, gm)])
        else:
            choices.append([(u, gm) for u in repl])
    return {tuple(p) for p in product(*choices)}


def nu(pword, alphabet, patterns):
    pieces = []
    for x, gm in pword:
        if isinstance(x, str):
            if x in alphabet.observable and x in gm:
                pieces.append([((x, gm),)])
            elif x in alphabet.unobservable and x in gm:
                pieces.append([((EPS, gm),)])
            else:
                return set()
        elif len(x) == 0:
            return set()
        elif len(x) == 1:
            if x[0] not in gm:
                return set()
            pieces.append([((x[0], gm),)])
        else:
            if x[-1] not in gm:
                return set()
            heads = [[(s, g1) for g1 in patterns if s in g1] for s in x[:-1]]
            pieces.append([tuple(h) + ((x[-1], gm),) for h in product(*heads)])
    return {sum(p, ()) for p in product(*pieces)}


def zeta(g, patterns, maxlen):
    """Augmented strings of length <= maxlen, built from plant strings as in the definition.

    Plant strings are explored observation by observation with unobservable
    runs of length at most |X| (longer runs revisit a state and add nothing).
    """
    al = g.events
    tg = table(g)
    unobs = [e for e in al.names if e in al.unobservable]
    obs = [e for e in al.names if e in al.observable]
    out = {()}

    def tails(gm, room):
        if gm & al.unobservable:
            return [((EPS, gm),) * k for k in range(room + 1)]
        return [()]

    def steps(x, gm):
        """Plant states after u·o with u ∈ (Σ_uo ∩ γ)*, o ∈ Σ_o ∩ γ; returns {(o, x')}."""
        res = set()
        frontier = {x}
        seen = {x}
        for _ in range(len(g.states) + 1):
            for y in frontier:
                for o in obs:
                    if o in gm:
                        for y2 in tg.get((y, o), ()):
                            res.add((o, y2))
            nxt = set()
            for y in frontier:
                for e in unobs:
                    if e in gm:
                        nxt |= tg.get((y, e), set())
            frontier = nxt - seen
            seen |= nxt
            if not frontier:
                break
        return res

    def grow(w, x):
        out.add(w)
        if len(w) >= maxlen:
            return
        gm = w[-1][1]
        for o, x2 in steps(x, gm):
            for g2 in patterns:
                for tail in tails(g2, maxlen - len(w) - 1):
                    grow(w + ((o, g2),) + tail, x2)

    for gm in patterns:
        for k in range(1, maxlen + 1):
            if k > 1 and not gm & al.unobservable:
                break
            grow(((EPS, gm),) * k, g.initial)
    return out


# -- supervisors by enumeration ------------------------------------------

def enumerate_supervisors(g, patterns, depth=3):
    """Every supervisor, up to behaviour, as a dict observation -> pattern.

    Only observations the closed loop can produce are assigned; what a map
    says elsewhere never matters, because covert fakes must stay inside
    P_o(L(V/G)).
    """
    al = g.events
    tg = table(g)
    obs = [e for e in al.names if e in al.observable]

    def close(xs, gamma):
        seen, stack = set(xs), list(xs)
        while stack:
            x = stack.pop()
            for e in al.unobservable & gamma:
                for x2 in tg.get((x, e), ()):
                    if x2 not in seen:
                        seen.add(x2)
                        stack.append(x2)
        return seen

    def gen(frontier, assign):
        if not frontier:
            yield dict(assign)
            return
        (t, pre), rest = frontier[0], frontier[1:]
        for gm in patterns:
            est = close(pre, gm)
            kids = []
            for o in obs:
                if o in gm:
                    nxt = {x2 for x in est for x2 in tg.get((x, o), ())}
                    if nxt:
                        if len(t) >= depth:
                            raise ValueError("observation depth exceeded")
                        kids.append((t + (o,), nxt))
            assign[t] = gm
            yield from gen(rest + kids, assign)
            del assign[t]

    yield from gen([((), {g.initial})], {})


def closed_loop_words(g, v):
    """All strings of L(V/G) for an acyclic plant, with their marked flag."""
    al = g.events
    tg = table(g)
    out = {}

    def rec(x, w, t):
        out[w] = x in g.marked
        gm = v_of(v, al, t)
        for e in al.names:
            if e in gm:
                for x2 in tg.get((x, e), ()):
                    rec(x2, w + (e,), t + ((e,) if e in al.observable else ()))

    rec(g.initial, (), ())
    return out


def nonblocking(g, v):
    words = closed_loop_words(g, v)
    good = {w[:k] for w, m in words.items() if m for k in range(len(w) + 1)}
    return set(words) <= good


def count_supervisors(g, patterns, depth=3):
    """Size of :func:`enumerate_supervisors` without generating it."""
    al = g.events
    tg = table(g)
    obs = [e for e in al.names if e in al.observable]

    def close(xs, gamma):
        seen, stack = set(xs), list(xs)
        while stack:
            x = stack.pop()
            for e in al.unobservable & gamma:
                for x2 in tg.get((x, e), ()):
                    if x2 not in seen:
                        seen.add(x2)
                        stack.append(x2)
        return seen

    def count(t, pre):
        total = 0
        for gm in patterns:
            est = close(pre, gm)
            prod = 1
            for o in obs:
                if o in gm:
                    nxt = {x2 for x in est for x2 in tg.get((x, o), ())}
                    if nxt:
                        if len(t) >= depth:
                            raise ValueError("observation depth exceeded")
                        prod *= count(t + (o,), nxt)
            total += prod
        return total

    return count((), {g.initial})
