"""Seeded random instances for property suites and experiment scripts."""
from __future__ import annotations

import random
import string

from .attack import complement_closed, damage_automaton
from .automata import Alphabet, Fsa, closed, is_empty, meet
from .supercon import closed_loop


def random_alphabet(rng: random.Random, size: int, max_ctrl=None, unobs_prob=0.3) -> Alphabet:
    names = list(string.ascii_lowercase[:size])
    ctrl = [n for n in names if rng.random() < 0.6]
    if max_ctrl is not None and len(ctrl) > max_ctrl:
        ctrl = rng.sample(ctrl, max_ctrl)
    obs = [n for n in names if rng.random() >= unobs_prob]
    if not obs:
        obs = [names[0]]
    return Alphabet.build(names, ctrl, obs)


def random_dfa(rng: random.Random, alphabet: Alphabet, n_states: int, density=0.45, marked_prob=0.35,
               acyclic=False) -> Fsa:
    trans = []
    for x in range(n_states):
        for e in alphabet.names:
            if rng.random() < density:
                if acyclic:
                    if x + 1 >= n_states:
                        continue
                    x2 = rng.randrange(x + 1, n_states)
                else:
                    x2 = rng.randrange(n_states)
                trans.append((x, e, x2))
    marked = {x for x in range(n_states) if rng.random() < marked_prob}
    if not marked:
        marked = {rng.randrange(n_states)}
    return Fsa.plant(alphabet, 0, marked, trans, states=tuple(range(n_states)))


def random_supervisor(rng: random.Random, alphabet: Alphabet, n_states: int) -> Fsa:
    """All-marked, observation-deterministic supervisor with unobservable self-loops."""
    states = tuple(f"z{i}" for i in range(n_states))
    trans = []
    for z in states:
        gamma = set(alphabet.uncontrollable) | {e for e in alphabet.ordered(alphabet.controllable) if rng.random() < 0.6}
        for e in alphabet.ordered(gamma):
            trans.append((z, e, z if e in alphabet.unobservable else rng.choice(states)))
    return Fsa.make(alphabet.names, states[0], set(states), trans, states=states, events=alphabet)


def damage_ok(g: Fsa, d: Fsa) -> bool:
    return is_empty(meet(damage_automaton(d, g.events), complement_closed(g)))


def attack_instance(rng: random.Random, max_x=4, max_z=3, max_w=3, max_sigma=4, tries=500):
    """Plant, supervisor and damage automaton with L_dam ⊆ L(G) - L(V/G) and L_dam nonempty.

    A random D with at most ``max_w`` states is cut down to L(G) - L(V/G) by a product;
    the returned damage automaton is that product.
    """
    for _ in range(tries):
        al = random_alphabet(rng, rng.randint(2, max_sigma))
        g = random_dfa(rng, al, rng.randint(2, max_x))
        v = random_supervisor(rng, al, rng.randint(1, max_z))
        raw = random_dfa(rng, al, rng.randint(2, max_w), density=0.5)
        outside = meet(closed(g), complement_closed(closed_loop(g, v)))
        d = meet(damage_automaton(raw, al), outside)
        d = Fsa(al.names, d.states, d.initial, d.marked, d.transitions, al)
        if not is_empty(d):
            return g, v, d
    raise RuntimeError("no instance with a nonempty damage language was found")


def proposition_instance(rng: random.Random, max_x=4, max_sigma=4, max_gamma=8):
    size = rng.randint(2, max_sigma)
    max_ctrl = max_gamma.bit_length() - 1
    al = random_alphabet(rng, size, max_ctrl=max_ctrl)
    al = al.with_protected({e for e in al.ordered(al.observable) if rng.random() < 0.3})
    g = random_dfa(rng, al, rng.randint(2, max_x))
    d = random_dfa(rng, al, rng.randint(2, 3), density=0.4)
    return g, d


def observation_depth(g: Fsa) -> int:
    """Longest observable count along a path of an acyclic automaton."""
    memo = {}

    def depth(x):
        if x not in memo:
            memo[x] = max((depth(x2) + (e in g.events.observable) for e, x2 in g.moves(x)), default=0)
        return memo[x]

    return depth(g.initial)


def resilience_instance(rng: random.Random, max_x=5, max_sigma=4, max_ctrl=2, max_depth=3, tries=500):
    """Small acyclic plant with observation depth at most ``max_depth`` and ε ∉ L_dam ⊆ L(G)."""
    for _ in range(tries):
        al = random_alphabet(rng, rng.randint(2, max_sigma), max_ctrl=max_ctrl, unobs_prob=0.25)
        g = random_dfa(rng, al, rng.randint(3, max_x), density=0.5, acyclic=True, marked_prob=0.4)
        if observation_depth(g) > max_depth:
            continue
        d = random_dfa(rng, al, rng.randint(2, 4), density=0.4, acyclic=True, marked_prob=0.5)
        d = Fsa(d.symbols, d.states, d.initial, d.marked - {d.initial}, d.transitions, d.events)
        if damage_ok(g, d) and not is_empty(d):
            return g, d
    raise RuntimeError("no resilience instance found")
