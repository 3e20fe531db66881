"""Hypothesis strategies for small automata and instances."""
import random

from hypothesis import strategies as st

from des_sentinel.automata import Alphabet, Fsa
from des_sentinel.randgen import attack_instance, resilience_instance

SYMS = ("a", "b", "c")


@st.composite
def nfas(draw, symbols=SYMS, max_states=4):
    n = draw(st.integers(1, max_states))
    trans = draw(st.lists(st.tuples(st.integers(0, n - 1), st.sampled_from(symbols), st.integers(0, n - 1)),
                          max_size=3 * n))
    marked = draw(st.sets(st.integers(0, n - 1)))
    return Fsa.make(symbols, 0, marked, trans, states=tuple(range(n)))


@st.composite
def nfa_pairs(draw, symbols=SYMS, max_states=4):
    return draw(nfas(symbols, max_states)), draw(nfas(symbols, max_states))


@st.composite
def alphabets(draw, max_size=4):
    size = draw(st.integers(1, max_size))
    names = "abcd"[:size]
    ctrl = draw(st.sets(st.sampled_from(names)))
    obs = draw(st.sets(st.sampled_from(names), min_size=1))
    return Alphabet.build(names, ctrl, obs)


seeds = st.integers(0, 2 ** 32 - 1)


def attack_case(seed):
    return attack_instance(random.Random(seed))


def resilience_case(seed):
    return resilience_instance(random.Random(seed))
