"""Bundled worked instances used by the self-test, the scripts and the test suite."""
from __future__ import annotations

from dataclasses import dataclass

from .automata import Alphabet, Fsa, empty, from_words
from .supercon import SupervisorMap


@dataclass
class Instance:
    name: str
    plant: Fsa
    damage: Fsa
    n: int
    supervisor: SupervisorMap | None = None

    @property
    def alphabet(self) -> Alphabet:
        return self.plant.events


def _map(alphabet, entries):
    return SupervisorMap({tuple(k): alphabet.uncontrollable | frozenset(v) for k, v in entries.items()},
                         alphabet.uncontrollable)


def example1() -> Instance:
    """Fully observable, fully controllable plant with a damaging branch abc.

    The supervisor allows the legal run de and, through its patterns, the
    events a, b, c at the matching observation points.
    """
    al = Alphabet.build("abcde", controllable="abcde", observable="abcde")
    g = Fsa.plant(al, 0, {5}, [(0, "a", 1), (1, "b", 2), (2, "c", 3), (0, "d", 4), (4, "e", 5)])
    v = _map(al, {(): "ad", ("d",): "be", ("d", "e"): "c"})
    return Instance("example1", g, from_words(al.names, ["abc"], al), 1, v)


def example2() -> Instance:
    """Damage ad; c, d protected; v unobservable and uncontrollable."""
    al = Alphabet.build("abcdv", controllable="abd", observable="abcd", protected="cd")
    g = Fsa.plant(al, 0, {5, 7}, [(0, "a", 1), (1, "d", 3), (1, "v", 4), (4, "c", 5),
                                   (0, "b", 2), (2, "v", 6), (6, "d", 7)])
    v = _map(al, {(): "a", ("a",): "", ("a", "c"): ""})
    return Instance("example2", g, from_words(al.names, ["ad"], al), 1, v)


def example3() -> Instance:
    """Only a is controllable; nondeterminism of the augmented plant after a."""
    al = Alphabet.build("abcv", controllable="a", observable="abc")
    g = Fsa.plant(al, 0, {3, 5, 7}, [(0, "a", 1), (0, "b", 2), (1, "c", 3), (1, "v", 4), (4, "c", 5),
                                      (2, "v", 6), (6, "c", 7)])
    full = "abcv"
    v = _map(al, {(): full, ("a",): "", ("b",): full, ("a", "c"): full, ("b", "c"): ""})
    return Instance("example3", g, empty(al.names, al), 1, v)


EXAMPLES = {"example1": example1, "example2": example2, "example3": example3}
