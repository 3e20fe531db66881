"""Shared fixtures, hypothesis profiles and the always-on soundness audit.

Every call to ``decide_resilient`` made anywhere in the test run goes through
``_audited``: a positive answer must come with a supervisor that has a
nonblocking closed loop and admits no risky pair according to the
independent walker in ``oracles``. Violations fail the session.
"""
import os
import random

import pytest
from hypothesis import HealthCheck, settings

import oracles
from des_sentinel import cli, resilience
from des_sentinel.fixtures import EXAMPLES
from des_sentinel.supercon import closed_loop, is_nonblocking

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

AUDIT = {"decisions": 0, "exists": 0, "violations": []}
ACCEPTANCE = {}

_decide = resilience.decide_resilient


def _supervisor_size(v):
    if hasattr(v, "entries"):
        return len(v.entries) + 1
    return len(v.states)


def _audited(g, d, n, protected=(), *args, **kwargs):
    dec = _decide(g, d, n, protected, *args, **kwargs)
    AUDIT["decisions"] += 1
    if dec.exists:
        AUDIT["exists"] += 1
        v = dec.supervisor
        problems = []
        if not dec.verified:
            problems.append("decision not marked verified")
        if not is_nonblocking(closed_loop(g, v)):
            problems.append("closed loop is blocking")
        cap = len(g.states) * _supervisor_size(v) * len(d.states) + 1
        if oracles.risky_pairs_bruteforce(g, v, d, n, cap, protected) is not None:
            problems.append("independent walker found a risky pair")
        if problems:
            AUDIT["violations"].append((g, d, n, problems))
    return dec


resilience.decide_resilient = _audited
cli.decide_resilient = _audited


def pytest_sessionfinish(session, exitstatus):
    if AUDIT["violations"]:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    tr = terminalreporter
    if ACCEPTANCE:
        tr.section("acceptance criteria")
        for key in sorted(ACCEPTANCE):
            ok, detail = ACCEPTANCE[key]
            tr.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}")
    tr.section("soundness audit")
    tr.write_line(f"decide_resilient calls: {AUDIT['decisions']}, positive: {AUDIT['exists']}, "
                  f"violations: {len(AUDIT['violations'])}")
    for _, _, _, problems in AUDIT["violations"]:
        tr.write_line(f"  VIOLATION: {problems}")


@pytest.fixture
def ex1():
    return EXAMPLES["example1"]()


@pytest.fixture
def ex2():
    return EXAMPLES["example2"]()


@pytest.fixture
def ex3():
    return EXAMPLES["example3"]()


@pytest.fixture
def rng():
    return random.Random(1234)
