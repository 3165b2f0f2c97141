import itertools
import random

import pytest
from hypothesis import strategies as st

from inets import Agent, Configuration, Equation, Name, combinator_system, parse_configuration
from inets.oracle import generate_random_configuration

LOOP = "<del(eps, x) = gam(x, eps)>"


@pytest.fixture(scope="session")
def S():
    return combinator_system()


@pytest.fixture
def looping(S):
    return parse_configuration(LOOP, S)


def variant(c: Configuration, rng: random.Random) -> Configuration:
    """Same configuration with names renamed, equations shuffled and some flipped."""
    ids = sorted(c.name_ids())
    fresh = rng.sample(range(1000, 1000 + 10 * len(ids) + 10), len(ids))
    m = dict(zip(ids, fresh))

    def ren(t):
        if isinstance(t, Name):
            return Name(m[t.id])
        return Agent(t.symbol, tuple(ren(a) for a in t.args))

    eqs = [Equation(ren(e.lhs), ren(e.rhs)) for e in c.equations]
    eqs = [e.flipped() if rng.random() < 0.5 else e for e in eqs]
    rng.shuffle(eqs)
    return Configuration(tuple(eqs), tuple(m[n] for n in c.interface))


def brute_alpha(a: Configuration, b: Configuration) -> bool:
    """Alpha-equivalence by trying every matching of equations and orientations."""
    if len(a.equations) != len(b.equations) or len(a.interface) != len(b.interface):
        return False

    def match(s, t, fwd, bwd):
        if isinstance(s, Name) != isinstance(t, Name):
            return False
        if isinstance(s, Name):
            if fwd.setdefault(s.id, t.id) != t.id or bwd.setdefault(t.id, s.id) != s.id:
                return False
            return True
        if s.symbol != t.symbol or len(s.args) != len(t.args):
            return False
        return all(match(x, y, fwd, bwd) for x, y in zip(s.args, t.args))

    n = len(a.equations)
    for perm in itertools.permutations(range(n)):
        for flips in itertools.product((False, True), repeat=n):
            fwd = dict(zip(a.interface, b.interface))
            bwd = dict(zip(b.interface, a.interface))
            ok = True
            for i, j, f in zip(range(n), perm, flips):
                eb = b.equations[j].flipped() if f else b.equations[j]
                ea = a.equations[i]
                if not (match(ea.lhs, eb.lhs, fwd, bwd) and match(ea.rhs, eb.rhs, fwd, bwd)):
                    ok = False
                    break
            if ok:
                return True
    return False


@st.composite
def configurations(draw, max_agents=12, interface=(0, 3)):
    S = combinator_system()
    seed = draw(st.integers(0, 10**6))
    k = draw(st.integers(*interface))
    return generate_random_configuration(S, max_agents, k, seed)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
