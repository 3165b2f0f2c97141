"""Reduction of configurations: interaction, indirection, strategies.

Indirections are administrative: after every interaction they are resolved
to a fixpoint (lowest applicable index first), so one *step* is one
interaction followed by that clean-up.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Iterator

from .core import (
    Agent,
    Configuration,
    Equation,
    InteractionSystem,
    Name,
    canonicalize,
    contains_name,
    rename,
    substitute,
)

NORMAL = "normal"
FUEL_EXHAUSTED = "fuel-exhausted"
STUCK_DEADLOCK = "stuck-deadlock"
STUCK_NORULE = "stuck-norule"


class NotARedexError(ValueError):
    pass


class NoRuleError(NotARedexError):
    pass


class NameSupply:
    """Monotone counter of fresh name ids."""

    def __init__(self, start: int = 0):
        self._next = start

    @classmethod
    def above(cls, c: Configuration) -> "NameSupply":
        return cls(c.max_name() + 1)

    def __call__(self) -> int:
        n = self._next
        self._next += 1
        return n

    def reserve_above(self, c: Configuration) -> None:
        self._next = max(self._next, c.max_name() + 1)


@dataclass(frozen=True)
class Interaction:
    equation: int
    key: tuple[str, str]
    flipped: bool  # True when the equation's lhs plays the rule's beta side


@dataclass(frozen=True)
class Indirection:
    equation: int
    side: int  # 0 if the name is the lhs, 1 if the rhs
    target: int  # equation holding the other occurrence


@dataclass(frozen=True)
class RedexReport:
    interactions: tuple[Interaction, ...] = ()
    indirections: tuple[Indirection, ...] = ()
    deadlocks: tuple[int, ...] = ()
    answers: tuple[int, ...] = ()
    norule: tuple[int, ...] = ()

    @property
    def width(self) -> int:
        return len(self.interactions)


@dataclass(frozen=True)
class StepInfo:
    kind: str  # "interaction" | "indirection"
    equation: int
    key: tuple[str, str] | None = None
    flipped: bool = False
    fresh: int = 0
    side: int | None = None

    def line(self, k: int) -> str:
        if self.kind == "interaction":
            return f"STEP {k} INTERACTION {{{self.key[0]},{self.key[1]}}} eq={self.equation}"
        return f"STEP {k} INDIRECTION eq={self.equation}"

    def as_dict(self) -> dict:
        d = {"kind": self.kind, "eq": self.equation}
        if self.kind == "interaction":
            d.update(rule=list(self.key), flipped=self.flipped, fresh=self.fresh)
        else:
            d["side"] = self.side
        return d


def _occurrences(c: Configuration) -> dict[int, list[int]]:
    where: dict[int, list[int]] = {}
    for i, eq in enumerate(c.equations):
        for n in eq.names():
            where.setdefault(n, []).append(i)
    return where


def _indirection_at(c: Configuration, i: int, where, interface) -> Indirection | None:
    eq = c.equations[i]
    for side, (x, u) in enumerate(((eq.lhs, eq.rhs), (eq.rhs, eq.lhs))):
        if not isinstance(x, Name) or x.id in interface:
            continue
        others = [j for j in where[x.id] if j != i]
        if others and not contains_name(u, x.id):
            return Indirection(i, side, others[0])
    return None


def find_redexes(c: Configuration, s: InteractionSystem) -> RedexReport:
    """Classify every equation of ``c``."""
    where = _occurrences(c)
    interface = set(c.interface)
    inter, indir, dead, answers, norule = [], [], [], [], []
    for i, eq in enumerate(c.equations):
        lhs, rhs = eq.lhs, eq.rhs
        if isinstance(lhs, Agent) and isinstance(rhs, Agent):
            rule = s.rule_for(lhs.symbol, rhs.symbol)
            if rule is None:
                norule.append(i)
            else:
                inter.append(Interaction(i, rule.key, lhs.symbol != rule.alpha))
            continue
        ind = _indirection_at(c, i, where, interface)
        if ind is not None:
            indir.append(ind)
        elif (isinstance(lhs, Name) and contains_name(rhs, lhs.id)) or (
            isinstance(rhs, Name) and contains_name(lhs, rhs.id)
        ):
            dead.append(i)
        else:
            answers.append(i)
    return RedexReport(tuple(inter), tuple(indir), tuple(dead), tuple(answers), tuple(norule))


def _next_stamp(c: Configuration) -> int:
    return (max(c.stamps) if c.stamps else 0) + 1


def _stamps(c: Configuration) -> list[int]:
    return list(c.stamps) if c.stamps is not None else [0] * len(c.equations)


def apply_interaction(c: Configuration, i: int, s: InteractionSystem,
                      fresh: NameSupply | None = None) -> tuple[Configuration, StepInfo]:
    """Replace the active pair at ``i`` by the rule's equations, in place."""
    if not 0 <= i < len(c.equations):
        raise NotARedexError(f"no equation {i}")
    eq = c.equations[i]
    if not (isinstance(eq.lhs, Agent) and isinstance(eq.rhs, Agent)):
        raise NotARedexError(f"equation {i} is not an active pair")
    rule = s.rule_for(eq.lhs.symbol, eq.rhs.symbol)
    if rule is None:
        raise NoRuleError(f"no rule for pair {{{eq.lhs.symbol},{eq.rhs.symbol}}}")
    flipped = eq.lhs.symbol != rule.alpha
    a, b = (eq.rhs, eq.lhs) if flipped else (eq.lhs, eq.rhs)
    if fresh is None:
        fresh = NameSupply.above(c)
    mapping = {n: fresh() for n in dict.fromkeys(rule.names())}
    new = [Equation(t, rename(v, mapping)) for t, v in zip(a.args, rule.alpha_side)]
    new += [Equation(u, rename(w, mapping)) for u, w in zip(b.args, rule.beta_side)]
    stamps = _stamps(c)
    stamp = _next_stamp(c)
    eqs = c.equations[:i] + tuple(new) + c.equations[i + 1:]
    stamps = stamps[:i] + [stamp] * len(new) + stamps[i + 1:]
    out = Configuration(eqs, c.interface, c.labels, tuple(stamps))
    return out, StepInfo("interaction", i, rule.key, flipped, len(mapping))


def apply_indirection(c: Configuration, i: int) -> tuple[Configuration, StepInfo]:
    """Substitute the name equation at ``i`` into the other occurrence of its name."""
    if not 0 <= i < len(c.equations):
        raise NotARedexError(f"no equation {i}")
    ind = _indirection_at(c, i, _occurrences(c), set(c.interface))
    if ind is None:
        raise NotARedexError(f"equation {i} is not an indirection")
    eq = c.equations[i]
    x, u = (eq.lhs, eq.rhs) if ind.side == 0 else (eq.rhs, eq.lhs)
    target = c.equations[ind.target]
    # the other occurrence lies in exactly one side of the target
    if contains_name(target.lhs, x.id):
        target = Equation(substitute(target.lhs, x.id, u), target.rhs)
    else:
        target = Equation(target.lhs, substitute(target.rhs, x.id, u))
    eqs = list(c.equations)
    stamps = _stamps(c)
    before = c.equations[ind.target]
    eqs[ind.target] = target
    if not (isinstance(before.lhs, Agent) and isinstance(before.rhs, Agent)):
        # the target may have just become an active pair
        stamps[ind.target] = _next_stamp(c)
    del eqs[i], stamps[i]
    out = Configuration(tuple(eqs), c.interface, c.labels, tuple(stamps))
    return out, StepInfo("indirection", i, side=ind.side)


def _resolve(c: Configuration) -> tuple[Configuration, list[tuple[Configuration, StepInfo]]]:
    steps = []
    while True:
        where = _occurrences(c)
        interface = set(c.interface)
        for i in range(len(c.equations)):
            if _indirection_at(c, i, where, interface) is not None:
                c, info = apply_indirection(c, i)
                steps.append((c, info))
                break
        else:
            return c, steps


def resolve_indirections(c: Configuration) -> Configuration:
    """Apply indirections at the lowest applicable index until none applies."""
    return _resolve(c)[0]


# -- strategies -------------------------------------------------------------


@dataclass(frozen=True)
class Strategy:
    kind: str  # "fifo" | "lifo" | "index" | "random"
    seed: int | None = None

    KINDS = ("fifo", "lifo", "index", "random")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown strategy {self.kind!r}")
        if self.kind == "random" and self.seed is None:
            raise ValueError("random strategy needs a seed")

    @classmethod
    def fifo(cls):
        return cls("fifo")

    @classmethod
    def lifo(cls):
        return cls("lifo")

    @classmethod
    def by_index(cls):
        return cls("index")

    @classmethod
    def random(cls, seed: int):
        return cls("random", seed)

    def rng(self) -> random.Random | None:
        return random.Random(self.seed) if self.kind == "random" else None

    def choose(self, c: Configuration, redexes: tuple[Interaction, ...],
               rng: random.Random | None = None) -> Interaction:
        """Pick one interaction redex.

        fifo takes the least recently created equation, lifo the most recent;
        ties break on equation index.  index takes the lowest equation index,
        then rule-key order.
        """
        if self.kind == "index":
            return min(redexes, key=lambda r: (r.equation, r.key))
        if self.kind == "fifo":
            return min(redexes, key=lambda r: (c.stamp(r.equation), r.equation))
        if self.kind == "lifo":
            return max(redexes, key=lambda r: (c.stamp(r.equation), -r.equation))
        if rng is None:
            rng = self.rng()
        return redexes[rng.randrange(len(redexes))]

    def __str__(self) -> str:
        return f"random({self.seed})" if self.kind == "random" else self.kind


# -- stepping ---------------------------------------------------------------


@dataclass(frozen=True)
class StepResult:
    status: str  # "stepped" | "normal" | "stuck"
    config: Configuration
    info: StepInfo | None = None
    report: RedexReport | None = None
    indirections: tuple[tuple[Configuration, StepInfo], ...] = ()


def _terminal_status(report: RedexReport) -> str:
    if report.norule:
        return STUCK_NORULE
    if report.deadlocks:
        return STUCK_DEADLOCK
    return NORMAL


def step(c: Configuration, s: InteractionSystem, strategy: Strategy = Strategy("fifo"),
         fresh: NameSupply | None = None, rng: random.Random | None = None) -> StepResult:
    """One interaction chosen by ``strategy`` followed by eager indirection."""
    c, pending = _resolve(c)
    report = find_redexes(c, s)
    if not report.interactions:
        status = "normal" if _terminal_status(report) == NORMAL else "stuck"
        return StepResult(status, c, report=report, indirections=tuple(pending))
    chosen = strategy.choose(c, report.interactions, rng)
    if fresh is None:
        fresh = NameSupply.above(c)
    c1, info = apply_interaction(c, chosen.equation, s, fresh)
    c2, steps = _resolve(c1)
    return StepResult("stepped", c2, info, None, (*pending, (c1, info), *steps))


@dataclass
class NormalizeResult:
    final: Configuration
    status: str
    interactions: int = 0
    indirections: int = 0
    max_width: int = 0
    trace: list[tuple[Configuration, StepInfo]] | None = None
    report: RedexReport | None = None

    def summary(self) -> dict:
        return {
            "status": self.status,
            "interactions": self.interactions,
            "indirections": self.indirections,
            "maxWidth": self.max_width,
        }


def normalize(c: Configuration, s: InteractionSystem, strategy: Strategy = Strategy("fifo"),
              fuel: int = 1_000_000, trace: bool = False) -> NormalizeResult:
    """Reduce until normal, stuck, or ``fuel`` interactions have been spent."""
    rng = strategy.rng()
    fresh = NameSupply.above(c)
    log: list | None = [] if trace else None
    c, steps = _resolve(c)
    indirections = len(steps)
    if log is not None:
        log.extend(steps)
    interactions = 0
    width = 0
    while True:
        report = find_redexes(c, s)
        width = max(width, report.width)
        if not report.interactions:
            return NormalizeResult(c, _terminal_status(report), interactions, indirections, width, log, report)
        if interactions >= fuel:
            return NormalizeResult(c, FUEL_EXHAUSTED, interactions, indirections, width, log, report)
        chosen = strategy.choose(c, report.interactions, rng)
        c, info = apply_interaction(c, chosen.equation, s, fresh)
        interactions += 1
        if log is not None:
            log.append((c, info))
        c, steps = _resolve(c)
        indirections += len(steps)
        if log is not None:
            log.extend(steps)


def iter_trace_lines(trace, render=None) -> Iterator[str]:
    """Line-oriented step log; each step line is followed by the rendered configuration if ``render`` is given."""
    for k, (conf, info) in enumerate(trace, 1):
        yield info.line(k)
        if render is not None:
            yield render(conf)


def iter_trace_records(trace, render=None) -> Iterator[str]:
    """One JSON object per step."""
    interactions = indirections = 0
    for k, (conf, info) in enumerate(trace, 1):
        if info.kind == "interaction":
            interactions += 1
        else:
            indirections += 1
        rec = {"step": k, **info.as_dict(), "interactions": interactions,
               "indirections": indirections, "equations": len(conf.equations)}
        if render is not None:
            rec["config"] = render(conf)
        yield json.dumps(rec, sort_keys=True)


# -- cycles -----------------------------------------------------------------


@dataclass(frozen=True)
class CycleReport:
    found: bool
    period: int | None = None  # interactions between the two visits
    start: int | None = None  # interactions before the first visit
    state: Configuration | None = None
    keys: tuple[tuple[str, str], ...] = ()  # rule keys fired along one period


class StateCapExceeded(RuntimeError):
    pass


def detect_cycle(c: Configuration, s: InteractionSystem, strategy: Strategy = Strategy("fifo"),
                 max_states: int = 10_000) -> CycleReport:
    """Reduce with ``strategy`` until a canonical state repeats or reduction stops."""
    rng = strategy.rng()
    fresh = NameSupply.above(c)
    c = resolve_indirections(c)
    seen: dict[Configuration, int] = {}
    fired: list[tuple[str, str]] = []
    for count in itertools.count():
        key = canonicalize(c)
        if key in seen:
            first = seen[key]
            return CycleReport(True, count - first, first, key, tuple(fired[first:]))
        if len(seen) >= max_states:
            raise StateCapExceeded(f"no cycle within {max_states} states")
        seen[key] = count
        report = find_redexes(c, s)
        if not report.interactions:
            return CycleReport(False)
        chosen = strategy.choose(c, report.interactions, rng)
        c, _ = apply_interaction(c, chosen.equation, s, fresh)
        fired.append(chosen.key)
        c = resolve_indirections(c)
