"""Interaction combinators and the erasing/duplication rule schemas."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .core import (
    Agent,
    AgentType,
    Configuration,
    Equation,
    InteractionSystem,
    Name,
    Rule,
    Signature,
    Term,
)


@dataclass(frozen=True)
class CombinatorNames:
    eps: AgentType = AgentType("eps", 0)
    dup: AgentType = AgentType("del", 2)
    con: AgentType = AgentType("gam", 2)

    def __post_init__(self):
        if (self.eps.arity, self.dup.arity, self.con.arity) != (0, 2, 2):
            raise ValueError("combinator arities must be 0, 2, 2")

    @property
    def signature(self) -> Signature:
        return Signature([self.eps, self.dup, self.con])


COMBINATORS = CombinatorNames()
EPS, DEL, GAM = "eps", "del", "gam"


def _agent_type(s: Signature, a: AgentType | str) -> AgentType:
    name = a.name if isinstance(a, AgentType) else a
    if name not in s:
        raise ValueError(f"agent {name!r} is not in the signature")
    return s[name]


def instantiate_erasing(s: Signature, eps: AgentType | str) -> list[Rule]:
    """``eps >< a[eps, ..., eps]`` for every agent ``a`` of ``s``."""
    eps = _agent_type(s, eps)
    if eps.arity != 0:
        raise ValueError(f"eraser {eps.name!r} must have arity 0, not {eps.arity}")
    e = Agent(eps.name)
    return [Rule(eps.name, (), a.name, (e,) * a.arity) for a in s.values()]


def instantiate_duplication(s: Signature, dup: AgentType | str) -> list[Rule]:
    """``dup[a(x1..xn), a(y1..yn)] >< a[dup(x1,y1), ..., dup(xn,yn)]`` for every ``a != dup``."""
    dup = _agent_type(s, dup)
    if dup.arity != 2:
        raise ValueError(f"duplicator {dup.name!r} must have arity 2, not {dup.arity}")
    rules = []
    for a in s.values():
        if a.name == dup.name:
            continue
        n = a.arity
        xs = [Name(k) for k in range(n)]
        ys = [Name(n + k) for k in range(n)]
        labels = {k: f"x{k + 1}" for k in range(n)} | {n + k: f"y{k + 1}" for k in range(n)}
        rules.append(Rule(
            dup.name, (Agent(a.name, tuple(xs)), Agent(a.name, tuple(ys))),
            a.name, tuple(Agent(dup.name, (x, y)) for x, y in zip(xs, ys)),
            labels,
        ))
    return rules


@lru_cache(maxsize=None)
def combinator_system() -> InteractionSystem:
    """The three-agent system; the eps/del pair is governed by erasing."""
    s = COMBINATORS.signature
    x, y = Name(0), Name(1)
    labels = {0: "x", 1: "y"}
    rules = [
        Rule(GAM, (x, y), GAM, (y, x), labels),
        Rule(DEL, (x, y), DEL, (x, y), labels),
        *instantiate_erasing(s, EPS),
        *(r for r in instantiate_duplication(s, DEL) if r.key != (DEL, EPS)),
    ]
    return InteractionSystem(s, rules)


# -- handy nets ---------------------------------------------------------------


def complete_tree(depth: int, node: str = GAM, leaf: str = EPS) -> Term:
    """Complete binary tree of ``node`` agents with ``depth`` levels and ``leaf`` leaves."""
    if depth == 0:
        return Agent(leaf)
    sub = complete_tree(depth - 1, node, leaf)
    return Agent(node, (sub, sub))


def binary_trees(internal: int, node: str = GAM, leaf: str = EPS) -> Iterator[Term]:
    """Every binary tree shape with exactly ``internal`` ``node`` agents."""
    if internal == 0:
        yield Agent(leaf)
        return
    for k in range(internal):
        for left in binary_trees(k, node, leaf):
            for right in binary_trees(internal - 1 - k, node, leaf):
                yield Agent(node, (left, right))


def erasure(tree: Term) -> Configuration:
    """``<eps = tree>``."""
    return Configuration((Equation(Agent(EPS), tree),))


def duplication(tree: Term) -> Configuration:
    """``<del(r1, r2) = tree> interface r1, r2;`` (``tree`` must be closed)."""
    return Configuration(
        (Equation(Agent(DEL, (Name(0), Name(1))), tree),),
        (0, 1),
        {0: "r1", 1: "r2"},
    )
