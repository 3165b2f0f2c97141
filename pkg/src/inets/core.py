"""Terms, configurations, rules and interaction systems.

A net is held in its textual (calculus) form: a multiset of equations between
terms, where every name occurs exactly twice.  Names are opaque integers; the
surface spelling of a name lives in a side table (``labels``) that takes no
part in equality.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union


# -- terms ------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Name:
    id: int

    @property
    def names(self) -> tuple[int, ...]:
        return (self.id,)

    def __repr__(self) -> str:
        return f"Name({self.id})"


@dataclass(frozen=True, slots=True)
class Agent:
    """An agent application ``symbol(args...)``; the head is the principal port.

    ``names`` caches the ids of the names below this node, left to right.
    """

    symbol: str
    args: tuple["Term", ...] = ()
    names: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) == 1:
            names = self.args[0].names
        else:
            names = tuple(n for a in self.args for n in a.names)
        object.__setattr__(self, "names", names)

    def __repr__(self) -> str:
        if not self.args:
            return self.symbol
        return f"{self.symbol}({', '.join(map(repr, self.args))})"


Term = Union[Agent, Name]


def iter_names(term: Term) -> tuple[int, ...]:
    """Ids of the names occurring in ``term``, left to right."""
    return term.names


def iter_agents(term: Term) -> Iterator[Agent]:
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Agent):
            yield t
            stack.extend(reversed(t.args))


def agent_count(term: Term) -> int:
    return sum(1 for _ in iter_agents(term))


def rename(term: Term, mapping: Mapping[int, int]) -> Term:
    """Rename names in ``term``; ids missing from ``mapping`` are kept."""
    if isinstance(term, Name):
        new = mapping.get(term.id)
        return term if new is None else Name(new)
    if not term.names:
        return term
    return Agent(term.symbol, tuple(rename(a, mapping) for a in term.args))


def substitute(term: Term, name: int, value: Term) -> Term:
    """Replace the occurrence of ``name`` in ``term`` by ``value``.

    Only the spine leading to the occurrence is rebuilt.
    """
    path = []
    t = term
    while isinstance(t, Agent):
        for k, a in enumerate(t.args):
            if name in a.names:
                path.append((t, k))
                t = a
                break
        else:
            return term
    if t.id != name:
        return term
    out = value
    for parent, k in reversed(path):
        out = Agent(parent.symbol, parent.args[:k] + (out,) + parent.args[k + 1:])
    return out


def contains_name(term: Term, name: int) -> bool:
    return name in term.names


# -- signatures -------------------------------------------------------------


@dataclass(frozen=True)
class AgentType:
    name: str
    arity: int

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError(f"agent {self.name!r} has negative arity {self.arity}")


class Signature(Mapping[str, AgentType]):
    """Finite set of agent types, looked up by name."""

    def __init__(self, agents: Iterable[AgentType | tuple[str, int]] = ()):
        table: dict[str, AgentType] = {}
        for a in agents:
            if not isinstance(a, AgentType):
                a = AgentType(*a)
            if a.name in table:
                raise ValueError(f"agent {a.name!r} declared twice")
            table[a.name] = a
        self._agents = table

    def __getitem__(self, name: str) -> AgentType:
        return self._agents[name]

    def __iter__(self):
        return iter(self._agents)

    def __len__(self) -> int:
        return len(self._agents)

    def arity(self, name: str) -> int:
        return self._agents[name].arity

    def __eq__(self, other) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        return self._agents == other._agents

    def __hash__(self) -> int:
        return hash(frozenset(self._agents.values()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{a.name}/{a.arity}" for a in self._agents.values())
        return f"Signature({inner})"


# -- equations and configurations ------------------------------------------


@dataclass(frozen=True, slots=True)
class Equation:
    lhs: Term
    rhs: Term

    def flipped(self) -> "Equation":
        return Equation(self.rhs, self.lhs)

    def names(self) -> tuple[int, ...]:
        return self.lhs.names + self.rhs.names

    def __repr__(self) -> str:
        return f"{self.lhs!r} = {self.rhs!r}"


@dataclass(frozen=True)
class Configuration:
    """A multiset of equations plus an ordered interface of free names.

    ``labels`` maps name ids to their surface spelling and ``stamps`` records
    when each equation was last created or rewritten (used by the fifo/lifo
    schedulers).  Neither participates in equality or hashing.
    """

    equations: tuple[Equation, ...] = ()
    interface: tuple[int, ...] = ()
    labels: Mapping[int, str] = field(default_factory=dict, compare=False, repr=False)
    stamps: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))
        object.__setattr__(self, "interface", tuple(self.interface))
        if self.stamps is not None and len(self.stamps) != len(self.equations):
            raise ValueError("stamps must parallel equations")

    def __len__(self) -> int:
        return len(self.equations)

    def stamp(self, i: int) -> int:
        return 0 if self.stamps is None else self.stamps[i]

    def name_ids(self) -> set[int]:
        ids = set(self.interface)
        for eq in self.equations:
            ids.update(eq.names())
        return ids

    def max_name(self) -> int:
        return max(self.name_ids(), default=-1)

    def agent_count(self) -> int:
        return sum(agent_count(e.lhs) + agent_count(e.rhs) for e in self.equations)

    def label(self, name: int) -> str:
        return self.labels.get(name, f"x{name}")


def name_occurrences(c: Configuration) -> dict[int, int]:
    """Count every name occurrence, interface slots included."""
    counts: Counter[int] = Counter(c.interface)
    for eq in c.equations:
        counts.update(eq.names())
    return dict(counts)


# -- rules and systems ------------------------------------------------------


def pair_key(a: str, b: str) -> tuple[str, str]:
    """Key of the unordered agent pair {a, b}."""
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Rule:
    """``alpha[alpha_side] >< beta[beta_side]``."""

    alpha: str
    alpha_side: tuple[Term, ...]
    beta: str
    beta_side: tuple[Term, ...]
    labels: Mapping[int, str] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha_side", tuple(self.alpha_side))
        object.__setattr__(self, "beta_side", tuple(self.beta_side))

    @property
    def key(self) -> tuple[str, str]:
        return pair_key(self.alpha, self.beta)

    def names(self) -> Iterator[int]:
        for t in self.alpha_side + self.beta_side:
            yield from t.names

    def swapped(self) -> "Rule":
        return Rule(self.beta, self.beta_side, self.alpha, self.alpha_side, self.labels)

    def oriented(self) -> "Rule":
        """Same rule with the lexicographically smaller agent on the alpha side."""
        return self.swapped() if self.alpha > self.beta else self

    def shape(self) -> tuple:
        """Structural key invariant under renaming of rule names."""
        numbering: dict[int, int] = {}
        out: list = [self.alpha]
        for t in self.alpha_side:
            _serialize(t, numbering, out)
        out.append(self.beta)
        for t in self.beta_side:
            _serialize(t, numbering, out)
        return tuple(out)

    def __repr__(self) -> str:
        left = ", ".join(map(repr, self.alpha_side))
        right = ", ".join(map(repr, self.beta_side))
        return f"{self.alpha}[{left}] >< {self.beta}[{right}]"


def rules_equivalent(a: Rule, b: Rule) -> bool:
    """True iff the rules are identical up to renaming (and, for distinct agents, orientation)."""
    if a.key != b.key:
        return False
    if a.alpha == a.beta:
        return a.shape() == b.shape() or a.shape() == b.swapped().shape()
    return a.oriented().shape() == b.oriented().shape()


def check_rule(rule: Rule, signature: Mapping[str, AgentType]) -> list[str]:
    """Return human-readable problems with ``rule``; empty when it is well formed."""
    problems = []
    for head, side in ((rule.alpha, rule.alpha_side), (rule.beta, rule.beta_side)):
        if head not in signature:
            problems.append(f"undeclared agent {head!r} in rule head")
        elif len(side) != signature[head].arity:
            problems.append(
                f"{head} has arity {signature[head].arity} but the rule gives {len(side)} terms"
            )
        for t in side:
            for a in iter_agents(t):
                if a.symbol not in signature:
                    problems.append(f"undeclared agent {a.symbol!r}")
                elif len(a.args) != signature[a.symbol].arity:
                    problems.append(
                        f"{a.symbol} applied to {len(a.args)} arguments, arity {signature[a.symbol].arity}"
                    )
    counts = Counter(rule.names())
    for n, k in sorted(counts.items()):
        if k != 2:
            label = rule.labels.get(n, f"x{n}")
            problems.append(f"name {label!r} occurs {k} time{'s' if k != 1 else ''} in rule {rule!r}, expected 2")
    if rule.alpha == rule.beta and not problems:
        if rule.shape() != rule.swapped().shape():
            problems.append(f"self-pair rule {rule!r} is not symmetric under swapping its sides")
    return problems


class InvalidSystemError(ValueError):
    def __init__(self, problems: Sequence[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


class InteractionSystem:
    """A signature together with at most one rule per unordered agent pair."""

    def __init__(self, signature: Signature | Iterable, rules: Iterable[Rule] = ()):
        if not isinstance(signature, Signature):
            signature = Signature(signature)
        self.signature = signature
        table: dict[tuple[str, str], Rule] = {}
        problems = []
        for rule in rules:
            problems.extend(check_rule(rule, signature))
            if rule.key in table:
                problems.append(f"duplicate rule for pair {{{rule.key[0]},{rule.key[1]}}}")
            table[rule.key] = rule
        if problems:
            raise InvalidSystemError(problems)
        self.rules: dict[tuple[str, str], Rule] = dict(sorted(table.items()))

    def rule_for(self, a: str, b: str) -> Rule | None:
        return self.rules.get(pair_key(a, b))

    def __eq__(self, other) -> bool:
        if not isinstance(other, InteractionSystem):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.rules.keys() == other.rules.keys()
            and all(rules_equivalent(r, other.rules[k]) for k, r in self.rules.items())
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"InteractionSystem({self.signature!r}, {len(self.rules)} rules)"


# -- validation -------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # "arity" | "unknown-agent" | "occurrence" | "duplicate-interface"
    message: str
    name: int | None = None
    equation: int | None = None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_configuration(c: Configuration, signature: Mapping[str, AgentType]) -> ValidationReport:
    if isinstance(signature, InteractionSystem):
        signature = signature.signature
    out: list[Violation] = []
    for i, eq in enumerate(c.equations):
        for side in (eq.lhs, eq.rhs):
            for a in iter_agents(side):
                if a.symbol not in signature:
                    out.append(Violation("unknown-agent", f"undeclared agent {a.symbol!r}", equation=i))
                elif len(a.args) != signature[a.symbol].arity:
                    out.append(Violation(
                        "arity",
                        f"{a.symbol} applied to {len(a.args)} argument{'s' if len(a.args) != 1 else ''}, "
                        f"arity {signature[a.symbol].arity}",
                        equation=i,
                    ))
    seen: set[int] = set()
    for n in c.interface:
        if n in seen:
            out.append(Violation("duplicate-interface", f"interface name {c.label(n)!r} listed twice", name=n))
        seen.add(n)
    for n, k in sorted(name_occurrences(c).items()):
        if k != 2:
            where = " (counting its interface slot)" if n in seen else ""
            out.append(Violation("occurrence", f"name {c.label(n)!r} occurs {k} time{'s' if k != 1 else ''}{where}, expected 2", name=n))
    return ValidationReport(tuple(out))


# -- canonical forms --------------------------------------------------------


class CanonicalizationLimitError(ValueError):
    """Raised when a configuration is larger than the canonicalization cap."""


DEFAULT_MAX_AGENTS = 64

_AGENT, _NAME = 0, 1


def _serialize(term: Term, numbering: dict[int, int], out: list) -> None:
    # Preorder token stream; unseen names are numbered on first use.
    if isinstance(term, Name):
        n = numbering.get(term.id)
        if n is None:
            n = numbering[term.id] = len(numbering)
        out.append((_NAME, n))
        return
    out.append((_AGENT, term.symbol))
    for a in term.args:
        _serialize(a, numbering, out)


def _components(c: Configuration) -> list[list[int]]:
    parent = list(range(len(c.equations)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    first: dict[int, int] = {}
    for i, eq in enumerate(c.equations):
        for n in eq.names():
            j = first.setdefault(n, i)
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(len(c.equations)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _traverse(eqs: Sequence[Equation], start: int, flip: bool,
              numbering: dict[int, int], where: Mapping[int, list[int]]) -> tuple[list, list[Equation]]:
    """Emit a connected component from a fixed start, following open names in numbering order."""
    numbering = dict(numbering)
    emitted: set[int] = set()
    tokens: list = []
    ordered: list[Equation] = []

    def emit(i: int, eq: Equation) -> None:
        emitted.add(i)
        _serialize(eq.lhs, numbering, tokens)
        _serialize(eq.rhs, numbering, tokens)
        ordered.append(eq)

    first = eqs[start]
    emit(start, first.flipped() if flip else first)
    while len(emitted) < len(eqs):
        best = None
        for n, num in numbering.items():
            if best is not None and num >= best[0]:
                continue
            pending = [i for i in where.get(n, ()) if i not in emitted]
            if pending:
                best = (num, pending[0])
        assert best is not None, "component is not connected"
        i = best[1]
        eq = eqs[i]
        # both orientations from the same numbering state; they never tie
        na, nb = dict(numbering), dict(numbering)
        ta, tb = [], []
        _serialize(eq.lhs, na, ta)
        _serialize(eq.rhs, na, ta)
        _serialize(eq.rhs, nb, tb)
        _serialize(eq.lhs, nb, tb)
        emit(i, eq if ta <= tb else eq.flipped())
    return tokens, ordered


def cycle_cuts(eq: Equation) -> list[Equation]:
    """Every way of writing the vicious circle of a deadlocked equation ``x = t``.

    In ``x = t`` with ``x`` inside ``t``, the agents on the spine from the root
    of ``t`` down to ``x`` form a cycle of principal-to-auxiliary wires.  Cutting
    that cycle at any of its agents gives the same net.  Equations that are not
    deadlocks come back unchanged as the only entry.
    """
    x, t = eq.lhs, eq.rhs
    if not (isinstance(x, Name) and isinstance(t, Agent) and x.id in t.names):
        x, t = eq.rhs, eq.lhs
        if not (isinstance(x, Name) and isinstance(t, Agent) and x.id in t.names):
            return [eq]
    spine: list[tuple[Agent, int]] = []
    node: Term = t
    while isinstance(node, Agent):
        for k, a in enumerate(node.args):
            if x.id in a.names:
                spine.append((node, k))
                node = a
                break

    def segment(i: int, j: int, fill: Term) -> Term:
        # spine agents i..j with the last one's spine slot holding ``fill``
        out = fill
        for agent, k in reversed(spine[i:j + 1]):
            out = Agent(agent.symbol, agent.args[:k] + (out,) + agent.args[k + 1:])
        return out

    m = len(spine) - 1
    cuts = [Equation(x, t)]
    for k in range(1, m + 1):
        cuts.append(Equation(x, segment(k, m, segment(0, k - 1, x))))
    return cuts


def _canonical_component(eqs: Sequence[Equation], base: Mapping[int, int]) -> tuple[list, list[Equation]]:
    where: dict[int, list[int]] = {}
    for i, eq in enumerate(eqs):
        for n in eq.names():
            where.setdefault(n, []).append(i)
    anchored = [(base[n], i) for i, eq in enumerate(eqs) for n in eq.names() if n in base]
    starts = [min(anchored)[1]] if anchored else range(len(eqs))
    # the emitted stream begins with the start equation, so only starts whose
    # own serialization is least can produce the minimum
    heads = []
    for s in starts:
        for flip in (False, True):
            eq = eqs[s].flipped() if flip else eqs[s]
            toks: list = []
            numbering = dict(base)
            _serialize(eq.lhs, numbering, toks)
            _serialize(eq.rhs, numbering, toks)
            heads.append((toks, s, flip))
    least = min(h[0] for h in heads)
    best = None
    for toks, s, flip in heads:
        if toks == least:
            cand = _traverse(eqs, s, flip, base, where)
            if best is None or cand[0] < best[0]:
                best = cand
    return best


def canonicalize(c: Configuration, max_agents: int = DEFAULT_MAX_AGENTS, *, cuts: bool = False) -> Configuration:
    """Return the canonical representative of the alpha-equivalence class of ``c``.

    Interface names are renumbered by position (0..k-1) and keep their
    labels; internal names are renumbered in first-use order.  Port order makes
    each connected component rigid once its first equation and orientation are
    fixed, so trying every start per component yields an exact canonical form.

    With ``cuts=True`` every cut point of each deadlock cycle is tried as
    well, so two configurations get the same form iff they denote the same
    net (see :func:`cycle_cuts`).
    """
    if c.agent_count() > max_agents:
        raise CanonicalizationLimitError(
            f"configuration has {c.agent_count()} agents, canonicalization cap is {max_agents}"
        )
    base = {n: i for i, n in enumerate(c.interface)}
    pieces = []
    for comp in _components(c):
        eqs = [c.equations[i] for i in comp]
        if not cuts:
            pieces.append(_canonical_component(eqs, base))
            continue
        best = None
        for variant in itertools.product(*(cycle_cuts(e) for e in eqs)):
            cand = _canonical_component(variant, base)
            if best is None or cand[0] < best[0]:
                best = cand
        pieces.append(best)
    pieces.sort(key=lambda p: p[0])

    mapping = dict(base)
    equations = []
    for _, ordered in pieces:
        for eq in ordered:
            for n in eq.names():
                if n not in mapping:
                    mapping[n] = len(mapping)
            equations.append(Equation(rename(eq.lhs, mapping), rename(eq.rhs, mapping)))
    labels = {i: c.labels[n] for i, n in enumerate(c.interface) if n in c.labels}
    return Configuration(tuple(equations), tuple(range(len(c.interface))), labels)


def alpha_equivalent(a: Configuration, b: Configuration, max_agents: int = DEFAULT_MAX_AGENTS) -> bool:
    """Equality up to renaming internal names, reordering and flipping equations.

    Interface names correspond by position.
    """
    if len(a.equations) != len(b.equations) or len(a.interface) != len(b.interface):
        return False
    return canonicalize(a, max_agents) == canonicalize(b, max_agents)


def net_equivalent(a: Configuration, b: Configuration, max_agents: int = DEFAULT_MAX_AGENTS) -> bool:
    """Alpha-equivalence that also ignores where deadlock cycles are cut."""
    if len(a.equations) != len(b.equations) or len(a.interface) != len(b.interface):
        return False
    return canonicalize(a, max_agents, cuts=True) == canonicalize(b, max_agents, cuts=True)


def canonical_term(term: Term) -> tuple:
    """Token stream of ``term`` with names numbered by first use."""
    out: list = []
    _serialize(term, {}, out)
    return tuple(out)
