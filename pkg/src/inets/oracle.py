"""Brute-force exploration of the one-interaction reduction relation.

States are canonical configurations after eager indirection, identified up
to where deadlock cycles are cut (so a state is a net, not a spelling of
one); an edge is one interaction.  On such graphs we check the one-step diamond, uniqueness of
normal forms and that every schedule spends the same number of interactions.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .core import (
    Agent,
    CanonicalizationLimitError,
    Configuration,
    Equation,
    InteractionSystem,
    Name,
    Rule,
    Signature,
    Term,
    canonicalize,
    check_rule,
    validate_configuration,
)
from .engine import (
    FUEL_EXHAUSTED,
    NORMAL,
    STUCK_DEADLOCK,
    STUCK_NORULE,
    StepInfo,
    Strategy,
    apply_interaction,
    find_redexes,
    normalize,
    resolve_indirections,
)

DEFAULT_MAX_NODES = 10_000


class InconclusiveError(RuntimeError):
    """The exploration or run was cut short, so no verdict is possible."""


@dataclass(frozen=True)
class Edge:
    source: int
    info: StepInfo
    target: int


@dataclass
class ReductionGraph:
    nodes: list[Configuration]
    edges: list[Edge]
    status: list[str | None]  # terminal status of sinks, None for nodes with redexes
    truncated: bool = False
    root: int = 0
    _succ: dict[int, list[Edge]] = field(default_factory=dict, repr=False)

    def successors(self, node: int) -> list[Edge]:
        return self._succ.get(node, [])

    def sinks(self) -> list[int]:
        return [i for i, st in enumerate(self.status) if st is not None]

    def __len__(self) -> int:
        return len(self.nodes)


def successors(c: Configuration, s: InteractionSystem) -> list[tuple[StepInfo, Configuration]]:
    """Every one-interaction successor of ``c``, eagerly resolved and canonical."""
    out = []
    for r in find_redexes(c, s).interactions:
        c1, info = apply_interaction(c, r.equation, s)
        out.append((info, canonicalize(resolve_indirections(c1), cuts=True)))
    return out


def _terminal(c: Configuration, s: InteractionSystem) -> str | None:
    report = find_redexes(c, s)
    if report.interactions:
        return None
    if report.norule:
        return STUCK_NORULE
    if report.deadlocks:
        return STUCK_DEADLOCK
    return NORMAL


def build_reduction_graph(c: Configuration, s: InteractionSystem,
                          max_nodes: int = DEFAULT_MAX_NODES) -> ReductionGraph:
    """Breadth-first closure of the reduction relation from ``c``, up to ``max_nodes`` states."""
    if max_nodes < 1:
        raise ValueError("max_nodes must be at least 1")
    root = canonicalize(resolve_indirections(c), cuts=True)
    nodes = [root]
    index = {root: 0}
    status = [_terminal(root, s)]
    edges: list[Edge] = []
    succ: dict[int, list[Edge]] = {}
    truncated = False
    queue = deque([0])
    while queue:
        u = queue.popleft()
        if status[u] is not None:
            continue
        try:
            nexts = successors(nodes[u], s)
        except CanonicalizationLimitError:
            truncated = True
            continue
        for info, v_conf in nexts:
            v = index.get(v_conf)
            if v is None:
                if len(nodes) >= max_nodes:
                    truncated = True
                    continue
                v = index[v_conf] = len(nodes)
                nodes.append(v_conf)
                status.append(_terminal(v_conf, s))
                queue.append(v)
            e = Edge(u, info, v)
            edges.append(e)
            succ.setdefault(u, []).append(e)
    return ReductionGraph(nodes, edges, status, truncated, 0, succ)


@dataclass(frozen=True)
class DiamondReport:
    holds: bool
    counterexample: tuple[int, Edge, Edge] | None = None


def check_diamond(g: ReductionGraph) -> DiamondReport:
    """Every two distinct one-step reducts must rejoin in one step each."""
    if g.truncated:
        raise InconclusiveError("reduction graph was truncated")
    for u in range(len(g.nodes)):
        out = {}
        for e in g.successors(u):
            out.setdefault(e.target, e)
        targets = sorted(out)
        for a in range(len(targets)):
            succ_a = {e.target for e in g.successors(targets[a])}
            for b in range(a + 1, len(targets)):
                if not succ_a & {e.target for e in g.successors(targets[b])}:
                    return DiamondReport(False, (u, out[targets[a]], out[targets[b]]))
    return DiamondReport(True)


@dataclass(frozen=True)
class NormalFormReport:
    unique: bool
    normal_forms: frozenset[int]
    stuck: frozenset[int]

    def __bool__(self) -> bool:
        return self.unique


def check_unique_normal_form(g: ReductionGraph) -> NormalFormReport:
    """At most one normal sink; deadlocked or rule-less sinks are reported apart."""
    if g.truncated:
        raise InconclusiveError("reduction graph was truncated")
    normal = frozenset(i for i, st in enumerate(g.status) if st == NORMAL)
    stuck = frozenset(i for i, st in enumerate(g.status) if st not in (None, NORMAL))
    return NormalFormReport(len(normal) <= 1, normal, stuck)


def sink_path_lengths(g: ReductionGraph) -> set[int]:
    """Lengths of all maximal paths from the root; the graph must be acyclic."""
    if g.truncated:
        raise InconclusiveError("reduction graph was truncated")
    memo: dict[int, frozenset[int]] = {}
    state: dict[int, int] = {}
    # iterative post-order DFS
    stack = [(g.root, False)]
    while stack:
        u, done = stack.pop()
        if done:
            state[u] = 2
            out = g.successors(u)
            memo[u] = frozenset({0}) if not out else frozenset(
                n + 1 for e in out for n in memo[e.target])
            continue
        if state.get(u) == 2:
            continue
        if state.get(u) == 1:
            raise ValueError("reduction graph has a cycle")
        state[u] = 1
        stack.append((u, True))
        for e in g.successors(u):
            if state.get(e.target) == 1:
                raise ValueError("reduction graph has a cycle")
            if state.get(e.target) != 2:
                stack.append((e.target, False))
    return set(memo[g.root])


def shortest_cycle_through(g: ReductionGraph, node: int | None = None) -> list[Edge] | None:
    """Shortest edge path from ``node`` (default: root) back to itself."""
    node = g.root if node is None else node
    prev: dict[int, Edge] = {}
    queue = deque()
    for e in g.successors(node):
        if e.target == node:
            return [e]
        if e.target not in prev:
            prev[e.target] = e
            queue.append(e.target)
    while queue:
        u = queue.popleft()
        for e in g.successors(u):
            if e.target == node:
                path = [e]
                while u != node and u in prev:
                    path.append(prev[u])
                    u = prev[u].source
                return path[::-1]
            if e.target not in prev:
                prev[e.target] = e
                queue.append(e.target)
    return None


@dataclass(frozen=True)
class InvarianceReport:
    holds: bool
    interaction_counts: frozenset[int]
    runs: tuple[tuple[str, int], ...]

    def __bool__(self) -> bool:
        return self.holds


def check_step_invariance(c: Configuration, s: InteractionSystem, trials: int = 10,
                          seed: int = 0, fuel: int = 100_000) -> InvarianceReport:
    """Normalize under fifo, lifo, index and ``trials`` random schedules and compare."""
    rng = random.Random(seed)
    strategies = [Strategy.fifo(), Strategy.lifo(), Strategy.by_index()]
    strategies += [Strategy.random(rng.randrange(2**32)) for _ in range(trials)]
    counts = set()
    finals = set()
    runs = []
    for strat in strategies:
        r = normalize(c, s, strat, fuel=fuel)
        if r.status == FUEL_EXHAUSTED:
            raise InconclusiveError(f"{strat} ran out of fuel after {fuel} interactions")
        counts.add(r.interactions)
        finals.add(canonicalize(r.final, cuts=True))
        runs.append((str(strat), r.interactions))
    return InvarianceReport(len(counts) == 1 and len(finals) == 1, frozenset(counts), tuple(runs))


# -- random instances ----------------------------------------------------------


def _forest(rng: random.Random, sig: Signature, budget: int):
    """Random agent trees; returns (roots, holes) with holes as (parent, slot) cells."""
    names = sorted(sig)
    roots: list[list] = []
    holes: list[list] = []  # mutable cells [symbol, args-list] or leaf markers
    for _ in range(budget):
        sym = rng.choice(names)
        node = [sym, [None] * sig[sym].arity]
        k = rng.randrange(len(holes) + 1)
        if k == len(holes):
            roots.append(node)
        else:
            parent, slot = holes.pop(k)
            parent[1][slot] = node
        holes.extend((node, j) for j in range(sig[sym].arity))
    return roots, holes


def generate_random_configuration(s: InteractionSystem | Signature, max_agents: int = 12,
                                  interface_size: int = 0, seed: int = 0) -> Configuration:
    """A valid random configuration with at most ``max_agents`` agents, determined by ``seed``.

    A random forest of agents is built, parity is fixed with one extra agent of
    even arity if needed, and the dangling ports plus any bare-name sides are
    wired randomly, reserving ``interface_size`` of them for the interface.
    """
    sig = s.signature if isinstance(s, InteractionSystem) else s
    if not len(sig):
        raise ValueError("empty signature")
    if max_agents < 1:
        raise ValueError("max_agents must be at least 1")
    even = sorted(a for a in sig if sig[a].arity % 2 == 0)
    if not even and interface_size % 2:
        # every agent has an even number of ports, so free ends come in pairs
        raise ValueError("an odd interface is impossible when every arity is odd")
    rng = random.Random(seed)
    for _ in range(1000):
        budget = rng.randint(1, max(1, max_agents - 1))
        roots, holes = _forest(rng, sig, budget)
        # an equation list needs roots + name sides even, and the names
        # (holes + name sides - interface) to pair up
        if (len(roots) - len(holes) + interface_size) % 2:
            sym = rng.choice(even)
            node = [sym, [None] * sig[sym].arity]
            if holes and rng.random() < 0.5:
                parent, slot = holes.pop(rng.randrange(len(holes)))
                parent[1][slot] = node
            else:
                roots.append(node)
            holes.extend((node, j) for j in range(sig[sym].arity))
        name_roots = len(roots) % 2
        while len(holes) + name_roots < interface_size:
            name_roots += 2
        if rng.random() < 0.25:
            name_roots += 2
        n_holes = len(holes) + name_roots
        # wire holes: interface first, then random pairs
        order = list(range(n_holes))
        rng.shuffle(order)
        ids = [None] * n_holes
        for pos, h in enumerate(order[:interface_size]):
            ids[h] = pos
        rest = order[interface_size:]
        for j in range(0, len(rest), 2):
            n = interface_size + j // 2
            ids[rest[j]] = ids[rest[j + 1]] = n
        for (parent, slot), n in zip(holes, ids):
            parent[1][slot] = Name(n)
        terms = [_freeze(r) for r in roots] + [Name(ids[len(holes) + j]) for j in range(name_roots)]
        rng.shuffle(terms)
        eqs = tuple(Equation(terms[j], terms[j + 1]) for j in range(0, len(terms), 2))
        c = Configuration(eqs, tuple(range(interface_size)),
                          {i: f"r{i + 1}" for i in range(interface_size)})
        if c.agent_count() <= max_agents and validate_configuration(c, sig).ok:
            return c
    raise RuntimeError("could not generate a valid configuration")


def _freeze(node) -> Term:
    if isinstance(node, Name):
        return node
    sym, args = node
    return Agent(sym, tuple(_freeze(a) for a in args))


def generate_random_system(seed: int = 0, max_agents: int = 4, max_arity: int = 3,
                           rule_budget: int = 3) -> InteractionSystem:
    """A random valid interaction system (for round-trip and validation tests)."""
    rng = random.Random(seed)
    n = rng.randint(1, max_agents)
    sig = Signature((f"a{k}", rng.randint(0, max_arity)) for k in range(n))
    names = sorted(sig)
    rules = []
    for i, a in enumerate(names):
        for b in names[i:]:
            if rng.random() < 0.4:
                continue
            rule = _random_rule(rng, sig, a, b, rule_budget)
            if rule is not None:
                rules.append(rule)
    return InteractionSystem(sig, rules)


def _random_terms(rng, sig, arity, budget):
    """``arity`` random terms with at most ``budget`` agents; holes are returned as cells."""
    names = sorted(sig)
    terms: list = [None] * arity
    cells = [(terms, j) for j in range(arity)]
    for _ in range(rng.randint(0, budget)):
        if not cells:
            break
        container, slot = cells.pop(rng.randrange(len(cells)))
        sym = rng.choice(names)
        node = [sym, [None] * sig[sym].arity]
        container[slot] = node
        cells.extend((node[1], j) for j in range(sig[sym].arity))
    return terms, cells


def _random_rule(rng, sig, a, b, budget) -> Rule | None:
    for _ in range(20):
        if a == b:
            # mirror one side so the rule is symmetric under swapping sides
            left, cells = _random_terms(rng, sig, sig[a].arity, budget)
            right = _copy_shape(left)
            rcells = _cells_like(right, cells, left)
            ids = {}
            pending = list(range(len(cells)))
            rng.shuffle(pending)
            fresh = 0
            while pending:
                p = pending.pop()
                choice = rng.random()
                if choice < 0.4 or not pending:
                    ids[("L", p)] = ids[("R", p)] = fresh
                    fresh += 1
                else:
                    q = pending.pop()
                    if choice < 0.7:
                        ids[("L", p)] = ids[("R", q)] = fresh
                        ids[("L", q)] = ids[("R", p)] = fresh + 1
                    else:
                        ids[("L", p)] = ids[("L", q)] = fresh
                        ids[("R", p)] = ids[("R", q)] = fresh + 1
                    fresh += 2
            for p, (cont, slot) in enumerate(cells):
                cont[slot] = Name(ids[("L", p)])
            for p, (cont, slot) in enumerate(rcells):
                cont[slot] = Name(ids[("R", p)])
        else:
            left, lcells = _random_terms(rng, sig, sig[a].arity, budget)
            right, rcells = _random_terms(rng, sig, sig[b].arity, budget)
            cells = lcells + rcells
            if len(cells) % 2:
                continue
            rng.shuffle(cells)
            for j, (cont, slot) in enumerate(cells):
                cont[slot] = Name(j // 2)
        rule = Rule(a, tuple(_freeze(t) for t in left), b, tuple(_freeze(t) for t in right))
        if not check_rule(rule, sig):
            return rule
    return None


def _copy_shape(terms):
    out = []
    for t in terms:
        out.append(None if t is None else [t[0], _copy_shape(t[1])])
    return out


def _cells_like(right, cells, left):
    """Cells of ``right`` at the same positions as ``cells`` in ``left``."""
    def locate(tree_l, tree_r, target):
        for j in range(len(tree_l)):
            if tree_l is target[0] and j == target[1]:
                return (tree_r, j)
            node = tree_l[j]
            if node is not None and not isinstance(node, Name):
                found = locate(node[1], tree_r[j][1], target)
                if found:
                    return found
        return None
    return [locate(left, right, c) for c in cells]
