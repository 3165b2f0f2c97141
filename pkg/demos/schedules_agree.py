"""Order does not matter: four schedulers, one answer.

Random small nets are reduced under fifo, lifo, lowest-index and ten random
schedules.  Every terminating one spends the same number of interactions and
ends in the same net.  The exhaustive reduction graph makes the stronger
one-step diamond claim checkable as well.
"""
from collections import Counter

from inets import combinator_system, render
from inets.oracle import (
    build_reduction_graph,
    check_diamond,
    check_step_invariance,
    check_unique_normal_form,
    generate_random_configuration,
)

S = combinator_system()

c = generate_random_configuration(S, max_agents=10, interface_size=2, seed=11)
print("sample:", render(c, S.signature))
rep = check_step_invariance(c, S, trials=10, seed=1)
for name, n in rep.runs:
    print(f"  {name:>16}: {n} interactions")
print("all agree:", rep.holds)
print()

verdicts = Counter()
for seed in range(200):
    c = generate_random_configuration(S, 12, seed % 3, seed)
    g = build_reduction_graph(c, S, max_nodes=200)
    if g.truncated:
        verdicts["too big to explore"] += 1
        continue
    ok = check_diamond(g).holds and check_unique_normal_form(g).unique
    verdicts["diamond holds" if ok else "COUNTEREXAMPLE"] += 1
print("200 random nets:", dict(verdicts))
