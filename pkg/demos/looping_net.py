"""The smallest net that reduces to itself.

<del(eps, x) = gam(x, eps)> is a duplicator facing a constructor, each holding
an eraser on one auxiliary port and sharing the other wire.  Duplicating the
constructor and erasing the debris rebuilds the same net, so reduction never
stops.  This script walks one round of it and then lets the cycle detector
and the reduction graph confirm the period.
"""
from inets import Strategy, combinator_system, detect_cycle, normalize, parse_configuration, render
from inets.engine import iter_trace_lines
from inets.oracle import build_reduction_graph, shortest_cycle_through

S = combinator_system()
net = parse_configuration("<del(eps, x) = gam(x, eps)>", S)
show = lambda c: render(c, S.signature)  # noqa: E731

print("start:", show(net))
print()

# Four interactions under a fixed random schedule, with every indirection shown.
run = normalize(net, S, Strategy.random(18), fuel=4, trace=True)
for line in iter_trace_lines(run.trace, show):
    print(line)
print()
print("after four interactions:", show(run.final))

rep = detect_cycle(net, S, Strategy.random(18))
print(f"cycle found: period {rep.period}, entered after {rep.start} interactions")
print("rules fired along the cycle:", ", ".join("/".join(k) for k in rep.keys))

# fifo is fair but enters the loop one step late
fifo = detect_cycle(net, S)
print(f"under fifo: period {fifo.period}, entered after {fifo.start} interaction(s)")

# The exhaustive view: every schedule at once.  Some schedules keep growing
# the net, so the graph is capped, but the short cycle is already there.
g = build_reduction_graph(net, S, max_nodes=100)
cycle = shortest_cycle_through(g)
print(f"reduction graph: {len(g)} states (capped), shortest cycle through the start has {len(cycle)} edges")

capped = normalize(net, S, fuel=1000)
print("with fuel 1000:", capped.summary())
