"""A user-defined system: unary addition.

Numbers are chains of S ending in Z.  add(y, r) waits on its principal port
for the first summand; r is where the sum appears.
"""
from inets import normalize, parse_document, render
from inets.cli import to_dot

source = """
agents Z/0, S/1, add/2;
rule add[x, x] >< Z[];                # 0 + y = y
rule add[x, S(r)] >< S[add(x, r)];    # (n+1) + y = (n + y) + 1

# 3 + 2
<add(S(S(Z)), sum) = S(S(S(Z)))> interface sum;
"""

system, net = parse_document(source)
print(render(system))
print("input: ", render(net, system.signature))
r = normalize(net, system, trace=True)
print("output:", render(r.final, system.signature))
print(r.summary())
print()
print("the input as a DOT graph:")
print(to_dot(net, system.signature))
