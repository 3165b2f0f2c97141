"""Erasing and duplicating trees of constructors.

An eraser meeting a constructor spawns two erasers; a tree with d levels of
constructors therefore needs 2^(d+1) - 1 interactions to disappear.  A
duplicator pushed into a closed tree comes out the other side as two copies.
"""
from inets import alpha_equivalent, combinator_system, normalize, render
from inets.combinators import binary_trees, complete_tree, duplication, erasure
from inets.core import Configuration, Equation, Name

S = combinator_system()

for depth in range(1, 6):
    r = normalize(erasure(complete_tree(depth)), S)
    print(f"depth {depth}: {r.interactions:3d} interactions (2^{depth + 1} - 1 = {2 ** (depth + 1) - 1}), "
          f"final {render(r.final)}, widest moment {r.max_width} redexes")

print()
tree = complete_tree(2)
r = normalize(duplication(tree), S)
print("copying", render(Configuration((Equation(Name(0), tree),), (0,), {0: "t"}), S.signature))
print("gives  ", render(r.final, S.signature), f"after {r.interactions} interactions")

# every tree shape with up to seven constructors, checked copy by copy
checked = 0
for internal in range(8):
    for t in binary_trees(internal):
        out = normalize(duplication(t), S).final
        want = Configuration((Equation(Name(0), t),), (0,))
        for n in out.interface:
            (eq,) = [e for e in out.equations if Name(n) in (e.lhs, e.rhs)]
            assert alpha_equivalent(Configuration((eq,), (n,)), want)
        checked += 1
print(f"{checked} tree shapes duplicated faithfully")
