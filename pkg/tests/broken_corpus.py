"""Deliberately broken inputs built by mutating valid texts.

Each case is ``(kind, text, site)`` where ``site`` is the offset of the first
offending token; a diagnostic must point at or before it.
"""
import random

from inets import combinator_system, render
from inets.oracle import generate_random_configuration, generate_random_system
from inets.parser import KEYWORDS, SourceDocument, tokenize


def _offsets(text):
    starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            starts.append(i + 1)
    return starts


def offset(text, line, column):
    return _offsets(text)[line - 1] + column - 1


def _tokens(text):
    return [(t, offset(text, t.line, t.column)) for t in tokenize(SourceDocument(text))]


def _name_tokens(text, signature):
    return [(t, off) for t, off in _tokens(text)
            if t.kind == "ident" and t.text not in signature and t.text not in KEYWORDS]


def mutate_names(text, signature, rng, section_start=0):
    """Yield 'once' and 'thrice' mutations of one name occurrence after ``section_start``.

    Rule names are scoped per rule and the renderer prints one rule (or one
    configuration) per line, so a name's scope is its line.
    """
    names = [(t, off) for t, off in _name_tokens(text, signature) if off >= section_start]
    if not names:
        return
    t, off = rng.choice(names)
    scope = [(u, o) for u, o in names if u.line == t.line]
    new = text[:off] + "zz_fresh" + text[off + len(t.text):]
    # the fresh name and the surviving original both occur once now
    first = min(o for u, o in scope if u.text == t.text)
    yield "name-once", new, first
    others = sorted({u.text for u, _ in scope if u.text != t.text})
    if others:
        other = rng.choice(others)
        new = text[:off] + other + text[off + len(t.text):]
        first_other = min(o for u, o in scope if u.text == other)
        yield "name-thrice", new, max(first, first_other)


def mutate_arity(text, signature, rng, section_start=0):
    nullary = sorted(a for a in signature if signature[a].arity == 0)
    toks = _tokens(text)
    spots = [(toks[i][0], toks[i + 1][1], toks[i + 2][0].kind in (")", "]")) for i in range(len(toks) - 2)
             if toks[i][1] >= section_start and toks[i][0].kind == "ident"
             and toks[i][0].text in signature and toks[i + 1][0].kind in ("(", "[")]
    if not spots or not nullary:
        return
    t, paren, empty = rng.choice(spots)
    start = offset(text, t.line, t.column)
    extra = nullary[0] if empty else nullary[0] + ", "
    yield "arity", text[:paren + 1] + extra + text[paren + 1:], start


def corpus(n_random=150, seed=0):
    rng = random.Random(seed)
    S = combinator_system()
    out = []
    system_text = render(S)
    rule_start = system_text.index("rule")

    # rule-level mutations on the combinator system
    for _ in range(20):
        out += [(k, t, s, "system") for k, t, s in mutate_names(system_text, S.signature, rng, rule_start)]
        out += [(k, t, s, "system") for k, t, s in mutate_arity(system_text, S.signature, rng, rule_start)]

    # duplicate pair rules
    lines = system_text.splitlines()
    for i in range(1, len(lines)):
        dup = "\n".join(lines + [lines[i]]) + "\n"
        out.append(("duplicate-rule", dup, len("\n".join(lines)) + 1, "system"))
    # same pair spelled the other way round
    out.append(("duplicate-rule", system_text + "rule gam[eps, eps] >< eps[];\n", len(system_text), "system"))

    # asymmetric self-pair rules
    asym = [
        "agents c/3;\nrule c[x, y, z] >< c[y, z, x];\n",
        "agents a/2, b/1;\nrule a[b(x), y] >< a[x, y];\n",
        "agents a/2, e/0;\nrule a[x, x] >< a[e, e];\n",
        "agents a/1, b/1;\nrule a[b(x)] >< a[x];\n",
    ]
    # permutation rules c[x1..xn] >< c[x_p(1)..x_p(n)] are symmetric iff p is an involution
    for n in range(3, 8):
        for _ in range(8):
            p = list(range(n))
            while all(p[p[i]] == i for i in range(n)):
                rng.shuffle(p)
            xs = [f"x{i}" for i in range(n)]
            asym.append(f"agents c/{n};\nrule c[{', '.join(xs)}] >< c[{', '.join(xs[j] for j in p)}];\n")
    for text in asym:
        out.append(("asymmetric-self-pair", text, text.index("rule"), "system"))

    # configuration-level mutations
    for i in range(n_random):
        c = generate_random_configuration(S, 12, i % 3, 1000 + i)
        text = render(c, S.signature)
        out += [(k, t, s, "config") for k, t, s in mutate_names(text, S.signature, rng)]
        out += [(k, t, s, "config") for k, t, s in mutate_arity(text, S.signature, rng)]

    # rules of random systems
    for i in range(n_random):
        s = generate_random_system(i)
        text = render(s)
        if "rule" not in text:
            continue
        start = text.index("rule")
        rules = text[start:].splitlines()
        out.append(("duplicate-rule", text + rng.choice(rules) + "\n", len(text), "system"))
        out += [(k, t, st, "system") for k, t, st in mutate_names(text, s.signature, rng, start)]
        out += [(k, t, st, "system") for k, t, st in mutate_arity(text, s.signature, rng, start)]
    return out
