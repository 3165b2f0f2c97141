"""Text format for interaction systems and configurations.

Grammar::

    system    := "agents" agentdecl ("," agentdecl)* ";" rule*
    agentdecl := IDENT "/" NAT
    rule      := "rule" IDENT "[" terms? "]" "><" IDENT "[" terms? "]" ";"
    config    := "<" (eq ("," eq)*)? ">" ("interface" IDENT ("," IDENT)* ";")?
    eq        := term "=" term
    term      := IDENT ("(" terms? ")")?
    terms     := term ("," term)*

``#`` starts a comment.  An identifier is an agent iff the signature declares
it.  The aliases ``⊠ ⟨ ⟩ ε δ γ`` are accepted on input and never printed.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

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
    check_rule,
    iter_names,
    validate_configuration,
)

KEYWORDS = frozenset({"agents", "rule", "interface"})
ALIASES = {"ε": "eps", "δ": "del", "γ": "gam"}
_PUNCT_ALIASES = {"⊠": "><", "⟨": "<", "⟩": ">"}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*|[εδγ])
  | (?P<nat>[0-9]+)
  | (?P<punct>><|[⊠⟨⟩,;/\[\]()<>=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class SourceDocument:
    text: str
    origin: str = "<string>"

    @classmethod
    def from_path(cls, path) -> "SourceDocument":
        p = Path(path)
        return cls(p.read_text(encoding="utf-8"), str(p))


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str
    expected: tuple[str, ...] = ()
    origin: str = "<string>"

    def __str__(self) -> str:
        s = f"{self.origin}:{self.line}:{self.column}: {self.message}"
        if self.expected:
            s += f" (expected {' or '.join(self.expected)})"
        return s


class ParseError(Exception):
    """Raised with every diagnostic collected for a document."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(map(str, self.diagnostics)))

    @property
    def line(self) -> int:
        return self.diagnostics[0].line

    @property
    def column(self) -> int:
        return self.diagnostics[0].column


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "nat" | punctuation text | "eof"
    text: str
    line: int
    column: int


class _Abort(Exception):
    pass


def tokenize(doc: SourceDocument) -> list[Token]:
    tokens = []
    line, col, pos = 1, 1, 0
    text = doc.text
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError([Diagnostic(line, col, f"unexpected character {text[pos]!r}", origin=doc.origin)])
        kind = m.lastgroup
        s = m.group()
        if kind == "ident":
            tokens.append(Token("ident", ALIASES.get(s, s), line, col))
        elif kind == "nat":
            tokens.append(Token("nat", s, line, col))
        elif kind == "punct":
            s = _PUNCT_ALIASES.get(s, s)
            tokens.append(Token(s, s, line, col))
        if kind == "nl":
            line, col = line + 1, 1
        else:
            col += len(m.group())
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, doc: SourceDocument):
        self.doc = doc
        self.tokens = tokenize(doc)
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def fail(self, tok: Token, message: str, expected=()) -> _Abort:
        self.diagnostics.append(Diagnostic(tok.line, tok.column, message, tuple(expected), self.doc.origin))
        return _Abort()

    def note(self, tok: Token, message: str) -> None:
        self.diagnostics.append(Diagnostic(tok.line, tok.column, message, (), self.doc.origin))

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            want = repr(text or kind)
            got = self.tok.text or "end of input"
            raise self.fail(self.tok, f"unexpected {got!r}", [want])
        t = self.tok
        self.pos += 1
        return t

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            t = self.tok
            self.pos += 1
            return t
        return None

    def ident(self) -> Token:
        t = self.expect("ident")
        if t.text in KEYWORDS:
            self.pos -= 1
            raise self.fail(t, f"keyword {t.text!r} used as identifier", ["identifier"])
        return t

    def sync(self, kind: str) -> None:
        while not self.at("eof") and not self.at(kind):
            self.pos += 1
        self.accept(kind)

    # grammar
    def signature(self) -> Signature:
        self.expect("ident", "agents")
        decls = []
        seen = set()
        while True:
            name = self.ident()
            self.expect("/")
            arity = self.expect("nat")
            if name.text in seen:
                self.note(name, f"agent {name.text!r} declared twice")
            else:
                seen.add(name.text)
                decls.append(AgentType(name.text, int(arity.text)))
            if not self.accept(","):
                break
        self.expect(";")
        return Signature(decls)

    def term(self, sig: Mapping[str, AgentType], names: dict[str, int], where: dict[int, Token]) -> Term:
        t = self.ident()
        if self.at("("):
            self.pos += 1
            args = [] if self.at(")") else self.terms(sig, names, where)
            self.expect(")")
            if t.text not in sig:
                self.note(t, f"undeclared agent {t.text!r}")
            elif len(args) != sig[t.text].arity:
                self.note(t, f"{t.text} applied to {len(args)} argument{'s' if len(args) != 1 else ''}, arity {sig[t.text].arity}")
            return Agent(t.text, tuple(args))
        if t.text in sig:
            if sig[t.text].arity != 0:
                self.note(t, f"{t.text} applied to 0 arguments, arity {sig[t.text].arity}")
            return Agent(t.text, ())
        if t.text not in names:
            names[t.text] = len(names)
            where[names[t.text]] = t
        return Name(names[t.text])

    def terms(self, sig, names, where) -> list[Term]:
        out = [self.term(sig, names, where)]
        while self.accept(","):
            out.append(self.term(sig, names, where))
        return out

    def rule(self, sig: Signature) -> Rule | None:
        n_before = len(self.diagnostics)
        start = self.expect("ident", "rule")
        names: dict[str, int] = {}
        where: dict[int, Token] = {}
        heads = []
        sides = []
        for i in range(2):
            head = self.ident()
            if head.text not in sig:
                self.note(head, f"undeclared agent {head.text!r} in rule head")
            self.expect("[")
            side = [] if self.at("]") else self.terms(sig, names, where)
            self.expect("]")
            if head.text in sig and len(side) != sig[head.text].arity:
                self.note(head, f"{head.text} has arity {sig[head.text].arity} but the rule gives {len(side)} terms")
            heads.append(head)
            sides.append(side)
            if i == 0:
                self.expect("><")
        self.expect(";")
        if len(self.diagnostics) > n_before:
            return None
        labels = {v: k for k, v in names.items()}
        rule = Rule(heads[0].text, tuple(sides[0]), heads[1].text, tuple(sides[1]), labels)
        counts: dict[int, int] = {}
        for n in rule.names():
            counts[n] = counts.get(n, 0) + 1
        for n, k in counts.items():
            if k != 2:
                self.note(where[n], f"name {labels[n]!r} occurs {k} time{'s' if k != 1 else ''} in rule {heads[0].text} >< {heads[1].text}, expected 2")
        if any(k != 2 for k in counts.values()):
            return None
        for problem in check_rule(rule, sig):
            self.note(start, problem)
        return rule

    def system(self) -> InteractionSystem | None:
        try:
            sig = self.signature()
        except _Abort:
            return None
        rules: dict[tuple[str, str], Rule] = {}
        while self.at("ident", "rule"):
            start = self.tok
            n_before = len(self.diagnostics)
            try:
                r = self.rule(sig)
            except _Abort:
                self.sync(";")
                continue
            if r is None or len(self.diagnostics) > n_before:
                continue
            if r.key in rules:
                self.note(start, f"duplicate rule for pair {{{r.key[0]},{r.key[1]}}}")
                continue
            rules[r.key] = r
        if self.diagnostics:
            return None
        return InteractionSystem(sig, rules.values())

    def configuration(self, sig: Signature) -> Configuration | None:
        names: dict[str, int] = {}
        where: dict[int, Token] = {}
        eqs = []
        open_tok = self.expect("<")
        if not self.at(">"):
            while True:
                lhs = self.term(sig, names, where)
                self.expect("=")
                rhs = self.term(sig, names, where)
                eqs.append(Equation(lhs, rhs))
                if not self.accept(","):
                    break
        self.expect(">")
        interface = []
        iface_tok: dict[int, Token] = {}
        repeated: dict[int, Token] = {}
        if self.accept("ident", "interface"):
            while True:
                t = self.ident()
                if t.text in sig:
                    self.note(t, f"agent {t.text!r} cannot be an interface name")
                else:
                    if t.text not in names:
                        names[t.text] = len(names)
                        where[names[t.text]] = t
                    n = names[t.text]
                    if n in iface_tok:
                        repeated.setdefault(n, t)
                    iface_tok.setdefault(n, t)
                    interface.append(n)
                if not self.accept(","):
                    break
            self.expect(";")
        labels = {v: k for k, v in names.items()}
        c = Configuration(tuple(eqs), tuple(interface), labels)
        if self.diagnostics:
            return None
        for v in validate_configuration(c, sig).violations:
            if v.kind == "duplicate-interface":
                tok = repeated[v.name]
            else:
                tok = where.get(v.name, open_tok) if v.name is not None else open_tok
            self.note(tok, v.message)
        return None if self.diagnostics else c

    def end(self) -> None:
        if not self.at("eof"):
            raise self.fail(self.tok, f"unexpected {self.tok.text!r}", ["end of input"])

    def raise_if_failed(self) -> None:
        if self.diagnostics:
            raise ParseError(sorted(self.diagnostics, key=lambda d: (d.line, d.column)))


def _doc(source) -> SourceDocument:
    return source if isinstance(source, SourceDocument) else SourceDocument(source)


def _sig(s) -> Signature:
    return s.signature if isinstance(s, InteractionSystem) else s


def parse_system(source) -> InteractionSystem:
    p = _Parser(_doc(source))
    system = p.system()
    try:
        p.end()
    except _Abort:
        pass
    p.raise_if_failed()
    return system


def parse_configuration(source, signature) -> Configuration:
    p = _Parser(_doc(source))
    try:
        c = p.configuration(_sig(signature))
        p.end()
    except _Abort:
        c = None
    p.raise_if_failed()
    return c


def parse_document(source) -> tuple[InteractionSystem, Configuration | None]:
    """Parse a system optionally followed by one configuration."""
    p = _Parser(_doc(source))
    system = p.system()
    config = None
    if system is not None:
        try:
            if p.at("<"):
                config = p.configuration(system.signature)
            p.end()
        except _Abort:
            pass
    else:
        try:
            p.end()
        except _Abort:
            pass
    p.raise_if_failed()
    return system, config


# -- printing ---------------------------------------------------------------


def _spellings(ids, labels: Mapping[int, str], reserved) -> dict[int, str]:
    taken = set(reserved) | KEYWORDS
    out = {}
    # keep surface labels first so generated names avoid them
    pending = []
    for n in ids:
        lab = labels.get(n)
        if lab and _IDENT.fullmatch(lab) and lab not in taken:
            out[n] = lab
            taken.add(lab)
        else:
            pending.append(n)
    for n in pending:
        cand, k = f"x{n}", 0
        while cand in taken:
            k += 1
            cand = f"x{n}_{k}"
        out[n] = cand
        taken.add(cand)
    return out


def _render_term(t: Term, spell: Mapping[int, str]) -> str:
    if isinstance(t, Name):
        return spell[t.id]
    if not t.args:
        return t.symbol
    return f"{t.symbol}({', '.join(_render_term(a, spell) for a in t.args)})"


def _ordered_ids(terms) -> list[int]:
    seen: dict[int, None] = {}
    for t in terms:
        for n in iter_names(t):
            seen.setdefault(n)
    return list(seen)


def render_rule(rule: Rule, signature=()) -> str:
    spell = _spellings(_ordered_ids(rule.alpha_side + rule.beta_side), rule.labels, signature)
    left = ", ".join(_render_term(t, spell) for t in rule.alpha_side)
    right = ", ".join(_render_term(t, spell) for t in rule.beta_side)
    return f"rule {rule.alpha}[{left}] >< {rule.beta}[{right}];"


def render_configuration(c: Configuration, signature=()) -> str:
    terms = [t for eq in c.equations for t in (eq.lhs, eq.rhs)]
    ids = list(dict.fromkeys(list(c.interface) + _ordered_ids(terms)))
    spell = _spellings(ids, c.labels, _sig(signature) if signature else ())
    body = ", ".join(f"{_render_term(e.lhs, spell)} = {_render_term(e.rhs, spell)}" for e in c.equations)
    text = f"<{body}>"
    if c.interface:
        text += f" interface {', '.join(spell[n] for n in c.interface)};"
    return text


def render_system(s: InteractionSystem) -> str:
    decls = ", ".join(f"{a.name}/{a.arity}" for a in s.signature.values())
    lines = [f"agents {decls};"]
    for key in sorted(s.rules):
        lines.append(render_rule(s.rules[key], s.signature))
    return "\n".join(lines) + "\n"


def render(x, signature=()) -> str:
    """Deterministic text for a system or configuration that parses back."""
    if isinstance(x, InteractionSystem):
        return render_system(x)
    if isinstance(x, Configuration):
        return render_configuration(x, signature)
    if isinstance(x, Rule):
        return render_rule(x, signature)
    raise TypeError(f"cannot render {type(x).__name__}")
