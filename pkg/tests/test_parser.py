import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inets import (
    Configuration,
    ParseError,
    SourceDocument,
    alpha_equivalent,
    combinator_system,
    parse_configuration,
    parse_document,
    parse_system,
    render,
)
from inets.oracle import generate_random_system

from conftest import configurations

COMBINATOR_TEXT = """
agents eps/0, del/2, gam/2;
rule gam[x,y] >< gam[y,x];
rule del[x,y] >< del[x,y];
rule eps[] >< eps[];
rule del[gam(x1,x2),gam(y1,y2)] >< gam[del(x1,y1),del(x2,y2)];
rule eps[] >< gam[eps,eps];
rule eps[] >< del[eps,eps];
"""


def test_combinator_text_matches_builtin():
    assert parse_system(COMBINATOR_TEXT) == combinator_system()


def test_smallest_system():
    s = parse_system("agents a/0; rule a[] >< a[];")
    assert list(s.signature) == ["a"] and len(s.rules) == 1


def test_linearity_error_lists_both_names():
    with pytest.raises(ParseError) as e:
        parse_system("agents a/1; rule a[x] >< a[y];")
    text = str(e.value)
    assert "'x' occurs 1 time" in text and "'y' occurs 1 time" in text


def test_looping_net(S):
    c = parse_configuration("<del(eps,x) = gam(x,eps)>", S)
    assert len(c.equations) == 1 and c.agent_count() == 4


def test_unicode_aliases(S):
    c = parse_configuration("⟨δ(ε, x) = γ(x, ε)⟩", S)
    assert alpha_equivalent(c, parse_configuration("<del(eps,x) = gam(x,eps)>", S))
    assert parse_system("agents a/0; rule a[] ⊠ a[];").rule_for("a", "a") is not None


def test_empty_and_interface(S):
    assert parse_configuration("<>", S) == Configuration()
    c = parse_configuration("<r = gam(eps,eps)> interface r;", S)
    assert len(c.interface) == 1 and c.label(c.interface[0]) == "r"


def test_nullary_with_parentheses(S):
    a = parse_configuration("<eps() = eps>", S)
    assert alpha_equivalent(a, parse_configuration("<eps = eps>", S))


def test_comments(S):
    c = parse_configuration("# the looping's net\n<del(eps,x) = # inline\n gam(x,eps)>", S)
    assert c.agent_count() == 4


def test_document_with_configuration():
    s, c = parse_document(COMBINATOR_TEXT + "<eps = gam(eps, eps)>")
    assert s == combinator_system() and len(c.equations) == 1


def test_render_empty():
    assert render(Configuration()) == "<>"


def test_render_is_deterministic(S, looping):
    assert render(looping, S.signature) == render(looping, S.signature)
    assert render(S) == render(parse_system(render(S)))


def test_generated_names_avoid_agents_and_keywords(S):
    c = parse_configuration("<r = gam(eps,eps)> interface r;", S)
    c = Configuration(c.equations, c.interface, {c.interface[0]: "gam"})
    back = parse_configuration(render(c, S.signature), S)
    assert alpha_equivalent(back, c)


class TestDiagnostics:
    def test_position_of_syntax_error(self, S):
        with pytest.raises(ParseError) as e:
            parse_configuration("<eps = gam(eps,\n  eps eps)>", S)
        assert (e.value.line, e.value.column) == (2, 7)
        assert e.value.diagnostics[0].expected

    def test_unexpected_character(self, S):
        with pytest.raises(ParseError) as e:
            parse_configuration("<eps = $>", S)
        assert (e.value.line, e.value.column) == (1, 8)

    def test_origin_in_message(self, tmp_path, S):
        p = tmp_path / "bad.icfg"
        p.write_text("<x = eps>")
        with pytest.raises(ParseError, match="bad.icfg:1:2"):
            parse_configuration(SourceDocument.from_path(p), S)

    def test_all_rule_errors_reported(self):
        with pytest.raises(ParseError) as e:
            parse_system("agents a/1;\nrule a[x] >< a[x x];\nrule a[p] >< a[q];")
        lines = {d.line for d in e.value.diagnostics}
        assert lines == {2, 3}


@settings(max_examples=300, deadline=None)
@given(configurations())
def test_configuration_round_trip(c):
    S = combinator_system()
    assert alpha_equivalent(parse_configuration(render(c, S.signature), S), c)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_system_round_trip(seed):
    s = generate_random_system(seed)
    assert parse_system(render(s)) == s


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet="<>=(),;# \nabc xyz eps gam del interface agents rule []/012", max_size=40))
def test_garbage_either_fails_cleanly_or_validates(text):
    S = combinator_system()
    try:
        c = parse_configuration(text, S)
    except ParseError as e:
        for d in e.diagnostics:
            assert d.line >= 1 and d.column >= 1
        return
    from inets import validate_configuration
    assert validate_configuration(c, S).ok
