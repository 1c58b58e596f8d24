"""Parser for the indicator rule language.

Grammar (see docs/rule-grammar.md for the EBNF):

    rule <id> "<title>"
    [continuity <days>]
    [since <YYYY-MM-DD>]
    when <condition>

Conditions combine the five leaf predicates with AND/OR/NOT and
parentheses; OR binds loosest, then AND, then NOT.
"""

from __future__ import annotations

import re
from datetime import date

from ..ehr.codes import CodeDictionary, UnknownCodeSet
from .rules import (
    And,
    Condition,
    HasDiagnosis,
    IndicatorRule,
    MissingCoprescription,
    MissingMonitoring,
    Not,
    ObservationAbove,
    OnMedication,
    Or,
    DEFAULT_CONTINUITY_DAYS,
    DEFAULT_SINCE,
)


class RuleSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>"[^"\n]*")
  | (?P<number>\d{4}-\d{2}-\d{2}|\d+(?:\.\d+)?)
  | (?P<word>[A-Za-z_][A-Za-z0-9_/%^.*-]*)
  | (?P<punct>[(),])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"rule", "continuity", "since", "when", "AND", "OR", "NOT"}
_LEAF_NAMES = {
    "ON_MEDICATION",
    "HAS_DIAGNOSIS",
    "OBSERVATION_ABOVE",
    "MISSING_COPRESCRIPTION",
    "MISSING_MONITORING",
}


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"<{self.kind} {self.text!r} @{self.line}:{self.col}>"


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise RuleSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup or "ws"
        value = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.cur
        self.i += 1
        return tok

    def fail(self, message: str) -> RuleSyntaxError:
        return RuleSyntaxError(message, self.cur.line, self.cur.col)

    def expect_word(self, word: str) -> _Token:
        if self.cur.kind != "word" or self.cur.text != word:
            raise self.fail(f"expected {word!r}, found {self.cur.text!r}")
        return self.advance()

    def expect_punct(self, ch: str) -> _Token:
        if self.cur.kind != "punct" or self.cur.text != ch:
            raise self.fail(f"expected {ch!r}, found {self.cur.text or 'end of input'!r}")
        return self.advance()

    def ident(self) -> str:
        if self.cur.kind != "word" or self.cur.text in _KEYWORDS:
            raise self.fail(f"expected identifier, found {self.cur.text!r}")
        return self.advance().text

    def integer(self) -> int:
        if self.cur.kind != "number" or not self.cur.text.isdigit():
            raise self.fail(f"expected integer, found {self.cur.text!r}")
        return int(self.advance().text)

    def number(self) -> float:
        if self.cur.kind != "number" or "-" in self.cur.text:
            raise self.fail(f"expected number, found {self.cur.text!r}")
        return float(self.advance().text)

    def date_literal(self) -> date:
        if self.cur.kind != "number" or "-" not in self.cur.text:
            raise self.fail(f"expected date (YYYY-MM-DD), found {self.cur.text!r}")
        tok = self.advance()
        try:
            return date.fromisoformat(tok.text)
        except ValueError:
            raise RuleSyntaxError(f"invalid date {tok.text!r}", tok.line, tok.col)

    # condition ::= or_expr
    def condition(self) -> Condition:
        return self.or_expr()

    def or_expr(self) -> Condition:
        terms = [self.and_expr()]
        while self.cur.kind == "word" and self.cur.text == "OR":
            self.advance()
            terms.append(self.and_expr())
        return terms[0] if len(terms) == 1 else Or(tuple(terms))

    def and_expr(self) -> Condition:
        terms = [self.unary()]
        while self.cur.kind == "word" and self.cur.text == "AND":
            self.advance()
            terms.append(self.unary())
        return terms[0] if len(terms) == 1 else And(tuple(terms))

    def unary(self) -> Condition:
        if self.cur.kind == "word" and self.cur.text == "NOT":
            self.advance()
            return Not(self.unary())
        if self.cur.kind == "punct" and self.cur.text == "(":
            self.advance()
            inner = self.condition()
            self.expect_punct(")")
            return inner
        return self.leaf()

    def leaf(self) -> Condition:
        if self.cur.kind != "word" or self.cur.text not in _LEAF_NAMES:
            raise self.fail(
                f"expected a predicate ({', '.join(sorted(_LEAF_NAMES))}), "
                f"found {self.cur.text or 'end of input'!r}"
            )
        name = self.advance().text
        self.expect_punct("(")
        code_set = self.ident()
        if name == "ON_MEDICATION":
            node: Condition = OnMedication(code_set)
        elif name == "HAS_DIAGNOSIS":
            node = HasDiagnosis(code_set)
        elif name == "OBSERVATION_ABOVE":
            self.expect_punct(",")
            threshold = self.number()
            unit = self.ident() if self.cur.kind == "word" else ""
            node = ObservationAbove(code_set, threshold, unit)
        elif name == "MISSING_COPRESCRIPTION":
            self.expect_punct(",")
            node = MissingCoprescription(code_set, self.integer())
        else:
            self.expect_punct(",")
            node = MissingMonitoring(code_set, self.integer())
        self.expect_punct(")")
        return node

    def rule(self) -> IndicatorRule:
        self.expect_word("rule")
        rule_id = self.ident()
        if self.cur.kind != "string":
            raise self.fail("expected quoted rule title")
        title = self.advance().text[1:-1]
        continuity = DEFAULT_CONTINUITY_DAYS
        since = DEFAULT_SINCE
        while self.cur.kind == "word" and self.cur.text in ("continuity", "since"):
            keyword = self.advance().text
            if keyword == "continuity":
                continuity = self.integer()
            else:
                since = self.date_literal()
        self.expect_word("when")
        cond = self.condition()
        if self.cur.kind != "eof":
            raise self.fail(f"unexpected trailing input {self.cur.text!r}")
        return IndicatorRule(
            id=rule_id,
            title=title,
            condition=cond,
            continuity_min_days=continuity,
            since=since,
        )


def parse_rule(text: str, codes: CodeDictionary | None = None) -> IndicatorRule:
    """Parse one rule source; optionally resolve code sets against a dictionary.

    Raises RuleSyntaxError with line/column on malformed input and
    UnknownCodeSet when a referenced set is missing or empty.
    """
    rule = _Parser(_tokenize(text)).rule()
    if codes is not None:
        from .rules import condition_code_sets

        for name in sorted(condition_code_sets(rule.condition)):
            codes.resolve_set(name)  # raises UnknownCodeSet
    return rule


def load_rule_file(path, codes: CodeDictionary | None = None) -> IndicatorRule:
    with open(path, encoding="utf-8") as f:
        return parse_rule(f.read(), codes)


def load_rules_dir(path, codes: CodeDictionary | None = None) -> list[IndicatorRule]:
    import os

    rules = []
    for name in sorted(os.listdir(path)):
        if name.endswith(".rule"):
            rules.append(load_rule_file(os.path.join(path, name), codes))
    return rules


def load_shipped_rules(codes: CodeDictionary | None = None) -> list[IndicatorRule]:
    """The eight indicator definitions shipped as package assets."""
    from importlib import resources

    rules = []
    root = resources.files("medreview.data").joinpath("rules")
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".rule"):
            rules.append(parse_rule(entry.read_text(), codes))
    return rules
