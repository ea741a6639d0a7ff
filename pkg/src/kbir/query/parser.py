"""Tokenizer and recursive-descent parser for the query language.

Grammar sketch (terminals quoted):

    program     = { import-line } { rule } query
    rule        = NAME "(" var { "," var } ")" ":-" body "."
    query       = [ "select" var { "," var } "from" ] body "?"
    body        = goal { "," goal }
    goal        = disjunction | atom
    disjunction = "{" body { "|" body } "}"
    atom        = term "=" term
                | NAME "(" member { "," member } ")"
    member      = term [ ":" NAME ]
    term        = var | NAME | STRING
    var         = "$" NAME

Members of one call either all carry roles (an association lookup with
exactly two members) or none do (a positional rule call).  ``/* ... */``
comments may appear anywhere; ``import "..." as tok`` lines are parsed and
ignored with a warning.  All reported positions are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..errors import (
    DuplicateRuleError,
    QuerySyntaxError,
    UnknownSelectVariableError,
)
from .ast import (
    AssociationAtom,
    Constant,
    Disjunction,
    EqualityAtom,
    Goal,
    Program,
    Rule,
    RuleAtom,
    Term,
    Variable,
    goal_variables,
)

_NAME_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_NAME_CHARS = _NAME_START | set("0123456789-")
_VAR_CHARS = _NAME_START | set("0123456789")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    line = 1
    column = 1
    length = len(text)

    def advance(n: int) -> None:
        nonlocal pos, line, column
        for _ in range(n):
            if text[pos] == "\n":
                line += 1
                column = 1
            else:
                column += 1
            pos += 1

    while pos < length:
        ch = text[pos]
        if ch in " \t\r\n":
            advance(1)
            continue
        if text.startswith("/*", pos):
            end = text.find("*/", pos + 2)
            if end < 0:
                raise QuerySyntaxError("unterminated comment", line=line, column=column)
            advance(end + 2 - pos)
            continue
        start_line, start_column = line, column
        if ch == "$":
            advance(1)
            begin = pos
            while pos < length and text[pos] in _VAR_CHARS:
                advance(1)
            if pos == begin:
                raise QuerySyntaxError(
                    "expected a variable name after '$'",
                    line=start_line,
                    column=start_column,
                )
            tokens.append(Token("VAR", text[begin:pos], start_line, start_column))
            continue
        if ch in _NAME_START:
            begin = pos
            while pos < length and text[pos] in _NAME_CHARS:
                advance(1)
            tokens.append(Token("NAME", text[begin:pos], start_line, start_column))
            continue
        if ch == '"':
            advance(1)
            begin = pos
            parts: List[str] = []
            while pos < length and text[pos] != '"':
                if text[pos] == "\\" and pos + 1 < length and text[pos + 1] in '"\\':
                    parts.append(text[begin:pos])
                    advance(1)
                    begin = pos
                advance(1)
            if pos >= length:
                raise QuerySyntaxError(
                    "unterminated string", line=start_line, column=start_column
                )
            parts.append(text[begin:pos])
            advance(1)
            tokens.append(Token("STRING", "".join(parts), start_line, start_column))
            continue
        if text.startswith(":-", pos):
            advance(2)
            tokens.append(Token("IMPLIES", ":-", start_line, start_column))
            continue
        simple = {
            ":": "COLON",
            "?": "QUESTION",
            ".": "DOT",
            "=": "EQUALS",
            ",": "COMMA",
            "|": "PIPE",
            "{": "LBRACE",
            "}": "RBRACE",
            "(": "LPAREN",
            ")": "RPAREN",
        }.get(ch)
        if simple:
            advance(1)
            tokens.append(Token(simple, ch, start_line, start_column))
            continue
        raise QuerySyntaxError(
            f"unexpected character {ch!r}", line=start_line, column=start_column
        )
    tokens.append(Token("EOF", "", line, column))
    return tokens


class _Parser:
    def __init__(self, text: str, *, source: str = "query"):
        self.tokens = tokenize(text)
        self.index = 0
        self.source = source
        self.warnings: List[str] = []

    # -- token helpers ----------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def take(self) -> Token:
        token = self.tokens[self.index]
        if token.kind != "EOF":
            self.index += 1
        return token

    def expect(self, kind: str, what: str) -> Token:
        token = self.peek()
        if token.kind != kind:
            self.fail(f"expected {what}", token)
        return self.take()

    def fail(self, message: str, token: Optional[Token] = None) -> None:
        token = token or self.peek()
        shown = repr(token.text) if token.kind != "EOF" else "end of input"
        raise QuerySyntaxError(
            f"{message}, found {shown} (in {self.source})",
            line=token.line,
            column=token.column,
        )

    # -- productions ------------------------------------------------------

    def skip_imports(self) -> None:
        while self.peek().kind == "NAME" and self.peek().text == "import":
            token = self.take()
            target = self.expect("STRING", "a quoted import target")
            alias = self.peek()
            if alias.kind != "NAME" or alias.text != "as":
                self.fail("expected 'as' in import directive", alias)
            self.take()
            self.expect("NAME", "an import alias")
            self.warnings.append(
                f"line {token.line}: import of {target.text!r} ignored; "
                "external modules are not supported"
            )

    def parse_term(self) -> Term:
        token = self.peek()
        if token.kind == "VAR":
            self.take()
            return Variable(token.text)
        if token.kind == "NAME":
            self.take()
            return Constant(token.text)
        if token.kind == "STRING":
            self.take()
            return Constant(token.text, quoted=True)
        self.fail("expected a term")
        raise AssertionError("unreachable")

    def parse_goal(self) -> List[Goal]:
        token = self.peek()
        if token.kind == "LBRACE":
            return [self.parse_disjunction()]
        term = self.parse_term()
        after = self.peek()
        if after.kind == "EQUALS":
            self.take()
            rhs = self.parse_term()
            return [EqualityAtom(term, rhs, line=token.line, column=token.column)]
        if after.kind == "LPAREN" and isinstance(term, Constant) and not term.quoted:
            return [self.parse_call(term.text, token)]
        self.fail("expected '=' or '(' after the leading term", after)
        raise AssertionError("unreachable")

    def parse_disjunction(self) -> Goal:
        opener = self.expect("LBRACE", "'{'")
        branches: List[Tuple[Goal, ...]] = [tuple(self.parse_body())]
        while self.peek().kind == "PIPE":
            self.take()
            branches.append(tuple(self.parse_body()))
        self.expect("RBRACE", "'}' closing the alternative")
        if len(branches) == 1:
            # Plain grouping; splice the goals instead of keeping a
            # one-branch alternative around.
            raise _Splice(branches[0])
        return Disjunction(tuple(branches), line=opener.line, column=opener.column)

    def parse_call(self, name: str, opener: Token) -> Goal:
        self.expect("LPAREN", "'('")
        members: List[Tuple[Term, Optional[str]]] = []
        while True:
            term = self.parse_term()
            role: Optional[str] = None
            if self.peek().kind == "COLON":
                self.take()
                role = self.expect("NAME", "a role name after ':'").text
            if members and (members[0][1] is None) != (role is None):
                self.fail(
                    "members of one predicate must either all carry ': role' "
                    "tags or none"
                )
            members.append((term, role))
            if self.peek().kind == "COMMA":
                self.take()
                continue
            break
        self.expect("RPAREN", "')' closing the call")
        if members[0][1] is not None:
            if len(members) != 2:
                self.fail_at(
                    opener,
                    f"association lookup {name!r} needs exactly two role-tagged "
                    f"members, got {len(members)}",
                )
            if members[0][1] == members[1][1]:
                self.fail_at(
                    opener,
                    f"association lookup {name!r} repeats role {members[0][1]!r}",
                )
            pairs = ((members[0][0], members[0][1]), (members[1][0], members[1][1]))
            return AssociationAtom(name, pairs, line=opener.line, column=opener.column)
        return RuleAtom(
            name,
            tuple(term for term, _role in members),
            line=opener.line,
            column=opener.column,
        )

    def fail_at(self, token: Token, message: str) -> None:
        raise QuerySyntaxError(
            f"{message} (in {self.source})", line=token.line, column=token.column
        )

    def parse_body(self) -> List[Goal]:
        goals: List[Goal] = []
        while True:
            try:
                goals.extend(self.parse_goal())
            except _Splice as splice:
                goals.extend(splice.goals)
            if self.peek().kind == "COMMA":
                self.take()
                continue
            return goals

    def parse_rule(self) -> Rule:
        name_token = self.expect("NAME", "a rule name")
        self.expect("LPAREN", "'(' after the rule name")
        params: List[str] = []
        while True:
            var = self.expect("VAR", "a parameter variable")
            params.append(var.text)
            if self.peek().kind == "COMMA":
                self.take()
                continue
            break
        self.expect("RPAREN", "')' closing the parameter list")
        self.expect("IMPLIES", "':-' introducing the rule body")
        body = self.parse_body()
        self.expect("DOT", "'.' terminating the rule")
        return Rule(
            name_token.text,
            tuple(params),
            tuple(body),
            line=name_token.line,
            column=name_token.column,
        )

    def parse_rules(self) -> Dict[str, Rule]:
        rules: Dict[str, Rule] = {}
        self.skip_imports()
        while self.peek().kind != "EOF":
            rule = self.parse_rule()
            if rule.name in rules:
                raise DuplicateRuleError(
                    f"rule {rule.name!r} is defined twice (in {self.source})",
                    line=rule.line,
                    column=rule.column,
                )
            rules[rule.name] = rule
            self.skip_imports()
        return rules

    def parse_query(self) -> Tuple[Tuple[Goal, ...], Optional[Tuple[str, ...]]]:
        self.skip_imports()
        select: Optional[Tuple[str, ...]] = None
        if (
            self.peek().kind == "NAME"
            and self.peek().text == "select"
            and self.peek(1).kind == "VAR"
        ):
            self.take()
            chosen: List[str] = []
            while True:
                chosen.append(self.expect("VAR", "a select variable").text)
                if self.peek().kind == "COMMA":
                    self.take()
                    continue
                break
            from_token = self.peek()
            if from_token.kind != "NAME" or from_token.text != "from":
                self.fail("expected 'from' after the select list", from_token)
            self.take()
            select = tuple(chosen)
        body = self.parse_body()
        self.expect("QUESTION", "'?' terminating the query")
        trailing = self.peek()
        if trailing.kind != "EOF":
            self.fail("unexpected input after the query", trailing)
        return tuple(body), select


class _Splice(Exception):
    """Internal: a braced group with a single branch dissolves into goals."""

    def __init__(self, goals: Tuple[Goal, ...]):
        self.goals = goals


def parse_rules(text: str, *, source: str = "rules") -> Tuple[Dict[str, Rule], List[str]]:
    """Parse a rule file; returns the rules by name plus warnings."""
    parser = _Parser(text, source=source)
    rules = parser.parse_rules()
    return rules, parser.warnings


def parse_program(
    query_text: str,
    rules_text: str = "",
    *,
    include_prelude: bool = True,
) -> Program:
    """Parse a query and optional extra rules into an executable program.

    The predefined prelude is in scope unless disabled; rules given here
    shadow prelude rules of the same name.  The select clause defaults to
    every variable of the query body in first-appearance order.
    """
    from .prelude import prelude_rules

    rules: Dict[str, Rule] = dict(prelude_rules()) if include_prelude else {}
    warnings: List[str] = []
    if rules_text.strip():
        user_rules, rule_warnings = parse_rules(rules_text)
        rules.update(user_rules)
        warnings.extend(rule_warnings)

    parser = _Parser(query_text, source="query")
    body, select = parser.parse_query()
    warnings.extend(parser.warnings)

    available = goal_variables(body)
    if select is None:
        select = tuple(available)
    else:
        for name in select:
            if name not in available:
                raise UnknownSelectVariableError(
                    f"select variable ${name} does not occur in the query body"
                )
    return Program(rules=rules, query=body, select=select, warnings=warnings)
