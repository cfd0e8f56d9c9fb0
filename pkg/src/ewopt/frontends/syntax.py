"""Shared surface syntax: formulas, linear and table constraints, rule bodies."""

from __future__ import annotations

import re
from fractions import Fraction

from ..logics import And, Atom, Const, Extensional, Formula, Implies, Linear, Not, Or, Rule, normalize_relation


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
BAR_ATOM = r"\|[^|\s](?:[^|]*[^|\s])?\|"
ATOM_RE = re.compile(rf"(?:{BAR_ATOM}|{IDENT})")
REL_RE = r"<=|>=|!=|==|<>|≤|≥|≠|<|>|="

_TOKEN = re.compile(
    rf"\s*(?:(?P<bar>{BAR_ATOM})|(?P<op>->|=>|<->|/\\|\\/|&&|\|\||[()!~&|])|(?P<word>{IDENT}))"
)


def strip_comment(line: str, marks: str) -> str:
    for m in marks:
        pos = line.find(m)
        if pos >= 0:
            line = line[:pos]
    return line.strip()


def _tokenize_formula(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input in formula at {text[pos:]!r}")
        tok = m.group("bar") or m.group("op") or m.group("word")
        tokens.append(tok)
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


_NEG = {"not", "!", "~"}
_AND = {"and", "&", "&&", "/\\"}
_OR = {"or", "|", "||", "\\/"}
_IMP = {"->", "=>"}


def parse_formula(text: str) -> Formula:
    """Infix propositional formula.

    Precedence from loose to tight: ``->`` (right associative), ``|``, ``&``,
    ``not``.  Atoms are identifiers or ``|...|`` names such as ``|x!=0|``;
    ``true`` and ``false`` are constants.
    """
    tokens = _tokenize_formula(text)
    if not tokens:
        raise ParseError("empty formula")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    def implication():
        lhs = disjunction()
        if peek() in _IMP:
            take()
            return Implies(lhs, implication())
        if peek() == "<->":
            take()
            rhs = implication()
            return And((Implies(lhs, rhs), Implies(rhs, lhs)))
        return lhs

    def disjunction():
        args = [conjunction()]
        while peek() in _OR:
            take()
            args.append(conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction():
        args = [negation()]
        while peek() in _AND:
            take()
            args.append(negation())
        return args[0] if len(args) == 1 else And(tuple(args))

    def negation():
        if peek() in _NEG:
            take()
            return Not(negation())
        return primary()

    def primary():
        tok = peek()
        if tok is None:
            raise ParseError("formula ends unexpectedly")
        take()
        if tok == "(":
            f = implication()
            if peek() != ")":
                raise ParseError("missing ')' in formula")
            take()
            return f
        if tok in ("true", "false"):
            return Const(tok == "true")
        if ATOM_RE.fullmatch(tok) and tok not in _NEG | _AND | _OR:
            return Atom(tok)
        raise ParseError(f"unexpected token {tok!r} in formula")

    f = implication()
    if pos != len(tokens):
        raise ParseError(f"trailing input in formula: {' '.join(tokens[pos:])!r}")
    return f


_TERM = re.compile(rf"\s*([+-])?\s*(?:(\d+)\s*\*?\s*({IDENT})|({IDENT})|(\d+))\s*")


def parse_linear_expression(text: str) -> tuple[dict[str, int], int]:
    """``2*x - y + 3`` as ``({"x": 2, "y": -1}, 3)``; coefficients must be integers."""
    text = text.strip()
    if not text:
        raise ParseError("empty expression")
    coeffs: dict[str, int] = {}
    const = 0
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (not first and not m.group(1)):
            raise ParseError(f"cannot read linear expression at {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        if m.group(3):
            coeffs[m.group(3)] = coeffs.get(m.group(3), 0) + sign * int(m.group(2))
        elif m.group(4):
            coeffs[m.group(4)] = coeffs.get(m.group(4), 0) + sign
        else:
            const += sign * int(m.group(5))
        pos = m.end()
        first = False
    return coeffs, const


def parse_linear(text: str) -> Linear:
    """``lhs REL rhs`` with linear integer sides, normalized to ``terms REL k``."""
    parts = re.split(rf"\s*({REL_RE})\s*", text.strip())
    if len(parts) != 3:
        raise ParseError(f"expected exactly one relation in {text!r}")
    if re.search(r"\d+\s*[./]\s*\d", text):
        raise ParseError(f"non-integer coefficient in {text!r}")
    lhs, lconst = parse_linear_expression(parts[0])
    rhs, rconst = parse_linear_expression(parts[2])
    merged = dict(lhs)
    for v, b in rhs.items():
        merged[v] = merged.get(v, 0) - b
    terms = tuple((b, v) for v, b in merged.items() if b != 0)
    return Linear(terms, normalize_relation(parts[1]), rconst - lconst)


_TABLE = re.compile(rf"table\s*\(\s*({IDENT}(?:\s*,\s*{IDENT})*)\s*\)\s*\{{(.*)\}}\s*$")


def parse_constraint(text: str):
    """A linear relation or ``table(x, y) {1,2; 3,4}``."""
    m = _TABLE.match(text.strip())
    if m:
        variables = tuple(v.strip() for v in m.group(1).split(","))
        rows = [r.strip() for r in m.group(2).split(";") if r.strip()]
        try:
            allowed = frozenset(tuple(int(x) for x in r.split(",")) for r in rows)
        except ValueError:
            raise ParseError(f"table rows must be integers in {text!r}") from None
        for t in allowed:
            if len(t) != len(variables):
                raise ParseError(f"row {t} does not match {len(variables)} variables")
        return Extensional(variables, allowed)
    return parse_linear(text)


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text!r}") from None


def split_top(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside parentheses, braces and ``|...|`` names."""
    parts, depth, cur, in_bar = [], 0, [], False
    for i, ch in enumerate(text):
        if ch == "|" and depth == 0:
            in_bar = not in_bar
        elif not in_bar and ch in "({":
            depth += 1
        elif not in_bar and ch in ")}":
            depth -= 1
        if ch == sep and depth == 0 and not in_bar:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_literal(text: str) -> tuple[str, bool]:
    text = text.strip()
    m = re.fullmatch(rf"(not\s+)?({BAR_ATOM}|{IDENT})", text)
    if not m:
        raise ParseError(f"not a literal: {text!r}")
    return m.group(2), m.group(1) is None


def parse_body(text: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
    pos, neg = [], []
    if not text.strip():
        return (), ()
    for item in split_top(text):
        atom, positive = parse_literal(item)
        (pos if positive else neg).append(atom)
    return tuple(pos), tuple(neg)


def parse_rule(text: str) -> Rule:
    """``h :- b1, not b2``, a fact ``h`` or a constraint ``:- b``; no final period."""
    text = text.strip()
    if ":-" in text:
        head, body = text.split(":-", 1)
        head = head.strip()
    else:
        head, body = text, ""
    if head and not re.fullmatch(rf"{BAR_ATOM}|{IDENT}", head):
        raise ParseError(f"bad rule head {head!r}")
    pos, neg = parse_body(body)
    return Rule(head or None, pos, neg)
