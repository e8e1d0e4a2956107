"""Text formats: the line-oriented graph file and algebra expressions."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    AlgebraElement,
    algebra_of,
    generator,
    raw_add,
    raw_letter,
    raw_mul,
    raw_scalar,
    raw_star,
)
from .errors import GraphError, ParseError
from .graph import Graph

ID = r"[A-Za-z_][A-Za-z0-9_]*"
_VERTEX_RE = re.compile(rf"vertex\s+({ID})$")
_EDGE_RE = re.compile(rf"edge\s+({ID})\s*:\s*({ID})\s*->\s*({ID})$")
_OMEGA_RE = re.compile(rf"omega\s*:\s*({ID})\s*->\s*({ID})$")


@dataclass
class GraphFile:
    path: str | None
    graph: Graph
    lines: dict  # vertex / edge id / ("omega", s, r) -> line number


def parse_graph_file(text: str, path: str | None = None) -> GraphFile:
    vertices: dict = {}
    edges: dict = {}
    bundles: dict = {}
    pending = []  # (line, column, name) endpoints to check once every vertex is known

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        body = line.strip()
        if not body:
            continue
        indent = len(line) - len(line.lstrip())
        col = indent + 1

        m = _VERTEX_RE.match(body)
        if m:
            v = m.group(1)
            if v in vertices or v in edges:
                raise ParseError(f"duplicate id {v!r}", lineno, col + m.start(1))
            vertices[v] = lineno
            continue
        m = _EDGE_RE.match(body)
        if m:
            e, s, r = m.groups()
            if e in edges or e in vertices:
                raise ParseError(f"duplicate id {e!r}", lineno, col + m.start(1))
            edges[e] = (s, r, lineno)
            pending += [(lineno, col + m.start(2), s), (lineno, col + m.start(3), r)]
            continue
        m = _OMEGA_RE.match(body)
        if m:
            s, r = m.groups()
            if (s, r) in bundles:
                raise ParseError(f"duplicate omega bundle {s} -> {r}", lineno, col)
            bundles[(s, r)] = lineno
            pending += [(lineno, col + m.start(1), s), (lineno, col + m.start(2), r)]
            continue
        keyword = body.split()[0]
        if keyword not in ("vertex", "edge", "omega"):
            raise ParseError(f"unknown declaration {keyword!r}", lineno, col)
        raise ParseError(f"malformed {keyword} declaration", lineno, col)

    for lineno, column, name in pending:
        if name not in vertices:
            raise ParseError(f"undeclared vertex {name!r}", lineno, column)
    if not vertices:
        raise ParseError("graph declares no vertices", 1)

    try:
        g = Graph.build(
            vertices,
            [(e, s, r) for e, (s, r, _) in edges.items()],
            list(bundles),
        )
    except GraphError as exc:  # pragma: no cover - the checks above catch these first
        raise ParseError(str(exc)) from exc
    lines = dict(vertices)
    lines.update({e: ln for e, (_, _, ln) in edges.items()})
    lines.update({("omega",) + k: ln for k, ln in bundles.items()})
    return GraphFile(path, g, lines)


def parse_graph(text: str) -> Graph:
    return parse_graph_file(text).graph


def load_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph_file(fh.read(), path).graph


def emit_graph(g: Graph) -> str:
    out = [f"vertex {v}" for v in g.sorted_vertices]
    out += [f"edge {e.id} : {e.source} -> {e.range}" for e in g.edges]
    out += [f"omega : {b.source} -> {b.range}" for b in sorted(g.omega_bundles)]
    return "\n".join(out) + "\n"


# expression AST

@dataclass(frozen=True)
class Rational:
    value: Fraction


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Star:
    arg: object


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Sum:
    terms: tuple  # of (sign, expr) with sign in {1, -1}


@dataclass(frozen=True)
class Power:
    base: object
    exp: int


_TOKEN_RE = re.compile(rf"\s*(?:(\d+)|({ID})|(.))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("id", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", 1, start + 1)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _ExprParser:
    def __init__(self, g: Graph, text: str):
        self.g = g
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, 1, tok[2] + 1)

    def parse(self):
        expr = self.sum()
        tok = self.peek()
        if tok[0] == ")":
            self.fail("unbalanced parentheses")
        if tok[0] == "*":
            self.fail("star applies only to generators or parenthesized expressions")
        if tok[0] != "end":
            self.fail(f"unexpected {tok[1]!r}")
        return expr

    def sum(self):
        terms = []
        sign = 1
        # a leading sign lets printed normal forms such as "-e e*" reparse
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        terms.append((sign, self.prod()))
        while self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            terms.append((sign, self.prod()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def prod(self):
        factors = [self.factor()]
        while self.peek()[0] in ("num", "id", "("):
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor(self):
        node = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num" or int(tok[1]) < 1:
                self.fail("exponent must be a positive integer", tok)
            node = Power(node, int(tok[1]))
            if self.peek()[0] == "*":
                self.take()
                node = Star(node)
        return node

    def atom(self):
        tok = self.take()
        kind = tok[0]
        if kind == "num":
            num = int(tok[1])
            if self.peek()[0] == "/":
                self.take()
                den = self.take()
                if den[0] != "num" or int(den[1]) == 0:
                    self.fail("malformed rational", den)
                return Rational(Fraction(num, int(den[1])))
            return Rational(Fraction(num))
        if kind == "id":
            if tok[1] not in self.g.vertices and tok[1] not in self.g.edge:
                self.fail(f"unknown identifier {tok[1]!r}", tok)
            node = Gen(tok[1])
            if self.peek()[0] == "*":
                self.take()
                node = Star(node)
            return node
        if kind == "(":
            node = self.sum()
            if self.peek()[0] != ")":
                self.fail("unbalanced parentheses")
            self.take()
            if self.peek()[0] == "*":
                self.take()
                node = Star(node)
            return node
        if kind == ")":
            self.fail("unbalanced parentheses", tok)
        if kind == "end":
            self.fail("unexpected end of expression", tok)
        self.fail(f"unexpected {tok[1]!r}", tok)


def parse_expr(g: Graph, text: str):
    return _ExprParser(g, text).parse()


def format_expr(expr) -> str:
    """Text that parses back to ``expr``."""
    if isinstance(expr, Rational):
        v = expr.value
        text = f"{abs(v.numerator)}" if v.denominator == 1 else f"{abs(v.numerator)}/{v.denominator}"
        return f"(- {text})" if v < 0 else text
    if isinstance(expr, Gen):
        return expr.name
    if isinstance(expr, Star):
        if isinstance(expr.arg, Gen):
            return expr.arg.name + "*"
        if isinstance(expr.arg, Power):
            return format_expr(expr.arg) + "*"
        return f"({format_expr(expr.arg)})*"
    if isinstance(expr, Power):
        base = expr.base
        inner = format_expr(base) if isinstance(base, (Gen, Rational)) or (isinstance(base, Star) and not isinstance(base.arg, Power)) else f"({format_expr(base)})"
        return f"{inner}^{expr.exp}"
    if isinstance(expr, Product):
        parts = []
        for f in expr.factors:
            text = format_expr(f)
            parts.append(f"({text})" if isinstance(f, (Sum, Product)) else text)
        return " ".join(parts)
    if isinstance(expr, Sum):
        out = []
        for k, (sign, t) in enumerate(expr.terms):
            text = format_expr(t)
            if isinstance(t, Sum):
                text = f"({text})"
            if k == 0:
                out.append(text if sign == 1 else "- " + text)
            else:
                out.append(("+ " if sign == 1 else "- ") + text)
        return " ".join(out)
    raise TypeError(f"not an expression node: {expr!r}")


def evaluate(expr, g: Graph) -> AlgebraElement:
    """Value of ``expr`` computed with the algebra's multiplication."""
    if isinstance(expr, Rational):
        return algebra_of(g).one().scale(expr.value)
    if isinstance(expr, Gen):
        return generator(g, expr.name)
    if isinstance(expr, Star):
        return evaluate(expr.arg, g).star()
    if isinstance(expr, Power):
        return evaluate(expr.base, g) ** expr.exp
    if isinstance(expr, Product):
        acc = evaluate(expr.factors[0], g)
        for f in expr.factors[1:]:
            acc = acc * evaluate(f, g)
        return acc
    if isinstance(expr, Sum):
        acc = algebra_of(g).zero()
        for sign, t in expr.terms:
            acc = acc + evaluate(t, g) if sign == 1 else acc - evaluate(t, g)
        return acc
    raise TypeError(f"not an expression node: {expr!r}")


def expand(expr, g: Graph) -> dict:
    """Unreduced word expansion of ``expr``, input for the rewriting route."""
    if isinstance(expr, Rational):
        return raw_scalar(g, expr.value)
    if isinstance(expr, Gen):
        return raw_letter(g, expr.name)
    if isinstance(expr, Star):
        return raw_star(expand(expr.arg, g))
    if isinstance(expr, Power):
        base = expand(expr.base, g)
        acc = base
        for _ in range(expr.exp - 1):
            acc = raw_mul(acc, base)
        return acc
    if isinstance(expr, Product):
        acc = expand(expr.factors[0], g)
        for f in expr.factors[1:]:
            acc = raw_mul(acc, expand(f, g))
        return acc
    if isinstance(expr, Sum):
        acc: dict = {}
        for sign, t in expr.terms:
            acc = raw_add(acc, expand(t, g), sign)
        return acc
    raise TypeError(f"not an expression node: {expr!r}")
