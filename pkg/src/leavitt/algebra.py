"""Exact arithmetic in the Leavitt path algebra L_Q(E) of a finite graph.

Elements are finite rational combinations of monomials ``alpha beta*`` kept
in a canonical basis: for every regular vertex ``v`` one outgoing edge
``d(v)`` (the smallest id) is designated, and no basis monomial has both
``alpha`` and ``beta`` ending in ``d(v)``. The relation
``d(v) d(v)* = v - sum_{f != d(v)} f f*`` removes such monomials.

Two independent routes reach that basis:

* :meth:`LeavittPathAlgebra.mul` multiplies monomials with the prefix rule
  for ``beta* gamma`` and then eliminates designated pairs;
* :meth:`LeavittPathAlgebra.normal_form` rewrites raw words of generators
  letter pair by letter pair, in a caller-chosen order.
"""
from __future__ import annotations

import random
from collections import deque
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple

from .errors import GraphError, UnsupportedGraph
from .graph import OMEGA, Graph, is_acyclic

VERTEX, REAL, GHOST = 0, 1, 2


class Monomial(NamedTuple):
    """``alpha beta*`` with both paths ending at ``vertex``."""

    alpha: tuple
    beta: tuple
    vertex: str

    @property
    def degree(self) -> int:
        return len(self.alpha) - len(self.beta)

    def sort_key(self):
        return (self.degree, len(self.alpha), self.alpha, self.beta, self.vertex)

    def __str__(self):
        if not self.alpha and not self.beta:
            return self.vertex
        return " ".join(self.alpha + tuple(e + "*" for e in reversed(self.beta)))


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class AlgebraElement:
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "LeavittPathAlgebra", terms: dict | None = None):
        self.algebra = algebra
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    # -- bookkeeping --

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if other.algebra is not self.algebra and other.algebra.graph != self.algebra.graph:
            raise GraphError("elements belong to algebras of different graphs")
        return other

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra.graph == other.algebra.graph and self.terms == other.terms

    __hash__ = None

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = str(m) if mag == 1 else f"{_format_coeff(mag)} {m}"
            if i == 0:
                out.append(body if sign == "+" else f"-{body}")
            else:
                out.append(f"{sign} {body}")
        return " ".join(out)

    def __repr__(self):
        return f"<AlgebraElement {self}>"

    # -- arithmetic --

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return AlgebraElement(self.algebra, terms)

    def __neg__(self):
        return AlgebraElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "AlgebraElement":
        k = Fraction(k)
        return AlgebraElement(self.algebra, {m: k * c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.algebra.mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 1:
            raise ValueError("only positive powers are defined")
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def star(self) -> "AlgebraElement":
        return AlgebraElement(
            self.algebra, {Monomial(m.beta, m.alpha, m.vertex): c for m, c in self.terms.items()}
        )

    def degree_components(self) -> dict:
        comps: dict = {}
        for m, c in self.terms.items():
            comps.setdefault(m.degree, {})[m] = c
        return {d: AlgebraElement(self.algebra, comps[d]) for d in sorted(comps)}


class LeavittPathAlgebra:
    """L_Q(E) for a finite graph without omega bundles."""

    def __init__(self, graph: Graph):
        if graph.has_omega:
            raise UnsupportedGraph("arithmetic needs a graph without infinite emitters")
        self.graph = graph
        self.src = {e.id: e.source for e in graph.edges}
        self.rng = {e.id: e.range for e in graph.edges}
        self.designated = {v: outs[0] for v, outs in graph.out_edges.items() if outs}
        self._reduced: dict = {}

    # -- generators --

    def element(self, terms: dict) -> AlgebraElement:
        return AlgebraElement(self, {m: Fraction(c) for m, c in terms.items()})

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self)

    def vertex(self, v: str) -> AlgebraElement:
        if v not in self.graph.vertices:
            raise GraphError(f"unknown vertex {v!r}")
        return self.element({Monomial((), (), v): 1})

    def edge(self, e: str) -> AlgebraElement:
        if e not in self.src:
            raise GraphError(f"unknown edge {e!r}")
        return self.element({Monomial((e,), (), self.rng[e]): 1})

    def ghost(self, e: str) -> AlgebraElement:
        if e not in self.src:
            raise GraphError(f"unknown edge {e!r}")
        return self.element({Monomial((), (e,), self.rng[e]): 1})

    def one(self) -> AlgebraElement:
        return self.element({Monomial((), (), v): 1 for v in self.graph.vertices})

    def path_monomial(self, alpha: Iterable[str], beta: Iterable[str], vertex: str | None = None) -> Monomial:
        alpha, beta = tuple(alpha), tuple(beta)
        x = self.rng[alpha[-1]] if alpha else (self.rng[beta[-1]] if beta else vertex)
        if x is None:
            raise GraphError("trivial monomial needs a vertex")
        return Monomial(alpha, beta, x)

    def monomial(self, alpha: Iterable[str], beta: Iterable[str] = (), vertex: str | None = None) -> AlgebraElement:
        """The element ``alpha beta*`` reduced to the basis."""
        m = self.path_monomial(alpha, beta, vertex)
        return AlgebraElement(self, dict(self._reduce(m)))

    # -- the product route --

    def _source(self, path: tuple, vertex: str) -> str:
        return self.src[path[0]] if path else vertex

    def mul_monomials(self, m1: Monomial, m2: Monomial):
        """``m1 m2`` using only the CK-1 relations; ``None`` when zero."""
        a1, b1, x1 = m1
        a2, b2, x2 = m2
        if self._source(b1, x1) != self._source(a2, x2):
            return None
        n1, n2 = len(b1), len(a2)
        if n1 <= n2:
            if a2[:n1] != b1:
                return None
            return Monomial(a1 + a2[n1:], b2, x2)
        if b1[:n2] != a2:
            return None
        return Monomial(a1, b2 + b1[n2:], x1)

    def _reduce(self, m: Monomial) -> tuple:
        """Basis expansion of a single monomial, as ``((monomial, coeff), ...)``."""
        hit = self._reduced.get(m)
        if hit is not None:
            return hit
        a, b, x = m
        if a and b and a[-1] == b[-1] and self.designated.get(self.src[a[-1]]) == a[-1]:
            v = self.src[a[-1]]
            a0, b0 = a[:-1], b[:-1]
            acc = dict(self._reduce(Monomial(a0, b0, v)))
            for f in self.graph.out_edges[v]:
                if f != a[-1]:
                    key = Monomial(a0 + (f,), b0 + (f,), self.rng[f])
                    acc[key] = acc.get(key, 0) - 1
            result = tuple((k, c) for k, c in acc.items() if c)
        else:
            result = ((m, 1),)
        self._reduced[m] = result
        return result

    def mul(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        acc: dict = {}
        for m1, c1 in x.terms.items():
            for m2, c2 in y.terms.items():
                m = self.mul_monomials(m1, m2)
                if m is None:
                    continue
                c = c1 * c2
                for k, d in self._reduce(m):
                    acc[k] = acc.get(k, 0) + c * d
        return AlgebraElement(self, acc)

    def is_basis_monomial(self, m: Monomial) -> bool:
        a, b, _ = m
        return not (a and b and a[-1] == b[-1] and self.designated.get(self.src[a[-1]]) == a[-1])

    # -- the rewriting route --

    def _pair_rule(self, x: tuple, y: tuple):
        """Rewrite for the adjacent letters ``x y``: ``None`` if the pair is
        irreducible, otherwise a list of ``(coeff, replacement)`` (empty = 0)."""
        kx, nx = x
        ky, ny = y
        if kx == VERTEX:
            if ky == VERTEX:
                ok = nx == ny
            elif ky == REAL:
                ok = self.src[ny] == nx
            else:
                ok = self.rng[ny] == nx
            return [(1, (y,))] if ok else []
        if ky == VERTEX:
            ok = (self.rng[nx] if kx == REAL else self.src[nx]) == ny
            return [(1, (x,))] if ok else []
        if kx == REAL and ky == REAL:
            return None if self.rng[nx] == self.src[ny] else []
        if kx == GHOST and ky == GHOST:
            return None if self.src[nx] == self.rng[ny] else []
        if kx == GHOST:
            return [(1, ((VERTEX, self.rng[nx]),))] if nx == ny else []
        # real followed by ghost
        if self.rng[nx] != self.rng[ny]:
            return []
        v = self.src[nx]
        if nx == ny and self.designated.get(v) == nx:
            out = [(1, ((VERTEX, v),))]
            out += [(-1, ((REAL, f), (GHOST, f))) for f in self.graph.out_edges[v] if f != nx]
            return out
        return None

    def _word_to_monomial(self, word: tuple) -> Monomial:
        if len(word) == 1 and word[0][0] == VERTEX:
            return Monomial((), (), word[0][1])
        alpha = tuple(n for k, n in word if k == REAL)
        ghosts = [n for k, n in word if k == GHOST]
        beta = tuple(reversed(ghosts))
        x = self.rng[alpha[-1]] if alpha else self.rng[ghosts[0]]
        return Monomial(alpha, beta, x)

    def normal_form(self, raw: dict, strategy: str = "leftmost", rng: random.Random | None = None) -> AlgebraElement:
        """Reduce a raw sum ``{word: coeff}`` of generator words to the basis.

        ``strategy`` picks which word and which letter pair to rewrite next:
        ``"leftmost"``, ``"rightmost"`` or ``"random"`` (uses ``rng``).
        """
        if strategy == "random" and rng is None:
            rng = random.Random(0)
        if strategy not in ("leftmost", "rightmost", "random"):
            raise ValueError(f"unknown strategy {strategy!r}")
        pending: dict = {}
        done: dict = {}
        # words waiting for a rewrite step; stale entries are skipped on pop
        agenda: deque = deque()

        def put(word, c):
            if word in done:
                total = done[word] + c
                if total:
                    done[word] = total
                else:
                    del done[word]
                return
            if word not in pending:
                agenda.append(word)
            total = pending.get(word, 0) + c
            if total:
                pending[word] = total
            else:
                pending.pop(word, None)

        for word, c in raw.items():
            if c:
                put(tuple(word), Fraction(c))
        while agenda:
            if strategy == "leftmost":
                word = agenda.popleft()
            elif strategy == "rightmost":
                word = agenda.pop()
            else:
                k = rng.randrange(len(agenda))
                agenda[k], agenda[-1] = agenda[-1], agenda[k]
                word = agenda.pop()
            if word not in pending:
                continue
            c = pending.pop(word)
            redexes = []
            for i in range(len(word) - 1):
                rule = self._pair_rule(word[i], word[i + 1])
                if rule is not None:
                    redexes.append((i, rule))
                    if strategy == "leftmost":
                        break
            if not redexes:
                done[word] = done.get(word, 0) + c
                if not done[word]:
                    del done[word]
                continue
            if strategy == "leftmost":
                i, rule = redexes[0]
            elif strategy == "rightmost":
                i, rule = redexes[-1]
            else:
                i, rule = rng.choice(redexes)
            for k, seg in rule:
                put(word[:i] + seg + word[i + 2:], c * k)
        terms: dict = {}
        for word, c in done.items():
            m = self._word_to_monomial(word)
            terms[m] = terms.get(m, 0) + c
        return AlgebraElement(self, terms)

    # -- basis enumeration --

    def paths_by_range(self, max_len: int) -> dict:
        """All paths of length <= max_len grouped by range (trivial paths included)."""
        by_range = {v: [((), v)] for v in self.graph.sorted_vertices}
        layer = [((), v) for v in self.graph.sorted_vertices]
        for _ in range(max_len):
            nxt = []
            for edges, end in layer:
                starts = [e for e in self.graph.in_edges[end]] if not edges else [
                    e for e in self.graph.in_edges[self.src[edges[0]]]
                ]
                for e in starts:
                    nxt.append(((e,) + edges, end))
            for p in nxt:
                by_range[p[1]].append(p)
            layer = nxt
        return by_range

    def basis_monomials(self, max_len: int) -> list:
        out = []
        for x, paths in self.paths_by_range(max_len).items():
            for a, _ in paths:
                for b, _ in paths:
                    m = Monomial(a, b, x)
                    if self.is_basis_monomial(m):
                        out.append(m)
        out.sort(key=Monomial.sort_key)
        return out

    def dimension(self):
        if not is_acyclic(self.graph):
            return OMEGA
        return len(self.basis_monomials(len(self.graph.vertices)))


@lru_cache(maxsize=512)
def algebra_of(g: Graph) -> LeavittPathAlgebra:
    return LeavittPathAlgebra(g)


def generator(g: Graph, name: str) -> AlgebraElement:
    """``v``, ``e`` or ``e*`` as an element of L(g)."""
    alg = algebra_of(g)
    if name.endswith("*"):
        base = name[:-1]
        if base in g.vertices:
            return alg.vertex(base)
        return alg.ghost(base)
    if name in g.vertices:
        return alg.vertex(name)
    return alg.edge(name)


def normal_form(g: Graph, raw: dict, strategy: str = "leftmost", rng=None) -> AlgebraElement:
    return algebra_of(g).normal_form(raw, strategy, rng)


def star(a: AlgebraElement) -> AlgebraElement:
    return a.star()


def degree_components(a: AlgebraElement) -> dict:
    return a.degree_components()


def nilpotency_index(a: AlgebraElement, bound: int):
    """Least ``k <= bound`` with ``a**k == 0``, or ``None``."""
    if bound < 1:
        raise ValueError("bound must be positive")
    power = a
    for k in range(1, bound + 1):
        if power.is_zero():
            return k
        if k < bound:
            power = power * a
    return None


def dim_over_K(g: Graph):
    return algebra_of(g).dimension()


# -- raw words: formal sums of generator words, before any relation is applied --

def raw_letter(g: Graph, name: str, starred: bool = False) -> dict:
    if name in g.vertices:
        return {((VERTEX, name),): Fraction(1)}
    if name in g.edge:
        return {(((GHOST if starred else REAL), name),): Fraction(1)}
    raise GraphError(f"unknown identifier {name!r}")


def raw_scalar(g: Graph, k) -> dict:
    """``k`` times the identity ``sum of all vertices``."""
    return {((VERTEX, v),): Fraction(k) for v in g.sorted_vertices}


def raw_add(x: dict, y: dict, sign: int = 1) -> dict:
    out = dict(x)
    for w, c in y.items():
        out[w] = out.get(w, 0) + sign * c
    return {w: c for w, c in out.items() if c}


def raw_mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for w1, c1 in x.items():
        for w2, c2 in y.items():
            w = w1 + w2
            out[w] = out.get(w, 0) + c1 * c2
    return {w: c for w, c in out.items() if c}


def raw_star(x: dict) -> dict:
    flip = {VERTEX: VERTEX, REAL: GHOST, GHOST: REAL}
    return {tuple((flip[k], n) for k, n in reversed(w)): c for w, c in x.items()}
