"""Matrix-ring decomposition of L(E) when no cycle of E has an exit.

For a finite graph in which no cycle has an exit,

    L(E) = sum over sinks w of M_{p(w)}(K)  +  sum over cycles c of M_{p(c)}(K[x, 1/x])

where ``p(w)`` counts paths ending at the sink and ``p(c)`` counts paths
ending at the cycle base that do not run through the whole cycle.
:func:`represent` realises this isomorphism on elements; tests use it as an
independent oracle for the symbolic arithmetic in :mod:`leavitt.algebra`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import AlgebraElement, LeavittPathAlgebra, Monomial, algebra_of
from .errors import GraphError, LeavittError
from .graph import Graph, cycles, no_cycle_has_exit, simple_paths_ending_at


class LaurentPoly:
    """Laurent polynomial in ``x`` with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = {0: coeffs}
        self.coeffs = {k: Fraction(c) for k, c in (coeffs or {}).items() if c}

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentPoly":
        return cls({k: c})

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({k: c * other for k, c in self.coeffs.items()})
        out: dict = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def bar(self) -> "LaurentPoly":
        """The involution ``x -> 1/x``."""
        return LaurentPoly({-k: c for k, c in self.coeffs.items()})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*x^{k}" for k, c in sorted(self.coeffs.items()))


def _zero_like(kind):
    return LaurentPoly() if kind == "Laurent" else Fraction(0)


def _matmul(A, B, zero):
    n = len(A)
    out = [[zero for _ in range(n)] for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for k in range(n):
            a = Ai[k]
            if not a:
                continue
            Bk = B[k]
            for j in range(n):
                b = Bk[j]
                if b:
                    row[j] = row[j] + a * b
    return out


@dataclass
class Block:
    kind: str  # "K" or "Laurent"
    key: str  # sink vertex or cycle base
    rows: list

    @property
    def size(self) -> int:
        return len(self.rows)

    def is_zero(self) -> bool:
        return not any(any(x for x in row) for row in self.rows)

    def __eq__(self, other):
        if not isinstance(other, Block):
            return NotImplemented
        return (self.kind, self.key) == (other.kind, other.key) and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __mul__(self, other: "Block") -> "Block":
        return Block(self.kind, self.key, _matmul(self.rows, other.rows, _zero_like(self.kind)))

    def __add__(self, other: "Block") -> "Block":
        return Block(self.kind, self.key, [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def star(self) -> "Block":
        n = self.size
        if self.kind == "Laurent":
            rows = [[self.rows[j][i].bar() for j in range(n)] for i in range(n)]
        else:
            rows = [[self.rows[j][i] for j in range(n)] for i in range(n)]
        return Block(self.kind, self.key, rows)


@dataclass
class BlockMatrix:
    blocks: list = field(default_factory=list)

    def __mul__(self, other: "BlockMatrix") -> "BlockMatrix":
        return BlockMatrix([a * b for a, b in zip(self.blocks, other.blocks)])

    def __add__(self, other: "BlockMatrix") -> "BlockMatrix":
        return BlockMatrix([a + b for a, b in zip(self.blocks, other.blocks)])

    def __eq__(self, other):
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        return len(self.blocks) == len(other.blocks) and all(a == b for a, b in zip(self.blocks, other.blocks))

    def star(self) -> "BlockMatrix":
        return BlockMatrix([b.star() for b in self.blocks])

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks)

    def to_json(self) -> list:
        out = []
        for b in self.blocks:
            rows = [[_entry_json(x) for x in row] for row in b.rows]
            out.append({"kind": b.kind, "key": b.key, "size": b.size, "rows": rows})
        return out


def _entry_json(x):
    if isinstance(x, LaurentPoly):
        return {str(k): str(c) for k, c in sorted(x.coeffs.items())}
    return str(x)


@dataclass
class DecompositionReport:
    sink_blocks: list
    cycle_blocks: list
    applicable: bool
    reason: str | None = None

    def to_json(self) -> dict:
        return {
            "applicable": self.applicable,
            "reason": self.reason,
            "sink_blocks": [{"sink": v, "size": n} for v, n in self.sink_blocks],
            "cycle_blocks": [{"base": v, "size": n} for v, n in self.cycle_blocks],
        }


def decompose(g: Graph) -> DecompositionReport:
    if g.has_omega:
        return DecompositionReport([], [], False, "graph has infinite emitters")
    if not no_cycle_has_exit(g):
        return DecompositionReport([], [], False, "cycle has exit")
    sinks = [(w, len(simple_paths_ending_at(g, w).paths)) for w in g.sorted_vertices if g.is_sink(w)]
    cyc = sorted((c.base, len(simple_paths_ending_at(g, c.base).paths)) for c, _ in cycles(g))
    return DecompositionReport(sinks, cyc, True)


class NotApplicable(LeavittError):
    """The graph has a cycle with an exit, so no matrix decomposition exists."""


class Representation:
    """The isomorphism of :func:`decompose` evaluated on algebra elements."""

    def __init__(self, g: Graph):
        report = decompose(g)
        if not report.applicable:
            raise NotApplicable(report.reason)
        self.graph = g
        self.report = report
        self.algebra: LeavittPathAlgebra = algebra_of(g)
        # block layout: sinks first, then cycles, each with its path index
        self.layout = []
        self.index = {}
        for w, _ in report.sink_blocks:
            paths = [p.edges for p in simple_paths_ending_at(g, w).paths]
            self.layout.append(("K", w, paths))
            self.index[w] = {p: i for i, p in enumerate(paths)}
        self.cycle_of = {}
        for c, _ in cycles(g):
            paths = [p.edges for p in simple_paths_ending_at(g, c.base).paths]
            self.layout.append(("Laurent", c.base, paths))
            self.index[c.base] = {p: i for i, p in enumerate(paths)}
            for k, v in enumerate(c.vertices):
                # the cycle edges from v back to the base
                self.cycle_of[v] = (c, c.edges[k:] if k else ())
        self.block_pos = {key: i for i, (_, key, _) in enumerate(self.layout)}
        self._expansion = {}

    def zero(self) -> BlockMatrix:
        return BlockMatrix(
            [Block(kind, key, [[_zero_like(kind) for _ in paths] for _ in paths]) for kind, key, paths in self.layout]
        )

    def expansion(self, x: str) -> list:
        """Paths ``g`` from ``x`` with ``x = sum g g*``, stopping at a sink
        or at the first vertex on a cycle."""
        hit = self._expansion.get(x)
        if hit is None:
            g = self.graph
            if g.is_sink(x) or x in self.cycle_of:
                hit = [()]
            else:
                hit = [(e,) + rest for e in g.out_edges[x] for rest in self.expansion(g.edge[e].range)]
            self._expansion[x] = hit
        return hit

    def _cycle_factor(self, path: tuple, end: str):
        """Write ``path d`` as ``p c^k`` where ``d`` runs from ``end`` to the
        cycle base and ``p`` does not contain the whole cycle."""
        c, to_base = self.cycle_of[end]
        full = path + to_base
        n = len(c.edges)
        k = 0
        while len(full) >= n and full[len(full) - n:] == c.edges:
            full = full[: len(full) - n]
            k += 1
        return c.base, full, k

    def locate(self, m: Monomial):
        """Yield ``(block key, row, col, x-exponent)`` contributions of ``m``."""
        a, b, x = m
        g = self.graph
        for gamma in self.expansion(x):
            end = g.edge[gamma[-1]].range if gamma else x
            rho, sigma = a + gamma, b + gamma
            if end in self.cycle_of:
                base, p, k = self._cycle_factor(rho, end)
                _, q, j = self._cycle_factor(sigma, end)
                idx = self.index[base]
                yield base, idx[p], idx[q], k - j
            else:
                idx = self.index[end]
                yield end, idx[rho], idx[sigma], 0

    def __call__(self, a: AlgebraElement) -> BlockMatrix:
        if a.algebra.graph != self.graph:
            raise GraphError("element belongs to a different graph")
        out = self.zero()
        for m, c in a.terms.items():
            for key, i, j, k in self.locate(m):
                block = out.blocks[self.block_pos[key]]
                if block.kind == "Laurent":
                    block.rows[i][j] = block.rows[i][j] + LaurentPoly.monomial(k, c)
                else:
                    block.rows[i][j] = block.rows[i][j] + c
        return out

    def identity(self) -> BlockMatrix:
        out = self.zero()
        for b in out.blocks:
            for i in range(b.size):
                b.rows[i][i] = LaurentPoly(1) if b.kind == "Laurent" else Fraction(1)
        return out


@lru_cache(maxsize=256)
def representation(g: Graph) -> Representation:
    return Representation(g)


def represent(g: Graph, a: AlgebraElement) -> BlockMatrix:
    return representation(g)(a)


def matrix_nilpotency_index(m: BlockMatrix):
    """Least ``k`` with ``m**k == 0`` or ``None``; each block of size ``t``
    is nilpotent iff its ``t``-th power vanishes."""
    worst = 1
    for b in m.blocks:
        power = b
        for k in range(1, max(b.size, 1) + 1):
            if power.is_zero():
                worst = max(worst, k)
                break
            power = power * b
        else:
            return None
    return worst


# -- sampling --------------------------------------------------------------

def sample_max_len(g: Graph) -> int:
    return len(g.vertices) + 2


@lru_cache(maxsize=256)
def _basis(g: Graph, max_len: int) -> tuple:
    return tuple(algebra_of(g).basis_monomials(max_len))


def random_element(g: Graph, rng: random.Random, max_terms: int = 4) -> AlgebraElement:
    """Sum of 1..max_terms basis monomials with coefficients in {-2..2} \\ {0}."""
    basis = _basis(g, sample_max_len(g))
    alg = algebra_of(g)
    terms: dict = {}
    for _ in range(rng.randint(1, max_terms)):
        m = rng.choice(basis)
        terms[m] = terms.get(m, 0) + rng.choice((-2, -1, 1, 2))
    return alg.element(terms)


def verify_homomorphism(g: Graph, trials: int = 500, seed: int = 0) -> dict:
    rep = representation(g)
    rng = random.Random(seed)
    for t in range(trials):
        a = random_element(g, rng)
        b = random_element(g, rng)
        if rep(a * b) != rep(a) * rep(b):
            return {"passed": False, "trials": t + 1, "counterexample": {"check": "product", "a": str(a), "b": str(b)}}
        if rep(a.star()) != rep(a).star():
            return {"passed": False, "trials": t + 1, "counterexample": {"check": "star", "a": str(a), "b": None}}
    return {"passed": True, "trials": trials, "counterexample": None}


def shift_element(g: Graph, vertex: str) -> AlgebraElement:
    """``sum p_i p_{i+1}*`` over the simple paths ending at ``vertex``."""
    alg = algebra_of(g)
    paths = simple_paths_ending_at(g, vertex).paths
    acc = alg.zero()
    for p, q in zip(paths, paths[1:]):
        acc = acc + alg.monomial(p.edges, q.edges, vertex)
    return acc


def _block_unit(alg, paths, cyc, base, i, j, k):
    """The element ``p_i c^k p_j*`` (``c^-1`` meaning ``c*``)."""
    p, q = paths[i], paths[j]
    if k >= 0:
        alpha, beta = p + cyc * k, q
    else:
        alpha, beta = p, q + cyc * (-k)
    return alg.monomial(alpha, beta, base)


def random_nilpotent(g: Graph, rng: random.Random) -> AlgebraElement:
    """A random nilpotent element built blockwise: a strictly upper
    triangular combination of matrix units, conjugated by ``1 + y`` with
    ``y`` strictly lower triangular."""
    rep = representation(g)
    alg = algebra_of(g)
    one = alg.one()
    total = alg.zero()
    cycle_edges = {c.base: c.edges for c, _ in cycles(g)}
    for kind, base, paths in rep.layout:
        if rng.random() < 0.3:
            continue
        n = len(paths)
        cyc = cycle_edges.get(base, ())
        exps = (-1, 0, 1) if kind == "Laurent" else (0,)
        x = alg.zero()
        y = alg.zero()
        for i in range(n):
            for j in range(n):
                if i == j or rng.random() < 0.4:
                    continue
                unit = _block_unit(alg, paths, cyc, base, i, j, rng.choice(exps))
                coeff = rng.choice((-2, -1, 1, 2))
                if i < j:
                    x = x + unit.scale(coeff)
                else:
                    y = y + unit.scale(coeff)
        if x.is_zero():
            continue
        u = one + y
        u_inv = one
        term = one
        for _ in range(1, n):
            term = term * (-y)
            u_inv = u_inv + term
        total = total + u * x * u_inv
    return total


def _random_unipotent(block: Block, rng: random.Random) -> tuple:
    n = block.size
    zero = _zero_like(block.kind)
    one = LaurentPoly(1) if block.kind == "Laurent" else Fraction(1)
    N = [[zero for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                c = rng.choice((-1, 1, 2))
                N[i][j] = LaurentPoly.monomial(rng.choice((-1, 0, 1)), c) if block.kind == "Laurent" else Fraction(c)
    eye = [[one if i == j else zero for j in range(n)] for i in range(n)]
    S = [[eye[i][j] + N[i][j] for j in range(n)] for i in range(n)]
    neg = [[-x for x in row] for row in N]
    S_inv = [row[:] for row in eye]
    power = eye
    for _ in range(1, n):
        power = _matmul(power, neg, zero)
        S_inv = [[S_inv[i][j] + power[i][j] for j in range(n)] for i in range(n)]
    return S, S_inv


def _sample_idempotents(rep: Representation, m: int, rng: random.Random) -> list:
    """``m`` pairwise orthogonal idempotents (some possibly zero)."""
    template = rep.zero()
    positions = [(bi, i) for bi, b in enumerate(template.blocks) for i in range(b.size)]
    if rng.random() < 0.5 and template.blocks:
        bi = rng.randrange(len(template.blocks))
        positions = [(bi, i) for i in range(template.blocks[bi].size)]
    rng.shuffle(positions)
    owner = {}
    for slot, pos in enumerate(positions):
        # spread positions so that as many idempotents as possible are nonzero
        owner[pos] = slot if slot < m else rng.randrange(-1, m)
    conj = [
        _random_unipotent(b, rng) if rng.random() < 0.5 else None for b in template.blocks
    ]
    family = []
    for t in range(m):
        e = rep.zero()
        for (bi, i), who in owner.items():
            if who == t:
                b = e.blocks[bi]
                b.rows[i][i] = LaurentPoly(1) if b.kind == "Laurent" else Fraction(1)
        for bi, b in enumerate(e.blocks):
            if conj[bi] is not None:
                S, S_inv = conj[bi]
                zero = _zero_like(b.kind)
                b.rows = _matmul(_matmul(S, b.rows, zero), S_inv, zero)
        family.append(e)
    return family


def orthogonal_idempotent_probe(g: Graph, m: int, samples: int = 200, seed: int = 0) -> bool:
    """True iff ``e1 r1 e2 r2 ... r_{m-1} e_m`` vanished for every sampled
    family of ``m`` orthogonal idempotents and ring elements ``r_i``."""
    if m <= 0:
        return True
    rep = representation(g)
    rng = random.Random(seed)
    for _ in range(samples):
        family = _sample_idempotents(rep, m, rng)
        prod = family[0]
        for e in family[1:]:
            prod = prod * rep(random_element(g, rng)) * e
        if not prod.is_zero():
            return False
    return True
