import random
from fractions import Fraction

import pytest

from leavitt.algebra import algebra_of, nilpotency_index
from leavitt.errors import GraphError
from leavitt.fixtures import clock, finite_fixtures, line, loop, omega_star, rose, single_edge, toeplitz
from leavitt.graph import is_acyclic, no_cycle_has_exit
from leavitt.structure import (
    Block,
    BlockMatrix,
    LaurentPoly,
    NotApplicable,
    decompose,
    matrix_nilpotency_index,
    orthogonal_idempotent_probe,
    random_element,
    random_nilpotent,
    represent,
    representation,
    shift_element,
    verify_homomorphism,
)

APPLICABLE = sorted(n for n, g in finite_fixtures().items() if no_cycle_has_exit(g))
ACYCLIC = sorted(n for n, g in finite_fixtures().items() if is_acyclic(g))


def flatten(m: BlockMatrix) -> list:
    """Coordinates of a block matrix as a flat rational vector (Laurent entries by exponent window)."""
    out = []
    for b in m.blocks:
        for row in b.rows:
            for x in row:
                if isinstance(x, LaurentPoly):
                    out.extend(x.coeffs.get(k, 0) for k in range(-4, 5))
                else:
                    out.append(x)
    return out


def rank(vectors) -> int:
    rows = [list(map(Fraction, v)) for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col] / rows[r][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


# Laurent polynomials

def test_laurent_arithmetic():
    x = LaurentPoly.monomial(1)
    xi = LaurentPoly.monomial(-1)
    assert x * xi == 1
    assert (x + 1) * (x - 1) == x * x - 1
    assert (x + 2 * xi).bar() == xi + 2 * x
    assert not LaurentPoly()


# decompose

def test_decompose_line3():
    r = decompose(line(3))
    assert r.applicable and r.sink_blocks == [("v3", 3)] and r.cycle_blocks == []


def test_decompose_rose2():
    r = decompose(rose(2))
    assert r.sink_blocks == [] and r.cycle_blocks == [("v", 3)]


def test_decompose_toeplitz():
    r = decompose(toeplitz())
    assert not r.applicable and r.reason == "cycle has exit"


def test_decompose_omega():
    assert not decompose(omega_star()).applicable


def test_representation_needs_applicable_graph():
    with pytest.raises(NotApplicable):
        representation(toeplitz())


# represent

def test_represent_edge_is_matrix_unit():
    g = line(2)
    m = represent(g, algebra_of(g).edge("e1"))
    [b] = m.blocks
    # paths into v2 in order: trivial, e1
    assert b.rows == [[0, 0], [1, 0]]


def test_represent_loop_is_x():
    g = loop()
    [b] = represent(g, algebra_of(g).edge("e")).blocks
    assert b.kind == "Laurent" and b.rows == [[LaurentPoly.monomial(1)]]


@pytest.mark.parametrize("name", APPLICABLE)
def test_vertices_map_to_diagonal_idempotents(name):
    g = finite_fixtures()[name]
    alg = algebra_of(g)
    total = representation(g).zero()
    for v in g.sorted_vertices:
        m = represent(g, alg.vertex(v))
        assert m * m == m
        for b in m.blocks:
            for i, row in enumerate(b.rows):
                for j, x in enumerate(row):
                    assert x == (x if i == j else 0)
                    assert x in (0, 1)
        total = total + m
    assert total == representation(g).identity()


def test_zero_maps_to_zero():
    g = rose(2)
    assert represent(g, algebra_of(g).zero()).is_zero()


def test_represent_rejects_foreign_element():
    with pytest.raises(GraphError):
        represent(line(2), algebra_of(line(3)).vertex("v1"))


@pytest.mark.parametrize("name", APPLICABLE)
def test_homomorphism_small(name):
    rep = verify_homomorphism(finite_fixtures()[name], trials=60, seed=11)
    assert rep["passed"], rep


@pytest.mark.parametrize("name", ACYCLIC)
def test_faithful_on_basis(name):
    g = finite_fixtures()[name]
    alg = algebra_of(g)
    basis = alg.basis_monomials(len(g.vertices))
    images = [flatten(represent(g, alg.element({m: 1}))) for m in basis]
    assert rank(images) == len(basis) == sum(n * n for _, n in decompose(g).sink_blocks)


@pytest.mark.parametrize("name", APPLICABLE)
def test_faithful_on_random_elements(name):
    g = finite_fixtures()[name]
    rng = random.Random(5)
    for _ in range(100):
        a = random_element(g, rng)
        assert represent(g, a).is_zero() == a.is_zero()


# nilpotency

def test_matrix_index_examples():
    shift = BlockMatrix([Block("K", "w", [[0, 1, 0], [0, 0, 1], [0, 0, 0]])])
    assert matrix_nilpotency_index(shift) == 3
    assert matrix_nilpotency_index(representation(line(3)).identity()) is None
    assert matrix_nilpotency_index(representation(line(3)).zero()) == 1


@pytest.mark.parametrize("name", APPLICABLE)
def test_algebra_and_matrix_indices_agree(name):
    g = finite_fixtures()[name]
    rng = random.Random(9)
    for _ in range(40):
        a = random_element(g, rng) if rng.random() < 0.5 else random_nilpotent(g, rng)
        k = nilpotency_index(a, 12)
        assert k == matrix_nilpotency_index(represent(g, a))


@pytest.mark.parametrize("name", APPLICABLE)
def test_shift_elements_attain_block_sizes(name):
    g = finite_fixtures()[name]
    r = decompose(g)
    for v, n in r.sink_blocks + r.cycle_blocks:
        s = shift_element(g, v)
        assert nilpotency_index(s, n + 1) == n
        assert matrix_nilpotency_index(represent(g, s)) == n


# orthogonal idempotents

def test_probe_m2_three_idempotents_vanish():
    assert orthogonal_idempotent_probe(single_edge(), 3, samples=100)


def test_probe_m2_two_idempotents_witness():
    assert not orthogonal_idempotent_probe(single_edge(), 2, samples=100)


def test_probe_zero_idempotents():
    assert orthogonal_idempotent_probe(single_edge(), 0)


@pytest.mark.parametrize("name", ["clock3", "line4", "rose2"])
def test_probe_at_block_bound(name):
    g = finite_fixtures()[name]
    n = max(n for _, n in decompose(g).sink_blocks + decompose(g).cycle_blocks)
    assert orthogonal_idempotent_probe(g, n + 1, samples=60)
    assert not orthogonal_idempotent_probe(g, n, samples=200)


def test_clock_blocks():
    r = decompose(clock(4))
    assert [n for _, n in r.sink_blocks] == [2, 2, 2, 2]
