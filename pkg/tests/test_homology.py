"""
Tests for chain complexes, Betti vectors and the E¹ rows.
"""
import random

import pytest

from whitehead.algebra.homology import (
    IntegerChainComplex,
    betti_psaut,
    betti_psaut_direct,
    betti_psout,
    build_e1_row,
    closure,
    convolve_counts,
    e1_csv,
    e1_dimensions,
    e1_homology,
    homology,
    simplicial_complex,
    subcomplex_homology,
)
from whitehead.algebra.matrix import IntegerMatrix
from whitehead.core.errors import ChainComplexError, DomainError
from whitehead.domain.essential import essential_counts
from whitehead.domain.graph import Graph, clique_counts

TRIANGLE_EDGES = [(0, 1), (0, 2), (1, 2)]


def test_homology_of_circle():
    """Test reduced homology of a hollow triangle."""
    report = subcomplex_homology(TRIANGLE_EDGES, close=True)

    assert report.reduced
    assert report.betti == [0, 1]
    assert report.torsion_free
    assert not report.acyclic


def test_homology_of_filled_triangle():
    """Test that a simplex is acyclic."""
    report = subcomplex_homology([(0, 1, 2)], close=True)

    assert report.betti == [0, 0, 0]
    assert report.acyclic


def test_homology_of_two_points():
    """Test reduced H_0 of two points."""
    assert subcomplex_homology([(0,), (1,)]).betti == [1]


def test_homology_of_empty_complex():
    """Test the empty complex."""
    report = subcomplex_homology([])

    assert report.empty
    assert not report.acyclic


def test_simplicial_complex_requires_closure():
    """Test that missing faces are rejected unless closing is requested."""
    with pytest.raises(DomainError):
        simplicial_complex([(0, 1)])

    assert closure([(0, 1)]) == {(0,), (1,), (0, 1)}


def test_torsion():
    """Test a complex with Z/2 in degree 0."""
    complex_ = IntegerChainComplex(dimensions=[1, 1], boundaries={1: IntegerMatrix.from_dense([[2]])})
    report = homology(complex_)

    assert report.betti == [0, 0]
    assert report.torsion == {0: [2]}
    assert not report.torsion_free


def test_rational_path_ignores_torsion():
    """Test homology without Smith invariants."""
    complex_ = IntegerChainComplex(dimensions=[1, 1], boundaries={1: IntegerMatrix.from_dense([[2]])})
    report = homology(complex_, torsion=False)

    assert report.betti == [0, 0]
    assert report.torsion == {}


def test_verify_catches_nonzero_composite():
    """Test d∘d ≠ 0 detection."""
    complex_ = IntegerChainComplex(
        dimensions=[1, 1, 1],
        boundaries={
            1: IntegerMatrix.from_dense([[1]]),
            2: IntegerMatrix.from_dense([[1]]),
        },
    )
    with pytest.raises(ChainComplexError):
        complex_.verify()


def test_verify_names_the_failing_cell():
    """Test that d∘d ≠ 0 reports the labelled cell it fails on."""
    complex_ = simplicial_complex([(0, 1, 2)], close=True)
    complex_.boundaries[2] = IntegerMatrix.from_columns(3, [{0: 1, 1: 1, 2: 1}])

    with pytest.raises(ChainComplexError) as exc_info:
        complex_.verify()

    assert "(0, 1, 2)" in exc_info.value.message
    assert exc_info.value.detail == {"degree": 2, "column": 0}
    assert complex_.cell_name(0, 2) == "(2,)"
    assert IntegerChainComplex(dimensions=[2]).cell_name(0, 1) == "#1"


def test_verify_catches_wrong_shape():
    """Test boundary shape validation."""
    complex_ = IntegerChainComplex(dimensions=[2, 1], boundaries={1: IntegerMatrix.from_dense([[1]])})
    with pytest.raises(ChainComplexError):
        complex_.verify()


def test_convolution_matches_direct_sum():
    """Test the two Betti convolutions."""
    k, n = [1, 10, 27, 10, 1], [1, 5, 1]

    assert convolve_counts(k, n) == [1, 15, 78, 155, 78, 15, 1]
    assert betti_psaut_direct(k, n) == convolve_counts(k, n)


def test_betti_vectors_g5(g5, g5_poset):
    """Test ΣPOut and ΣPAut Betti numbers of g5."""
    assert betti_psout(g5, poset=g5_poset) == [1, 10, 27, 10, 1]
    assert betti_psaut(g5, poset=g5_poset) == [1, 15, 78, 155, 78, 15, 1]


def test_betti_vectors_f2(f2):
    """Test the smallest free group."""
    assert betti_psout(f2) == [1]
    assert betti_psaut(f2) == [1, 2]


def test_betti_complete_graph():
    """Test a graph that reduces to nothing."""
    k3 = Graph.from_edges(3, [(1, 2), (1, 3), (2, 3)])

    assert betti_psout(k3) == [1]
    assert betti_psaut(k3) == [1]


@pytest.mark.slow
def test_betti_psaut_degree_one(g11):
    """Test that degree one counts partial conjugations."""
    from whitehead.domain.graph import partial_conjugation_count
    from whitehead.domain.poset import enumerate_poset

    poset = enumerate_poset(g11)
    psaut = betti_psaut(g11, poset=poset)
    assert psaut[1] == partial_conjugation_count(g11)
    assert psaut == convolve_counts(essential_counts(g11, poset=poset), clique_counts(g11))


def test_e1_dimensions_g5(g5_poset):
    """Test the first column and first row of the E¹ table."""
    table = e1_dimensions(g5_poset)

    assert [row[0] for row in table] == g5_poset.chain_counts()
    assert table[0][0] == 61
    assert table[0][1] == 119
    assert table[0][4] == 1


def test_e1_csv():
    """Test CSV export of the E¹ table."""
    text = e1_csv([[1, 2], [3, 0]])
    assert text == "p,q,dim\n0,0,1\n0,1,2\n1,0,3\n1,1,0\n"


def test_e1_rows_are_complexes(f3_poset):
    """Test d∘d = 0 for every row."""
    for q in range(f3_poset.height + 1):
        build_e1_row(f3_poset, q).verify()


def test_e1_negative_row(f3_poset):
    """Test that rows are indexed from zero."""
    with pytest.raises(DomainError):
        build_e1_row(f3_poset, -1)


def test_e1_homology_concentrated_f3(f3_poset):
    """Test that every row of F₃ has homology K_q in degree 0."""
    reports = e1_homology(f3_poset, [1, 3])

    assert [report.homology.betti[0] for report in reports] == [1, 3]
    assert all(report.concentrated for report in reports)


@pytest.mark.slow
def test_e1_homology_concentrated_g5(g5_poset):
    """Test row concentration on g5."""
    reports = e1_homology(g5_poset, [1, 10, 27, 10, 1])

    assert all(report.concentrated for report in reports)


SMALL_GRAPHS = {
    "f2": (2, []),
    "f3": (3, []),
    "f4": (4, []),
    "g5": (5, [(1, 2)]),
    "p4": (4, [(1, 2), (2, 3), (3, 4)]),
    "p5": (5, [(1, 2), (2, 3), (3, 4), (4, 5)]),
    "c4": (4, [(1, 2), (2, 3), (3, 4), (1, 4)]),
    "c5": (5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]),
    "star_k13": (4, [(1, 2), (1, 3), (1, 4)]),
    "p3_k2": (5, [(1, 2), (2, 3), (4, 5)]),
    "p3_k1": (4, [(1, 2), (2, 3)]),
    "k2_k2": (4, [(1, 2), (3, 4)]),
}


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(SMALL_GRAPHS))
def test_e1_rows_concentrated_on_small_graphs(name):
    """Test that every E¹ row has homology K_q in degree 0 and nothing else."""
    from whitehead.domain.graph import reduce_dominating
    from whitehead.domain.poset import enumerate_poset

    n, edges = SMALL_GRAPHS[name]
    graph = reduce_dominating(Graph.from_edges(n, edges))
    poset = enumerate_poset(graph)
    k = essential_counts(graph, poset=poset)

    for report in e1_homology(poset, k):
        assert report.homology.torsion_free
        assert report.concentrated, (report.q, report.homology.betti)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["p4", "c5", "p3_k2"])
def test_e1_euler_characteristic(name, request):
    """Test that alternating row sums give the essential counts."""
    from whitehead.domain.poset import enumerate_poset

    graph = request.getfixturevalue(name)
    poset = enumerate_poset(graph)
    table = e1_dimensions(poset)
    k = essential_counts(graph, poset=poset)
    for q, expected in enumerate(k):
        assert sum((-1) ** d * table[d][q] for d in range(len(table))) == expected


def test_smith_and_rational_betti_agree_on_random_complexes():
    """Test both homology paths on random closed complexes."""
    rng = random.Random(5)
    for _ in range(50):
        cells = [
            tuple(sorted(rng.sample(range(6), rng.randint(1, 4))))
            for _ in range(rng.randint(1, 6))
        ]
        complex_ = simplicial_complex(cells, close=True)
        complex_.verify()

        assert homology(complex_).betti == homology(complex_, torsion=False).betti
