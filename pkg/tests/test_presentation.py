"""
Tests for free words, the presentation and homomorphisms into free groups.
"""
import pytest
from sympy.combinatorics.free_groups import free_group

from whitehead.algebra.presentation import (
    IDENTITY,
    FreeWord,
    PartialConjugation,
    commutator,
    failing_relations,
    free_reduce,
    partial_conjugations,
    phi_assignments,
    presentation,
    substitute,
    verify_homomorphism,
)
from whitehead.core.errors import PresentationError
from whitehead.domain.graph import component_containing, non_adjacent_pairs, shared_components

pytestmark = pytest.mark.unit


F, x_, y_, z_ = free_group("x y z")
SYMPY_GENERATORS = {"x": x_, "y": y_, "z": z_}


def _to_sympy(word):
    element = F.identity
    for symbol, exponent in word.letters:
        element = element * SYMPY_GENERATORS[symbol] ** exponent
    return element


@pytest.mark.parametrize("letters", [
    [("x", 1), ("x", -1)],
    [("x", 1), ("y", 1), ("y", -1), ("x", -1), ("z", 1)],
    [("x", -1), ("x", 1), ("y", -1)],
    [("x", 1), ("y", 1), ("x", -1), ("y", -1)],
    [("z", 1), ("x", 1), ("x", 1), ("x", -1), ("z", -1), ("z", 1)],
])
def test_free_reduce_matches_sympy(letters):
    """Test reduction against sympy's free group."""
    word = FreeWord.of(*letters)
    reduced = free_reduce(word)

    assert len(reduced) == len(_to_sympy(word))
    assert _to_sympy(reduced) == _to_sympy(word)


def test_free_word_basics():
    """Test inverse, product and printing."""
    x, y = FreeWord.letter("x"), FreeWord.letter("y")

    assert str(IDENTITY) == "1"
    assert str(x.inverse()) == "x^-1"
    assert (x * x.inverse()).is_identity()
    assert str(commutator(x, y)) == "x y x^-1 y^-1"
    assert not commutator(x, y).is_identity()
    assert commutator(x, x).is_identity()


def test_free_word_rejects_exponents():
    """Test that letters carry ±1 only."""
    with pytest.raises(PresentationError):
        FreeWord.of(("x", 2))


def test_partial_conjugation_symbol():
    """Test generator naming and ordering."""
    a = PartialConjugation(3, frozenset({2, 1}))
    b = PartialConjugation(3, frozenset({4}))

    assert a.symbol == "C3:1,2"
    assert a < b
    assert str(a.word) == "C3:1,2"


def test_generators(g5, f2):
    """Test that generators are the partial conjugations."""
    assert len(partial_conjugations(g5)) == 15
    assert [g.symbol for g in partial_conjugations(f2)] == ["C1:2", "C2:1"]


def test_presentation_f2(f2):
    """Test that F₂ has no relations."""
    pres = presentation(f2)

    assert pres.relations == []
    assert pres.to_text() == "generators: C1:2 C2:1\n"


def test_presentation_f3_census(f3):
    """Test relation counts per family for F₃."""
    pres = presentation(f3)

    assert len(pres.generators) == 6
    assert pres.census() == {"i": 3, "ii": 0, "iii": 6}
    assert str(pres.relations[0]) == "i: [C1:2, C1:3]"


def test_presentation_subordinate_relations(p3_k2):
    """Test that subordinate components commute with the other side."""
    pres = presentation(p3_k2)
    subordinate = PartialConjugation(3, frozenset({1})).symbol

    ii = [r for r in pres.relations if r.tag == "ii"]
    assert any(r.left.symbols == {subordinate} for r in ii)


def test_presentation_document(f3):
    """Test the structured export."""
    document = presentation(f3).to_document()

    assert len(document.generators) == 6
    assert len(document.relations) == 9
    assert document.relations[0].tag == "i"
    assert len(document.relations[0].word) == 4


def test_phi_homomorphisms_g5(g5):
    """Test that both families of maps respect every relation."""
    pres = presentation(g5)
    for u, v in non_adjacent_pairs(g5):
        for i, j in ((u, v), (v, u)):
            assert verify_homomorphism(pres, phi_assignments(g5, i, j))
            for shared in shared_components(g5, i, j):
                assert verify_homomorphism(pres, phi_assignments(g5, i, j, shared))


def test_corrupted_assignment_fails(g5):
    """Test that a broken map is caught."""
    pres = presentation(g5)
    shared = shared_components(g5, 3, 4)[1]
    assign = phi_assignments(g5, 3, 4, shared)
    assign[PartialConjugation(3, shared.vertices).symbol] = IDENTITY

    assert failing_relations(pres, assign)
    assert not verify_homomorphism(pres, assign)


def test_phi_assignments_errors(g5):
    """Test invalid pairs and components."""
    with pytest.raises(PresentationError):
        phi_assignments(g5, 1, 2)
    with pytest.raises(PresentationError):
        phi_assignments(g5, 3, 4, component_containing(g5, 3, 4))


def test_unassigned_generator(g5):
    """Test that every generator needs an image."""
    pres = presentation(g5)
    assign = phi_assignments(g5, 3, 4)
    del assign[pres.symbols[0]]

    with pytest.raises(PresentationError):
        failing_relations(pres, assign)
    with pytest.raises(PresentationError):
        substitute(pres.relations[0].word, {})
