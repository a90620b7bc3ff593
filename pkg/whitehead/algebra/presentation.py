"""
Presentation of ΣPAut(A_Γ) by partial conjugations, free words and
homomorphism checks into free groups.

Generators are the partial conjugations C_A^u (A a component of Γ−st(u)).
Relations:
    i)   [C_A^u, C_B^v] = 1 when u ∈ st(v), including u = v
    ii)  [C_A^u, C_B^v] = 1 when u ∉ st(v) and A, B are distinct shared
         components or at least one of them is subordinate
    iii) [C_A^u C_B^u, C_A^v] = 1 when u ∉ st(v), A is shared and B is the
         component of Γ−st(u) containing v
"""
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

from whitehead.core.errors import PresentationError
from whitehead.domain.graph import (
    Component,
    ComponentClass,
    Graph,
    Vertex,
    classify_component,
    components_minus_star,
    dominant_component,
    shared_components,
    star,
)
from whitehead.models.responses import PresentationDocument, RelationItem

Letter = Tuple[str, int]


@dataclass(frozen=True)
class FreeWord:
    """A word over an alphabet, letters paired with exponent ±1."""

    letters: Tuple[Letter, ...] = ()

    @classmethod
    def of(cls, *letters: Letter) -> "FreeWord":
        for symbol, exponent in letters:
            if exponent not in (1, -1):
                raise PresentationError(f"exponent of {symbol} must be ±1, got {exponent}")
        return cls(tuple(letters))

    @classmethod
    def letter(cls, symbol: str, exponent: int = 1) -> "FreeWord":
        return cls.of((symbol, exponent))

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((symbol, -exponent) for symbol, exponent in reversed(self.letters)))

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def symbols(self) -> FrozenSet[str]:
        return frozenset(symbol for symbol, _ in self.letters)

    def is_identity(self) -> bool:
        return not free_reduce(self).letters

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(s if e == 1 else f"{s}^-1" for s, e in self.letters)


IDENTITY = FreeWord()


def free_reduce(word: FreeWord) -> FreeWord:
    """Cancel adjacent inverse pairs until none remain."""
    stack: List[Letter] = []
    for symbol, exponent in word.letters:
        if stack and stack[-1] == (symbol, -exponent):
            stack.pop()
        else:
            stack.append((symbol, exponent))
    return FreeWord(tuple(stack))


def commutator(a: FreeWord, b: FreeWord) -> FreeWord:
    """[a, b] = a b a⁻¹ b⁻¹."""
    return a * b * a.inverse() * b.inverse()


@dataclass(frozen=True)
class PartialConjugation:
    """C_A^u, dually γ_A^u."""

    operative: Vertex
    component: FrozenSet[Vertex]

    @property
    def sort_key(self) -> Tuple[Vertex, Vertex]:
        return (self.operative, min(self.component))

    @property
    def symbol(self) -> str:
        return f"C{self.operative}:{','.join(map(str, sorted(self.component)))}"

    @property
    def word(self) -> FreeWord:
        return FreeWord.letter(self.symbol)

    def as_component(self) -> Component:
        return Component(vertices=self.component, anchor=self.operative)

    def __lt__(self, other: "PartialConjugation") -> bool:
        return self.sort_key < other.sort_key

    def __repr__(self) -> str:
        return self.symbol


def partial_conjugations(g: Graph) -> List[PartialConjugation]:
    return sorted(
        PartialConjugation(u, component.vertices)
        for u in g.vertices
        for component in components_minus_star(g, u)
    )


@dataclass(frozen=True)
class Relation:
    """[left, right] = 1 tagged with its family."""

    tag: str
    left: FreeWord
    right: FreeWord

    @property
    def word(self) -> FreeWord:
        return commutator(self.left, self.right)

    def __str__(self) -> str:
        return f"{self.tag}: [{self.left}, {self.right}]"


@dataclass
class Presentation:
    generators: List[PartialConjugation]
    relations: List[Relation] = field(default_factory=list)

    @property
    def symbols(self) -> List[str]:
        return [generator.symbol for generator in self.generators]

    def census(self) -> Dict[str, int]:
        counts = {"i": 0, "ii": 0, "iii": 0}
        for relation in self.relations:
            counts[relation.tag] += 1
        return counts

    def to_text(self) -> str:
        lines = [f"generators: {' '.join(self.symbols)}"]
        lines.extend(str(relation) for relation in self.relations)
        return "\n".join(lines) + "\n"

    def to_document(self) -> PresentationDocument:
        return PresentationDocument(
            generators=self.symbols,
            relations=[
                RelationItem(
                    tag=relation.tag,
                    word=[[symbol, exponent] for symbol, exponent in relation.word.letters],
                    text=f"[{relation.left}, {relation.right}]",
                )
                for relation in self.relations
            ],
        )


def presentation(g: Graph) -> Presentation:
    """Generators and relations i), ii), iii) of a reduced graph."""
    generators = partial_conjugations(g)
    relations: List[Relation] = []

    for a, b in combinations(generators, 2):
        u, v = a.operative, b.operative
        if u in star(g, v):
            relations.append(Relation("i", a.word, b.word))
            continue
        a_class = classify_component(g, u, v, a.as_component())
        b_class = classify_component(g, v, u, b.as_component())
        both_shared = a_class is ComponentClass.SHARED and b_class is ComponentClass.SHARED
        if (both_shared and a.component != b.component) or ComponentClass.SUBORDINATE in (a_class, b_class):
            relations.append(Relation("ii", a.word, b.word))

    for u in g.vertices:
        for v in g.vertices:
            if u in star(g, v):
                continue
            dominant = PartialConjugation(u, dominant_component(g, u, v).vertices)
            for shared in shared_components(g, u, v):
                left = PartialConjugation(u, shared.vertices).word * dominant.word
                right = PartialConjugation(v, shared.vertices).word
                relations.append(Relation("iii", left, right))

    declared = {generator.symbol for generator in generators}
    for relation in relations:
        unknown = relation.word.symbols - declared
        if unknown:
            raise PresentationError(f"relation {relation} uses undeclared generators {sorted(unknown)}")
    return Presentation(generators=generators, relations=relations)


def substitute(word: FreeWord, assign: Mapping[str, FreeWord]) -> FreeWord:
    """
    Image of a word under a generator assignment.

    Raises:
        PresentationError: If a letter has no image
    """
    image = IDENTITY
    for symbol, exponent in word.letters:
        if symbol not in assign:
            raise PresentationError(f"generator {symbol} is not assigned")
        target = assign[symbol]
        image = image * (target if exponent == 1 else target.inverse())
    return free_reduce(image)


def failing_relations(p: Presentation, assign: Mapping[str, FreeWord]) -> List[Relation]:
    missing = [symbol for symbol in p.symbols if symbol not in assign]
    if missing:
        raise PresentationError(f"unassigned generators: {missing}")
    return [relation for relation in p.relations if substitute(relation.word, assign).letters]


def verify_homomorphism(p: Presentation, assign: Mapping[str, FreeWord]) -> bool:
    """True iff every relation maps to the empty reduced word."""
    return not failing_relations(p, assign)


def phi_assignments(
    g: Graph, i: Vertex, j: Vertex, shared: Optional[Component] = None
) -> Dict[str, FreeWord]:
    """
    Maps to the free group on x, y for a non-adjacent pair (i, j).

    C^i_{D^j} -> x and C^j_{D^i} -> y; with a shared component C also
    C^i_C -> x⁻¹ and C^j_C -> y⁻¹. Every other generator goes to 1.
    """
    if i in star(g, j):
        raise PresentationError(f"{i} and {j} must be distinct and non-adjacent")
    assign = {generator.symbol: IDENTITY for generator in partial_conjugations(g)}
    x, y = FreeWord.letter("x"), FreeWord.letter("y")
    assign[PartialConjugation(i, dominant_component(g, i, j).vertices).symbol] = x
    assign[PartialConjugation(j, dominant_component(g, j, i).vertices).symbol] = y
    if shared is not None:
        if shared not in shared_components(g, i, j):
            raise PresentationError(f"{shared!r} is not shared by {i} and {j}")
        assign[PartialConjugation(i, shared.vertices).symbol] = x.inverse()
        assign[PartialConjugation(j, shared.vertices).symbol] = y.inverse()
    return assign
