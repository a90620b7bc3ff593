"""
Pydantic output models: reports, serialized posets and error documents.
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, computed_field, model_validator

REPORT_SCHEMA_VERSION = 1


class GraphSummary(BaseModel):
    """Input graph and its dominating-vertex reduction."""

    n: int = Field(..., description="Vertex count of the input graph")
    edges: List[List[int]] = Field(default=[], description="Input edges")
    reduced_n: int = Field(..., description="Vertex count after removing dominating vertices")
    reduced_vertices: List[int] = Field(default=[], description="Surviving vertex labels")
    partial_conjugations: int = Field(..., description="Number of partial conjugations of the reduced graph")


class PosetDocument(BaseModel):
    """Serialized Whitehead poset."""

    vertices: List[int] = Field(..., description="Vertex labels of the reduced graph")
    edges: List[List[int]] = Field(default=[], description="Edges of the reduced graph")
    elements: List[Dict[int, List[List[int]]]] = Field(
        default=[], description="Vertex types as vertex -> sorted petal lists"
    )
    rank_histogram: List[int] = Field(default=[], description="Element count per rank")
    hasse_edges: List[List[int]] = Field(default=[], description="Covering pairs [lower, upper]")

    class Config:
        json_schema_extra = {
            "example": {
                "vertices": [1, 2],
                "edges": [],
                "elements": [{1: [[2]], 2: [[1]]}],
                "rank_histogram": [1],
                "hasse_edges": []
            }
        }


class RankRow(BaseModel):
    """One row of the per-rank census."""

    rank: int
    types: int = Field(..., description="Vertex types of this rank")
    essential: int = Field(..., description="Essential vertex types of this rank")


class BettiReport(BaseModel):
    """Betti numbers and torsion of a chain complex."""

    betti: List[int] = Field(default=[], description="Rank of H_p for p = 0, 1, ...")
    torsion: Dict[int, List[int]] = Field(default={}, description="Invariant factors > 1 per degree")
    reduced: bool = Field(default=False, description="Reduced homology (augmented complex)")
    empty: bool = Field(default=False, description="The complex had no cells")

    @property
    def torsion_free(self) -> bool:
        return not any(self.torsion.values())

    @property
    def acyclic(self) -> bool:
        """Nonempty with vanishing reduced homology."""
        return self.reduced and not self.empty and not any(self.betti) and self.torsion_free

    def concentrated_in_degree_zero(self) -> bool:
        return self.torsion_free and not any(self.betti[1:])


class E1RowReport(BaseModel):
    """Homology of one row E¹_{•,q}."""

    q: int
    dimensions: List[int] = Field(..., description="Ranks of the chain groups")
    homology: BettiReport
    expected_h0: int = Field(..., description="Essential count K_q")

    @property
    def concentrated(self) -> bool:
        h0 = self.homology.betti[0] if self.homology.betti else 0
        return h0 == self.expected_h0 and self.homology.concentrated_in_degree_zero()


class E1Report(BaseModel):
    """E¹ dimension table with optional row homology."""

    dimensions: List[List[int]] = Field(..., description="D[p][q], chains by exterior degree")
    rows: List[E1RowReport] = Field(default=[], description="Homology per row, when requested")

    @computed_field
    @property
    def concentrated(self) -> bool:
        return all(row.concentrated for row in self.rows)


class PhiReport(BaseModel):
    """Outcome of checking the degree-2 map B₁ -> B₂."""

    b1_size: int
    b2_size: int
    injective: bool
    image_in_b2: bool
    collisions: List[List[str]] = Field(default=[], description="Pairs of B₁ labels with equal image")
    case_counts: Dict[str, int] = Field(default={}, description="How often each case branch fired")

    @property
    def ok(self) -> bool:
        return self.injective and self.image_in_b2 and self.b1_size == self.b2_size


class RingCensus(BaseModel):
    """Degree-2 ring data."""

    b1_size: int
    b2_size: int
    expected: int = Field(..., description="Sum of K_i * N_j over i + j = 2")
    phi: PhiReport


class RelationItem(BaseModel):
    """One relation of the presentation."""

    tag: str = Field(..., description="Relation family: i, ii or iii")
    word: List[List[Any]] = Field(..., description="Letters as [symbol, exponent]")
    text: str = Field(..., description="Commutator notation")


class PresentationDocument(BaseModel):
    """Structured presentation export."""

    generators: List[str]
    relations: List[RelationItem] = []


class CheckResult(BaseModel):
    """Outcome of one property suite."""

    name: str
    passed: bool
    detail: Optional[str] = None


class CheckReport(BaseModel):
    """Outcome of the `check` subcommand."""

    schema_version: int = Field(default=REPORT_SCHEMA_VERSION, alias="schema")
    graph: GraphSummary
    results: List[CheckResult] = []

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    class Config:
        populate_by_name = True


class Report(BaseModel):
    """Full analysis report, versioned."""

    schema_version: int = Field(default=REPORT_SCHEMA_VERSION, alias="schema")
    graph: GraphSummary
    rank_histogram: List[int]
    rank_table: List[RankRow] = []
    chain_counts: List[int] = []
    k_vector: List[int]
    n_vector: List[int]
    betti_psout: List[int]
    betti_psaut: List[int]
    e1_dimensions: List[List[int]] = []
    ring: Optional[RingCensus] = None
    cached: bool = Field(default=False, description="Whether the poset came from the cache")

    @model_validator(mode="after")
    def counts_agree(self) -> "Report":
        if self.betti_psout != self.k_vector:
            raise ValueError("betti_psout must equal the essential counts")
        direct = [
            sum(
                self.k_vector[i] * self.n_vector[q - i]
                for i in range(len(self.k_vector))
                if 0 <= q - i < len(self.n_vector)
            )
            for q in range(len(self.k_vector) + len(self.n_vector) - 1)
        ]
        if self.betti_psaut != direct:
            raise ValueError("betti_psaut must be the convolution of K and N")
        degree_one = self.betti_psaut[1] if len(self.betti_psaut) > 1 else 0
        if degree_one != self.graph.partial_conjugations:
            raise ValueError("betti_psaut[1] must count the partial conjugations")
        if self.rank_table:
            if [row.types for row in self.rank_table] != self.rank_histogram:
                raise ValueError("rank table disagrees with the rank histogram")
            if [row.essential for row in self.rank_table] != self.k_vector:
                raise ValueError("rank table disagrees with the essential counts")
        if self.chain_counts and self.chain_counts[0] != sum(self.rank_histogram):
            raise ValueError("0-chains must be the poset elements")
        for p, row in enumerate(self.e1_dimensions):
            if p < len(self.chain_counts) and row and row[0] != self.chain_counts[p]:
                raise ValueError(f"E¹ dimension D[{p}][0] must count the {p}-chains")
        if self.ring is not None and self.ring.b2_size != self.ring.expected:
            raise ValueError("|B₂| must match the degree-2 Betti number")
        return self

    class Config:
        populate_by_name = True
        json_schema_extra = {
            "example": {
                "schema": 1,
                "graph": {
                    "n": 5,
                    "edges": [[1, 2]],
                    "reduced_n": 5,
                    "reduced_vertices": [1, 2, 3, 4, 5],
                    "partial_conjugations": 15
                },
                "rank_histogram": [1, 15, 32, 12, 1],
                "k_vector": [1, 10, 27, 10, 1],
                "n_vector": [1, 5, 1],
                "betti_psout": [1, 10, 27, 10, 1],
                "betti_psaut": [1, 15, 78, 155, 78, 15, 1],
                "cached": False
            }
        }


class ErrorResponse(BaseModel):
    """Standard error response."""

    error: str = Field(..., description="Error type")
    message: str = Field(..., description="Error message")
    detail: Optional[Any] = Field(None, description="Additional error details")

    class Config:
        json_schema_extra = {
            "example": {
                "error": "GraphParseError",
                "message": "line 2: self-loop at vertex 1",
                "detail": {"line": 2}
            }
        }
