"""
Pydantic input models.
"""
from typing import List

from pydantic import BaseModel, Field, field_validator, model_validator


class GraphDocument(BaseModel):
    """Structured graph input: {"n": int, "edges": [[u, v], ...]}."""

    n: int = Field(..., ge=0, description="Number of vertices, labelled 1..n")
    edges: List[List[int]] = Field(default=[], description="Unordered vertex pairs")

    @field_validator("edges")
    @classmethod
    def edges_are_pairs(cls, edges: List[List[int]]) -> List[List[int]]:
        for index, edge in enumerate(edges):
            if len(edge) != 2:
                raise ValueError(f"edge #{index + 1} must have exactly two endpoints")
        return edges

    @model_validator(mode="after")
    def edges_are_simple(self) -> "GraphDocument":
        seen = set()
        for index, (u, v) in enumerate(self.edges):
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge #{index + 1} ({u}, {v}) has an endpoint outside 1..{self.n}")
            if u == v:
                raise ValueError(f"edge #{index + 1} is a self-loop at {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"edge #{index + 1} duplicates {key}")
            seen.add(key)
        return self

    class Config:
        json_schema_extra = {
            "example": {
                "n": 5,
                "edges": [[1, 2]]
            }
        }
