from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel

from src.models.graph import Edge


class Meta(BaseModel):
    version: str
    command: str


def frac(value: Optional[Fraction]) -> Optional[str]:
    """Exact rationals travel as strings: "7/4", "-1/6", "2"."""
    if value is None:
        return None
    return str(value)


def edge_pair(edge: Optional[Edge]) -> Optional[List[int]]:
    return None if edge is None else [edge.u, edge.v]
