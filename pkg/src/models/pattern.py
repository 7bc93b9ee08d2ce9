from dataclasses import dataclass
from fractions import Fraction

from src.errors import InputError


@dataclass(frozen=True, order=True)
class Pattern:
    """
    The complete bipartite pattern K_{r,s}, stored with r >= s >= 2.

    K_{r,1} is a star and its bootstrap process is degenerate, so s = 1 is
    rejected. s = 2 is accepted for closures and threshold searches.
    """
    r: int
    s: int

    def __post_init__(self):
        r, s = max(self.r, self.s), min(self.r, self.s)
        if s < 2:
            raise InputError(f"K_{{{r},{s}}}: both parts need at least 2 vertices")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)

    @property
    def vertex_count(self) -> int:
        return self.r + self.s

    @property
    def edge_count(self) -> int:
        return self.r * self.s

    @property
    def lam(self) -> Fraction:
        return lambda_(self)

    def __str__(self):
        return f"K_{self.r},{self.s}"


def lambda_(pattern: Pattern) -> Fraction:
    """Density exponent (rs - 2) / (r + s - 2), exact and reduced."""
    return Fraction(pattern.r * pattern.s - 2, pattern.r + pattern.s - 2)
