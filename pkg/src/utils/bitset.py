"""Integer bit-vector helpers. Bit i set means vertex i is a member."""
from typing import Iterator, List


def iter_bits(value: int) -> Iterator[int]:
    """Yields set bit positions in ascending order."""
    while value:
        low = value & -value
        yield low.bit_length() - 1
        value ^= low


def lowest_bits(value: int, k: int) -> List[int]:
    """The k smallest members of the set, ascending. Fewer if the set is smaller."""
    out = []
    while value and len(out) < k:
        low = value & -value
        out.append(low.bit_length() - 1)
        value ^= low
    return out


def above(value: int, index: int) -> int:
    """Members strictly greater than index."""
    return (value >> (index + 1)) << (index + 1)


def full_mask(n: int) -> int:
    return (1 << n) - 1
