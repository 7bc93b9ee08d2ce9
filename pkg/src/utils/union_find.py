from typing import List


class UnionFind:
    """Disjoint sets over 0..size-1 that can grow one element at a time."""

    def __init__(self, size: int = 0):
        self.parents: List[int] = list(range(size))
        self.sizes: List[int] = [1] * size
        self.components = size

    def add(self) -> int:
        node = len(self.parents)
        self.parents.append(node)
        self.sizes.append(1)
        self.components += 1
        return node

    def root(self, v: int) -> int:
        root = v
        while self.parents[root] != root:
            root = self.parents[root]
        # path compression
        while self.parents[v] != root:
            self.parents[v], v = root, self.parents[v]
        return root

    def join(self, a: int, b: int) -> bool:
        """Merges the sets of a and b. False when they were already together."""
        ra, rb = self.root(a), self.root(b)
        if ra == rb:
            return False
        if self.sizes[ra] < self.sizes[rb]:
            ra, rb = rb, ra
        self.parents[rb] = ra
        self.sizes[ra] += self.sizes[rb]
        self.components -= 1
        return True
