"""Pure-Python reference kernels.

Semantics-identical fallbacks for the compiled extension.  The greedy
colourer must produce the same colours as the compiled one (first-fit over
classes, identical edge order), so both implement exactly the same rule.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple


def find_c4_adj(adj: Sequence[Sequence[int]]) -> Optional[Tuple[int, int, int, int]]:
    """Some 4-cycle (w, x, y, z) with edges wx, xy, yz, zw, or None.

    Common-neighbour counting: the first vertex pair observed with two
    distinct common neighbours closes a C4.
    """
    seen = {}
    for v, nbrs in enumerate(adj):
        for i in range(len(nbrs)):
            x = nbrs[i]
            for j in range(i + 1, len(nbrs)):
                y = nbrs[j]
                w = seen.get((x, y))
                if w is not None:
                    return (x, w, y, v)
                seen[(x, y)] = v
    return None


def greedy_c4_colouring(n: int, edges: Sequence[Tuple[int, int]]) -> List[int]:
    """First-fit: each edge takes the smallest class not closing a C4."""
    class_adj: List[List[set]] = []
    colours: List[int] = []
    for u, v in edges:
        c = 0
        while c < len(class_adj):
            if not _closes_c4(class_adj[c], u, v):
                break
            c += 1
        if c == len(class_adj):
            class_adj.append([set() for _ in range(n)])
        class_adj[c][u].add(v)
        class_adj[c][v].add(u)
        colours.append(c)
    return colours


def _closes_c4(adj: List[set], u: int, v: int) -> bool:
    # A new C4 through uv needs a u-x-w-v path inside the class.
    av = adj[v]
    for x in adj[u]:
        for w in adj[x]:
            if w != u and w in av:
                return True
    return False
