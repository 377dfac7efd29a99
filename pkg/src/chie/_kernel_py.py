"""Pure-Python exact-cover kernel (reference and fallback for the Cython one).

The region's cells are numbered 0..ncells-1 and every placement is a bit
mask.  ``table[t][c]`` lists the placements of piece type ``t`` whose lowest
cell is ``c``.  The search always covers the lowest uncovered cell, and
identical pieces are consumed from a per-type counter, so every partition
of the region is visited exactly once.
"""
from __future__ import annotations


def solve(ncells, mults, table, max_solutions=0, node_limit=0, callback=None):
    """Run the search.

    Returns ``(solutions, nodes, complete, first)`` where ``complete`` is
    False when the node limit or ``max_solutions`` cut the search short,
    and ``first`` is the first solution found as ``[(type, mask), ...]``.
    A ``callback`` receives each solution and may return True to stop.
    """
    full = (1 << ncells) - 1
    left = list(mults)
    ntypes = len(left)
    stack: list[tuple[int, int]] = []
    solutions = 0
    nodes = 0
    first = None
    stopped = False

    def rec(covered: int) -> None:
        nonlocal solutions, nodes, first, stopped
        nodes += 1
        if node_limit and nodes > node_limit:
            stopped = True
            return
        if covered == full:
            solutions += 1
            if first is None:
                first = list(stack)
            if callback is not None and callback(list(stack)):
                stopped = True
            elif max_solutions and solutions >= max_solutions:
                stopped = True
            return
        free = ~covered & full
        c = (free & -free).bit_length() - 1
        for t in range(ntypes):
            if not left[t]:
                continue
            left[t] -= 1
            for m in table[t][c]:
                if m & covered:
                    continue
                stack.append((t, m))
                rec(covered | m)
                stack.pop()
                if stopped:
                    left[t] += 1
                    return
            left[t] += 1

    rec(0)
    return solutions, nodes, not stopped, first
