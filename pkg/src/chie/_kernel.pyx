# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exact-cover kernel for regions of at most 64 quarter cells.

Same search order and node accounting as ``_kernel_py.solve``.
"""
from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef struct State:
    uint64_t full
    int ntypes
    uint64_t *masks
    int *offsets      # (cell * ntypes + type) -> start index into masks
    int *left
    int *stack_t
    uint64_t *stack_m
    int depth
    long long solutions
    long long nodes
    long long node_limit
    long long max_solutions
    bint stopped


cdef int _rec(State *s, uint64_t covered, object callback, list first) except -1:
    cdef int c, t, j, k, end
    cdef uint64_t m
    s.nodes += 1
    if s.node_limit and s.nodes > s.node_limit:
        s.stopped = True
        return 0
    if covered == s.full:
        s.solutions += 1
        if callback is not None or s.solutions == 1:
            sol = [(s.stack_t[k], s.stack_m[k]) for k in range(s.depth)]
            if s.solutions == 1:
                first.extend(sol)
            if callback is not None and callback(sol):
                s.stopped = True
                return 0
        if s.max_solutions and s.solutions >= s.max_solutions:
            s.stopped = True
        return 0
    c = __builtin_ctzll(~covered & s.full)
    for t in range(s.ntypes):
        if s.left[t] == 0:
            continue
        s.left[t] -= 1
        j = s.offsets[c * s.ntypes + t]
        end = s.offsets[c * s.ntypes + t + 1]
        while j < end:
            m = s.masks[j]
            j += 1
            if m & covered:
                continue
            s.stack_t[s.depth] = t
            s.stack_m[s.depth] = m
            s.depth += 1
            _rec(s, covered | m, callback, first)
            s.depth -= 1
            if s.stopped:
                s.left[t] += 1
                return 0
        s.left[t] += 1
    return 0


def solve(int ncells, mults, table, long long max_solutions=0,
          long long node_limit=0, callback=None):
    if ncells > 64:
        raise ValueError("compiled kernel handles at most 64 cells")
    cdef State s
    cdef int ntypes = len(mults)
    cdef int total = 0, idx = 0, c, t, depth = 0
    cdef list first
    for t in range(ntypes):
        for c in range(ncells):
            total += len(table[t][c])
        depth += mults[t]
    s.full = (<uint64_t>0xFFFFFFFFFFFFFFFF) if ncells == 64 else ((<uint64_t>1 << ncells) - 1)
    s.ntypes = ntypes
    s.masks = <uint64_t *> malloc(max(total, 1) * sizeof(uint64_t))
    s.offsets = <int *> malloc((ncells * ntypes + 1) * sizeof(int))
    s.left = <int *> malloc(max(ntypes, 1) * sizeof(int))
    s.stack_t = <int *> malloc(max(depth, 1) * sizeof(int))
    s.stack_m = <uint64_t *> malloc(max(depth, 1) * sizeof(uint64_t))
    s.depth = 0
    s.solutions = 0
    s.nodes = 0
    s.node_limit = node_limit
    s.max_solutions = max_solutions
    s.stopped = False
    first = []
    try:
        for t in range(ntypes):
            s.left[t] = mults[t]
        for c in range(ncells):
            for t in range(ntypes):
                s.offsets[c * ntypes + t] = idx
                for m in table[t][c]:
                    s.masks[idx] = m
                    idx += 1
        s.offsets[ncells * ntypes] = idx
        _rec(&s, 0, callback, first)
        return s.solutions, s.nodes, not s.stopped, (first if first else None)
    finally:
        free(s.masks)
        free(s.offsets)
        free(s.left)
        free(s.stack_t)
        free(s.stack_m)
