# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels: lexicographic streaming of S_q with
C-level cycle decomposition and union-find.

Same interface as pagecurve._enum_py; selected automatically at import by
pagecurve.kernels when the extension is built.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

import itertools


cdef long CATALAN[16]
CATALAN[0] = 1
cdef int _i
for _i in range(1, 16):
    CATALAN[_i] = CATALAN[_i - 1] * 2 * (2 * _i - 1) // (_i + 1)


cdef inline int _find(int* parent, int x) nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef inline bint _next_permutation(int* p, int n) nogil:
    # standard lexicographic successor
    cdef int i = n - 2
    cdef int j, tmp, lo, hi
    while i >= 0 and p[i] >= p[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = n - 1
    while p[j] <= p[i]:
        j -= 1
    tmp = p[i]; p[i] = p[j]; p[j] = tmp
    lo = i + 1; hi = n - 1
    while lo < hi:
        tmp = p[lo]; p[lo] = p[hi]; p[hi] = tmp
        lo += 1; hi -= 1
    return True


def xi_condition_sum(int half, int offset):
    """Signed Catalan-product sum over S_{2*half} with xi == |tau| + offset."""
    cdef int q = 2 * half
    cdef int* p = <int*> malloc(q * sizeof(int))
    cdef int* parent = <int*> malloc(half * sizeof(int))
    cdef int* seen = <int*> malloc(q * sizeof(int))
    if p == NULL or parent == NULL or seen == NULL:
        free(p); free(parent); free(seen)
        raise MemoryError()
    cdef long long total = 0
    cdef long long term
    cdef int v, a, x, y, xi, ncyc, s, j, ln
    cdef bint more = True
    for v in range(q):
        p[v] = v
    with nogil:
        while more:
            for v in range(half):
                parent[v] = v
            for a in range(1, half):
                x = _find(parent, p[2 * a - 1] >> 1)
                y = _find(parent, p[2 * a] >> 1)
                if x != y:
                    parent[x] = y
            x = _find(parent, p[q - 1] >> 1)
            y = _find(parent, p[0] >> 1)
            if x != y:
                parent[x] = y
            xi = 0
            for v in range(half):
                if parent[v] == v:
                    xi += 1

            for v in range(q):
                seen[v] = 0
            ncyc = 0
            term = 1
            for s in range(q):
                if not seen[s]:
                    ln = 0
                    j = s
                    while not seen[j]:
                        seen[j] = 1
                        j = p[j]
                        ln += 1
                    ncyc += 1
                    term *= CATALAN[ln - 1]
            if xi == (q - ncyc) + offset:
                total += -term if ncyc & 1 else term
            more = _next_permutation(p, q)
    free(p); free(parent); free(seen)
    return int(total)


cdef int _components(int n_nodes, int* parent, list edges):
    cdef int a, b, cnt = 0
    for a in range(n_nodes):
        parent[a] = a
    for a, b in edges:
        a = _find(parent, a)
        b = _find(parent, b)
        if a != b:
            parent[a] = b
    for a in range(n_nodes):
        if parent[a] == a:
            cnt += 1
    return cnt


def moment_pair_counts(powers):
    """Counts of (cycle type of sigma tau^-1, row components, column components).

    Same contract as the pure-Python kernel; the double loop over S_q x S_q
    runs at C speed with an inline cycle-type digest.
    """
    from pagecurve._enum_py import _structural_edges

    powers = tuple(powers)
    cdef int q = 2 * sum(powers)
    i_edges, j_edges = _structural_edges(powers)
    perms = list(itertools.permutations(range(q)))
    cdef int fact = len(perms)

    cdef int* parent = <int*> malloc(2 * q * sizeof(int))
    cdef int* flat = <int*> malloc(fact * q * sizeof(int))
    cdef int* inv_flat = <int*> malloc(fact * q * sizeof(int))
    cdef char* comp_a = <char*> malloc(fact)
    cdef char* comp_b = <char*> malloc(fact)
    cdef int* comp = <int*> malloc(q * sizeof(int))
    cdef int* seen = <int*> malloc(q * sizeof(int))
    if (parent == NULL or flat == NULL or inv_flat == NULL or comp_a == NULL
            or comp_b == NULL or comp == NULL or seen == NULL):
        free(parent); free(flat); free(inv_flat); free(comp_a)
        free(comp_b); free(comp); free(seen)
        raise MemoryError()

    cdef int idx, m
    for idx, p in enumerate(perms):
        for m in range(q):
            flat[idx * q + m] = p[m]
            inv_flat[idx * q + p[m]] = m
        sigma_edges = [(m, q + p[m]) for m in range(q)]
        comp_a[idx] = _components(2 * q, parent, i_edges + sigma_edges)
        comp_b[idx] = _components(2 * q, parent, j_edges + sigma_edges)

    # cycle-type digest: product of primes indexed by cycle length is a
    # collision-free encoding of the length multiset
    cdef long primes[12]
    primes[0] = 2; primes[1] = 3; primes[2] = 5; primes[3] = 7
    primes[4] = 11; primes[5] = 13; primes[6] = 17; primes[7] = 19
    primes[8] = 23; primes[9] = 29; primes[10] = 31; primes[11] = 37
    cdef long max_digest = 1
    for m in range(q):
        max_digest *= 2
    cdef long long* counts = <long long*> malloc(
        (max_digest + 1) * (q + 1) * (q + 1) * sizeof(long long))
    if counts == NULL:
        free(parent); free(flat); free(inv_flat); free(comp_a)
        free(comp_b); free(comp); free(seen)
        raise MemoryError()
    cdef long cell
    for cell in range((max_digest + 1) * (q + 1) * (q + 1)):
        counts[cell] = 0

    cdef int si, ti, s, j, ln, a
    cdef long digest
    cdef int* sig
    cdef int* tin
    with nogil:
        for si in range(fact):
            sig = flat + si * q
            a = comp_a[si]
            for ti in range(fact):
                tin = inv_flat + ti * q
                for m in range(q):
                    comp[m] = sig[tin[m]]
                digest = 1
                for m in range(q):
                    seen[m] = 0
                for s in range(q):
                    if not seen[s]:
                        ln = 0
                        j = s
                        while not seen[j]:
                            seen[j] = 1
                            j = comp[j]
                            ln += 1
                        digest *= primes[ln - 1]
                if digest > max_digest:
                    digest = max_digest  # unreachable: max digest is 2^q
                counts[(digest * (q + 1) + a) * (q + 1) + comp_b[ti]] += 1

    # translate digests back to cycle-type tuples
    digest_to_type = {}
    for p in perms:
        seen_py = [False] * q
        lens = []
        for s in range(q):
            if not seen_py[s]:
                ln = 0
                j = s
                while not seen_py[j]:
                    seen_py[j] = True
                    j = p[j]
                    ln += 1
                lens.append(ln)
        d = 1
        for ln in lens:
            d *= primes[ln - 1]
        digest_to_type[d] = tuple(sorted(lens))

    out = {}
    cdef int bb
    for d, ctype in digest_to_type.items():
        for a in range(q + 1):
            for bb in range(q + 1):
                cell = (<long> d * (q + 1) + a) * (q + 1) + bb
                if counts[cell]:
                    out[(ctype, a, bb)] = int(counts[cell])

    free(parent); free(flat); free(inv_flat); free(comp_a)
    free(comp_b); free(comp); free(seen); free(counts)
    return out
