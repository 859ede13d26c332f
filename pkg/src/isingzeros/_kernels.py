"""Compiled enumeration kernels.

Every sum is a perfect binary (pairwise) tree over the enumeration index.
Work is split into 2^T contiguous, power-of-two sized tasks whose partial
sums are combined with the same tree, so results are bit-identical for any
task split and any thread count.
"""

import numpy as np
from numba import config, njit, prange

# the bundled TBB is too old on some systems; avoid probing it
config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@njit(cache=True, inline="always")
def _push(stack, top, count, value):
    # pairwise merge: after the j-th push (0-based), merge once per trailing 1-bit of j
    v = value
    j = count
    while j & 1:
        top -= 1
        v = stack[top] + v
        j >>= 1
    stack[top] = v
    return top + 1


@njit(cache=True)
def _tree_reduce(values):
    n = values.shape[0]
    buf = values.copy()
    while n > 1:
        half = n // 2
        for k in range(half):
            buf[k] = buf[2 * k] + buf[2 * k + 1]
        n = half
    return buf[0]


@njit(cache=True)
def _node_factor(k, spins, ptr, nbr, wa, wd, aa, ad):
    f = 1.0 + 0.0j
    g = 1.0
    sk = spins[k]
    for e in range(ptr[k], ptr[k + 1]):
        if spins[nbr[e]] == sk:
            f *= wa[e]
            g *= aa[e]
        else:
            f *= wd[e]
            g *= ad[e]
    return f, g


@njit(cache=True)
def _spin_task(task, n_nodes, task_bits, ptr, nbr, wa, wd, aa, ad, compensated):
    # node 0 is pinned to +1; nodes 1..task_bits are fixed by the task index;
    # the remaining nodes are enumerated with node n_nodes-1 as the fastest bit.
    free = n_nodes - 1 - task_bits
    spins = np.ones(n_nodes, dtype=np.int8)
    for b in range(task_bits):
        node = 1 + b
        if (task >> (task_bits - 1 - b)) & 1:
            spins[node] = -1
    prod = np.empty(n_nodes, dtype=np.complex128)
    aprod = np.empty(n_nodes, dtype=np.float64)
    prod[0] = 1.0
    aprod[0] = 1.0
    for k in range(1, n_nodes):
        f, g = _node_factor(k, spins, ptr, nbr, wa, wd, aa, ad)
        prod[k] = prod[k - 1] * f
        aprod[k] = aprod[k - 1] * g

    stack = np.empty(free + 2, dtype=np.complex128)
    astack = np.empty(free + 2, dtype=np.float64)
    top = 0
    atop = 0
    csum = 0.0 + 0.0j
    ccomp = 0.0 + 0.0j
    n_leaves = 1 << free
    for j in range(n_leaves):
        if j > 0:
            # bits 0..p of the leaf index changed; bit q belongs to node n-1-q
            p = 0
            while not (j >> p) & 1:
                p += 1
            for q in range(p + 1):
                node = n_nodes - 1 - q
                spins[node] = -1 if (j >> q) & 1 else 1
            for node in range(n_nodes - 1 - p, n_nodes):
                f, g = _node_factor(node, spins, ptr, nbr, wa, wd, aa, ad)
                prod[node] = prod[node - 1] * f
                aprod[node] = aprod[node - 1] * g
        leaf = prod[n_nodes - 1]
        if compensated:
            # Neumaier summation, separately on real and imaginary parts
            t = csum + leaf
            re_c = (csum.real - t.real) + leaf.real if abs(csum.real) >= abs(leaf.real) else (leaf.real - t.real) + csum.real
            im_c = (csum.imag - t.imag) + leaf.imag if abs(csum.imag) >= abs(leaf.imag) else (leaf.imag - t.imag) + csum.imag
            ccomp += complex(re_c, im_c)
            csum = t
        else:
            top = _push(stack, top, j, leaf)
        atop = _push(astack, atop, j, aprod[n_nodes - 1])
    if compensated:
        return csum + ccomp, astack[0]
    return stack[0], astack[0]


@njit(cache=True, parallel=True)
def spin_sum(n_nodes, task_bits, ptr, nbr, wa, wd, compensated):
    """Sum over spins (node 0 pinned) of prod_links (wa if agree else wd).

    Returns (tree sum, tree sum of absolute values) over the 2^(n_nodes-1)
    configurations with node 0 = +1.
    """
    aa = np.abs(wa)
    ad = np.abs(wd)
    n_tasks = 1 << task_bits
    vals = np.empty(n_tasks, dtype=np.complex128)
    avals = np.empty(n_tasks, dtype=np.float64)
    for t in prange(n_tasks):
        v, a = _spin_task(t, n_nodes, task_bits, ptr, nbr, wa, wd, aa, ad, compensated)
        vals[t] = v
        avals[t] = a
    return _tree_reduce(vals), _tree_reduce(avals)


@njit(cache=True)
def _gray_task(task, task_bits, dim, n_links, bptr, blinks, y, ay):
    free = dim - task_bits
    inc = np.zeros(n_links, dtype=np.bool_)
    start = task << free
    gray = start ^ (start >> 1)
    for b in range(dim):
        if (gray >> b) & 1:
            for e in range(bptr[b], bptr[b + 1]):
                inc[blinks[e]] = not inc[blinks[e]]
    stack = np.empty(free + 2, dtype=np.complex128)
    astack = np.empty(free + 2, dtype=np.float64)
    top = 0
    atop = 0
    for j in range(1 << free):
        if j > 0:
            i = start + j
            b = 0
            while not (i >> b) & 1:
                b += 1
            for e in range(bptr[b], bptr[b + 1]):
                inc[blinks[e]] = not inc[blinks[e]]
        v = 1.0 + 0.0j
        a = 1.0
        for l in range(n_links):
            if inc[l]:
                v *= y[l]
                a *= ay[l]
        top = _push(stack, top, j, v)
        atop = _push(astack, atop, j, a)
    return stack[0], astack[0]


@njit(cache=True, parallel=True)
def even_subgraph_sum(dim, task_bits, n_links, bptr, blinks, y):
    """Sum over the 2^dim cycle-space elements (Gray-code order) of prod_{l in G} y_l."""
    ay = np.abs(y)
    n_tasks = 1 << task_bits
    vals = np.empty(n_tasks, dtype=np.complex128)
    avals = np.empty(n_tasks, dtype=np.float64)
    for t in prange(n_tasks):
        v, a = _gray_task(t, task_bits, dim, n_links, bptr, blinks, y, ay)
        vals[t] = v
        avals[t] = a
    return _tree_reduce(vals), _tree_reduce(avals)


@njit(cache=True, parallel=True)
def sign_table(n_links, gptr, glinks, y_plus, y_minus):
    """|P| and the monomial scale for every sign vector.

    Config index bit l set means link l takes ``y_minus``. Monomials are the
    even subgraphs, given as CSR (gptr, glinks), summed pairwise.
    """
    n_cfg = 1 << n_links
    n_mono = gptr.shape[0] - 1
    out_abs = np.empty(n_cfg, dtype=np.float64)
    out_scale = np.empty(n_cfg, dtype=np.float64)
    ap = np.abs(y_plus)
    am = np.abs(y_minus)
    for c in prange(n_cfg):
        terms = np.empty(n_mono, dtype=np.complex128)
        aterms = np.empty(n_mono, dtype=np.float64)
        for m in range(n_mono):
            v = 1.0 + 0.0j
            a = 1.0
            for e in range(gptr[m], gptr[m + 1]):
                l = glinks[e]
                if (c >> l) & 1:
                    v *= y_minus[l]
                    a *= am[l]
                else:
                    v *= y_plus[l]
                    a *= ap[l]
            terms[m] = v
            aterms[m] = a
        out_abs[c] = abs(_tree_reduce(terms))
        out_scale[c] = _tree_reduce(aterms)
    return out_abs, out_scale
