"""Slow, independent reference implementations used only by the tests."""

import itertools
import math

import numpy as np


def brute_even_subgraphs(n_nodes, links):
    """Every link subset with even degree at each node, by checking all 2^L subsets."""
    out = []
    for mask in range(1 << len(links)):
        deg = [0] * n_nodes
        for lid, (a, b) in enumerate(links):
            if mask >> lid & 1:
                deg[a] += 1
                deg[b] += 1
        if all(d % 2 == 0 for d in deg):
            out.append(frozenset(l for l in range(len(links)) if mask >> l & 1))
    return out


def brute_loop_polynomial(n_nodes, links, Y):
    return sum(
        (np.prod([Y[l] for l in sub]) if sub else 1.0) for sub in brute_even_subgraphs(n_nodes, links)
    )


def naive_spin_sum(n_nodes, links, Y):
    """2^-N sum over all spins of prod (1 + s_a s_b Y), plain Python loops."""
    total = 0j
    for spins in itertools.product((1, -1), repeat=n_nodes):
        w = 1 + 0j
        for lid, (a, b) in enumerate(links):
            w *= 1 + spins[a] * spins[b] * Y[lid]
        total += w
    return total / 2**n_nodes


def naive_partition(n_nodes, links, y):
    total = 0j
    for spins in itertools.product((1, -1), repeat=n_nodes):
        total += np.exp(sum(y[l] * spins[a] * spins[b] for l, (a, b) in enumerate(links)))
    return total


def acos_angle(u, v):
    u, v = np.asarray(u, float), np.asarray(v, float)
    c = np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v))
    return math.acos(max(-1.0, min(1.0, c)))


def random_connected_multigraph(rng, n_nodes, extra_links):
    """A random spanning tree plus extra random links (parallel links allowed)."""
    links = [(int(rng.integers(0, k)), k) for k in range(1, n_nodes)]
    for _ in range(extra_links):
        a, b = rng.choice(n_nodes, 2, replace=False)
        links.append((int(a), int(b)))
    return links
