"""Slow, independent reference implementations used as test oracles.

Everything here works on plain Python lists / numpy arrays and shares no
code with the package.
"""

from itertools import combinations, product

import numpy as np


def gf2_rank(rows, ncols):
    """Rank by dense Gaussian elimination on a numpy array."""
    a = np.zeros((len(rows), ncols), dtype=np.uint8)
    for i, r in enumerate(rows):
        for j in r:
            a[i, j] ^= 1
    rank = 0
    for c in range(ncols):
        piv = [i for i in range(rank, a.shape[0]) if a[i, c]]
        if not piv:
            continue
        a[[rank, piv[0]]] = a[[piv[0], rank]]
        for i in range(a.shape[0]):
            if i != rank and a[i, c]:
                a[i] ^= a[rank]
        rank += 1
    return rank


def span(vectors):
    """All XOR combinations of integer bit-vectors (exponential)."""
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


def gb_supports(l, a_set, b_set):
    """X- and Z-check supports of a bicycle code straight from the definition."""
    hx = [sorted([(j + a) % l for a in a_set] + [l + (j + b) % l for b in b_set]) for j in range(l)]
    hz = [sorted([l + (j - a) % l for a in a_set] + [(j - b) % l for b in b_set]) for j in range(l)]
    return hx, hz


def brute_min_logical(hx_rows, hz_rows, n, kind):
    """Lightest X-type (kind 'X') logical by enumerating all 2^n vectors."""
    checks = hz_rows if kind == "X" else hx_rows
    stabs = span(sum(1 << q for q in r) for r in (hx_rows if kind == "X" else hz_rows))
    masks = [sum(1 << q for q in r) for r in checks]
    best = None
    for v in range(1, 1 << n):
        if any(bin(v & m).count("1") % 2 for m in masks):
            continue
        if v in stabs:
            continue
        w = bin(v).count("1")
        if best is None or w < best:
            best = w
    return best


def brute_cut_cheeger(nv, edges):
    """min cut(S)/|S| over nonempty S with 2|S| <= nv, as (num, den)."""
    best = None
    for size in range(1, nv // 2 + 1):
        for s in combinations(range(nv), size):
            ss = set(s)
            cut = sum((a in ss) != (b in ss) for a, b in edges)
            if best is None or cut * best[1] < best[0] * size:
                best = (cut, size)
    return best


def brute_boundary_cheeger(nv, incidence):
    """Same, with boundary = C-nodes of odd incidence."""
    best = None
    for size in range(1, nv // 2 + 1):
        for s in combinations(range(nv), size):
            counts = {}
            for v in s:
                for c in incidence[v]:
                    counts[c] = counts.get(c, 0) + 1
            num = sum(1 for c in counts.values() if c % 2)
            if best is None or num * best[1] < best[0] * size:
                best = (num, size)
    return best


def all_pairs_commute(checks):
    """checks: list of (xmask, zmask)."""
    for (x1, z1), (x2, z2) in combinations(checks, 2):
        if (bin(x1 & z2).count("1") + bin(z1 & x2).count("1")) % 2:
            return False
    return True


__all__ = [
    "gf2_rank", "span", "gb_supports", "brute_min_logical", "brute_cut_cheeger",
    "brute_boundary_cheeger", "all_pairs_commute", "product",
]
