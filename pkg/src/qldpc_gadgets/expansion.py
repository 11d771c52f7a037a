"""Boundary Cheeger constants of gadget Tanner graphs and expander augmentation.

A gadget's X-checks (chi) form the vertex set ``V``; its gadget qubits form
``C``.  For ``v`` a subset of ``V``, the boundary is the set of gadget qubits
with an odd number of neighbours in ``v``, and

    h = min over nonempty v with 2|v| <= |V| of |boundary(v)| / |v|.

Every gadget qubit meets exactly two chi checks, so the gadget is also a
multigraph on ``V`` (one edge per gadget qubit), and ``h`` is that graph's
ordinary edge-cut Cheeger constant.  Both forms are computed here by
independent exhaustive scans.

Scans walk subsets in Gray-code order, updating the boundary incrementally.
Ties are broken towards the lexicographically least witness (compare sorted
index tuples).
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numba
import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .css import CssCode
from .gadget import Gadget, add_edges, verify_gadget

log = logging.getLogger(__name__)

DEFAULT_EXHAUSTIVE_BOUND = 26
_HARD_LIMIT = 40


class ExhaustiveBoundError(ValueError):
    """The vertex set is too large for an exhaustive subset scan."""


@dataclass(frozen=True)
class CheegerResult:
    numerator: int
    denominator: int
    witness: tuple[int, ...]

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator


@dataclass(frozen=True)
class BipartiteBoundaryGraph:
    """``incidence[i]`` lists the C-nodes adjacent to V-node ``i`` (repeats allowed)."""

    v_nodes: tuple[int, ...]
    c_nodes: tuple[int, ...]
    incidence: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.incidence) != len(self.v_nodes):
            raise ValueError("need one incidence list per V-node")
        nc = len(self.c_nodes)
        for row in self.incidence:
            if any(not 0 <= c < nc for c in row):
                raise ValueError("incidence refers to a missing C-node")

    @classmethod
    def from_gadget(cls, gadget: Gadget) -> "BipartiteBoundaryGraph":
        inc = tuple(
            tuple(t for t in range(gadget.num_qubits) if (m >> t) & 1) for m in gadget.chi_support
        )
        return cls(tuple(range(gadget.num_chi)), tuple(range(gadget.num_qubits)), inc)

    def parity_masks(self) -> list[int]:
        out = []
        for row in self.incidence:
            m = 0
            for c in row:
                m ^= 1 << c
            out.append(m)
        return out

    def c_degrees(self) -> list[int]:
        deg = [0] * len(self.c_nodes)
        for row in self.incidence:
            for c in row:
                deg[c] += 1
        return deg


@dataclass(frozen=True)
class ContractedGraph:
    """Multigraph on ``vertices``; ``edges`` are index pairs, parallels kept."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        nv = len(self.vertices)
        for a, b in self.edges:
            if not (0 <= a < nv and 0 <= b < nv) or a == b:
                raise ValueError(f"bad edge {(a, b)}")

    @classmethod
    def from_bipartite(cls, g: BipartiteBoundaryGraph) -> "ContractedGraph":
        ends: list[list[int]] = [[] for _ in g.c_nodes]
        for i, row in enumerate(g.incidence):
            for c in row:
                ends[c].append(i)
        edges = []
        for c, e in enumerate(ends):
            if len(e) != 2 or e[0] == e[1]:
                raise ValueError(f"C-node {g.c_nodes[c]} does not join exactly two V-nodes")
            edges.append((e[0], e[1]))
        return cls(g.v_nodes, tuple(edges))

    @classmethod
    def from_gadget(cls, gadget: Gadget) -> "ContractedGraph":
        return cls.from_bipartite(BipartiteBoundaryGraph.from_gadget(gadget))

    def cut(self, subset: Sequence[int]) -> int:
        s = set(subset)
        return sum((a in s) != (b in s) for a, b in self.edges)


@dataclass
class AugmentationResult:
    added_edges: list[tuple[int, int]]
    achieved_h: Fraction
    witness: tuple[int, ...]
    gadget: Gadget
    optimal: bool = False
    history: list[Fraction] = field(default_factory=list)

    @property
    def added_qubit_count(self) -> int:
        """One data qubit plus one gauge-check ancilla per added edge."""
        return 2 * len(self.added_edges)


# numba kernels ---------------------------------------------------------------


@numba.njit(cache=True)
def _lex_less(a, b):
    # sorted-tuple lexicographic order on two distinct bitmasks
    d = a ^ b
    low = d & (-d)
    if a & low:
        return (b & ~(low - 1)) != 0
    return (a & ~(low - 1)) == 0


@numba.njit(cache=True)
def _popcount64(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return ((x * 0x0101010101010101) & 0xFFFFFFFFFFFFFFFF) >> 56


@numba.njit(cache=True)
def _boundary_scan(words):
    # words[i, w]: parity incidence of V-node i, 64 C-nodes per word
    nv, nw = words.shape
    acc = np.zeros(nw, np.uint64)
    best_num = -1
    best_den = 1
    best_mask = 0
    mask = 0
    size = 0
    for i in range(1, 1 << nv):
        b = 0
        t = i
        while (t & 1) == 0:
            t >>= 1
            b += 1
        if (mask >> b) & 1:
            size -= 1
        else:
            size += 1
        mask ^= 1 << b
        for w in range(nw):
            acc[w] ^= words[b, w]
        if 2 * size > nv:
            continue
        num = 0
        for w in range(nw):
            num += _popcount64(acc[w])
        if best_num < 0 or num * best_den < best_num * size:
            best_num, best_den, best_mask = num, size, mask
        elif num * best_den == best_num * size and _lex_less(mask, best_mask):
            best_num, best_den, best_mask = num, size, mask
    return best_num, best_den, best_mask


@numba.njit(cache=True)
def _adjacency(nv, eu, ev):
    deg = np.zeros(nv, np.int64)
    for e in range(len(eu)):
        deg[eu[e]] += 1
        deg[ev[e]] += 1
    start = np.zeros(nv + 1, np.int64)
    for i in range(nv):
        start[i + 1] = start[i] + deg[i]
    nb = np.zeros(start[nv], np.int64)
    fill = start[:-1].copy()
    for e in range(len(eu)):
        nb[fill[eu[e]]] = ev[e]
        fill[eu[e]] += 1
        nb[fill[ev[e]]] = eu[e]
        fill[ev[e]] += 1
    return start, nb


@numba.njit(cache=True)
def _cut_scan(nv, eu, ev):
    start, nb = _adjacency(nv, eu, ev)
    inside = np.zeros(nv, np.uint8)
    best_num = -1
    best_den = 1
    best_mask = 0
    cut = 0
    size = 0
    mask = 0
    for i in range(1, 1 << nv):
        b = 0
        t = i
        while (t & 1) == 0:
            t >>= 1
            b += 1
        s = -1 if inside[b] else 1
        inside[b] ^= 1
        size += s
        for p in range(start[b], start[b + 1]):
            if inside[nb[p]]:
                cut -= s
            else:
                cut += s
        mask ^= 1 << b
        if 2 * size > nv:
            continue
        if best_num < 0 or cut * best_den < best_num * size:
            best_num, best_den, best_mask = cut, size, mask
        elif cut * best_den == best_num * size and _lex_less(mask, best_mask):
            best_num, best_den, best_mask = cut, size, mask
    return best_num, best_den, best_mask


@numba.njit(cache=True)
def _deficient_subsets(nv, eu, ev, p, q, cap, slack):
    # counts subsets with q*cut < p*size; keeps the `cap` subsets with the
    # largest shortfall among those with q*cut < p*size + slack
    start, nb = _adjacency(nv, eu, ev)
    inside = np.zeros(nv, np.uint8)
    out = np.zeros(cap, np.int64)
    outd = np.zeros(cap, np.int64)
    cnt = 0
    total = 0
    cut = 0
    size = 0
    mask = 0
    worst = 0
    for i in range(1, 1 << nv):
        b = 0
        t = i
        while (t & 1) == 0:
            t >>= 1
            b += 1
        s = -1 if inside[b] else 1
        inside[b] ^= 1
        size += s
        for k in range(start[b], start[b + 1]):
            if inside[nb[k]]:
                cut -= s
            else:
                cut += s
        mask ^= 1 << b
        if 2 * size > nv:
            continue
        d = p * size - q * cut
        if d <= -slack:
            continue
        if d > 0:
            total += 1
        if cnt < cap:
            out[cnt] = mask
            outd[cnt] = d
            cnt += 1
            if cnt == cap:
                worst = 0
                for j in range(cap):
                    if outd[j] < outd[worst]:
                        worst = j
        elif outd[worst] < d:
            out[worst] = mask
            outd[worst] = d
            worst = 0
            for j in range(cap):
                if outd[j] < outd[worst]:
                    worst = j
    return out[:cnt], outd[:cnt], total


@numba.njit(cache=True)
def _deficient_weighted(nv, eu, ev, w, p, q, cap, tol):
    # like _deficient_subsets with real edge weights (LP relaxation rounds)
    deg = np.zeros(nv, np.int64)
    for e in range(len(eu)):
        deg[eu[e]] += 1
        deg[ev[e]] += 1
    start = np.zeros(nv + 1, np.int64)
    for i in range(nv):
        start[i + 1] = start[i] + deg[i]
    nb = np.zeros(start[nv], np.int64)
    wt = np.zeros(start[nv], np.float64)
    fill = start[:-1].copy()
    for e in range(len(eu)):
        nb[fill[eu[e]]] = ev[e]
        wt[fill[eu[e]]] = w[e]
        fill[eu[e]] += 1
        nb[fill[ev[e]]] = eu[e]
        wt[fill[ev[e]]] = w[e]
        fill[ev[e]] += 1
    inside = np.zeros(nv, np.uint8)
    out = np.zeros(cap, np.int64)
    outd = np.zeros(cap, np.float64)
    cnt = 0
    total = 0
    cut = 0.0
    size = 0
    mask = 0
    worst = 0
    for i in range(1, 1 << nv):
        b = 0
        t = i
        while (t & 1) == 0:
            t >>= 1
            b += 1
        s = -1 if inside[b] else 1
        inside[b] ^= 1
        size += s
        for k in range(start[b], start[b + 1]):
            if inside[nb[k]]:
                cut -= s * wt[k]
            else:
                cut += s * wt[k]
        mask ^= 1 << b
        if 2 * size > nv:
            continue
        d = p * size - q * cut
        if d <= tol:
            continue
        total += 1
        if cnt < cap:
            out[cnt] = mask
            outd[cnt] = d
            cnt += 1
            if cnt == cap:
                worst = 0
                for j in range(cap):
                    if outd[j] < outd[worst]:
                        worst = j
        elif outd[worst] < d:
            out[worst] = mask
            outd[worst] = d
            worst = 0
            for j in range(cap):
                if outd[j] < outd[worst]:
                    worst = j
    return out[:cnt], total


# public scans ----------------------------------------------------------------


def _check_size(nv: int, bound: int) -> None:
    if nv < 1:
        raise ValueError("need at least one vertex")
    if nv > min(bound, _HARD_LIMIT):
        raise ExhaustiveBoundError(
            f"{nv} vertices exceed the exhaustive bound {min(bound, _HARD_LIMIT)}"
        )


def _mask_tuple(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def boundary_of(g: BipartiteBoundaryGraph, subset: Sequence[int]) -> tuple[int, ...]:
    """C-nodes with an odd number of neighbours in ``subset`` (indices)."""
    masks = g.parity_masks()
    acc = 0
    for i in set(subset):
        acc ^= masks[i]
    return _mask_tuple(acc)


def boundary_cheeger(g: BipartiteBoundaryGraph, bound: int = DEFAULT_EXHAUSTIVE_BOUND) -> CheegerResult:
    """Exact boundary Cheeger constant with its canonical witness.

    With a single V-node no subset satisfies ``2|v| <= |V|``; the value is
    then taken at ``v = V``.
    """
    nv = len(g.v_nodes)
    _check_size(nv, bound)
    if nv == 1:
        return CheegerResult(len(boundary_of(g, [0])), 1, (0,))
    masks = g.parity_masks()
    nw = max(1, (len(g.c_nodes) + 63) // 64)
    words = np.zeros((nv, nw), dtype=np.uint64)
    for i, m in enumerate(masks):
        for w in range(nw):
            words[i, w] = (m >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    num, den, mask = _boundary_scan(words)
    return CheegerResult(int(num), int(den), _mask_tuple(int(mask)))


def _edge_arrays(edges) -> tuple[np.ndarray, np.ndarray]:
    eu = np.array([e[0] for e in edges], dtype=np.int64)
    ev = np.array([e[1] for e in edges], dtype=np.int64)
    return eu, ev


def contracted_cheeger(g: ContractedGraph, bound: int = DEFAULT_EXHAUSTIVE_BOUND) -> CheegerResult:
    """Exact edge-cut Cheeger constant with its canonical witness."""
    nv = len(g.vertices)
    _check_size(nv, bound)
    if nv == 1:
        return CheegerResult(0, 1, (0,))
    eu, ev = _edge_arrays(g.edges)
    num, den, mask = _cut_scan(nv, eu, ev)
    return CheegerResult(int(num), int(den), _mask_tuple(int(mask)))


def gadget_cheeger(gadget: Gadget, bound: int = DEFAULT_EXHAUSTIVE_BOUND) -> CheegerResult:
    return boundary_cheeger(BipartiteBoundaryGraph.from_gadget(gadget), bound)


# augmentation ----------------------------------------------------------------


def _greedy(nv: int, edges: list[tuple[int, int]], target: Fraction, bound: int):
    added: list[tuple[int, int]] = []
    history = []
    while True:
        res = contracted_cheeger(ContractedGraph(tuple(range(nv)), tuple(edges + added)), bound)
        history.append(res.value)
        if res.value >= target:
            return added, res, history
        inside = set(res.witness)
        a = min(inside)
        b = min(i for i in range(nv) if i not in inside)
        added.append((min(a, b), max(a, b)))


def _optimal(
    nv: int,
    edges: list[tuple[int, int]],
    target: Fraction,
    cuts_per_round: int,
    time_limit: float | None,
    slack: int = 1,
):
    """Fewest added edges reaching ``target``, by lazily constrained integer programming.

    A cut constraint says that the edges crossing a subset ``S`` must number
    at least ``target * |S|``.  Constraints are generated lazily: the first
    phase solves the linear relaxation and scans with fractional edge
    weights, which gathers most of the relevant cuts cheaply; the second
    phase solves the integer program and scans the resulting multigraph.
    Stops when a scan finds no violated subset.  The last solution is then
    optimal unless a time limit interrupted the solver.
    """
    p, q = target.numerator, target.denominator
    pairs = np.array(list(itertools.combinations(range(nv), 2)), dtype=np.int64)
    shifts = np.arange(nv, dtype=np.int64)
    eu0, ev0 = _edge_arrays(edges)
    rows: list[np.ndarray] = []
    rhs: list[int] = []
    seen: set[int] = set()
    start = time.perf_counter()

    def add_cuts(masks) -> None:
        for m in masks.tolist():
            if m in seen:
                continue
            seen.add(m)
            bits = (m >> shifts) & 1
            rows.append(bits[pairs[:, 0]] ^ bits[pairs[:, 1]])
            base = int((bits[eu0] ^ bits[ev0]).sum())
            rhs.append(math.ceil((p * int(bits.sum()) - q * base) / q))

    def solve(integral: bool, floor: int = 0):
        options = {}
        if time_limit is not None:
            options["time_limit"] = max(time_limit - (time.perf_counter() - start), 1.0)
        # the optimum over a growing constraint set never decreases, so the
        # previous optimum is a valid lower bound on the edge total
        a = np.vstack(rows + [np.ones(len(pairs), dtype=np.int64)])
        b = np.array(rhs + [floor])
        res = milp(
            np.ones(len(pairs)),
            constraints=LinearConstraint(a, b, np.inf),
            integrality=np.full(len(pairs), int(integral)),
            bounds=Bounds(0, np.inf),
            options=options,
        )
        if res.x is None:
            raise RuntimeError(f"solver failed: {res.message}")
        return res

    ones = np.ones(len(eu0))
    x = np.zeros(len(pairs))
    for _ in range(200):
        used = np.flatnonzero(x > 1e-9)
        masks, total = _deficient_weighted(
            nv,
            np.concatenate([eu0, pairs[used, 0]]),
            np.concatenate([ev0, pairs[used, 1]]),
            np.concatenate([ones, x[used]]),
            float(p), float(q), cuts_per_round, 1e-6,
        )
        if total == 0:
            break
        add_cuts(masks)
        x = solve(False).x
    log.debug("relaxation: %d cuts, bound %.3f", len(rows), x.sum())

    floor = math.ceil(x.sum() - 1e-6)
    proven = True
    xi = np.zeros(len(pairs), dtype=np.int64)
    rounds = 0
    while True:
        rounds += 1
        chosen = np.repeat(np.arange(len(pairs)), xi)
        eu = np.concatenate([eu0, pairs[chosen, 0]])
        ev = np.concatenate([ev0, pairs[chosen, 1]])
        masks, _, total = _deficient_subsets(nv, eu, ev, p, q, cuts_per_round, slack)
        log.debug("round %d: %d edges, %d deficient subsets", rounds, int(xi.sum()), total)
        if total == 0:
            return [(int(pairs[i, 0]), int(pairs[i, 1])) for i in chosen], proven, rounds
        add_cuts(masks)
        res = solve(True, floor)
        if res.status != 0:
            proven = False
        xi = np.round(res.x).astype(np.int64)
        floor = max(floor, int(xi.sum()))


def augment_to_expander(
    gadget: Gadget,
    target_h: Fraction | int = 1,
    policy: str = "optimal",
    code: CssCode | None = None,
    bound: int = DEFAULT_EXHAUSTIVE_BOUND,
    cuts_per_round: int = 400,
    time_limit: float | None = None,
) -> AugmentationResult:
    """Add chi-to-chi edges until the gadget's Cheeger constant reaches ``target_h``.

    ``policy="optimal"`` adds the fewest possible edges.  ``policy="greedy"``
    repeatedly joins the current witness to its complement at the least
    index pair; it is simpler but can add many more edges.  When ``code`` is
    given the gadget is verified against it before and after.
    """
    target = Fraction(target_h)
    if target <= 0:
        raise ValueError("target must be positive")
    if code is not None and not verify_gadget(code, gadget).passed:
        raise ValueError("gadget fails verification")
    graph = ContractedGraph.from_gadget(gadget)
    nv = len(graph.vertices)
    _check_size(nv, bound)
    edges = list(graph.edges)
    optimal = False
    history: list[Fraction] = []
    if policy == "greedy":
        added, _, history = _greedy(nv, edges, target, bound)
    elif policy == "optimal":
        added, optimal, _ = _optimal(nv, edges, target, cuts_per_round, time_limit)
    else:
        raise ValueError(f"unknown policy {policy!r}")
    added = sorted(added)
    new_gadget = add_edges(gadget, added) if added else gadget
    final = gadget_cheeger(new_gadget, bound)
    if final.value < target:
        raise RuntimeError("augmentation did not reach the target")
    if code is not None and not verify_gadget(code, new_gadget).passed:
        raise RuntimeError("augmented gadget fails verification")
    return AugmentationResult(added, final.value, final.witness, new_gadget, optimal, history)
