"""Low-weight logical operators of CSS codes.

Two searches live here.

``min_weight_logical`` is exact.  It grows a support one qubit at a time and
always branches on the qubits of the lowest-index unsatisfied check, so every
codeword containing the chosen root is reachable.  A minimum-weight logical
never passes through a smaller codeword on the way (that codeword or its
complement would be a lighter logical), so a branch ends as soon as its
syndrome clears.  The branching factor is at most the check weight minus one,
which makes weights up to ~10 cheap on bicycle codes.

``isd_search`` is a randomized information-set search (Lee-Brickell with
p <= 2) for a codeword of the check kernel that pairs nontrivially with a
random dual logical.  It certifies upper bounds; when it finds nothing it
proves nothing.
"""

from __future__ import annotations

import logging
import time
from typing import NamedTuple, Sequence

import numpy as np

from .css import CssCode
from .gf2 import RowSpace, bits_of, kernel_basis, mask_of, popcount
from .pauli import PauliOperator

log = logging.getLogger(__name__)


class LowWeightLogical(NamedTuple):
    weight: int
    witness: PauliOperator


def _setup(code: CssCode, kind: str):
    if kind == "X":
        return code.h_z, code.x_stabilizers
    if kind == "Z":
        return code.h_x, code.z_stabilizers
    raise ValueError(f"kind must be 'X' or 'Z', not {kind!r}")


def _make_op(code: CssCode, kind: str, mask: int) -> PauliOperator:
    return PauliOperator(code.n, x=mask) if kind == "X" else PauliOperator(code.n, z=mask)


def _orbit_roots(n: int, group: Sequence[Sequence[int]]) -> list[int]:
    seen = 0
    roots = []
    for q in range(n):
        if (seen >> q) & 1:
            continue
        roots.append(q)
        for g in group:
            seen |= 1 << g[q]
    return roots


def _lex_key(mask: int) -> tuple[int, ...]:
    return tuple(bits_of(mask))


def min_weight_logical(
    code: CssCode,
    kind: str,
    w_max: int,
    symmetry: Sequence[Sequence[int]] | None = None,
) -> LowWeightLogical | None:
    """Lightest X- (or Z-) type logical of weight at most ``w_max``.

    ``symmetry`` may list the permutations of an automorphism group of the
    code (including the identity).  Then only one root qubit per qubit orbit
    is searched, and the witness is the lexicographically least image of the
    found supports, which is the same witness the unreduced search returns.
    """
    if w_max < 1:
        raise ValueError("w_max must be at least 1")
    checks, stabilizers = _setup(code, kind)
    n = code.n
    check_qubits = checks.supports()
    col_syn = [mask_of(c) for c in checks.column_supports()]
    colw = max((popcount(s) for s in col_syn), default=0)

    best = w_max + 1
    found: set[int] = set()

    def dfs(chosen: int, weight: int, syn: int, floor: int) -> None:
        nonlocal best, found
        if syn == 0:
            if chosen not in stabilizers:
                if weight < best:
                    best = weight
                    found = {chosen}
                elif weight == best:
                    found.add(chosen)
            return
        remaining = best - weight
        if remaining <= 0 or popcount(syn) > remaining * colw:
            return
        c = (syn & -syn).bit_length() - 1
        for q in check_qubits[c]:
            if q < floor or (chosen >> q) & 1:
                continue
            dfs(chosen | (1 << q), weight + 1, syn ^ col_syn[q], floor)

    if symmetry is None:
        for q0 in range(n):
            if col_syn[q0] == 0:
                # a qubit in no check is itself a weight-1 codeword
                dfs(1 << q0, 1, 0, q0)
                continue
            dfs(1 << q0, 1, col_syn[q0], q0)
    else:
        for q0 in _orbit_roots(n, symmetry):
            dfs(1 << q0, 1, col_syn[q0], 0)

    if not found or best > w_max:
        return None
    candidates = found
    if symmetry is not None:
        candidates = {mask_of(g[q] for q in bits_of(m)) for m in found for g in symmetry}
        candidates = {m for m in candidates if popcount(m) == best}
    witness = min(candidates, key=_lex_key)
    return LowWeightLogical(best, _make_op(code, kind, witness))


def code_distance(code: CssCode, w_max: int, symmetry=None) -> LowWeightLogical | None:
    """Lighter of the X and Z searches (X wins ties)."""
    results = [min_weight_logical(code, kind, w_max, symmetry) for kind in ("X", "Z")]
    results = [r for r in results if r is not None]
    if not results:
        return None
    return min(results, key=lambda r: r.weight)


# randomized information-set search ---------------------------------------


def _rref_numpy(m: np.ndarray) -> list[int]:
    """In-place reduced row echelon form of a uint8 matrix; returns pivots."""
    rows, cols = m.shape
    pivots = []
    top = 0
    for c in range(cols):
        if top == rows:
            break
        nz = np.flatnonzero(m[top:, c])
        if nz.size == 0:
            continue
        p = top + nz[0]
        if p != top:
            m[[top, p]] = m[[p, top]]
        hits = np.flatnonzero(m[:, c])
        hits = hits[hits != top]
        if hits.size:
            m[hits] ^= m[top]
        pivots.append(c)
        top += 1
    return pivots


def _independent_rows(h) -> np.ndarray:
    space = RowSpace((), h.ncols)
    kept = [r for r in h.rows if space.add(r)]
    out = np.zeros((len(kept), h.ncols), dtype=np.uint8)
    for i, r in enumerate(kept):
        out[i, list(bits_of(r))] = 1
    return out


class IsdResult(NamedTuple):
    best: LowWeightLogical | None
    iterations: int
    seconds: float


def isd_search(
    code: CssCode,
    kind: str,
    target: int,
    iterations: int,
    seed: int = 0,
    time_limit: float | None = None,
) -> IsdResult:
    """Randomized search for an X/Z logical of weight <= ``target``.

    Each iteration draws a random nonzero dual logical ``u`` and a random
    column order, puts ``[checks; u] c = [0; 1]`` in systematic form, and
    tries every error pattern of weight <= 2 on the information set.  Stops
    early once ``target`` is reached.  Reproducible for a fixed ``seed``.
    """
    checks, stabilizers = _setup(code, kind)
    n = code.n
    h = _independent_rows(checks)
    # dual logicals live in the kernel of the other check matrix
    dual_space = kernel_basis(_setup(code, "Z" if kind == "X" else "X")[0])
    dual = np.zeros((dual_space.nrows, n), dtype=np.uint8)
    for i, r in enumerate(dual_space.rows):
        dual[i, list(bits_of(r))] = 1
    # a dual operator in the span of the checks pairs trivially with everything
    dual_stabs = RowSpace(checks)

    rng = np.random.default_rng(seed)
    best: LowWeightLogical | None = None
    start = time.perf_counter()
    it = 0
    while it < iterations:
        if time_limit is not None and time.perf_counter() - start > time_limit:
            break
        it += 1
        coeffs = rng.integers(0, 2, dual.shape[0], dtype=np.uint8)
        u = (coeffs @ dual) & 1
        if mask_of(np.flatnonzero(u).tolist()) in dual_stabs:
            continue
        perm = rng.permutation(n)
        aug = np.zeros((h.shape[0] + 1, n + 1), dtype=np.uint8)
        aug[:-1, :n] = h[:, perm]
        aug[-1, :n] = u[perm]
        aug[-1, n] = 1
        pivots = _rref_numpy(aug)
        if pivots and pivots[-1] == n:
            continue
        r = len(pivots)
        info = np.setdiff1d(np.arange(n), pivots)
        q_cols = np.packbits(aug[:r, info], axis=0).T.copy()
        s = np.packbits(aug[:r, n])

        w0 = int(np.bitwise_count(s).sum())
        w1 = np.bitwise_count(q_cols ^ s).sum(axis=1) + 1
        w2 = np.bitwise_count(q_cols[:, None, :] ^ q_cols[None, :, :] ^ s).sum(axis=2) + 2
        np.fill_diagonal(w2, n + 10)

        options = [(w0, ())]
        i1 = int(np.argmin(w1))
        options.append((int(w1[i1]), (i1,)))
        flat = int(np.argmin(w2))
        i, j = divmod(flat, w2.shape[1])
        options.append((int(w2[i, j]), (min(i, j), max(i, j))))
        weight, chosen = min(options, key=lambda t: t[0])
        if best is not None and weight >= best.weight:
            continue
        word = _assemble(aug, pivots, info, chosen, perm, n)
        op = _make_op(code, kind, word)
        assert popcount(word) == weight
        assert word not in stabilizers
        best = LowWeightLogical(weight, op)
        log.debug("isd iteration %d: weight %d", it, weight)
        if weight <= target:
            break
    return IsdResult(best, it, time.perf_counter() - start)


def _assemble(aug, pivots, info, chosen, perm, n) -> int:
    r = len(pivots)
    vec = aug[:r, n].copy()
    for t in chosen:
        vec ^= aug[:r, info[t]]
    positions = [pivots[i] for i in np.flatnonzero(vec)] + [info[t] for t in chosen]
    return mask_of(int(perm[p]) for p in positions)
