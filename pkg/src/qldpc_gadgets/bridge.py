"""Bridging gadgets to measure products of logical operators, and check merging.

Two gadgets measuring ``L1`` and ``L2`` are joined by ``w`` bridge qubits.
Bridge qubit ``t`` is added to one chi check of each gadget, with the same
Pauli in both, so it cancels from the product of all chi checks: that
product is ``L1 L2`` while neither gadget's chi product alone is a
stabilizer any more.

Joining two connected chi graphs by ``w`` edges adds ``w - 1`` independent
cycles, so ``w - 1`` new gauge checks are needed.  Bridge check ``t`` is the
cycle made of bridge qubits ``t`` and ``t + 1`` and the shortest paths
between their endpoints inside each gadget; on every qubit of the cycle it
acts with the Pauli that anticommutes with the chi checks' action there.
Every chi meets the cycle an even number of times, so it commutes.

When gadgets share a code qubit ``q``, their chi checks on ``q`` may
anticommute.  :func:`merge_checks` replaces them by products: X-on-``q``
checks in pairs, Z-on-``q`` checks in pairs, and a leftover X with a
leftover Z (the result acts as Y on ``q``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

from .css import CommutationError, CssCode, StabilizerCode, first_anticommuting_pair
from .gf2 import BitMatrix, kernel_basis
from .expansion import BipartiteBoundaryGraph
from .gadget import Gadget, build_gadget, relocate
from .gb import CatalogEntry, shift_qubit_permutation
from .pauli import PauliOperator, product


@dataclass(frozen=True)
class CheckRole:
    """Where a check of a combined code came from.

    ``kind`` is one of ``code_x``, ``code_z``, ``chi``, ``gauge``,
    ``bridge``, ``merged`` or ``gauge_fix``.  ``members`` lists the (gadget, chi) pairs a
    chi-derived check is built from.
    """

    kind: str
    owner: int | None = None
    index: int = 0
    members: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class Bridge:
    gadgets: tuple[int, int]
    qubits: tuple[int, ...]
    pairing: tuple[tuple[int, int], ...]
    action: str
    checks: tuple[PauliOperator, ...]

    @property
    def width(self) -> int:
        return len(self.qubits)

    @property
    def physical_qubits(self) -> int:
        """Bridge data qubits plus one ancilla per bridge check."""
        return len(self.qubits) + len(self.checks)


@dataclass(frozen=True)
class MergePlan:
    shared_qubit: int
    x_merges: tuple[tuple[int, int], ...]
    z_merges: tuple[tuple[int, int], ...]
    xz_merge: tuple[int, int] | None

    @property
    def count(self) -> int:
        return len(self.x_merges) + len(self.z_merges) + (self.xz_merge is not None)


@dataclass(frozen=True)
class CombinedCode:
    """Code block plus any number of gadgets, bridges and merges."""

    base: CssCode
    gadgets: tuple[Gadget, ...]
    offsets: tuple[int, ...]
    bridges: tuple[Bridge, ...]
    checks: tuple[PauliOperator, ...]
    roles: tuple[CheckRole, ...]
    n: int
    merges: tuple[MergePlan, ...] = field(default=())

    @cached_property
    def _stabilizers(self) -> StabilizerCode:
        return StabilizerCode(self.checks, self.n, validate=False)

    def stabilizer_code(self, validate: bool = True) -> StabilizerCode:
        if validate:
            pair = self.first_anticommuting_pair()
            if pair is not None:
                raise CommutationError(*pair)
        return self._stabilizers

    @property
    def k(self) -> int:
        return self.stabilizer_code(validate=False).k

    def contains(self, p: PauliOperator) -> bool:
        return self.stabilizer_code(validate=False).contains(p)

    def first_anticommuting_pair(self) -> tuple[int, int] | None:
        return first_anticommuting_pair(self.checks)

    def embed(self, p: PauliOperator) -> PauliOperator:
        return p.embed(self.n)

    @property
    def measured_product(self) -> PauliOperator:
        return self.embed(product([g.seed for g in self.gadgets], self.base.n))

    def chi_graph(self) -> BipartiteBoundaryGraph:
        """Chi-derived checks against gadget and bridge qubits, parallel edges kept."""
        incidence_of = {}
        for gi, (g, off) in enumerate(zip(self.gadgets, self.offsets)):
            for i, m in enumerate(g.chi_support):
                incidence_of[(gi, i)] = [off + t for t in range(g.num_qubits) if (m >> t) & 1]
        for b in self.bridges:
            for q, (a, c) in zip(b.qubits, b.pairing):
                incidence_of[(b.gadgets[0], a)].append(q)
                incidence_of[(b.gadgets[1], c)].append(q)
        c_nodes = tuple(range(self.base.n, self.n))
        rows = []
        for role in self.roles:
            if role.kind in ("chi", "merged") and role.members:
                rows.append(tuple(q - self.base.n for m in role.members for q in incidence_of[m]))
        return BipartiteBoundaryGraph(tuple(range(len(rows))), c_nodes, tuple(rows))

    @property
    def bridge_qubit_count(self) -> int:
        return sum(b.physical_qubits for b in self.bridges)


# assembly -------------------------------------------------------------------


def _pauli(n: int, kind: str, mask: int) -> PauliOperator:
    return PauliOperator(n, x=mask) if kind == "X" else PauliOperator(n, z=mask)


def _other(kind: str) -> str:
    return "Z" if kind == "X" else "X"


def combine(base: CssCode, gadgets: Sequence[Gadget]) -> CombinedCode:
    """Attach several gadgets to one code block (no bridges yet)."""
    if not gadgets:
        raise ValueError("need at least one gadget")
    n = base.n
    offsets = []
    for g in gadgets:
        if g.base_n != base.n:
            raise ValueError("gadget was built for a different code")
        offsets.append(n)
        n += g.num_qubits
    x_ext = [0] * base.h_x.nrows
    z_ext = [0] * base.h_z.nrows
    for g, off in zip(gadgets, offsets):
        ext = z_ext if g.kind == "X" else x_ext
        for t, j in enumerate(g.kappa_checks):
            ext[j] |= 1 << (off + t)
    checks: list[PauliOperator] = []
    roles: list[CheckRole] = []
    for j, r in enumerate(base.h_x.rows):
        checks.append(PauliOperator(n, x=r | x_ext[j]))
        roles.append(CheckRole("code_x", None, j))
    for j, r in enumerate(base.h_z.rows):
        checks.append(PauliOperator(n, z=r | z_ext[j]))
        roles.append(CheckRole("code_z", None, j))
    for gi, (g, off) in enumerate(zip(gadgets, offsets)):
        for i, (q, m) in enumerate(zip(g.chi_qubits, g.chi_support)):
            checks.append(_pauli(n, g.kind, (1 << q) | (m << off)))
            roles.append(CheckRole("chi", gi, i, ((gi, i),)))
        for i, m in enumerate(g.gauge):
            checks.append(_pauli(n, g.gauge_type, m << off))
            roles.append(CheckRole("gauge", gi, i))
    return CombinedCode(base, tuple(gadgets), tuple(offsets), (), tuple(checks), tuple(roles), n)


def _chi_path(g: Gadget, src: int, dst: int) -> list[int]:
    """Local gadget qubits on a shortest chi-to-chi path (BFS, least ids first)."""
    if src == dst:
        return []
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.num_chi)]
    for t in range(g.num_qubits):
        ends = g.endpoints(t)
        if len(ends) == 2:
            a, b = ends
            adj[a].append((b, t))
            adj[b].append((a, t))
    prev: dict[int, tuple[int, int]] = {src: (-1, -1)}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for u, t in sorted(adj[v]):
            if u not in prev:
                prev[u] = (v, t)
                queue.append(u)
    if dst not in prev:
        raise ValueError("gadget graph is disconnected")
    path = []
    v = dst
    while v != src:
        v, t = prev[v]
        path.append(t)
    return path


def bridge_pairing(w1: int, w2: int) -> tuple[tuple[int, int], ...]:
    """Chi pairs joined by the ``min(w1, w2)`` bridge qubits.

    Every chi of the lighter gadget gets one bridge qubit; the heavier
    gadget's attachment points are spread evenly over its chi checks.
    """
    w = min(w1, w2)
    if w1 <= w2:
        return tuple((t, t * w2 // w) for t in range(w))
    return tuple((t * w1 // w, t) for t in range(w))


def add_bridge(
    combined: CombinedCode,
    first: int,
    second: int,
    pairing: Sequence[tuple[int, int]] | None = None,
) -> tuple[Bridge, CombinedCode]:
    """Bridge gadgets ``first`` and ``second`` of a combined code."""
    if first == second:
        raise ValueError("cannot bridge a gadget with itself")
    g1, g2 = combined.gadgets[first], combined.gadgets[second]
    if pairing is None:
        pairing = bridge_pairing(g1.num_chi, g2.num_chi)
    pairing = tuple((int(a), int(b)) for a, b in pairing)
    if not pairing:
        raise ValueError("a bridge needs at least one qubit")
    w = len(pairing)
    start = combined.n
    n = start + w
    qubits = tuple(range(start, n))
    action = "Z" if g1.kind == "Z" and g2.kind == "Z" else "X"

    checks = [p.embed(n) for p in combined.checks]
    index = {}
    for c, role in enumerate(combined.roles):
        for m in role.members:
            index[m] = c
    for q, (a, b) in zip(qubits, pairing):
        for key in ((first, a), (second, b)):
            c = index[key]
            checks[c] = checks[c] * _pauli(n, action, 1 << q)

    bridge_checks = []
    for t in range(w - 1):
        (a0, b0), (a1, b1) = pairing[t], pairing[t + 1]
        p = _pauli(n, _other(action), (1 << qubits[t]) | (1 << qubits[t + 1]))
        for gi, g, s, d in ((first, g1, a0, a1), (second, g2, b0, b1)):
            off = combined.offsets[gi]
            for loc in _chi_path(g, s, d):
                p = p * _pauli(n, g.gauge_type, 1 << (off + loc))
        bridge_checks.append(p)

    bi = len(combined.bridges)
    bridge = Bridge((first, second), qubits, pairing, action, tuple(bridge_checks))
    roles = list(combined.roles) + [CheckRole("bridge", bi, t) for t in range(w - 1)]
    new = replace(
        combined,
        bridges=combined.bridges + (bridge,),
        checks=tuple(checks) + tuple(bridge_checks),
        roles=tuple(roles),
        n=n,
    )
    return bridge, new


def build_bridge(
    base: CssCode,
    gadget1: Gadget,
    gadget2: Gadget,
    pairing: Sequence[tuple[int, int]] | None = None,
) -> tuple[Bridge, CombinedCode]:
    """Attach two gadgets to ``base`` and bridge them."""
    if gadget1 == gadget2:
        raise ValueError("cannot bridge a gadget with itself")
    return add_bridge(combine(base, [gadget1, gadget2]), 0, 1, pairing)


# merging --------------------------------------------------------------------


def _action_on(p: PauliOperator, q: int) -> str:
    x, z = (p.x >> q) & 1, (p.z >> q) & 1
    return "Y" if x and z else "X" if x else "Z" if z else "I"


def merge_checks(combined: CombinedCode, q: int) -> tuple[CombinedCode, MergePlan]:
    """Merge gadget checks acting on code qubit ``q`` so that they commute."""
    touching = [
        c for c, (p, role) in enumerate(zip(combined.checks, combined.roles))
        if role.kind not in ("code_x", "code_z") and _action_on(p, q) != "I"
    ]
    xs = [c for c in touching if _action_on(combined.checks[c], q) == "X"]
    zs = [c for c in touching if _action_on(combined.checks[c], q) == "Z"]
    x_pairs = tuple((xs[i], xs[i + 1]) for i in range(0, len(xs) - 1, 2))
    z_pairs = tuple((zs[i], zs[i + 1]) for i in range(0, len(zs) - 1, 2))
    xz = (xs[-1], zs[-1]) if len(xs) % 2 and len(zs) % 2 else None
    plan = MergePlan(q, x_pairs, z_pairs, xz)

    groups = list(x_pairs) + list(z_pairs) + ([xz] if xz else [])
    drop = {c for pair in groups for c in pair}
    checks = []
    roles = []
    merged_at = {pair[0]: pair for pair in groups}
    for c, (p, role) in enumerate(zip(combined.checks, combined.roles)):
        if c in merged_at:
            a, b = merged_at[c]
            checks.append(combined.checks[a] * combined.checks[b])
            ra, rb = combined.roles[a], combined.roles[b]
            roles.append(CheckRole("merged", None, len(combined.merges), ra.members + rb.members))
        elif c not in drop:
            checks.append(p)
            roles.append(role)
    new = replace(
        combined,
        checks=tuple(checks),
        roles=tuple(roles),
        merges=combined.merges + (plan,),
    )
    return new, plan


def shared_qubits(combined: CombinedCode) -> list[int]:
    """Code qubits in the support of chi checks from two or more gadgets."""
    owners: dict[int, set[int]] = {}
    for g_i, g in enumerate(combined.gadgets):
        for q in g.chi_qubits:
            owners.setdefault(q, set()).add(g_i)
    return sorted(q for q, s in owners.items() if len(s) > 1)


def merge_all(combined: CombinedCode) -> CombinedCode:
    for q in shared_qubits(combined):
        combined, _ = merge_checks(combined, q)
    return combined


def _ancilla_normalizer(combined: CombinedCode) -> list[PauliOperator]:
    """Basis of operators on gadget and bridge qubits commuting with every check."""
    nb, n = combined.base.n, combined.n
    m = n - nb
    low = (1 << m) - 1
    # unknown (x | z << m); pairing with check p is x.p_z + z.p_x
    rows = [(p.z >> nb) | ((p.x >> nb) << m) for p in combined.checks]
    basis = kernel_basis(BitMatrix(rows, 2 * m)).rows
    return [PauliOperator(n, x=(v & low) << nb, z=(v >> m) << nb) for v in basis]


def fix_gauges(combined: CombinedCode, target_k: int) -> tuple[CombinedCode, int]:
    """Add ancilla-only checks until ``k`` reaches ``target_k``.

    Merging two checks into one frees a gauge qubit.  Each round adds the
    lightest normalizer basis element supported on gadget and bridge qubits
    that is not yet a stabilizer.  Returns the new code and the number of
    checks added.
    """
    added = 0
    while True:
        stab = combined.stabilizer_code(validate=False)
        if stab.k <= target_k:
            return combined, added
        free = [p for p in _ancilla_normalizer(combined) if not stab.contains(p)]
        if not free:
            return combined, added
        pick = min(free, key=lambda p: (p.weight, tuple(p.support)))
        role = CheckRole("gauge_fix", None, added)
        combined = replace(combined, checks=combined.checks + (pick,), roles=combined.roles + (role,))
        added += 1


# product measurements on catalogue codes -----------------------------------


@dataclass
class ProductMeasurement:
    combined: CombinedCode
    targets: tuple[tuple[str, int], ...]
    k_base: int
    k: int
    commuting: bool
    product_measured: bool
    trivial: bool
    factors_measured: tuple[bool, ...]
    gauge_fixes: int = 0

    @property
    def data_qubits(self) -> int:
        return self.combined.n

    @property
    def total_qubits(self) -> int:
        """Data qubits plus one ancilla per check."""
        return self.combined.n + len(self.combined.checks)

    @property
    def ok(self) -> bool:
        return self.commuting and self.product_measured and self.k == self.k_base - 1

    def to_dict(self) -> dict:
        return {
            "targets": [list(t) for t in self.targets],
            "k_base": self.k_base,
            "k": self.k,
            "commuting": self.commuting,
            "product_measured": self.product_measured,
            "trivial": self.trivial,
            "factors_measured": list(self.factors_measured),
            "merges": len(self.combined.merges),
            "gauge_fixes": self.gauge_fixes,
            "data_qubits": self.data_qubits,
            "total_qubits": self.total_qubits,
            "bridge_qubits": self.combined.bridge_qubit_count,
        }


def synthesize_product_measurement(
    entry: CatalogEntry,
    targets: Sequence[tuple[str, int]],
    gadgets: dict[str, Gadget] | None = None,
) -> ProductMeasurement:
    """Measure the product of shifted seed operators of a catalogue code.

    Each target ``(seed name, shift)`` contributes the seed's gadget moved by
    the shift.  Gadgets are bridged along a path, then merged at every
    shared code qubit; gauge qubits freed by merging are then fixed.
    """
    if not targets:
        raise ValueError("need at least one target")
    code = entry.code
    built = []
    for name, s in targets:
        if name not in entry.seeds:
            raise KeyError(f"unknown seed {name!r}")
        g = gadgets[name] if gadgets and name in gadgets else build_gadget(code, entry.seeds[name])
        built.append(relocate(code, g, shift_qubit_permutation(entry.l, s % entry.l)))
    combined = combine(code, built)
    for i in range(len(built) - 1):
        _, combined = add_bridge(combined, i, i + 1)
    combined = merge_all(combined)
    combined, fixes = fix_gauges(combined, code.k - 1)

    stab = combined.stabilizer_code(validate=False)
    prod = combined.measured_product
    return ProductMeasurement(
        combined=combined,
        targets=tuple((str(a), int(b)) for a, b in targets),
        k_base=code.k,
        k=stab.k,
        commuting=combined.first_anticommuting_pair() is None,
        product_measured=stab.contains(prod),
        trivial=code.to_stabilizer_code().contains(product([g.seed for g in built], code.n)),
        factors_measured=tuple(stab.contains(combined.embed(g.seed)) for g in built),
        gauge_fixes=fixes,
    )
