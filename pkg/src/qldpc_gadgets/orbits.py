"""Logical orbits of seed operators under cyclic shifts, and seed-set completeness.

An automorphism maps a logical operator to another logical operator, and
the gadget for the first, relocated by the same permutation, measures the
second.  The orbit of a seed is the set of logical actions it reaches.

Completeness is read with the identity allowed in each factor: the seeds
form a complete set when every logical action is a product
``e1 e2 e3 e4`` with each ``ei`` either in orbit ``i`` or trivial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .css import CssCode, LogicalAction, LogicalBasis, LogicalError, logical_action
from .gb import SEED_NAMES, CatalogEntry, apply_permutation, shift_qubit_permutation
from .gf2 import RowSpace
from .pauli import PauliOperator

BRUTE_FORCE_LIMIT = 24  # log2 of the largest product set enumerated directly


@dataclass(frozen=True)
class LogicalOrbit:
    seed: PauliOperator
    actions: frozenset[LogicalAction]
    shift_of: dict[LogicalAction, int] = field(compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.actions)

    def packed(self) -> list[int]:
        return sorted(a.packed() for a in self.actions)


def logical_orbit(code: CssCode, basis: LogicalBasis, seed: PauliOperator, l: int) -> LogicalOrbit:
    """Actions of ``shift_s(seed)`` for ``s = 0 .. l-1``; ``shift_of`` keeps the least ``s``."""
    if not code.commutes_with_checks(seed):
        raise LogicalError("seed anticommutes with a check")
    if code.contains(seed):
        raise LogicalError("seed is a stabilizer")
    shift_of: dict[LogicalAction, int] = {}
    for s in range(l):
        p = apply_permutation(seed, shift_qubit_permutation(l, s))
        a = logical_action(code, basis, p)
        if a.is_zero:
            raise LogicalError(f"shift {s} of the seed acts trivially")
        shift_of.setdefault(a, s)
    return LogicalOrbit(seed, frozenset(shift_of), shift_of)


def seed_sector(entry: CatalogEntry, name: str) -> tuple[str, range]:
    """The coordinate block a seed's orbit should fill: ``("x"|"z", logical qubits)``."""
    r = entry.r
    first = entry.seed_logical_index(name)
    return ("x" if name.startswith("x") else "z", range(first, first + r))


def _sector_vectors(k: int, part: str, qubits: range) -> set[LogicalAction]:
    out = set()
    for bits in range(1, 1 << len(qubits)):
        m = 0
        for i, q in enumerate(qubits):
            if (bits >> i) & 1:
                m |= 1 << q
        out.add(LogicalAction(k, x=m) if part == "x" else LogicalAction(k, z=m))
    return out


@dataclass
class SectorResult:
    name: str
    orbit_size: int
    expected_size: int
    part: str
    qubits: tuple[int, int]
    covered: bool
    problems: list[str]


@dataclass
class CoverageReport:
    r: int
    results: list[SectorResult]

    @property
    def passed(self) -> bool:
        return all(x.covered for x in self.results)


def verify_sector_coverage(entry: CatalogEntry, names: Sequence[str] = SEED_NAMES) -> CoverageReport:
    """Each seed's orbit must be exactly the nonzero vectors of its sector."""
    code, basis = entry.code, entry.basis
    k = basis.k
    results = []
    for name in names:
        part, qubits = seed_sector(entry, name)
        problems = []
        try:
            orbit = logical_orbit(code, basis, entry.seeds[name], entry.l)
        except LogicalError as exc:
            results.append(SectorResult(name, 0, 2 ** len(qubits) - 1, part,
                                        (qubits.start, qubits.stop), False, [str(exc)]))
            continue
        expected = _sector_vectors(k, part, qubits)
        if len(orbit) != entry.l:
            problems.append(f"orbit has {len(orbit)} actions, expected {entry.l}")
        if orbit.actions != expected:
            problems.append(
                f"{len(orbit.actions - expected)} actions outside the sector, "
                f"{len(expected - orbit.actions)} sector vectors missed"
            )
        results.append(SectorResult(name, len(orbit), len(expected), part,
                                    (qubits.start, qubits.stop), not problems, problems))
    return CoverageReport(entry.r, results)


@dataclass
class CompletenessReport:
    r: int
    seeds: tuple[str, ...]
    method: str
    reachable: int
    expected: int
    structural_rank: int
    passed: bool
    brute_force_count: int | None = None


def _product_set(orbits: Sequence[np.ndarray]) -> np.ndarray:
    acc = np.zeros(1, dtype=np.int64)
    for o in orbits:
        factor = np.concatenate([[0], o]).astype(np.int64)
        acc = np.unique((acc[:, None] ^ factor[None, :]).ravel())
    return acc


def complete_seed_set_check(
    entry: CatalogEntry,
    names: Sequence[str] = SEED_NAMES,
    brute_force: bool | None = None,
) -> CompletenessReport:
    """Do products of the named seeds' orbits (identity allowed) reach all ``4^k`` actions?

    The structural test checks that each orbit plus the identity is a
    subspace and that these subspaces are independent and span the full
    ``2k``-dimensional action space; then the product set is their direct
    sum.  Small cases are also enumerated directly and both must agree.
    """
    code, basis = entry.code, entry.basis
    k = basis.k
    orbits = [logical_orbit(code, basis, entry.seeds[n], entry.l) for n in names]
    packed = [np.array(o.packed(), dtype=np.int64) for o in orbits]

    dims = []
    closed = True
    union = RowSpace((), 2 * k)
    for vecs in packed:
        space = RowSpace((), 2 * k)
        for v in vecs.tolist():
            space.add(v)
            union.add(v)
        dims.append(space.dimension)
        closed &= len(vecs) + 1 == 2 ** space.dimension
    independent = sum(dims) == union.dimension
    structural = closed and independent and union.dimension == 2 * k
    reachable = 2 ** union.dimension if closed and independent else -1

    if brute_force is None:
        brute_force = 2 * k <= BRUTE_FORCE_LIMIT
    count = None
    if brute_force:
        count = int(_product_set(packed).size)
        reachable = count
    passed = structural and (count is None or count == 4**k)
    return CompletenessReport(
        entry.r,
        tuple(names),
        "brute force + structural" if brute_force else "structural",
        reachable,
        4**k,
        union.dimension,
        passed,
        count,
    )
