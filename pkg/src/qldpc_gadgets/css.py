"""Stabilizer codes, CSS codes and their logical structure.

:class:`CssCode` is the main value type: two parity-check matrices over the
same ``n`` qubits.  :class:`StabilizerCode` is the general (mixed Pauli)
version, needed once gadget checks are merged into Y-type checks; CSS codes
convert to it with :meth:`CssCode.to_stabilizer_code`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import gf2
from .gf2 import BitMatrix, BitVector, RowSpace, bits_of, popcount
from .pauli import PauliOperator, symplectic_product


class CommutationError(ValueError):
    """Raised when two checks of a would-be stabilizer code anticommute."""

    def __init__(self, first: int, second: int, message: str | None = None):
        self.pair = (first, second)
        super().__init__(message or f"checks {first} and {second} anticommute")


class LogicalError(ValueError):
    """An operator that was expected to be a logical operator is not one."""


class CssCode:
    """A CSS code given by X-check rows ``h_x`` and Z-check rows ``h_z``."""

    def __init__(
        self,
        h_x: BitMatrix,
        h_z: BitMatrix,
        labels: Sequence[object] | None = None,
        name: str | None = None,
    ):
        if h_x.ncols != h_z.ncols:
            raise ValueError(f"h_x has {h_x.ncols} columns but h_z has {h_z.ncols}")
        self.h_x = h_x
        self.h_z = h_z
        self.n = h_x.ncols
        if labels is not None and len(labels) != self.n:
            raise ValueError("need one label per qubit")
        self.labels = tuple(labels) if labels is not None else None
        self.name = name
        self._validate()

    def _validate(self) -> None:
        for i, xr in enumerate(self.h_x.rows):
            for j, zr in enumerate(self.h_z.rows):
                if popcount(xr & zr) & 1:
                    raise CommutationError(
                        i, j, f"X-check {i} and Z-check {j} overlap on an odd number of qubits"
                    )

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<CssCode{tag} n={self.n} mx={self.h_x.nrows} mz={self.h_z.nrows}>"

    @cached_property
    def x_stabilizers(self) -> RowSpace:
        return RowSpace(self.h_x)

    @cached_property
    def z_stabilizers(self) -> RowSpace:
        return RowSpace(self.h_z)

    @cached_property
    def k(self) -> int:
        return self.n - self.x_stabilizers.dimension - self.z_stabilizers.dimension

    def x_checks(self) -> list[PauliOperator]:
        return [PauliOperator(self.n, x=r) for r in self.h_x.rows]

    def z_checks(self) -> list[PauliOperator]:
        return [PauliOperator(self.n, z=r) for r in self.h_z.rows]

    def checks(self) -> list[PauliOperator]:
        return self.x_checks() + self.z_checks()

    def syndrome(self, p: PauliOperator) -> tuple[int, int]:
        """Masks of X-checks and Z-checks anticommuting with ``p``."""
        if p.n != self.n:
            raise ValueError("qubit count mismatch")
        sx = sz = 0
        for i, r in enumerate(self.h_x.rows):
            if popcount(r & p.z) & 1:
                sx |= 1 << i
        for i, r in enumerate(self.h_z.rows):
            if popcount(r & p.x) & 1:
                sz |= 1 << i
        return sx, sz

    def commutes_with_checks(self, p: PauliOperator) -> bool:
        return self.syndrome(p) == (0, 0)

    def contains(self, p: PauliOperator) -> bool:
        """Membership of the stabilizer group (up to phase)."""
        return p.x in self.x_stabilizers and p.z in self.z_stabilizers

    def to_stabilizer_code(self) -> "StabilizerCode":
        return StabilizerCode(self.checks(), self.n, validate=False)


def build_css_code(h_x: BitMatrix, h_z: BitMatrix, **kwargs) -> CssCode:
    return CssCode(h_x, h_z, **kwargs)


class StabilizerCode:
    """A general stabilizer code given by a list of commuting Pauli checks."""

    def __init__(self, checks: Sequence[PauliOperator], n: int, validate: bool = True):
        for c in checks:
            if c.n != n:
                raise ValueError("check on the wrong number of qubits")
        self.checks = tuple(checks)
        self.n = n
        if validate:
            pair = first_anticommuting_pair(self.checks)
            if pair is not None:
                raise CommutationError(*pair)

    def __repr__(self) -> str:
        return f"<StabilizerCode n={self.n} checks={len(self.checks)}>"

    @cached_property
    def group(self) -> RowSpace:
        return RowSpace([c.symplectic() for c in self.checks], 2 * self.n)

    @cached_property
    def k(self) -> int:
        return self.n - self.group.dimension

    def contains(self, p: PauliOperator) -> bool:
        return p.symplectic() in self.group

    def commutes_with_checks(self, p: PauliOperator) -> bool:
        return all(symplectic_product(p, c) == 0 for c in self.checks)

    @property
    def is_css(self) -> bool:
        return all(not (c.x and c.z) for c in self.checks)

    def to_css(self) -> CssCode:
        if not self.is_css:
            raise ValueError("code has mixed checks")
        xs = [c.x for c in self.checks if c.x]
        zs = [c.z for c in self.checks if c.z]
        return CssCode(BitMatrix(xs, self.n), BitMatrix(zs, self.n))


def first_anticommuting_pair(checks: Sequence[PauliOperator]) -> tuple[int, int] | None:
    for i, p in enumerate(checks):
        for j in range(i + 1, len(checks)):
            q = checks[j]
            if (popcount(p.x & q.z) + popcount(p.z & q.x)) & 1:
                return (i, j)
    return None


def num_logicals(code: CssCode | StabilizerCode) -> int:
    return code.k


def is_stabilizer_element(code: CssCode | StabilizerCode, p: PauliOperator) -> bool:
    return code.contains(p)


# logical bases ---------------------------------------------------------


@dataclass(frozen=True)
class LogicalAction:
    """Coordinates of a logical class: X-part and Z-part as k-bit masks."""

    k: int
    x: int = 0
    z: int = 0

    @property
    def vector(self) -> BitVector:
        return BitVector(2 * self.k, self.x | (self.z << self.k))

    @property
    def is_zero(self) -> bool:
        return not (self.x or self.z)

    def __xor__(self, other: "LogicalAction") -> "LogicalAction":
        if other.k != self.k:
            raise ValueError("logical count mismatch")
        return LogicalAction(self.k, self.x ^ other.x, self.z ^ other.z)

    @classmethod
    def unit_x(cls, k: int, i: int) -> "LogicalAction":
        return cls(k, x=1 << i)

    @classmethod
    def unit_z(cls, k: int, i: int) -> "LogicalAction":
        return cls(k, z=1 << i)

    def packed(self) -> int:
        return self.x | (self.z << self.k)


@dataclass(frozen=True)
class SectorAnchor:
    """Operators whose span should form one block of logical qubits.

    ``x_generators[0]`` and ``z_generators[0]`` become the first X and Z
    basis elements of the block; the remaining X generators fill out the
    block's X part.
    """

    x_generators: Sequence[PauliOperator]
    z_generators: Sequence[PauliOperator]


@dataclass(frozen=True)
class LogicalBasis:
    k: int
    x_bars: tuple[PauliOperator, ...]
    z_bars: tuple[PauliOperator, ...]
    sectors: tuple[tuple[int, int], ...] = field(default=())

    def problems(self, code: CssCode) -> list[str]:
        """Every violated basis invariant, as readable strings."""
        out = []
        if len(self.x_bars) != self.k or len(self.z_bars) != self.k:
            out.append("wrong number of basis elements")
        for name, ops in (("x", self.x_bars), ("z", self.z_bars)):
            for i, p in enumerate(ops):
                if not code.commutes_with_checks(p):
                    out.append(f"{name}_bars[{i}] anticommutes with a check")
                if code.contains(p):
                    out.append(f"{name}_bars[{i}] is a stabilizer")
        for i, xp in enumerate(self.x_bars):
            for j, zp in enumerate(self.z_bars):
                if symplectic_product(xp, zp) != (i == j):
                    out.append(f"pairing of x_bars[{i}] and z_bars[{j}] is wrong")
        for ops in (self.x_bars, self.z_bars):
            for i in range(len(ops)):
                for j in range(i + 1, len(ops)):
                    if symplectic_product(ops[i], ops[j]):
                        out.append(f"basis elements {i}, {j} of one type anticommute")
        return out


def _x_logical_candidates(code: CssCode) -> list[int]:
    return list(gf2.kernel_basis(code.h_z).rows)


def _z_logical_candidates(code: CssCode) -> list[int]:
    return list(gf2.kernel_basis(code.h_x).rows)


def _independent(space_rows: Sequence[int], ncols: int, candidates) -> list[int]:
    space = RowSpace(space_rows, ncols)
    return [v for v in candidates if space.add(v)]


def logical_basis(code: CssCode, anchors: Sequence[SectorAnchor] = ()) -> LogicalBasis:
    """A symplectic basis of logical operators.

    Without anchors the X representatives come from the echelon kernel basis
    of ``h_z`` and the Z representatives are its dual.  With anchors, each
    sector's X generators (orthogonalised against the sector's Z anchor) are
    taken first, so that ``x_generators[0]`` of sector ``s`` is basis element
    ``start_s``, and the dual Z basis then reproduces the Z anchors whenever
    the sectors are symplectically orthogonal.
    """
    k = code.k
    if k == 0:
        raise LogicalError("code encodes no logical qubits")
    n = code.n
    space = RowSpace(code.h_x)
    xs: list[int] = []
    sectors = []
    for anchor in anchors:
        xa, za = anchor.x_generators[0], anchor.z_generators[0]
        if not (xa.is_x_type and za.is_z_type):
            raise LogicalError("sector anchors must be X-type / Z-type")
        if symplectic_product(xa, za) != 1:
            raise LogicalError("sector anchors must anticommute")
        start = len(xs)
        for idx, p in enumerate(anchor.x_generators):
            v = p.x
            if idx and popcount(v & za.z) & 1:
                v ^= xa.x
            if space.add(v):
                xs.append(v)
        if xs[start:start + 1] != [xa.x]:
            raise LogicalError("X anchor is not independent of earlier sectors")
        sectors.append((start, len(xs)))
    for v in _x_logical_candidates(code):
        if len(xs) == k:
            break
        if space.add(v):
            xs.append(v)
    if len(xs) != k:
        raise LogicalError(f"found {len(xs)} independent X logicals, expected {k}")

    zcand = _independent(code.h_z.rows, n, _z_logical_candidates(code))
    # pairing[i] as a mask over zcand: bit t = <x_i, z_t>
    pairing = BitMatrix(
        [gf2.mask_of(t for t, zv in enumerate(zcand) if popcount(xv & zv) & 1) for xv in xs],
        k,
    )
    # z_j = sum_t C[j][t] zcand_t with pairing @ C^T = I, so C = inverse(pairing)^T
    coeff = gf2.inverse(pairing).transpose()
    zs = []
    for row in coeff.rows:
        acc = 0
        for t in bits_of(row):
            acc ^= zcand[t]
        zs.append(acc)

    # prefer the caller's Z generators as representatives where they match
    zspace = code.z_stabilizers
    preferred = [p.z for a in anchors for p in a.z_generators]
    for j, zv in enumerate(zs):
        for cand in preferred:
            if (cand ^ zv) in zspace:
                zs[j] = cand
                break

    return LogicalBasis(
        k,
        tuple(PauliOperator(n, x=v) for v in xs),
        tuple(PauliOperator(n, z=v) for v in zs),
        tuple(sectors),
    )


def logical_action(code: CssCode, basis: LogicalBasis, p: PauliOperator) -> LogicalAction:
    if not code.commutes_with_checks(p):
        raise LogicalError("operator anticommutes with a check")
    x = z = 0
    for i, (xb, zb) in enumerate(zip(basis.x_bars, basis.z_bars)):
        if symplectic_product(p, zb):
            x |= 1 << i
        if symplectic_product(p, xb):
            z |= 1 << i
    return LogicalAction(basis.k, x, z)
