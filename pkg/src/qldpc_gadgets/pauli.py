"""Phase-free Pauli operators as pairs of bit masks.

A Pauli on ``n`` qubits is stored as ``(x, z)`` integers; qubit ``q`` carries
X if bit ``q`` of ``x`` is set, Z if bit ``q`` of ``z`` is set, and Y if both
are.  Overall phases are dropped everywhere: every statement this package
checks (commutation, membership of the stabilizer group, logical classes) is
insensitive to them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .gf2 import bits_of, mask_of, popcount


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self) -> None:
        if (self.x >> self.n) or (self.z >> self.n) or self.x < 0 or self.z < 0:
            raise ValueError(f"support outside [0, {self.n})")

    @classmethod
    def from_supports(
        cls, n: int, x_support: Iterable[int] = (), z_support: Iterable[int] = ()
    ) -> "PauliOperator":
        xs, zs = list(x_support), list(z_support)
        for q in (*xs, *zs):
            if not 0 <= q < n:
                raise ValueError(f"qubit id {q} outside [0, {n})")
        return cls(n, mask_of(xs), mask_of(zs))

    @classmethod
    def x_type(cls, n: int, support: Iterable[int]) -> "PauliOperator":
        return cls.from_supports(n, x_support=support)

    @classmethod
    def z_type(cls, n: int, support: Iterable[int]) -> "PauliOperator":
        return cls.from_supports(n, z_support=support)

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n)

    @property
    def x_support(self) -> tuple[int, ...]:
        return tuple(bits_of(self.x))

    @property
    def z_support(self) -> tuple[int, ...]:
        return tuple(bits_of(self.z))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(bits_of(self.x | self.z))

    @property
    def weight(self) -> int:
        return popcount(self.x | self.z)

    @property
    def is_identity(self) -> bool:
        return not (self.x or self.z)

    @property
    def is_x_type(self) -> bool:
        """True for a nontrivial operator made of X factors only."""
        return bool(self.x) and not self.z

    @property
    def is_z_type(self) -> bool:
        return bool(self.z) and not self.x

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        _check_n(self, other)
        return PauliOperator(self.n, self.x ^ other.x, self.z ^ other.z)

    def commutes_with(self, other: "PauliOperator") -> bool:
        return symplectic_product(self, other) == 0

    def symplectic(self) -> int:
        """Packed ``x | z << n`` vector used for row-space computations."""
        return self.x | (self.z << self.n)

    @classmethod
    def from_symplectic(cls, n: int, v: int) -> "PauliOperator":
        return cls(n, v & ((1 << n) - 1), v >> n)

    def permute(self, perm: Sequence[int] | Mapping[int, int]) -> "PauliOperator":
        """Image under the qubit map ``q -> perm[q]`` (no bijectivity check)."""
        return PauliOperator(
            self.n,
            mask_of(perm[q] for q in bits_of(self.x)),
            mask_of(perm[q] for q in bits_of(self.z)),
        )

    def embed(self, n: int, offset: int = 0) -> "PauliOperator":
        """Place this operator on qubits ``offset .. offset+self.n-1`` of ``n``."""
        if offset + self.n > n:
            raise ValueError("target register too small")
        return PauliOperator(n, self.x << offset, self.z << offset)

    def restrict(self, qubits: Sequence[int]) -> "PauliOperator":
        """Restriction to ``qubits``, renumbered in the given order."""
        x = mask_of(t for t, q in enumerate(qubits) if (self.x >> q) & 1)
        z = mask_of(t for t, q in enumerate(qubits) if (self.z >> q) & 1)
        return PauliOperator(len(qubits), x, z)

    def label(self) -> str:
        chars = []
        for q in range(self.n):
            xb, zb = (self.x >> q) & 1, (self.z >> q) & 1
            chars.append("IXZY"[xb | (zb << 1)])
        return "".join(chars)

    def __str__(self) -> str:
        parts = []
        for q in bits_of(self.x | self.z):
            xb, zb = (self.x >> q) & 1, (self.z >> q) & 1
            parts.append(f"{'XZY'[(xb | (zb << 1)) - 1]}{q}")
        return " ".join(parts) if parts else "I"


def _check_n(p: PauliOperator, q: PauliOperator) -> None:
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {q.n}")


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    """0 if ``p`` and ``q`` commute, 1 if they anticommute."""
    _check_n(p, q)
    return (popcount(p.x & q.z) + popcount(p.z & q.x)) & 1


def product(paulis: Iterable[PauliOperator], n: int) -> PauliOperator:
    x = z = 0
    for p in paulis:
        x ^= p.x
        z ^= p.z
    return PauliOperator(n, x, z)
