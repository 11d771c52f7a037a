"""Generalised bicycle codes, their cyclic-shift automorphisms, and the
catalogue of the four ``l = 2^r - 1`` codes with their seed operators.

Qubit layout: the left sector occupies ids ``0 .. l-1`` and the right sector
``l .. 2l-1``, so qubit ``(rho, sigma)`` has id ``rho + l * (sigma == "R")``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .css import CssCode, LogicalBasis, SectorAnchor, logical_basis
from .gf2 import BitMatrix, mask_of
from .pauli import PauliOperator


@dataclass(frozen=True)
class GbCodeSpec:
    l: int
    a_set: tuple[int, ...]
    b_set: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.l < 1:
            raise ValueError("lift must be positive")
        a = tuple(sorted({x % self.l for x in self.a_set}))
        b = tuple(sorted({x % self.l for x in self.b_set}))
        if len(a) != len(self.a_set) or len(b) != len(self.b_set):
            raise ValueError("A and B must have distinct elements mod l")
        object.__setattr__(self, "a_set", a)
        object.__setattr__(self, "b_set", b)


@dataclass(frozen=True)
class QubitLabel:
    rho: int
    sigma: str  # "L" or "R"

    def qubit_id(self, l: int) -> int:
        if self.sigma not in ("L", "R") or not 0 <= self.rho < l:
            raise ValueError(f"bad label {self}")
        return self.rho + (l if self.sigma == "R" else 0)

    @classmethod
    def of(cls, q: int, l: int) -> "QubitLabel":
        if not 0 <= q < 2 * l:
            raise ValueError(f"qubit {q} outside [0, {2 * l})")
        return cls(q % l, "R" if q >= l else "L")


def x_check_support(spec: GbCodeSpec, j: int) -> list[int]:
    l = spec.l
    return [(j + a) % l for a in spec.a_set] + [l + (j + b) % l for b in spec.b_set]


def z_check_support(spec: GbCodeSpec, j: int) -> list[int]:
    l = spec.l
    return [l + (j - a) % l for a in spec.a_set] + [(j - b) % l for b in spec.b_set]


def build_gb_code(spec: GbCodeSpec, name: str | None = None) -> CssCode:
    """CSS code whose checks ``j = 0..l-1`` are the bicycle generators."""
    l = spec.l
    h_x = BitMatrix([mask_of(x_check_support(spec, j)) for j in range(l)], 2 * l)
    h_z = BitMatrix([mask_of(z_check_support(spec, j)) for j in range(l)], 2 * l)
    labels = [QubitLabel.of(q, l) for q in range(2 * l)]
    return CssCode(h_x, h_z, labels=labels, name=name)


# automorphisms ---------------------------------------------------------


@dataclass(frozen=True)
class ShiftAutomorphism:
    """Simultaneous cyclic shift of both sectors by ``s``."""

    l: int
    s: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", self.s % self.l)

    def __matmul__(self, other: "ShiftAutomorphism") -> "ShiftAutomorphism":
        if other.l != self.l:
            raise ValueError("lift mismatch")
        return ShiftAutomorphism(self.l, self.s + other.s)

    @property
    def permutation(self) -> tuple[int, ...]:
        return shift_qubit_permutation(self.l, self.s)

    def __call__(self, p: PauliOperator) -> PauliOperator:
        return apply_permutation(p, self.permutation)


@lru_cache(maxsize=None)
def shift_qubit_permutation(l: int, s: int) -> tuple[int, ...]:
    """``perm[q]`` is the image of qubit ``q`` under ``(rho, sigma) -> (rho+s, sigma)``."""
    if not 0 <= s < l:
        raise ValueError(f"shift {s} outside [0, {l})")
    return tuple((q + s) % l for q in range(l)) + tuple(l + (q + s) % l for q in range(l))


def compose(first: Sequence[int], second: Sequence[int]) -> tuple[int, ...]:
    """Permutation applying ``first`` and then ``second``."""
    return tuple(second[first[q]] for q in range(len(first)))


def apply_permutation(p: PauliOperator, perm: Sequence[int]) -> PauliOperator:
    if len(perm) != p.n or sorted(perm) != list(range(p.n)):
        raise ValueError("not a permutation of the qubits")
    return p.permute(perm)


def check_permutation(code: CssCode, perm: Sequence[int]) -> tuple[list[int], list[int]]:
    """Images of the X- and Z-check rows as row indices; raises if not an automorphism."""
    out = []
    for h in (code.h_x, code.h_z):
        index = {r: i for i, r in enumerate(h.rows)}
        images = []
        for r in h.rows:
            img = mask_of(perm[q] for q in range(code.n) if (r >> q) & 1)
            if img not in index:
                raise ValueError("permutation does not map the check set to itself")
            images.append(index[img])
        out.append(images)
    return out[0], out[1]


# catalogue ---------------------------------------------------------------

SEED_NAMES = ("x1", "z1", "x2", "z2")

# (l, A, B, {seed: (left support, right support)}); logical index 1 for the
# first pair and k/2 + 1 for the second.
_CATALOG_DATA = {
    5: (
        31, (0, 6, 15), (0, 5, 7),
        {
            "x1": ((1, 6, 8, 10), (11, 26)),
            "z1": ((3, 12, 18, 19), (11, 18)),
            "x2": ((16, 23), (0, 15, 16, 22)),
            "z2": ((0, 16), (1, 3, 5, 10)),
        },
    ),
    6: (
        63, (0, 4, 37), (0, 29, 49),
        {
            "x1": ((7, 12, 36, 41, 56), (1, 27, 31, 38, 61)),
            "z1": ((5, 15, 28, 35, 45, 61), (1, 11, 54, 57)),
            "x2": ((9, 19, 26, 29), (5, 15, 22, 38, 48, 55)),
            "z2": ((2, 25, 32, 36, 62), (7, 22, 27, 51, 56)),
        },
    ),
    7: (
        127, (0, 32, 100), (0, 28, 49),
        {
            "x1": ((28, 47, 55, 75, 103, 114, 124), (4, 14, 15, 23, 50, 77, 83, 109, 123)),
            "z1": ((1, 24, 33, 51, 60, 65, 107, 119, 124), (7, 8, 36, 85, 106, 114, 124)),
            "x2": ((3, 31, 32, 42, 52, 60, 81), (6, 15, 38, 42, 47, 59, 101, 106, 115)),
            "z2": ((0, 8, 9, 19, 27, 41, 67, 73, 100), (26, 36, 47, 75, 95, 103, 122)),
        },
    ),
    8: (
        255, (0, 39, 55), (0, 70, 127),
        {
            "x1": (
                (18, 31, 35, 36, 91, 126, 146, 163, 164, 180, 196, 216, 233, 253),
                (48, 52, 87, 101, 103, 106, 107, 125, 140, 156, 179, 211),
            ),
            "z1": (
                (38, 54, 57, 93, 112, 148, 164, 185, 197, 203, 213, 238, 240, 252),
                (18, 55, 59, 73, 129, 130, 142, 182, 187, 199, 244, 252),
            ),
            "x2": (
                (6, 27, 35, 80, 92, 97, 137, 149, 150, 206, 220, 224),
                (27, 39, 41, 66, 76, 82, 94, 115, 131, 167, 186, 222, 225, 241),
            ),
            "z2": (
                (10, 11, 14, 16, 30, 65, 69, 161, 193, 216, 232, 247),
                (26, 81, 82, 86, 99, 119, 139, 156, 176, 192, 208, 209, 226, 246),
            ),
        },
    ),
}

SUPPORTED_R = tuple(sorted(_CATALOG_DATA))


class CatalogError(KeyError):
    pass


def conjectured_params(r: int) -> tuple[int, int, int]:
    """``(n, k, d)`` of the ``l = 2^r - 1`` family member."""
    if r < 5:
        raise ValueError("family is defined for r >= 5")
    return (2 * (2**r - 1), 2 * r, r + (r - 4) ** 2)


@dataclass(frozen=True)
class CatalogEntry:
    r: int
    spec: GbCodeSpec
    seeds: dict[str, PauliOperator]
    params: tuple[int, int, int]

    @property
    def l(self) -> int:
        return self.spec.l

    @property
    def n(self) -> int:
        return 2 * self.spec.l

    def seed_logical_index(self, name: str) -> int:
        """Zero-based logical qubit the seed acts on (0 or k/2)."""
        return 0 if name.endswith("1") else self.params[1] // 2

    def shift(self, s: int) -> ShiftAutomorphism:
        return ShiftAutomorphism(self.l, s)

    @property
    def code(self) -> CssCode:
        return _code(self.r)

    @property
    def basis(self) -> LogicalBasis:
        return _basis(self.r)


def _seed_operator(l: int, name: str, left: Iterable[int], right: Iterable[int]) -> PauliOperator:
    support = list(left) + [l + q for q in right]
    if name.startswith("x"):
        return PauliOperator.x_type(2 * l, support)
    return PauliOperator.z_type(2 * l, support)


@lru_cache(maxsize=None)
def catalog_code(r: int) -> CatalogEntry:
    if r not in _CATALOG_DATA:
        raise CatalogError(f"no catalogue entry for r={r}; available: {SUPPORTED_R}")
    l, a, b, seeds = _CATALOG_DATA[r]
    ops = {name: _seed_operator(l, name, *seeds[name]) for name in SEED_NAMES}
    return CatalogEntry(r, GbCodeSpec(l, a, b), ops, conjectured_params(r))


@lru_cache(maxsize=None)
def _code(r: int) -> CssCode:
    entry = catalog_code(r)
    n, k, d = entry.params
    return build_gb_code(entry.spec, name=f"[[{n},{k},{d}]]")


def seed_orbit_generators(entry: CatalogEntry, name: str) -> list[PauliOperator]:
    """The seed followed by its images under shifts 1 .. l-1."""
    seed = entry.seeds[name]
    return [seed] + [apply_permutation(seed, shift_qubit_permutation(entry.l, s)) for s in range(1, entry.l)]


@lru_cache(maxsize=None)
def _basis(r: int) -> LogicalBasis:
    entry = catalog_code(r)
    anchors = [
        SectorAnchor(seed_orbit_generators(entry, "x1"), seed_orbit_generators(entry, "z1")),
        SectorAnchor(seed_orbit_generators(entry, "x2"), seed_orbit_generators(entry, "z2")),
    ]
    return logical_basis(entry.code, anchors)


def catalog_checksum() -> str:
    """SHA-256 over the embedded catalogue in a canonical JSON form."""
    payload = {
        str(r): {"l": l, "A": list(a), "B": list(b), "seeds": {k: [list(v[0]), list(v[1])] for k, v in s.items()}}
        for r, (l, a, b, s) in sorted(_CATALOG_DATA.items())
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()
