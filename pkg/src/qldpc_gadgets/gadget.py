"""Gadgets that measure one logical operator of a CSS code.

For an X-type logical ``L`` the gadget has

* one gadget qubit (kappa) per code Z-check overlapping ``supp(L)``; that
  check is extended onto it,
* one X-check (chi) per qubit ``q`` of ``supp(L)``, acting on ``q`` and on
  every kappa whose code check contains ``q``,
* Z-type gauge checks (gamma) on the gadget qubits, one per kernel basis
  vector of the chi-to-kappa incidence matrix.

The product of all chi equals ``L`` because every kappa sits in an even
number of chi.  The Z-type version swaps the roles of X and Z throughout.

Gadget qubits beyond the kappas (added to raise expansion) are plain edges:
each sits in exactly two chi checks and in no code check.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .css import CssCode, LogicalError
from .gf2 import BitMatrix, RowSpace, bits_of, kernel_basis, mask_of, popcount
from .pauli import PauliOperator


def _checks_for(code: CssCode, kind: str) -> BitMatrix:
    """Code checks that a gadget of this kind extends (the opposite type)."""
    return code.h_z if kind == "X" else code.h_x


def _kind_of(p: PauliOperator) -> str:
    if p.is_x_type:
        return "X"
    if p.is_z_type:
        return "Z"
    raise LogicalError("operator must be nontrivial and of pure X or pure Z type")


@dataclass(frozen=True)
class Gadget:
    """Ancilla system for measuring ``seed``.

    Local gadget-qubit ``t`` is kappa ``t`` (attached to code check
    ``kappa_checks[t]``) for ``t < len(kappa_checks)`` and an extra edge
    qubit otherwise.  ``chi_support[i]`` and ``gauge`` are masks over local
    gadget qubits.
    """

    kind: str
    seed: PauliOperator
    chi_qubits: tuple[int, ...]
    kappa_checks: tuple[int, ...]
    chi_support: tuple[int, ...]
    gauge: tuple[int, ...]
    extra_edges: tuple[tuple[int, int], ...] = field(default=())

    @property
    def base_n(self) -> int:
        return self.seed.n

    @property
    def num_kappa(self) -> int:
        return len(self.kappa_checks)

    @property
    def num_qubits(self) -> int:
        """Gadget data qubits (kappas plus extra edge qubits)."""
        return len(self.kappa_checks) + len(self.extra_edges)

    @property
    def num_chi(self) -> int:
        return len(self.chi_qubits)

    @property
    def num_gauge(self) -> int:
        return len(self.gauge)

    @property
    def physical_qubits(self) -> int:
        """Data qubits plus one measurement ancilla per chi and gamma check."""
        return self.num_qubits + self.num_chi + self.num_gauge

    @property
    def check_type(self) -> str:
        return self.kind

    @property
    def gauge_type(self) -> str:
        return "Z" if self.kind == "X" else "X"

    @property
    def extensions(self) -> dict[int, tuple[int, ...]]:
        """Code check id -> local gadget qubits added to it."""
        out: dict[int, list[int]] = {}
        for t, j in enumerate(self.kappa_checks):
            out.setdefault(j, []).append(t)
        return {j: tuple(v) for j, v in out.items()}

    def chi_matrix(self) -> BitMatrix:
        """Incidence of chi checks (rows) on gadget qubits (columns)."""
        return BitMatrix(self.chi_support, self.num_qubits)

    def endpoints(self, t: int) -> tuple[int, ...]:
        """Chi checks containing gadget qubit ``t``."""
        return tuple(i for i, m in enumerate(self.chi_support) if (m >> t) & 1)

    def chi_operator(self, i: int, offset: int, n: int) -> PauliOperator:
        """Chi check ``i`` on a register of ``n`` qubits with gadget qubits at ``offset``."""
        mask = (1 << self.chi_qubits[i]) | (self.chi_support[i] << offset)
        return PauliOperator(n, x=mask) if self.kind == "X" else PauliOperator(n, z=mask)

    def gauge_operator(self, m: int, offset: int, n: int) -> PauliOperator:
        mask = self.gauge[m] << offset
        return PauliOperator(n, z=mask) if self.kind == "X" else PauliOperator(n, x=mask)


def overlapping_checks(code: CssCode, logical: PauliOperator) -> list[int]:
    """Ids of the opposite-type code checks touching ``supp(logical)``, ascending."""
    if logical.is_identity:
        return []
    kind = _kind_of(logical)
    support = logical.x if kind == "X" else logical.z
    return [j for j, r in enumerate(_checks_for(code, kind).rows) if r & support]


def overlapping_z_checks(code: CssCode, logical: PauliOperator) -> list[int]:
    if not logical.is_identity and not logical.is_x_type:
        raise LogicalError("expected an X-type operator")
    return overlapping_checks(code, logical)


def _build(code: CssCode, logical: PauliOperator, kind: str) -> Gadget:
    if logical.n != code.n:
        raise LogicalError("operator acts on the wrong number of qubits")
    if not code.commutes_with_checks(logical):
        raise LogicalError("operator anticommutes with a code check")
    if code.contains(logical):
        raise LogicalError("operator is a stabilizer, not a nontrivial logical")
    support = logical.x if kind == "X" else logical.z
    qubits = tuple(bits_of(support))
    checks = _checks_for(code, kind)
    s_l = tuple(j for j, r in enumerate(checks.rows) if r & support)
    chi = tuple(
        mask_of(t for t, j in enumerate(s_l) if (checks.rows[j] >> q) & 1) for q in qubits
    )
    gauge = kernel_basis(BitMatrix(chi, len(s_l))).rows
    return Gadget(kind, logical, qubits, s_l, chi, tuple(gauge))


def build_measurement_gadget(code: CssCode, logical: PauliOperator) -> Gadget:
    """Gadget for an X-type logical operator."""
    if not logical.is_x_type:
        raise LogicalError("expected a nontrivial X-type operator")
    return _build(code, logical, "X")


def build_z_type_gadget(code: CssCode, logical: PauliOperator) -> Gadget:
    """The X/Z-dual gadget for a Z-type logical operator."""
    if not logical.is_z_type:
        raise LogicalError("expected a nontrivial Z-type operator")
    return _build(code, logical, "Z")


def build_gadget(code: CssCode, logical: PauliOperator) -> Gadget:
    """Dispatch on the operator's type."""
    return _build(code, logical, _kind_of(logical))


def add_edges(gadget: Gadget, edges: Sequence[tuple[int, int]]) -> Gadget:
    """Add one gadget qubit per chi pair; the gauge basis grows by one per edge."""
    chi = list(gadget.chi_support)
    start = gadget.num_qubits
    for t, (a, b) in enumerate(edges):
        if a == b or not (0 <= a < gadget.num_chi and 0 <= b < gadget.num_chi):
            raise ValueError(f"bad chi pair {(a, b)}")
        chi[a] |= 1 << (start + t)
        chi[b] |= 1 << (start + t)
    ncols = start + len(edges)
    space = RowSpace(gadget.gauge, ncols)
    extra = [v for v in kernel_basis(BitMatrix(chi, ncols)).rows if space.add(v)]
    return replace(
        gadget,
        chi_support=tuple(chi),
        gauge=gadget.gauge + tuple(extra),
        extra_edges=gadget.extra_edges + tuple((min(a, b), max(a, b)) for a, b in edges),
    )


def relocate(code: CssCode, gadget: Gadget, perm: Sequence[int]) -> Gadget:
    """The same gadget attached at the image of its attachment points under ``perm``.

    ``perm`` must be a code automorphism; the gadget's internal structure is
    unchanged, only the code qubits and checks it connects to move.
    """
    checks = _checks_for(code, gadget.kind)
    index = {r: j for j, r in enumerate(checks.rows)}
    images = []
    for j in gadget.kappa_checks:
        img = mask_of(perm[q] for q in bits_of(checks.rows[j]))
        if img not in index:
            raise ValueError("permutation is not an automorphism of the code")
        images.append(index[img])
    return replace(
        gadget,
        seed=gadget.seed.permute(perm),
        chi_qubits=tuple(perm[q] for q in gadget.chi_qubits),
        kappa_checks=tuple(images),
    )


# attachment -----------------------------------------------------------------


@dataclass(frozen=True)
class DeformedCode:
    base: CssCode
    gadget: Gadget
    merged: CssCode

    @property
    def measured_operator(self) -> PauliOperator:
        return self.gadget.seed.embed(self.merged.n)


def deformed_rows(code: CssCode, gadget: Gadget, offset: int | None = None) -> tuple[list[int], list[int]]:
    """X rows and Z rows of code plus gadget, without any validation."""
    if offset is None:
        offset = code.n
    ext = [0] * (code.h_z.nrows if gadget.kind == "X" else code.h_x.nrows)
    for t, j in enumerate(gadget.kappa_checks):
        ext[j] |= 1 << (offset + t)
    chi = [(1 << q) | (m << offset) for q, m in zip(gadget.chi_qubits, gadget.chi_support)]
    gauge = [g << offset for g in gadget.gauge]
    if gadget.kind == "X":
        xs = list(code.h_x.rows) + chi
        zs = [r | e for r, e in zip(code.h_z.rows, ext)] + gauge
    else:
        xs = [r | e for r, e in zip(code.h_x.rows, ext)] + gauge
        zs = list(code.h_z.rows) + chi
    return xs, zs


def attach(code: CssCode, gadget: Gadget) -> DeformedCode:
    if gadget.base_n != code.n:
        raise ValueError("gadget was built for a different code")
    xs, zs = deformed_rows(code, gadget)
    n = code.n + gadget.num_qubits
    merged = CssCode(BitMatrix(xs, n), BitMatrix(zs, n))
    return DeformedCode(code, gadget, merged)


# verification ---------------------------------------------------------------


@dataclass
class Assertion:
    name: str
    passed: bool = True
    detail: str = ""
    offending: tuple | None = None

    def fail(self, detail: str, offending: tuple | None = None) -> None:
        if self.passed:
            self.passed = False
            self.detail = detail
            self.offending = offending


@dataclass
class VerificationReport:
    assertions: list[Assertion]

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def __getitem__(self, name: str) -> Assertion:
        for a in self.assertions:
            if a.name == name:
                return a
        raise KeyError(name)

    def failures(self) -> list[Assertion]:
        return [a for a in self.assertions if not a.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "assertions": [
                {"name": a.name, "passed": a.passed, "detail": a.detail,
                 "offending": list(a.offending) if a.offending else None}
                for a in self.assertions
            ],
        }


def verify_gadget(code: CssCode, gadget: Gadget) -> VerificationReport:
    """Mechanical check of the gadget's correctness claims.

    overlap
        each extended code check meets each chi in 2 qubits (its code qubit
        and its kappa) when the check contains the chi's code qubit, else 0
    commutation
        every X row of the deformed code commutes with every Z row
    product
        the product of all chi is the seed on the code and trivial on the gadget
    gauge_count
        the number of gauge checks is (gadget qubits) - wt(L) + 1 and they
        are independent
    dual_tanner
        there is one kappa per overlapping check, and kappa_j is in chi_i
        exactly when q_i is in the support of check j
    """
    n = code.n
    off = n
    checks = _checks_for(code, gadget.kind)
    xs, zs = deformed_rows(code, gadget)
    ext_rows = zs if gadget.kind == "X" else xs
    chi_rows = xs[code.h_x.nrows:] if gadget.kind == "X" else zs[code.h_z.nrows:]

    overlap = Assertion("overlap")
    for t, j in enumerate(gadget.kappa_checks):
        for i, q in enumerate(gadget.chi_qubits):
            expected = 2 if (checks.rows[j] >> q) & 1 else 0
            got = popcount(ext_rows[j] & chi_rows[i])
            if got != expected:
                overlap.fail(f"check {j} meets chi {i} in {got} qubits, expected {expected}", (j, i))

    commutation = Assertion("commutation")
    for a, xr in enumerate(xs):
        for b, zr in enumerate(zs):
            if popcount(xr & zr) & 1:
                commutation.fail(f"X row {a} anticommutes with Z row {b}", (a, b))
                break
        if not commutation.passed:
            break

    product_check = Assertion("product")
    acc = 0
    for r in chi_rows:
        acc ^= r
    seed_mask = gadget.seed.x if gadget.kind == "X" else gadget.seed.z
    if acc & ((1 << n) - 1) != seed_mask:
        product_check.fail("product of chi differs from the seed on code qubits")
    elif acc >> off:
        product_check.fail(
            "product of chi leaves gadget qubits " + str([t for t in bits_of(acc >> off)]),
            tuple(bits_of(acc >> off)),
        )

    gauge_count = Assertion("gauge_count")
    expected = gadget.num_qubits - gadget.num_chi + 1
    if gadget.num_gauge != expected:
        gauge_count.fail(f"{gadget.num_gauge} gauge checks, expected {expected}")
    elif RowSpace(gadget.gauge, gadget.num_qubits).dimension != gadget.num_gauge:
        gauge_count.fail("gauge checks are linearly dependent")

    dual = Assertion("dual_tanner")
    support = mask_of(gadget.chi_qubits)
    s_l = [j for j, r in enumerate(checks.rows) if r & support]
    if sorted(gadget.kappa_checks) != s_l:
        missing = sorted(set(s_l) - set(gadget.kappa_checks))
        dual.fail(f"kappas do not match the overlapping checks (missing {missing})", tuple(missing))
    for i, q in enumerate(gadget.chi_qubits):
        for t, j in enumerate(gadget.kappa_checks):
            in_chi = (gadget.chi_support[i] >> t) & 1
            in_check = (checks.rows[j] >> q) & 1
            if in_chi != in_check:
                dual.fail(f"kappa {t} / chi {i} incidence disagrees with check {j}", (i, t))
    for t in range(gadget.num_kappa, gadget.num_qubits):
        if len(gadget.endpoints(t)) != 2:
            dual.fail(f"extra gadget qubit {t} is not in exactly two chi checks", (t,))

    return VerificationReport([overlap, commutation, product_check, gauge_count, dual])
