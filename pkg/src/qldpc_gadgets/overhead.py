"""Qubit accounting for a processing block: code block, four seed gadgets, bridges.

Conventions:

* the code block costs ``2n`` (one syndrome ancilla per data qubit),
* a gadget costs its data qubits plus one ancilla per chi and gauge check,
  plus two qubits per edge added for expansion,
* each gadget gets a bridge of width ``wt(seed)``, costing ``2 wt - 1``.

Ratios are rounded half up.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable

from .expansion import augment_to_expander, gadget_cheeger
from .gadget import build_gadget
from .gb import SEED_NAMES, catalog_code, conjectured_params


def round_half_up(x: Fraction | float | int) -> int:
    f = Fraction(x)
    return int((f + Fraction(1, 2)).__floor__())


@dataclass
class SeedOverhead:
    name: str
    weight: int
    overlapping_checks: int
    gadget_qubits: int
    cheeger_before: str
    added_edges: int
    augmentation_qubits: int
    cheeger_after: str
    bridge_qubits: int


@dataclass
class OverheadReport:
    r: int
    n: int
    k: int
    d: int
    code_block_qubits: int
    gadget_qubits: int
    augmentation_qubits: int
    bridge_qubits: int
    total_qubits: int
    per_logical: int
    surface_factor: int
    seeds: list[SeedOverhead] = field(default_factory=list)

    def columns(self) -> tuple[int, int, int, int, int, int]:
        """(code block, gadgets incl. augmentation, bridges, total, per logical, factor)."""
        return (
            self.code_block_qubits,
            self.gadget_qubits + self.augmentation_qubits,
            self.bridge_qubits,
            self.total_qubits,
            self.per_logical,
            self.surface_factor,
        )

    def gadget_column(self) -> str:
        """Gadget entry in ``(base+aug) x 4`` form when all seeds agree."""
        per = {(s.gadget_qubits, s.augmentation_qubits) for s in self.seeds}
        if len(per) == 1:
            (base, aug), = per
            inner = f"({base}+{aug})" if aug else str(base)
            return f"{inner} x {len(self.seeds)} = {self.gadget_qubits + self.augmentation_qubits}"
        return str(self.gadget_qubits + self.augmentation_qubits)

    def to_dict(self) -> dict:
        return asdict(self)


def surface_code_comparison(d: int, per_logical: int | Fraction) -> int:
    """Overhead reduction against ``4 d^2`` qubits per logical qubit."""
    if d < 1:
        raise ValueError("distance must be positive")
    return round_half_up(Fraction(4 * d * d) / Fraction(per_logical))


def overhead_row(r: int, policy: str = "optimal", augment: bool = True) -> OverheadReport:
    """Recompute one row of the overhead table for catalogue code ``r``."""
    entry = catalog_code(r)
    code = entry.code
    n, _, d = entry.params
    k = code.k
    seeds = []
    for name in SEED_NAMES:
        g = build_gadget(code, entry.seeds[name])
        before = gadget_cheeger(g)
        added = 0
        after = before.value
        if augment and before.value < 1:
            res = augment_to_expander(g, 1, policy=policy, code=code)
            added = len(res.added_edges)
            after = res.achieved_h
        w = g.num_chi
        seeds.append(SeedOverhead(
            name=name,
            weight=w,
            overlapping_checks=g.num_kappa,
            gadget_qubits=g.physical_qubits,
            cheeger_before=str(before.value),
            added_edges=added,
            augmentation_qubits=2 * added,
            cheeger_after=str(after),
            bridge_qubits=2 * w - 1,
        ))
    block = 2 * code.n
    gadgets = sum(s.gadget_qubits for s in seeds)
    aug = sum(s.augmentation_qubits for s in seeds)
    bridges = sum(s.bridge_qubits for s in seeds)
    total = block + gadgets + aug + bridges
    per_logical = round_half_up(Fraction(total, k))
    return OverheadReport(
        r=r, n=code.n, k=k, d=d,
        code_block_qubits=block,
        gadget_qubits=gadgets,
        augmentation_qubits=aug,
        bridge_qubits=bridges,
        total_qubits=total,
        per_logical=per_logical,
        surface_factor=surface_code_comparison(d, per_logical),
        seeds=seeds,
    )


def rate_ratio_series(r_range: Iterable[int]) -> list[tuple[int, int, float]]:
    """``(r, d, (k/n) d^2)``: code rate relative to a rotated surface code at equal distance."""
    out = []
    for r in r_range:
        n, k, d = conjectured_params(r)
        out.append((r, d, k * d * d / n))
    return out
