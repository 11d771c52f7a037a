from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qldpc_gadgets.css import CssCode, LogicalError, logical_basis
from qldpc_gadgets.gadget import (
    add_edges, attach, build_gadget, build_measurement_gadget, build_z_type_gadget,
    overlapping_checks, overlapping_z_checks, relocate, verify_gadget,
)
from qldpc_gadgets.gb import SEED_NAMES, SUPPORTED_R, catalog_code, shift_qubit_permutation
from qldpc_gadgets.gf2 import BitMatrix, rank
from qldpc_gadgets.pauli import PauliOperator

from .oracles import all_pairs_commute
from .strategies import css_codes

EXPECTED_COUNTS = {5: (9, 6, 4, 19), 6: (15, 10, 6, 31), 7: (24, 16, 9, 49), 8: (39, 26, 14, 79)}


def toy():
    return CssCode(BitMatrix([], 3), BitMatrix.from_supports([[0, 1, 2]], 3))


def test_toy_gadget():
    code = toy()
    assert code.k == 2
    seed = PauliOperator.x_type(3, [0, 1])
    g = build_gadget(code, seed)
    assert g.kappa_checks == (0,)
    assert g.chi_qubits == (0, 1)
    assert g.chi_support == (1, 1)
    assert g.gauge == ()  # 1 - 2 + 1
    assert g.physical_qubits == 1 + 2
    assert verify_gadget(code, g).passed
    d = attach(code, g)
    assert d.merged.k == 1
    assert d.merged.contains(d.measured_operator)
    assert [r for r in d.merged.h_z.supports()] == [(0, 1, 2, 3)]


def test_r5_overlapping_checks_example():
    entry = catalog_code(5)
    assert overlapping_z_checks(entry.code, entry.seeds["x1"]) == [1, 6, 8, 10, 11, 13, 15, 17, 26]
    with pytest.raises(LogicalError):
        overlapping_z_checks(entry.code, entry.seeds["z1"])


@pytest.mark.parametrize("r", SUPPORTED_R)
@pytest.mark.parametrize("name", SEED_NAMES)
def test_catalogue_gadgets(r, name):
    entry = catalog_code(r)
    seed = entry.seeds[name]
    g = build_gadget(entry.code, seed)
    rep = verify_gadget(entry.code, g)
    assert rep.passed, rep.failures()
    kappa, chi, gauge, physical = EXPECTED_COUNTS[r]
    assert (g.num_kappa, g.num_chi, g.num_gauge, g.physical_qubits) == (kappa, chi, gauge, physical)
    assert g.num_gauge == len(overlapping_checks(entry.code, seed)) - seed.weight + 1
    assert g.physical_qubits == 2 * g.num_kappa + 1
    assert g.kind == name[0].upper()
    assert g.gauge_type == ("Z" if name[0] == "x" else "X")


@pytest.mark.parametrize("name", SEED_NAMES)
def test_r5_deformed_code(name):
    entry = catalog_code(5)
    d = attach(entry.code, build_gadget(entry.code, entry.seeds[name]))
    assert d.merged.k == entry.code.k - 1
    assert d.merged.contains(d.measured_operator)
    assert all_pairs_commute([(c.x, c.z) for c in d.merged.checks()])


def test_type_specific_builders():
    entry = catalog_code(5)
    with pytest.raises(LogicalError):
        build_measurement_gadget(entry.code, entry.seeds["z1"])
    with pytest.raises(LogicalError):
        build_z_type_gadget(entry.code, entry.seeds["x1"])
    gz = build_z_type_gadget(entry.code, entry.seeds["z1"])
    assert gz.kind == "Z" and verify_gadget(entry.code, gz).passed


def test_rejects_non_logicals():
    code = catalog_code(5).code
    with pytest.raises(LogicalError):
        build_gadget(code, code.x_checks()[0])  # a stabilizer
    with pytest.raises(LogicalError):
        build_gadget(code, PauliOperator.x_type(code.n, [0]))  # anticommutes
    with pytest.raises(LogicalError):
        build_gadget(code, PauliOperator.from_supports(code.n, [0], [0]))  # mixed type
    with pytest.raises(LogicalError):
        build_gadget(code, PauliOperator.x_type(5, [0]))


def test_mutation_dropped_kappa_is_caught():
    entry = catalog_code(5)
    g = build_gadget(entry.code, entry.seeds["x1"])
    keep = (1 << (g.num_kappa - 1)) - 1
    bad = replace(g, kappa_checks=g.kappa_checks[:-1],
                  chi_support=tuple(m & keep for m in g.chi_support),
                  gauge=tuple(m & keep for m in g.gauge))
    rep = verify_gadget(entry.code, bad)
    assert not rep["dual_tanner"].passed
    assert not rep["commutation"].passed


def test_mutation_bad_gauge_is_caught():
    entry = catalog_code(5)
    g = build_gadget(entry.code, entry.seeds["x1"])
    bad = replace(g, gauge=(1,) + g.gauge[1:])  # a single kappa is not in the kernel
    rep = verify_gadget(entry.code, bad)
    assert not rep["commutation"].passed
    dup = replace(g, gauge=(g.gauge[0],) * g.num_gauge)
    assert not verify_gadget(entry.code, dup)["gauge_count"].passed


def test_mutation_wrong_seed_is_caught():
    entry = catalog_code(5)
    g = build_gadget(entry.code, entry.seeds["x1"])
    other = entry.seeds["x1"] * entry.code.x_checks()[0]
    assert not verify_gadget(entry.code, replace(g, seed=other))["product"].passed


def _incidence(g):
    """Order-free description: code qubit -> code checks its chi reaches."""
    return {q: frozenset(g.kappa_checks[t] for t in range(g.num_kappa) if (m >> t) & 1)
            for q, m in zip(g.chi_qubits, g.chi_support)}


@pytest.mark.parametrize("shift", [1, 2, 7, 16, 30])
def test_relocation_along_shifts(shift):
    entry = catalog_code(5)
    code = entry.code
    perm = shift_qubit_permutation(entry.l, shift)
    g = build_gadget(code, entry.seeds["z2"])
    moved = relocate(code, g, perm)
    assert moved.seed == entry.shift(shift)(entry.seeds["z2"])
    assert verify_gadget(code, moved).passed
    assert _incidence(moved) == _incidence(build_gadget(code, moved.seed))


def test_relocation_rejects_non_automorphism():
    entry = catalog_code(5)
    g = build_gadget(entry.code, entry.seeds["x1"])
    perm = list(range(entry.n))
    perm[0], perm[1] = 1, 0
    with pytest.raises(ValueError):
        relocate(entry.code, g, perm)


def test_added_edges_keep_gadget_valid():
    entry = catalog_code(7)
    g = build_gadget(entry.code, entry.seeds["x1"])
    g2 = add_edges(g, [(0, 5), (3, 9)])
    assert g2.num_qubits == g.num_qubits + 2
    assert g2.num_gauge == g.num_gauge + 2
    assert g2.physical_qubits == g.physical_qubits + 4
    assert verify_gadget(entry.code, g2).passed
    assert attach(entry.code, g2).merged.k == entry.code.k - 1
    with pytest.raises(ValueError):
        add_edges(g, [(1, 1)])


@given(css_codes(min_n=4, max_n=12), st.integers(0, 2**20), st.sampled_from("XZ"))
def test_random_css_gadgets(code, coeffs, kind):
    """Structural assertions always hold; the count formula holds iff the chi graph is connected."""
    basis = logical_basis(code)
    bars = basis.x_bars if kind == "X" else basis.z_bars
    seed = PauliOperator.identity(code.n)
    for i in range(code.k):
        if (coeffs >> i) & 1 or i == 0:
            seed = seed * bars[i]
    g = build_gadget(code, seed)
    rep = verify_gadget(code, g)
    for name in ("overlap", "commutation", "product", "dual_tanner"):
        assert rep[name].passed
    connected = rank(g.chi_matrix()) == g.num_chi - 1
    assert rep["gauge_count"].passed == connected
    d = attach(code, g)
    assert d.merged.contains(d.measured_operator)
    if connected:
        assert d.merged.k == code.k - 1
