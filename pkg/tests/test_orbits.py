import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qldpc_gadgets.css import LogicalError, logical_action
from qldpc_gadgets.gb import SEED_NAMES, SUPPORTED_R, catalog_code
from qldpc_gadgets.orbits import (
    _product_set, complete_seed_set_check, logical_orbit, seed_sector, verify_sector_coverage,
)
from qldpc_gadgets.pauli import PauliOperator


@pytest.mark.parametrize("r", SUPPORTED_R)
def test_sector_coverage(r):
    entry = catalog_code(r)
    rep = verify_sector_coverage(entry)
    assert rep.passed, [x.problems for x in rep.results]
    assert all(x.orbit_size == 2**r - 1 for x in rep.results)


def test_sectors():
    entry = catalog_code(5)
    assert seed_sector(entry, "x1") == ("x", range(0, 5))
    assert seed_sector(entry, "z2") == ("z", range(5, 10))


def test_r5_brute_force_completeness():
    rep = complete_seed_set_check(catalog_code(5))
    assert rep.passed
    assert rep.brute_force_count == 4**10 == 1_048_576
    assert rep.structural_rank == 20


@pytest.mark.parametrize("r", [7, 8])
def test_structural_completeness(r):
    rep = complete_seed_set_check(catalog_code(r))
    assert rep.passed and rep.method == "structural"
    assert rep.reachable == rep.expected == 4 ** (2 * r)


@pytest.mark.parametrize("missing", SEED_NAMES)
def test_withholding_a_seed_breaks_coverage(missing):
    entry = catalog_code(5)
    names = [n for n in SEED_NAMES if n != missing]
    rep = complete_seed_set_check(entry, names, brute_force=True)
    assert not rep.passed
    assert rep.brute_force_count == 2**15
    assert rep.structural_rank == 15


def test_product_set_matches_itertools():
    orbits = [[1, 2, 3], [4, 8, 12], [16]]
    want = {a ^ b ^ c for a, b, c in itertools.product([0] + orbits[0], [0] + orbits[1], [0] + orbits[2])}
    got = _product_set([np.array(o) for o in orbits])
    assert set(got.tolist()) == want


def test_orbit_rejects_bad_seeds():
    entry = catalog_code(5)
    code, basis = entry.code, entry.basis
    with pytest.raises(LogicalError):
        logical_orbit(code, basis, code.x_checks()[0], entry.l)
    with pytest.raises(LogicalError):
        logical_orbit(code, basis, PauliOperator.x_type(code.n, [0]), entry.l)


@given(st.sampled_from(SUPPORTED_R[:2]), st.sampled_from(SEED_NAMES), st.integers(0, 500))
def test_orbit_records_shift_images(r, name, s):
    """shift_of[a] names a shift whose image of the seed acts as a."""
    entry = catalog_code(r)
    orbit = logical_orbit(entry.code, entry.basis, entry.seeds[name], entry.l)
    a = logical_action(entry.code, entry.basis, entry.shift(s)(entry.seeds[name]))
    assert a in orbit.actions
    first = orbit.shift_of[a]
    assert first <= s % entry.l
    assert logical_action(entry.code, entry.basis, entry.shift(first)(entry.seeds[name])) == a
