import pytest
from hypothesis import given
from hypothesis import strategies as st

from qldpc_gadgets.css import logical_action
from qldpc_gadgets.gb import (
    SEED_NAMES, SUPPORTED_R, CatalogError, GbCodeSpec, QubitLabel, ShiftAutomorphism,
    apply_permutation, build_gb_code, catalog_checksum, catalog_code, check_permutation,
    compose, conjectured_params, shift_qubit_permutation,
)
from qldpc_gadgets.pauli import PauliOperator

from .oracles import gb_supports, gf2_rank
from .strategies import paulis


@st.composite
def gb_specs(draw):
    l = draw(st.integers(3, 15))
    a = draw(st.sets(st.integers(0, l - 1), min_size=1, max_size=min(3, l)))
    b = draw(st.sets(st.integers(0, l - 1), min_size=1, max_size=min(3, l)))
    return GbCodeSpec(l, tuple(a), tuple(b))


@given(gb_specs())
def test_random_bicycle_codes_match_definition_and_commute(spec):
    code = build_gb_code(spec)  # raises if any pair of checks anticommutes
    hx, hz = gb_supports(spec.l, spec.a_set, spec.b_set)
    assert [sorted(r) for r in code.h_x.supports()] == hx
    assert [sorted(r) for r in code.h_z.supports()] == hz
    rx, rz = gf2_rank(hx, 2 * spec.l), gf2_rank(hz, 2 * spec.l)
    assert code.k == 2 * spec.l - rx - rz


@given(gb_specs(), st.integers(0, 100), st.integers(0, 100))
def test_shifts_are_automorphisms_and_compose(spec, s, t):
    l = spec.l
    code = build_gb_code(spec)
    p_s, p_t = shift_qubit_permutation(l, s % l), shift_qubit_permutation(l, t % l)
    check_permutation(code, p_s)
    assert compose(p_s, p_t) == shift_qubit_permutation(l, (s + t) % l)
    assert (ShiftAutomorphism(l, s) @ ShiftAutomorphism(l, t)).permutation == compose(p_s, p_t)


def test_spec_rejects_repeats_and_bad_lift():
    with pytest.raises(ValueError):
        GbCodeSpec(7, (0, 7), (1,))
    with pytest.raises(ValueError):
        GbCodeSpec(0, (0,), (0,))


def test_non_automorphism_detected():
    code = build_gb_code(GbCodeSpec(7, (0, 1, 3), (0, 2, 3)))
    perm = list(range(14))
    perm[0], perm[1] = 1, 0
    with pytest.raises(ValueError):
        check_permutation(code, perm)


def test_qubit_labels():
    assert QubitLabel(3, "R").qubit_id(31) == 34
    assert QubitLabel.of(34, 31) == QubitLabel(3, "R")
    with pytest.raises(ValueError):
        QubitLabel(31, "L").qubit_id(31)


def test_conjectured_family():
    assert conjectured_params(5) == (62, 10, 6)
    assert conjectured_params(6) == (126, 12, 10)
    assert conjectured_params(7) == (254, 14, 16)
    assert conjectured_params(8) == (510, 16, 24)


def test_unknown_catalogue_entry():
    with pytest.raises(CatalogError):
        catalog_code(9)


@pytest.mark.parametrize("r", SUPPORTED_R)
def test_catalogue_code_shape(r):
    entry = catalog_code(r)
    code = entry.code
    n, k, _ = entry.params
    assert code.n == n == 2 * (2**r - 1)
    assert code.k == k == 2 * r
    assert all(len(s) == 6 for s in code.h_x.supports() + code.h_z.supports())
    assert all(len(c) == 3 for c in code.h_x.column_supports())
    assert entry.basis.problems(code) == []


@pytest.mark.parametrize("r", SUPPORTED_R)
@pytest.mark.parametrize("name", SEED_NAMES)
def test_seed_is_a_logical(r, name):
    entry = catalog_code(r)
    seed = entry.seeds[name]
    assert seed.is_x_type if name[0] == "x" else seed.is_z_type
    assert entry.code.commutes_with_checks(seed)
    assert not entry.code.contains(seed)
    action = logical_action(entry.code, entry.basis, seed)
    i = entry.seed_logical_index(name)
    assert action.x == (1 << i if name[0] == "x" else 0)
    assert action.z == (1 << i if name[0] == "z" else 0)


def test_seed_weights():
    assert [catalog_code(r).seeds["x1"].weight for r in SUPPORTED_R] == [6, 10, 16, 26]


@given(st.sampled_from(SUPPORTED_R[:2]), st.integers(0, 200), st.integers(0, 200),
       st.sampled_from(SEED_NAMES), st.sampled_from(SEED_NAMES))
def test_group_action_consistency(r, s, t, a, b):
    """Shifting commutes with taking logical actions and respects composition."""
    entry = catalog_code(r)
    code, basis, l = entry.code, entry.basis, entry.l
    p, q = entry.seeds[a], entry.seeds[b]
    g_s, g_t = entry.shift(s), entry.shift(t)
    act = lambda op: logical_action(code, basis, op)
    assert g_s(g_t(p)) == (g_s @ g_t)(p)
    assert act(g_s(p * q)) == act(g_s(p)) ^ act(g_s(q))
    # shifting a stabilizer gives a stabilizer
    stab = code.x_checks()[s % l] * code.z_checks()[t % l]
    assert code.contains(g_s(stab))
    # shift by l is the identity
    assert apply_permutation(p, shift_qubit_permutation(l, 0)) == p


@given(st.integers(1, 10).flatmap(lambda n: st.tuples(paulis(n), st.permutations(range(n)))))
def test_apply_permutation_validates(data):
    p, perm = data
    assert apply_permutation(p, perm).weight == p.weight
    with pytest.raises(ValueError):
        apply_permutation(p, list(perm) + [0])


def test_checksum_is_stable():
    a = catalog_checksum()
    assert a == catalog_checksum()
    assert len(a) == 64 and int(a, 16) >= 0
