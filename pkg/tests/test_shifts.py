import itertools
import random

import pytest

from sdpquot.errors import InputError, LimitError, VerificationError
from sdpquot.shifts import (
    CellularAutomaton,
    FiniteGroupTable,
    RecodingData,
    all_rules,
    ca_apply,
    ca_table,
    conjugate_map,
    decode,
    encode,
    finext_embed,
    group_from_json,
    is_equivariant,
    is_h_equivariant,
    recode,
    recode_inverse,
    recode_sweep,
    shift_act,
    surjunctivity_check,
    table_properties,
)

Z2 = FiniteGroupTable.cyclic(2)
Z4 = FiniteGroupTable.cyclic(4)
KLEIN = FiniteGroupTable.direct_product(Z2, Z2)
SYM3 = FiniteGroupTable.semidirect_cyclic(3, 2, -1)
ROT = (0, 1, 2)  # the order-3 subgroup of SYM3


def random_ca(rng, Gt, sigma=2, size=2):
    memory = tuple(sorted(rng.sample(range(Gt.order), size)))
    rule = tuple(rng.randrange(sigma) for _ in range(sigma**size))
    return CellularAutomaton(memory, rule, sigma)


def test_sym3_table_is_nonabelian_of_order_6():
    assert SYM3.order == 6
    assert any(SYM3.mul(a, b) != SYM3.mul(b, a) for a in range(6) for b in range(6))
    perms = FiniteGroupTable.from_permutations([(1, 0, 2), (1, 2, 0)])
    assert perms.order == 6


def test_table_validation():
    with pytest.raises(InputError):
        FiniteGroupTable(((0, 1), (0, 1)))
    with pytest.raises(InputError):
        FiniteGroupTable(((0, 1, 2), (1, 0, 2), (2, 2, 0)))
    with pytest.raises(InputError):
        group_from_json({"unknown": 1})


def test_encode_decode():
    for code in range(16):
        assert encode(decode(code, 4, 2), 2) == code
    assert decode(6, 3, 2) == (1, 1, 0)


def test_shift_act_examples():
    assert shift_act(Z4, 0, (1, 0, 1, 1)) == (1, 0, 1, 1)
    assert shift_act(Z2, 1, (0, 1)) == (1, 0)
    # (g.x)(h) = x(g^-1 h)
    assert shift_act(Z4, 1, (1, 2, 3, 0)) == (0, 1, 2, 3)


def test_shift_is_an_action():
    x = (0, 1, 1, 0, 1, 0)
    for g, h in itertools.product(range(6), repeat=2):
        assert shift_act(SYM3, g, shift_act(SYM3, h, x)) == shift_act(SYM3, SYM3.mul(g, h), x)


def test_projection_and_constant_rules():
    ident = CellularAutomaton((0,), (0, 1), 2)
    const = CellularAutomaton((), (1,), 2)
    for x in itertools.product(range(2), repeat=4):
        assert ca_apply(Z4, ident, x) == x
        assert ca_apply(Z4, const, x) == (1, 1, 1, 1)
    assert surjunctivity_check(Z4, 2, ident).to_json() == {"injective": True, "surjective": True}
    assert surjunctivity_check(Z4, 2, const).to_json() == {"injective": False, "surjective": False}


def test_xor_rule_on_z4():
    xor = CellularAutomaton((0, 1), (0, 1, 1, 0), 2)
    assert ca_apply(Z4, xor, (1, 0, 0, 0)) == (1, 0, 0, 1)
    rec = surjunctivity_check(Z4, 2, xor)
    assert not rec.injective and not rec.surjective


def test_sixteen_two_cell_rules_on_z4():
    seen = 0
    for rule in itertools.product(range(2), repeat=4):
        rec = surjunctivity_check(Z4, 2, CellularAutomaton((0, 1), rule, 2))
        assert not (rec.injective and not rec.surjective)
        seen += 1
    assert seen == 16


def test_all_rules_count():
    # 2 rules with empty memory, 4 * 4 with one cell, 6 * 16 with two cells
    assert sum(1 for _ in all_rules(Z4, 2, 2)) == 114


def test_pigeonhole_assertion(monkeypatch):
    from sdpquot import shifts

    # a forged table that is injective but misses a configuration
    monkeypatch.setattr(shifts, "ca_table", lambda Gt, A, max_configs=None: [0, 1, 2])
    with pytest.raises(VerificationError):
        surjunctivity_check(Z2, 2, CellularAutomaton((0,), (0, 1), 2))


def test_cellular_automata_are_equivariant():
    rng = random.Random(4)
    for Gt in (Z4, KLEIN, SYM3):
        for _ in range(5):
            A = random_ca(rng, Gt)
            assert is_equivariant(Gt, 2, ca_table(Gt, A)) is None


def test_non_equivariant_map_detected():
    table = list(range(16))
    table[1] = 2
    assert is_equivariant(Z4, 2, table) is not None


def test_recode_trivial_cases():
    full = RecodingData(SYM3, tuple(range(6)), (0,))
    tiny = RecodingData(SYM3, (0,), tuple(range(6)))
    for x in itertools.product(range(2), repeat=6):
        assert recode(full, 2, x) == x
        assert recode(tiny, 2, x) == (encode(x, 2),)
        assert recode_inverse(tiny, 2, recode(tiny, 2, x)) == x


def test_recode_sym3_rotation_subgroup():
    rd = RecodingData.right_transversal(SYM3, ROT)
    rep = recode_sweep(rd, 2)
    assert rep["configurations"] == 64 and rep["pairs_checked"] == 192
    assert rep["bijective"] and rep["equivariant"]


def test_transversal_validation():
    with pytest.raises(InputError):
        RecodingData(SYM3, ROT, (0, 1))
    with pytest.raises(InputError):
        RecodingData(SYM3, (0, 1), (0, 3, 4))


def test_conjugate_map_identity():
    rd = RecodingData.right_transversal(SYM3, ROT)
    ident = list(range(64))
    assert conjugate_map(rd, 2, ident) == ident


def test_conjugate_map_preserves_properties():
    rd = RecodingData.right_transversal(SYM3, ROT)
    rng = random.Random(6)
    for _ in range(20):
        A = random_ca(rng, SYM3, size=rng.randint(1, 3))
        table = ca_table(SYM3, A)
        conj = conjugate_map(rd, 2, table)
        assert is_h_equivariant(rd, 2, conj) is None
        assert table_properties(conj, 64) == table_properties(table, 64)


def test_finext_trivial_subgroup_case():
    out = finext_embed(SYM3, tuple(range(6)), tuple(range(6)))
    assert out["cosets"] == 1 and out["index"] == 1 and out["injective"]


def test_finext_sym3():
    out = finext_embed(SYM3, (0, 3), (0, 0, 0, 3, 3, 3))
    assert out["injective"] and out["homomorphism"]
    assert out["pairs_checked"] == 36
    assert out["target_order"] == 12 and out["index"] == 2
    assert len({(tuple(p), h) for p, h in out["images"]}) == 6


def test_finext_direct_product():
    Z3 = FiniteGroupTable.cyclic(3)
    G = FiniteGroupTable.direct_product(Z2, Z3)  # (a, b) -> 3a + b
    H = (0, 1, 2)
    r = tuple(g % 3 for g in range(6))
    out = finext_embed(G, H, r)
    assert out["injective"] and out["homomorphism"] and out["index"] == 1


def test_finext_rejects_bad_retraction():
    with pytest.raises(InputError):
        finext_embed(SYM3, (0, 3), (0, 3, 0, 3, 0, 3))


def test_configuration_cap():
    big = FiniteGroupTable.cyclic(12)
    with pytest.raises(LimitError):
        ca_table(big, CellularAutomaton((0,), (0, 1), 2), max_configs=1000)
