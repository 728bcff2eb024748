from __future__ import annotations

import random

import pytest

from ssrank.bt1 import a_number, check_polarization, p_rank, validate_bt1, dual
from ssrank.build import j_rs, ord1
from ssrank.eo import (
    EOType,
    FiltrationError,
    FinalType,
    canonical_module,
    enumerate_types,
    eo_type_of,
    extend_final,
    validate_sequence,
)
from ssrank.words import decompose


def test_validate_sequence():
    assert validate_sequence([])
    assert validate_sequence([0]) and validate_sequence([1])
    assert not validate_sequence([2])
    assert not validate_sequence([0, 2])
    assert not validate_sequence([1, 0])
    assert validate_sequence([0, 1, 1, 2])
    with pytest.raises(ValueError):
        EOType.of([0, 2])


def test_enumerate_counts_and_order():
    assert [t.nu for t in enumerate_types(1)] == [(0,), (1,)]
    types5 = list(enumerate_types(5))
    assert len(types5) == 32
    assert [t.nu for t in types5] == sorted(t.nu for t in types5)
    assert len(set(types5)) == 32
    assert [t.nu for t in enumerate_types(0)] == [()]


def test_invariant_formulas():
    g = 6
    assert EOType.of(range(g)).p_rank() == 0
    assert EOType.of(range(g)).a_number() == 1
    assert EOType.of(range(1, g + 1)).p_rank() == g
    assert EOType.of(range(1, g + 1)).a_number() == 0
    t = EOType.of([0, 1, 1, 2])
    assert t.p_rank() == 0 and t.a_number() == 2


def test_extend_final_examples():
    assert extend_final(EOType.of([0, 1])).psi == (0, 0, 1, 1, 2)
    assert extend_final(EOType.of([1])).psi == (0, 1, 1)
    assert extend_final(EOType.of([0, 0])).psi == (0, 0, 0, 1, 2)
    with pytest.raises(ValueError):
        FinalType((0, 0, 2))  # step of size 2
    with pytest.raises(ValueError):
        FinalType((0, 1, 1, 1, 2))  # not symmetric


def test_canonical_module_smallest_types(gf2):
    ss = canonical_module(EOType.of([0]), gf2)
    assert decompose(ss).as_dict() == {"FV": 1}
    assert check_polarization(ss)
    ordinary = canonical_module(EOType.of([1]), gf2)
    assert decompose(ordinary).as_dict() == {"F": 1, "V": 1}
    assert p_rank(ordinary) == 1

    m = canonical_module(EOType.of([0, 1]), gf2)
    assert decompose(m).as_dict() == {"FFVV": 1}
    # single generator with F^2 x = V^2 x (signs coincide mod 2)
    assert m.frobenius.power(2).column(3) == m.verschiebung.power(2).column(3) != (0, 0, 0, 0)

    two_part = canonical_module(EOType.of([0, 0, 1]), gf2)
    assert decompose(two_part).as_dict() == {"FV": 1, "FFVV": 1}
    assert p_rank(two_part) == 0 and a_number(two_part) == 2


def test_canonical_module_is_valid_and_polarized(gf2):
    for g in range(0, 5):
        for t in enumerate_types(g):
            m = canonical_module(t, gf2)
            assert validate_bt1(m) == []
            assert check_polarization(m)


def test_round_trip_small(gf2):
    for g in range(0, 5):
        for t in enumerate_types(g):
            m = canonical_module(t, gf2, with_form=False)
            assert eo_type_of(m) == t
            assert t.p_rank() == p_rank(m)
            assert t.a_number() == a_number(m)


def test_round_trip_sampled_large(gf2):
    rng = random.Random(5813)
    for g in (8, 10):
        for _ in range(12):
            nu = []
            for i in range(g):
                prev = nu[-1] if nu else 0
                nu.append(prev + rng.randrange(2) if nu else rng.randrange(2))
            t = EOType.of(nu)
            assert eo_type_of(canonical_module(t, gf2, with_form=False)) == t


def test_eo_type_of_fixtures(gf2):
    assert eo_type_of(j_rs(3, 3, gf2)) == EOType.of([0, 1, 2])
    assert eo_type_of(ord1(gf2)) == EOType.of([1])


def test_three_way_invariant_agreement_sampled(gf2):
    # nu formulas, module ranks, and census invariants must coincide
    from ssrank.words import census_invariants, census_of_type

    rng = random.Random(271828)
    for _ in range(30):
        g = rng.randrange(1, 10)
        nu = []
        for _ in range(g):
            prev = nu[-1] if nu else 0
            nu.append(prev + rng.randrange(2) if nu else rng.randrange(2))
        t = EOType.of(nu)
        m = canonical_module(t, gf2, with_form=False)
        bundle = census_invariants(census_of_type(t))
        assert t.p_rank() == p_rank(m) == bundle.f
        assert t.a_number() == a_number(m) == bundle.a


def test_duality_fixes_types(gf2):
    for g in range(1, 5):
        for t in enumerate_types(g):
            m = canonical_module(t, gf2, with_form=False)
            assert eo_type_of(dual(m)) == t


def test_eo_type_of_rejects_unclassifiable(gf2):
    with pytest.raises(FiltrationError):
        eo_type_of(j_rs(2, 3, gf2))  # odd dimension
    with pytest.raises(FiltrationError):
        eo_type_of(j_rs(1, 3, gf2))  # even dimension but V-rank 3 != g


def test_zero_length_type(gf2):
    t = EOType.of([])
    m = canonical_module(t, gf2)
    assert m.dim == 0
    assert eo_type_of(m) == t
