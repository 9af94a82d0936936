import itertools

import pytest

from twoselmer.curve import FullTwoTorsionModel, sigma_set, twist
from twoselmer.padic import REAL_PLACE, LocalSquareClass, finite_place, trivial_class
from twoselmer.selmer import SelmerSpec, selmer_group
from twoselmer.twist_lab import (
    base_rank,
    build_character,
    find_inc2,
    find_plus_one,
    multiplicative_h_check,
    parity_check,
    rank_of_twist,
    scan,
    squarefree_twists,
    twist_spec,
)

SIGN = LocalSquareClass(REAL_PLACE, (1,))


def test_rank_examples(m101):
    assert rank_of_twist(m101, 1) == 2
    assert rank_of_twist(m101, -1) == 2
    with pytest.raises(ValueError):
        rank_of_twist(m101, 12)
    with pytest.raises(ValueError):
        rank_of_twist(m101, 0)


def test_masked_equals_direct_descent(corpus):
    # Sel_2(E^d) through base-model masks == descent on the twisted model
    for m in corpus:
        for d in (5, -5, 17, -21, 34, -31):
            masked = selmer_group(twist_spec(m, d)).dim
            direct = selmer_group(SelmerSpec(twist(m, d))).dim
            assert masked == direct, (m.roots, d)


def test_parity_examples(m101):
    chk = parity_check(m101, 1)
    assert chk["lhs"] == chk["rhs"] == 0
    chk = parity_check(m101, -1)
    assert chk["equal"] and chk["lhs"] == 0
    assert chk["h"]["inf"] == 1 and chk["h"]["2"] == 1


def test_parity_small_range(corpus):
    for m in corpus:
        for d in squarefree_twists(60):
            assert parity_check(m, d)["equal"], (m.roots, d)


def test_build_character_examples():
    m33 = FullTwoTorsionModel((-3, 0, 3))  # Sigma = {inf, 2, 3}
    assert [str(v) for v in sigma_set(m33).places] == ["inf", "2", "3"]
    d = build_character(m33, {REAL_PLACE: SIGN})
    assert d == -23

    m101 = FullTwoTorsionModel((-1, 0, 1))
    assert build_character(m101, {}) == 1
    assert build_character(m101, {}, extra_prime="require") == 17


def test_build_character_matches_prescription():
    from twoselmer.padic import local_class

    m = FullTwoTorsionModel((0, 1, 5))
    pres = {REAL_PLACE: SIGN, finite_place(5): LocalSquareClass(finite_place(5), (0, 1))}
    d = build_character(m, pres, extra_prime="require")
    for v in sigma_set(m).places:
        assert local_class(d, v) == pres.get(v, trivial_class(v))


def test_find_inc2(m101):
    witness = find_inc2(m101)
    assert witness["q"] % 8 == 1
    assert witness["r_before"] == 2 and witness["r_after"] == 4
    assert rank_of_twist(m101, witness["q"]) == 4


def test_find_plus_one(m101):
    witness = find_plus_one(m101)
    assert witness["d"] < 0
    assert witness["r_before"] == 2 and witness["r_after"] == 3
    assert witness["masked_rank"] == 1


def test_squarefree_twists_order():
    assert list(itertools.islice(squarefree_twists(10), 8)) == [1, -1, 2, -2, 3, -3, 5, -5]
    assert 4 not in set(squarefree_twists(10))


def test_scan_small(m101):
    records, summary = scan(m101, 100)
    assert summary.parity_failures == 0
    assert {2, 3} <= set(summary.rank_histogram)
    assert summary.t_hat == 2
    assert summary.bound_checks["t_hat_ge_2"]
    assert summary.bound_checks["t_hat_le_n"]
    # both parities occur
    assert {r % 2 for r in summary.rank_histogram} == {0, 1}
    assert summary.records_count == len(records)
    with pytest.raises(ValueError):
        scan(m101, 0)


def test_scan_rank_flip_babo(m101):
    # records differing by one ramified prime change rank by at most dim alpha_q(1)
    for d, q in ((1, 3), (5, 7), (-1, 11)):
        r1 = rank_of_twist(m101, d)
        r2 = rank_of_twist(m101, d * q)
        assert abs(r1 - r2) <= 2


def test_multiplicative_h_check():
    m = FullTwoTorsionModel((0, 1, 5))
    rep = multiplicative_h_check(m, 5)
    assert rep["v_delta"] % 2 == 0
    assert rep["h"] == 1
    assert rep["h_trivial"] == 0
    assert rep["even_branch_ok"]
    assert "unreachable" in rep["odd_branch"]
    with pytest.raises(ValueError):
        multiplicative_h_check(m, 7)  # good reduction
    with pytest.raises(ValueError):
        multiplicative_h_check(m, 2)


def test_base_rank(corpus):
    for m in corpus:
        assert base_rank(m) >= 2  # full 2-torsion trivial lower bound
