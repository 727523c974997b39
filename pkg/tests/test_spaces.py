import random
from itertools import permutations

import pytest

from eschenburg.errors import InvalidParameters
from eschenburg.exact_arith import sym_polys
from eschenburg.spaces import (
    CohomogeneityClass,
    ConditionLine,
    NormalizedSpace,
    Orientation,
    ParamPair,
    SasakianTriple,
    aloff_wallach,
    cohomogeneity,
    cohomogeneity_one_space,
    condition_c,
    is_flag_bundle,
    is_free,
    is_normal_form,
    is_positively_curved,
    normalize,
    sasakian_to_params,
)

TABLE_SPACES = [
    ((21, 21, -2), (20, 20, 0)),
    ((8, 7, -5), (6, 4, 0)),
    ((16, 16, -10), (13, 9, 0)),
    ((30, 26, -6), (25, 25, 0)),
    ((15, 14, -11), (12, 6, 0)),
    ((79, 49, -50), (46, 32, 0)),
    ((154, 154, -158), (135, 15, 0)),
]


def test_param_pair_requires_equal_sums():
    with pytest.raises(InvalidParameters):
        ParamPair((1, 2, 3), (1, 1, 1))


def test_param_pair_r_and_s():
    pp = ParamPair((21, 21, -2), (20, 20, 0))
    assert pp.r == -43
    assert pp.s == -882
    assert pp.matrix()[2] == [-22, -22, -2]
    assert str(pp) == "(21, 21, -2 | 20, 20, 0)"


@pytest.mark.parametrize("k, l", TABLE_SPACES)
def test_table_spaces_are_normal_forms(k, l):
    pp = ParamPair(k, l)
    assert is_free(pp)
    assert is_positively_curved(pp)
    assert is_normal_form(pp)
    ns = normalize(pp)
    assert ns.params == pp
    assert ns.orientation is Orientation.SAME


def test_cohomogeneity_one_normal_form():
    ns = normalize(cohomogeneity_one_space(1))
    assert ns.params == ParamPair((1, 1, -2), (0, 0, 0))
    assert ns.orientation is Orientation.UNKNOWN
    assert cohomogeneity(ns) is CohomogeneityClass.ONE
    assert normalize(cohomogeneity_one_space(21)).params == ParamPair((21, 21, -2), (20, 20, 0))


@pytest.mark.parametrize("a", [1, 2, 5, 21, 50])
def test_cohomogeneity_one_family(a):
    pp = cohomogeneity_one_space(a)
    assert abs(pp.r) == 2 * a + 1
    assert is_positively_curved(pp)
    assert normalize(pp).params == normalize(cohomogeneity_one_space(-a - 1)).params


def test_cohomogeneity_one_needs_nonzero_a():
    assert not is_positively_curved(cohomogeneity_one_space(0))


def test_aloff_wallach():
    assert is_free(aloff_wallach(1, 1))
    assert not is_free(aloff_wallach(2, 4))
    assert aloff_wallach(2, 3).k == (2, 3, -5)


def test_normalize_rejects_bad_input():
    with pytest.raises(InvalidParameters):
        normalize(aloff_wallach(2, 4))
    with pytest.raises(InvalidParameters):
        normalize(cohomogeneity_one_space(0))


def test_negation_reverses_orientation():
    pp = ParamPair((21, 21, -2), (20, 20, 0))
    moved = ParamPair((-20, -20, 0), (-21, -21, 2)).swapped().negated().shifted(0)
    assert normalize(moved).params == pp
    reversed_pp = ParamPair((-21, -21, 2), (-20, -20, 0)).shifted(20)
    ns = normalize(reversed_pp)
    assert ns.params == pp
    assert ns.orientation is Orientation.REVERSED


def _moves(pp: ParamPair, rng: random.Random) -> ParamPair:
    for _ in range(4):
        move = rng.randrange(4)
        if move == 0:
            pp = pp.swapped()
        elif move == 1:
            pp = pp.negated()
        elif move == 2:
            pp = pp.shifted(rng.randint(-50, 50))
        else:
            pp = pp.permuted(rng.choice(list(permutations(range(3)))), rng.choice(list(permutations(range(3)))))
    return pp


@pytest.mark.parametrize("k, l", TABLE_SPACES)
def test_normalize_is_move_invariant(k, l):
    rng = random.Random(hash((k, l)) & 0xFFFF)
    target = ParamPair(k, l)
    for _ in range(50):
        moved = _moves(target, rng)
        ns = normalize(moved)
        assert ns.params == target
        assert normalize(ns.params).params == ns.params


def test_normalize_idempotent_fuzz():
    rng = random.Random(99)
    checked = 0
    while checked < 200:
        k = [rng.randint(-40, 40) for _ in range(2)]
        l = [rng.randint(-40, 40) for _ in range(3)]
        k.append(sum(l) - sum(k))
        pp = ParamPair(tuple(k), tuple(l))
        if not (is_free(pp) and is_positively_curved(pp)):
            continue
        ns = normalize(pp)
        assert is_normal_form(ns.params)
        assert abs(ns.params.r) == abs(pp.r)
        assert normalize(ns.params) == ns
        checked += 1


def test_condition_c():
    assert not condition_c(ParamPair((35, 21, -34), (12, 10, 0))).holds
    cond = condition_c(ParamPair((1, 1, -2), (0, 0, 0)))
    assert cond.columns == {1, 2, 3}
    assert cond.rows == {1, 2}
    assert str(cond.first_line()) == "col1"


def test_condition_line_labels():
    assert ConditionLine.parse("row2") == ConditionLine("row", 2)
    assert ConditionLine.parse("fail") is None
    with pytest.raises(InvalidParameters):
        ConditionLine.parse("diag1")


@pytest.mark.parametrize(
    "k, l, expected",
    [
        ((21, 21, -2), (20, 20, 0), CohomogeneityClass.ONE),
        ((16, 16, -10), (13, 9, 0), CohomogeneityClass.TWO_PLUS),
        ((30, 26, -6), (25, 25, 0), CohomogeneityClass.TWO_MINUS),
        ((8, 7, -5), (6, 4, 0), CohomogeneityClass.FOUR),
    ],
)
def test_cohomogeneity(k, l, expected):
    assert cohomogeneity(NormalizedSpace(ParamPair(k, l))) is expected
    assert CohomogeneityClass.from_label(expected.value) is expected


def test_sasakian_triples():
    t = SasakianTriple(316, 3, 1)
    assert t.r == 1267
    pp = sasakian_to_params(t)
    assert pp == ParamPair((316, 3, 1), (320, 0, 0))
    assert pp.r == 1267
    assert is_positively_curved(pp)
    assert is_flag_bundle(SasakianTriple(5, 3, 2))
    assert not is_flag_bundle(t)
    with pytest.raises(InvalidParameters):
        SasakianTriple(6, 4, 1)
    with pytest.raises(InvalidParameters):
        SasakianTriple(3, 3, 1)


def _differences(pp: ParamPair):
    _, s2_k, s3_k = sym_polys(pp.k)
    _, s2_l, s3_l = sym_polys(pp.l)
    return s2_k - s2_l, s3_k - s3_l


@pytest.mark.parametrize("k, l", [((79, 49, -50), (46, 32, 0)), ((21, 21, -2), (20, 20, 0))])
def test_sigma_differences_under_moves(k, l):
    rng = random.Random(20240611)
    perms = list(permutations(range(3)))
    for _ in range(500):
        pp = ParamPair(k, l)
        r, t = _differences(pp)
        sign2 = sign3 = 1
        for _ in range(5):
            move = rng.randrange(4)
            if move == 0:
                pp = pp.swapped()
                sign2, sign3 = -sign2, -sign3
            elif move == 1:
                pp = pp.negated()
                sign3 = -sign3
            elif move == 2:
                pp = pp.shifted(rng.randint(-50, 50))
            else:
                pp = pp.permuted(rng.choice(perms), rng.choice(perms))
            r_now, t_now = _differences(pp)
            assert r_now == sign2 * r
            assert (t_now - sign3 * t) % abs(r) == 0
