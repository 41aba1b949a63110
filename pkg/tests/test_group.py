"""Normal forms, free-product arithmetic, balls, and serialization."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from periproj import (
    BallBudgetError,
    CyclicFactor,
    GroupSpec,
    InfiniteCyclicFactor,
    InvalidFactorError,
    NormalFormError,
    ball,
    element_str,
    inv,
    mul,
    normalize,
    parse_element,
)
from periproj.group import IDENTITY, mul_syllable


def raw_syllables(spec):
    """Hypothesis strategy for arbitrary (possibly unreduced) syllable lists."""
    choices = []
    for i, f in enumerate(spec.factors):
        if f.kind == "cyclic":
            choices.append(st.tuples(st.just(i), st.integers(0, f.n - 1)))
        elif f.kind == "z":
            choices.append(st.tuples(st.just(i), st.integers(-4, 4)))
        else:
            choices.append(
                st.tuples(st.just(i), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
            )
    return st.lists(st.one_of(choices), max_size=10)


def elements(spec):
    return raw_syllables(spec).map(lambda raws: normalize(spec, raws))


def test_normalize_square_cancels(c2c3):
    assert normalize(c2c3, [(0, 1), (0, 1)]) == IDENTITY


def test_normalize_full_telescoping(c2c3):
    assert normalize(c2c3, [(0, 1), (1, 1), (1, 2), (0, 1)]) == IDENTITY


def test_normalize_already_normal(c2c3):
    word = [(1, 1), (0, 1), (1, 2)]
    assert normalize(c2c3, word) == tuple(word)


def test_normalize_bad_index(c2c3):
    with pytest.raises(NormalFormError):
        normalize(c2c3, [(5, 1)])


def test_mul_cancels_through(c2c3):
    x = parse_element(c2c3, "a b")
    y = parse_element(c2c3, "b^2 a")
    assert mul(c2c3, x, y) == IDENTITY


def test_inv_reverses(zxz2):
    x = parse_element(zxz2, "t u^2")
    assert element_str(zxz2, inv(zxz2, x)) == "u^-2 t^-1"


def test_mul_merges_middle(zxz2):
    x = parse_element(zxz2, "t u")
    y = parse_element(zxz2, "u t")
    assert element_str(zxz2, mul(zxz2, x, y)) == "t^1 u^2 t^1"


@given(data=st.data())
@settings(max_examples=60, deadline=None)
def test_normalize_idempotent_hypothesis(zxz2, data):
    raws = data.draw(raw_syllables(zxz2))
    once = normalize(zxz2, raws)
    assert normalize(zxz2, once) == once


def test_mul_associative_exhaustive_radius3(c2c3):
    elems = list(ball(c2c3, 3))
    for x, y, z in itertools.product(elems, repeat=3):
        assert mul(c2c3, mul(c2c3, x, y), z) == mul(c2c3, x, mul(c2c3, y, z))


@given(data=st.data())
@settings(max_examples=60, deadline=None)
def test_mul_associative_hypothesis(zxz2, data):
    x = data.draw(elements(zxz2))
    y = data.draw(elements(zxz2))
    z = data.draw(elements(zxz2))
    assert mul(zxz2, mul(zxz2, x, y), z) == mul(zxz2, x, mul(zxz2, y, z))


@given(data=st.data())
@settings(max_examples=60, deadline=None)
def test_inverse_laws_hypothesis(zxz2, data):
    x = data.draw(elements(zxz2))
    y = data.draw(elements(zxz2))
    assert mul(zxz2, x, inv(zxz2, x)) == IDENTITY
    assert inv(zxz2, mul(zxz2, x, y)) == mul(zxz2, inv(zxz2, y), inv(zxz2, x))


def test_mul_syllable_matches_mul(zxz2):
    x = parse_element(zxz2, "t u^2")
    assert mul_syllable(zxz2, x, 1, (-2, 0)) == mul(zxz2, x, ((1, (-2, 0)),))
    assert mul_syllable(zxz2, x, 0, 1) == mul(zxz2, x, ((0, 1),))


def test_ball_c2c3_radius1(c2c3):
    got = ball(c2c3, 1)
    expected = {
        IDENTITY: 0,
        parse_element(c2c3, "a"): 1,
        parse_element(c2c3, "b"): 1,
        parse_element(c2c3, "b^2"): 1,
    }
    assert got == expected


def test_ball_zxz2_radius1(zxz2):
    got = ball(zxz2, 1)
    assert len(got) == 7
    for token in ("t", "t^-1", "u", "u^-1", "v", "v^-1"):
        assert got[parse_element(zxz2, token)] == 1


def test_ball_extended_contains_extra(c2c3_ext):
    got = ball(c2c3_ext, 1)
    assert got[parse_element(c2c3_ext, "a b")] == 1


def test_ball_monotone_and_parent_property(zxz2):
    sizes = []
    for r in range(4):
        table = ball(zxz2, r)
        sizes.append(len(table))
        moves = [g for _, g in zxz2.moves()]
        for x, d in table.items():
            if d == 0:
                continue
            assert any(table.get(mul(zxz2, x, g)) == d - 1 for g in moves)
    assert sizes == sorted(sizes)


def test_ball_budget(zxz2):
    with pytest.raises(BallBudgetError):
        ball(zxz2, 6, cap=100)


def test_identity_serialization(zxz2):
    assert element_str(zxz2, IDENTITY) == "e"
    assert parse_element(zxz2, "e") == IDENTITY
    assert parse_element(zxz2, "") == IDENTITY


@given(data=st.data())
@settings(max_examples=80, deadline=None)
def test_serialization_roundtrip(zxz2, data):
    x = data.draw(elements(zxz2))
    assert parse_element(zxz2, element_str(zxz2, x)) == x


def test_parse_merges_rank2_tokens(zxz2):
    assert parse_element(zxz2, "u^1 v^2") == ((1, (1, 2)),)


def test_parse_rejects_unknown_label(zxz2):
    with pytest.raises(NormalFormError):
        parse_element(zxz2, "w^2")


def test_spec_needs_two_factors():
    with pytest.raises(InvalidFactorError):
        GroupSpec([InfiniteCyclicFactor("t")])


def test_spec_rejects_duplicate_labels():
    with pytest.raises(InvalidFactorError):
        GroupSpec([CyclicFactor(2, "a"), CyclicFactor(3, "a")])


def test_spec_rejects_trivial_extra(c2c3):
    trivial = parse_element(c2c3, "a a")
    with pytest.raises(InvalidFactorError):
        GroupSpec(list(c2c3.factors), extra_generators=[("x", trivial)])


def test_elements_are_hashable_set_members(zxz2):
    a = parse_element(zxz2, "t u^2")
    b = parse_element(zxz2, "t u^1 u^1")
    assert {a} == {b}


def test_table_element_serialization():
    import itertools as _it

    from periproj import TableFactor

    perms = list(_it.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(q[p[i]] for i in range(3))] for q in perms] for p in perms
    ]
    s3 = TableFactor(table, {"s": index[(1, 0, 2)], "r": index[(1, 2, 0)]})
    spec = GroupSpec([s3, CyclicFactor(2, "c")])
    x = parse_element(spec, "s[4] c s[1]")
    assert element_str(spec, x) == "s[4] c^1 s[1]"
    assert parse_element(spec, element_str(spec, x)) == x
    # generator tokens with powers fold through the table
    assert parse_element(spec, "r^2") == ((0, table[index[(1, 2, 0)]][index[(1, 2, 0)]]),)
