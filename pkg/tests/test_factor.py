"""Factor-level arithmetic, word lengths, geodesics, and table validation."""

import itertools

import pytest

from periproj import (
    CyclicFactor,
    FreeAbelianRank2Factor,
    InfiniteCyclicFactor,
    InvalidFactorError,
    TableFactor,
)


def s3_table():
    """Multiplication table of Sym(3) acting on (0,1,2); composition left-to-right."""
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):  # apply p, then q
        return tuple(q[p[i]] for i in range(3))

    return [[index[compose(p, q)] for q in perms] for p in perms], perms, index


def test_cyclic_mul_full_cancellation():
    c3 = CyclicFactor(3, "b")
    assert c3.mul(1, 2) == c3.identity


def test_infinite_cyclic_mul():
    z = InfiniteCyclicFactor("t")
    assert z.mul(3, -1) == 2


def test_rank2_mul_coordinatewise():
    z2 = FreeAbelianRank2Factor("u", "v")
    assert z2.mul((1, 2), (-1, 0)) == (0, 2)


def test_lengths():
    c3 = CyclicFactor(3, "b")
    z2 = FreeAbelianRank2Factor("u", "v")
    assert c3.length(2) == 1  # b^2 = b^-1
    assert z2.length((3, -2)) == 5
    assert c3.length(c3.identity) == 0


def test_table_s3_transposition_length():
    table, perms, index = s3_table()
    transposition = index[(1, 0, 2)]
    three_cycle = index[(1, 2, 0)]
    f = TableFactor(table, {"s": transposition, "r": three_cycle})
    assert f.length(transposition) == 1
    # oracle: brute-force shortest product of generator moves reaching each element
    moves = [g for _, g in f.moves()]
    best = {f.identity: 0}
    frontier = [f.identity]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for x in frontier:
            for g in moves:
                y = f.mul(x, g)
                if y not in best:
                    best[y] = depth
                    nxt.append(y)
        frontier = nxt
    assert len(best) == 6
    for i in range(6):
        assert f.length(i) == best[i]


def test_geodesic_infinite_cyclic():
    z = InfiniteCyclicFactor("t")
    assert z.geodesic(0, 2) == [0, 1, 2]


def test_geodesic_cyclic_tie_break():
    c4 = CyclicFactor(4, "g")
    # both routes to g^2 have length 2; the tie goes to the positive generator
    assert c4.geodesic(0, 2) == [0, 1, 2]


def test_geodesic_rank2_u_step_first():
    z2 = FreeAbelianRank2Factor("u", "v")
    path = z2.geodesic((0, 0), (1, 1))
    assert len(path) == 3 and path[1] == (1, 0)
    # oracle: enumerate every 2-step move sequence and check ours is among them
    moves = [g for _, g in z2.moves()]
    two_step = {
        (z2.mul((0, 0), g1), z2.mul(z2.mul((0, 0), g1), g2))
        for g1 in moves
        for g2 in moves
        if z2.mul(z2.mul((0, 0), g1), g2) == (1, 1)
    }
    assert (path[1], path[2]) in two_step


@pytest.mark.parametrize(
    "factor",
    [
        CyclicFactor(5, "c"),
        InfiniteCyclicFactor("t"),
        FreeAbelianRank2Factor("u", "v"),
        TableFactor(
            s3_table()[0],
            {"s": s3_table()[2][(1, 0, 2)], "r": s3_table()[2][(1, 2, 0)]},
        ),
    ],
    ids=["cyclic5", "z", "z2", "s3"],
)
def test_length_symmetry_radius6(factor):
    pts = []
    for level in range(7):
        pts.extend(factor.elements_of_length(level))
        if factor.diameter() is not None and level >= factor.diameter():
            break
    for x in pts:
        for y in pts:
            dxy = factor.length(factor.mul(factor.inv(x), y))
            dyx = factor.length(factor.mul(factor.inv(y), x))
            assert dxy == dyx


@pytest.mark.parametrize(
    "factor",
    [CyclicFactor(6, "c"), FreeAbelianRank2Factor("u", "v")],
    ids=["cyclic6", "z2"],
)
def test_geodesic_is_geodesic(factor):
    pts = []
    for level in range(4):
        pts.extend(factor.elements_of_length(level))
    move_coords = {g for _, g in factor.moves()}
    for x in pts[:8]:
        for y in pts:
            path = factor.geodesic(x, y)
            assert path[0] == x and path[-1] == y
            assert len(path) - 1 == factor.length(factor.mul(factor.inv(x), y))
            for a, b in zip(path, path[1:]):
                assert factor.mul(factor.inv(a), b) in move_coords


def test_table_rejects_non_associative():
    # latin square that is not a group (no associativity)
    bad = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(InvalidFactorError):
        TableFactor(bad, {"g": 1})


def test_table_rejects_no_identity():
    with pytest.raises(InvalidFactorError):
        TableFactor([[0, 0], [0, 0]], {"g": 1})


def test_table_rejects_non_generating():
    # C4 table with only the square as a generator
    c4 = [[(i + j) % 4 for j in range(4)] for i in range(4)]
    with pytest.raises(InvalidFactorError):
        TableFactor(c4, {"g": 2})


def test_cyclic_needs_order_two():
    with pytest.raises(InvalidFactorError):
        CyclicFactor(1, "g")


def test_bad_coordinates_rejected():
    c3 = CyclicFactor(3, "b")
    with pytest.raises(InvalidFactorError):
        c3.check_coord(3)
    z2 = FreeAbelianRank2Factor("u", "v")
    with pytest.raises(InvalidFactorError):
        z2.check_coord((1,))


def test_bad_labels_rejected():
    with pytest.raises(InvalidFactorError):
        InfiniteCyclicFactor("2t")
    with pytest.raises(InvalidFactorError):
        FreeAbelianRank2Factor("u", "u")
