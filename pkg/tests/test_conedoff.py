"""Coned-off distances, geodesics, lifts, enumeration, and penetration checks."""

import random

import pytest

from periproj import (
    ConedOffBackend,
    GroupSpec,
    InfiniteCyclicFactor,
    FreeAbelianRank2Factor,
    OutOfRangeError,
    UnsupportedMetricError,
    ball,
    check_bcp,
    dist_exact,
    dist_hat,
    geodesic_hat,
    lift,
    parse_element,
    quasigeodesic_constants,
    random_element,
)
from periproj.conedoff import CAY, CONE, hat_edge_str, path_crossings
from periproj.group import IDENTITY
from periproj.peripheral import contains


def test_dist_hat_example(zxz2, zxz2_hat5):
    y = parse_element(zxz2, "t u^3 v^-2")
    assert dist_hat(zxz2, IDENTITY, y) == 2


def test_dist_hat_self(zxz2):
    x = parse_element(zxz2, "t u")
    assert dist_hat(zxz2, x, x) == 0


def test_dist_hat_all_peripheral(c2c3):
    y = parse_element(c2c3, "a b a b")
    assert dist_hat(c2c3, IDENTITY, y) == 4


def test_hat_formula_equals_bfs_exhaustive(c2c3, zxz2, c2c3_hat5, zxz2_hat5):
    for spec, hb in ((c2c3, c2c3_hat5), (zxz2, zxz2_hat5)):
        for w in hb.gtable:
            assert hb.window_distance(IDENTITY, w) == dist_hat(spec, IDENTITY, w)


def test_hat_is_lipschitz(zxz2):
    rng = random.Random(12)
    for _ in range(60):
        x = random_element(zxz2, rng, 5, 5)
        y = random_element(zxz2, rng, 5, 5)
        assert dist_hat(zxz2, x, y) <= dist_exact(zxz2, x, y)


def test_geodesic_hat_example(zxz2):
    y = parse_element(zxz2, "t u^5")
    path = geodesic_hat(zxz2, IDENTITY, y)
    assert len(path) == 2
    assert path.edges[0] == (CAY, "t")
    assert path.edges[1][0] == CONE
    assert path.edges[1][1].rep == parse_element(zxz2, "t")
    assert hat_edge_str(zxz2, path.edges[1]) == "cone:H1@t^1"


def test_geodesic_hat_trivial(zxz2):
    x = parse_element(zxz2, "t")
    path = geodesic_hat(zxz2, x, x)
    assert len(path) == 0 and path.vertices == [x]


def test_geodesic_hat_tie_breaks_to_cayley(zxz2):
    path = geodesic_hat(zxz2, IDENTITY, parse_element(zxz2, "u"))
    assert path.edges == [(CAY, "u")]


def test_cone_edges_join_coset_members(zxz2):
    rng = random.Random(3)
    for _ in range(30):
        x = random_element(zxz2, rng, 4, 5)
        y = random_element(zxz2, rng, 4, 5)
        path = geodesic_hat(zxz2, x, y)
        assert len(path) == dist_hat(zxz2, x, y)
        for (kind, payload), u, v in zip(path.edges, path.vertices, path.vertices[1:]):
            if kind == CONE:
                assert u != v
                assert contains(zxz2, payload, u) and contains(zxz2, payload, v)


def test_lift_example(zxz2, zxz2_exact):
    y = parse_element(zxz2, "t u^5")
    lifted = lift(zxz2, geodesic_hat(zxz2, IDENTITY, y))
    assert len(lifted) == 6 == dist_exact(zxz2, IDENTITY, y)
    assert lifted.start == IDENTITY and lifted.end == y


def test_lift_all_cayley_identity(zxz2):
    path = geodesic_hat(zxz2, IDENTITY, parse_element(zxz2, "t^3"))
    assert all(kind == CAY for kind, _ in path.edges)
    lifted = lift(zxz2, path)
    assert lifted.vertices == path.vertices


def test_lifts_are_geodesics_exact(zxz2, zxz2_exact):
    rng = random.Random(8)
    for _ in range(25):
        x = random_element(zxz2, rng, 4, 5)
        y = random_element(zxz2, rng, 4, 5)
        lifted = lift(zxz2, geodesic_hat(zxz2, x, y))
        assert quasigeodesic_constants(lifted, zxz2_exact) == (1, 0)


def test_enumerate_geodesics_deterministic(zxz2, zxz2_hat5):
    w = parse_element(zxz2, "u")
    first, _ = zxz2_hat5.enumerate_geodesics(IDENTITY, w, 50)
    second, _ = zxz2_hat5.enumerate_geodesics(IDENTITY, w, 50)
    assert [p.edges for p in first] == [p.edges for p in second]
    # parallel Cayley and cone edges both count, Cayley first
    assert len(first) == 2
    assert first[0].edges[0][0] == CAY and first[1].edges[0][0] == CONE


def test_enumerate_geodesics_translated(zxz2, zxz2_hat5):
    x = parse_element(zxz2, "t")
    y = parse_element(zxz2, "t u^3")
    paths, _ = zxz2_hat5.enumerate_geodesics(x, y, 10)
    assert paths
    for p in paths:
        assert p.start == x and p.end == y


def test_enumeration_needs_window(zxz2):
    backend = ConedOffBackend(zxz2)  # exact formula only
    with pytest.raises(UnsupportedMetricError):
        backend.enumerate_geodesics(IDENTITY, parse_element(zxz2, "u"), 10)


def test_window_out_of_range(zxz2, zxz2_hat5):
    far = parse_element(zxz2, "t u^9")
    with pytest.raises(OutOfRangeError):
        zxz2_hat5.window_distance(IDENTITY, far)


def test_extended_infinite_peripheral_rejected():
    z = InfiniteCyclicFactor("t")
    z2 = FreeAbelianRank2Factor("u", "v", peripheral=True)
    base = GroupSpec([z, z2])
    extra = parse_element(base, "t u")
    spec = GroupSpec([z, z2], extra_generators=[("w", extra)])
    with pytest.raises(UnsupportedMetricError):
        ConedOffBackend(spec, radius=4)


def test_extended_certified_distance(c2c3_ext, ext_hat8):
    assert ext_hat8.distance(IDENTITY, parse_element(c2c3_ext, "a b")) == 1


def test_path_crossings_records_edges_in_coset(zxz2):
    y = parse_element(zxz2, "t u^5 t")
    path = geodesic_hat(zxz2, IDENTITY, y)
    crossings = path_crossings(zxz2, path)
    t = parse_element(zxz2, "t")
    P = [c for c in crossings if c.rep == t]
    assert len(P) == 1
    entry, exit_ = crossings[P[0]]
    assert entry == t and exit_ == parse_element(zxz2, "t u^5")


def test_bcp_trivial_pair(zxz2, zxz2_hat5, zxz2_exact):
    report = check_bcp(zxz2, zxz2_hat5, zxz2_exact, IDENTITY, IDENTITY, 100)
    assert report.samples == 0
    assert report.max_clause1 == 0 and report.max_clause2 == 0


def test_bcp_exact_small_sweep(zxz2, zxz2_hat5, zxz2_exact):
    for w in ball(zxz2, 4):
        report = check_bcp(zxz2, zxz2_hat5, zxz2_exact, IDENTITY, w, 1000)
        assert report.max_clause1 <= 1 and report.max_clause2 <= 1
        assert not report.truncated


def test_bcp_extended_finite(c2c3_ext, ext_hat8, ext_bfs8):
    worst = 0
    for w in ball(c2c3_ext, 3):
        report = check_bcp(c2c3_ext, ext_hat8, ext_bfs8, IDENTITY, w, 2000)
        worst = max(worst, report.max_clause1, report.max_clause2)
    assert worst <= 2  # finite, small; measured value 1


def test_bcp_cap_flags_truncation(zxz2, zxz2_hat5, zxz2_exact):
    w = parse_element(zxz2, "u v")
    report = check_bcp(zxz2, zxz2_hat5, zxz2_exact, IDENTITY, w, 1)
    assert report.truncated


def test_large_gap_forces_coset_edge(zxz2, zxz2_hat5, zxz2_exact):
    # whenever the projection gap on a coset is >= 1 (exact regime), every
    # enumerated coned-off geodesic between the pair contains an edge in it
    from periproj import gate_projection, separating_cosets

    for w in ball(zxz2, 4):
        geos, _ = zxz2_hat5.enumerate_geodesics(IDENTITY, w, 500)
        for P in separating_cosets(zxz2, IDENTITY, w):
            gap = zxz2_exact.distance(
                gate_projection(zxz2, P, IDENTITY).point,
                gate_projection(zxz2, P, w).point,
            )
            assert gap >= 1
            for g in geos:
                assert P in path_crossings(zxz2, g)
