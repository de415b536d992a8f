from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from infocluster.models import SetString, Universe, set_complexity
from infocluster.triple import (
    clone_cluster_check,
    clones,
    epsilon,
    extract_triple_core,
    nonshannon_slack,
    nonshannon_sweep,
    profile,
    triple_information,
    triple_report,
)


def S(*positions, size=5):
    return SetString.of(positions, size)


def venn(g, a, b, c, size=8):
    return S(*g, *a, size=size), S(*g, *b, size=size), S(*g, *c, size=size)


def test_profile_examples():
    x = S(0, 2, 3)
    assert profile(x, x, x).as_tuple() == (3,) * 7
    a, b, c = S(0), S(1, 2), S(3, 4)
    p = profile(a, b, c)
    assert (p.xy, p.xz, p.yz, p.xyz) == (3, 3, 4, 5)
    assert profile(S(0, 1), S(1, 2), S(2, 0)).as_tuple() == (2, 2, 2, 3, 3, 3, 3)


def test_clones_examples():
    x, y, z = S(0, 1), S(1, 2), S(2, 3)
    exact = clones(x, y, z, 0)
    assert z in exact
    assert all(profile(x, y, c).as_tuple() == profile(x, y, z).as_tuple() for c in exact)
    assert clones(x, y, z, 5) == frozenset(Universe(5).all_strings())
    with pytest.raises(ValueError):
        clones(x, y, z, -1)


def test_clones_double_scan():
    rng = random.Random(12)
    for _ in range(10):
        x, y, z = (SetString(rng.randrange(32), 5) for _ in range(3))
        for delta in range(3):
            ref = profile(x, y, z).as_tuple()
            rescan = {
                c for c in Universe(5).all_strings()
                if max(abs(p - q) for p, q in zip(profile(x, y, c).as_tuple(), ref)) <= delta
            }
            assert clones(x, y, z, delta) == rescan


def test_triple_report_venn_instance():
    x, y, z = venn([0, 1, 2], [3], [4, 5], [6])
    rep = triple_report(x, y, z)
    assert rep.eps == 0 and rep.triple_info == 3


def test_triple_report_empty_x():
    e, y, z = S(), S(0, 1), S(1, 2)
    rep = triple_report(e, y, z)
    assert rep.triple_info == 0 and rep.eps == 1
    # only the conditional term with both y and z can be nonzero
    assert epsilon(e, y, S(3)) == 0


def test_triple_information_is_the_center():
    for bits in product(range(16), repeat=3):
        x, y, z = (SetString(b, 4) for b in bits)
        assert triple_information(x, y, z) == len(x & y & z)


def test_extract_core_examples():
    x, y, z = venn([0, 1], [2], [3], [4])
    rep = extract_triple_core(x, y, z)
    assert rep.w == S(0, 1, size=8) and rep.w_complexity == 2 and rep.residuals == (0, 0, 0)

    rep = extract_triple_core(S(0), S(1), S(2))
    assert rep.w == S() and rep.w_complexity == 0
    payload = rep.to_json()
    assert set(payload) == {"eps", "triple_info", "w", "residuals", "profile"}


def test_nonshannon_examples():
    e = S()
    assert nonshannon_slack(e, e, e, e, e) == 0
    rng = random.Random(5)
    for _ in range(200):
        x, y, z = (SetString(rng.randrange(32), 5) for _ in range(3))
        assert nonshannon_slack(x, y, z, x, x) >= 0


def test_nonshannon_sweep_matches_scalar():
    best, count, arg = nonshannon_sweep(2)
    assert count == 4**5
    scalar = [
        nonshannon_slack(*(SetString(b, 2) for b in bits))
        for bits in product(range(4), repeat=5)
    ]
    assert best == min(scalar) == 0
    assert nonshannon_slack(*(SetString(b, 2) for b in arg)) == best


def test_nonshannon_sweep_universe_three():
    best, count, arg = nonshannon_sweep(3)
    assert best >= 0 and count == 8**5


sets5 = st.integers(0, 31).map(lambda b: SetString(b, 5))


@given(sets5, sets5, sets5, sets5, sets5)
def test_nonshannon_slack_property(x, y, z, z1, z2):
    assert nonshannon_slack(x, y, z, z1, z2) >= 0


def test_clone_cluster_clean_venn():
    x, y, z = venn([0], [1], [2], [3, 4], size=6)
    res = clone_cluster_check(x, y, z, 0)
    assert res.passed and res.diameter <= set_complexity(z, x | y)


def test_clone_cluster_singleton():
    x = S(0, 1, 2, 3, 4)
    res = clone_cluster_check(x, x, x, 0)
    assert res.members == {x} and res.diameter == 0 and res.logsize == 0


def test_clone_cluster_random_sweep():
    rng = random.Random(17)
    for _ in range(300):
        x, y, z = (SetString(rng.randrange(32), 5) for _ in range(3))
        assert clone_cluster_check(x, y, z, 1).passed


def test_clone_cluster_needs_more_than_two_delta():
    """The tighter C(z|x,y) + 2*delta + 3*eps bound already fails here."""
    x, y, z = S(0, 1, 2, 4), S(1, 2), S(1, 2)
    res = clone_cluster_check(x, y, z, 1)
    eps = epsilon(x, y, z)
    cond = set_complexity(z, x | y)
    assert (eps, cond, res.diameter) == (0, 0, 3)
    assert res.diameter > cond + 2 * 1 + 3 * eps
    assert res.passed


def test_clone_scan_refuses_large_universes():
    big = SetString(1, 24)
    with pytest.raises(ValueError):
        clones(big, big, big, 0)
