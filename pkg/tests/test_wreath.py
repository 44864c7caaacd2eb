import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import dyadic_maps, iv, q
from plgroups import (
    IDENTITY,
    DegenerateInputError,
    Direction,
    GroupSpec,
    Interval,
    PLMap,
    PreconditionError,
    commutator,
    conjugate,
    double_commutator,
    group_orbitals,
    power,
)
from plgroups.builders import depth_lower_bound, derive_tower
from plgroups.plmap import orbital_intervals, orbitals_of_map
from plgroups.towers import fits_fundamental_domain, is_exemplary
from plgroups.wreath import (
    build_family,
    bump_on,
    dc_properties_check,
    efficiency_exponents,
    fundamental_domain_of_bump,
    mutual_efficiency,
    nesting_violations,
    obstruction_demo,
    rescale_into,
    theta_search,
    wreath_with_Z,
)


def nodes(f):
    return [(x, y) for x, y in f.nodes]


def pts(*pairs):
    return [(q(x), q(y)) for x, y in pairs]


# -- bumps and rescaling -----------------------------------------------------------------


def test_bump_on_examples():
    assert nodes(bump_on(Interval(0, 1))) == pts((0, 0), ("1/4", "1/2"), (1, 1))
    f = bump_on(iv("1/4", "1/2"))
    assert nodes(f) == pts((0, 0), ("1/4", "1/4"), ("5/16", "3/8"), ("1/2", "1/2"), (1, 1))
    [o] = orbitals_of_map(f)
    assert o.interval == iv("1/4", "1/2") and o.direction is Direction.RIGHT


def test_rescale_examples():
    assert rescale_into(IDENTITY, iv("1/4", "1/2")) == IDENTITY
    assert nodes(rescale_into(bump_on(Interval(0, 1)), iv(0, "1/2"))) == pts(
        (0, 0), ("1/8", "1/4"), ("1/2", "1/2"), (1, 1))


@given(dyadic_maps(), dyadic_maps())
def test_rescale_is_a_homomorphism(f, g):
    A = iv("3/16", "5/8")
    assert rescale_into(f * g, A) == rescale_into(f, A) * rescale_into(g, A)


# -- wreath realizations ----------------------------------------------------------------


def test_wreath_of_trivial_group():
    W = wreath_with_Z(None)
    assert W.base_generators == []
    G = W.as_group()
    assert len(G) == 1 and G.maps[0] == bump_on(Interval(0, 1))


def test_wreath_copies_commute_and_are_permuted():
    b = bump_on(Interval(0, 1))
    W = wreath_with_Z(GroupSpec([("b", b)]), copies=3)
    t = W.top_generator[1]
    [(_, c0)], [(_, c1)], [(_, c2)] = W.copies
    assert c0 * c1 == c1 * c0 and c0 * c2 == c2 * c0
    assert conjugate(c0, t) == c1 and conjugate(c1, t) == c2
    dom = fundamental_domain_of_bump(W.ambient)
    for A in orbital_intervals(c0):
        assert dom.contains_interval(A)
    # the open support fills [x0, x0 t) exactly; shrinking it makes the closed test pass
    assert t(dom.left) == dom.right
    lo, hi = dom.left + dom.length / 8, dom.right - dom.length / 8
    assert fits_fundamental_domain(t, W.ambient, (lo, hi))


def test_wreath_top_generator_orbital():
    W = wreath_with_Z(GroupSpec([("b", bump_on(Interval(0, 1)))]), ambient=iv("1/4", "3/4"))
    assert orbital_intervals(W.top_generator[1]) == [iv("1/4", "3/4")]
    assert group_orbitals(W.as_group()) == [iv("1/4", "3/4")]


def test_wreath_needs_a_copy():
    with pytest.raises(PreconditionError):
        wreath_with_Z(None, copies=0)


def test_w2_depth():
    W = wreath_with_Z(GroupSpec([("b", bump_on(Interval(0, 1)))]))
    n, _ = depth_lower_bound(W.as_group(), 4)
    assert n == 2


# -- families ------------------------------------------------------------------


def test_family_examples():
    G = build_family("W", 1)
    assert len(G) == 1 and orbital_intervals(G.maps[0]) == [Interval(0, 1)]
    G = build_family("W", 3)
    assert list(G.names) == ["t1", "t2", "t3"]
    ivs = [orbital_intervals(f) for f in G.maps]
    assert all(len(o) == 1 for o in ivs)
    assert ivs[2][0].properly_contains(ivs[1][0]) and ivs[1][0].properly_contains(ivs[0][0])
    n, cert = depth_lower_bound(G, 3)
    assert n == 3 and is_exemplary(cert.tower)
    G = build_family("G", 1, 2)
    assert group_orbitals(G) == [iv(0, "1/2"), iv("1/2", 1)]
    assert depth_lower_bound(G, 3)[0] == 1


def test_family_g_copies():
    G = build_family("G", 2, 3)
    # three copies of G_1 wr Z, each G_1 itself three bumps
    assert len(G) == 12 and "t1_0_0" in G.names and "t2_2" in G.names
    assert len(group_orbitals(G)) == 3
    assert depth_lower_bound(G, 3)[0] == 2


def test_family_errors():
    with pytest.raises(PreconditionError):
        build_family("X", 2)
    with pytest.raises(PreconditionError):
        build_family("W", 0)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_depth_matches_construction(k):
    G = build_family("W", k)
    n, cert = depth_lower_bound(G, 2)
    assert n == k
    T = cert.tower
    for _ in range(k - 1):
        T = derive_tower(T).tower
    assert T.height == 1


# -- mutual efficiency ------------------------------------------------------------


def test_mutual_efficiency_examples():
    h = bump_on(Interval(0, 1))
    k = bump_on(iv("1/16", "1/8"))
    assert mutual_efficiency(power(h, 2), k)
    assert not mutual_efficiency(h, k)
    assert mutual_efficiency(bump_on(iv(0, "1/4")), bump_on(iv("1/2", 1)))


def test_efficiency_exponent_examples():
    h = bump_on(Interval(0, 1))
    assert efficiency_exponents(power(h, 2), bump_on(iv("1/16", "1/8"))) == (1, 1)
    assert efficiency_exponents(h, bump_on(iv("1/16", "1/8"))) == (2, 1)
    assert efficiency_exponents(bump_on(iv(0, "1/4")), bump_on(iv("1/2", 1))) == (1, 1)


def test_efficiency_rejects_crossing_orbitals():
    with pytest.raises(PreconditionError):
        mutual_efficiency(bump_on(iv(0, "3/4")), bump_on(iv("1/2", 1)))
    assert nesting_violations(bump_on(iv(0, "3/4")), bump_on(iv("1/2", 1)))


def nested_pair(rng):
    """Random nested placement: k on a big interval, h a few bumps inside it."""
    a = q(f"{rng.randint(0, 3)}/16")
    b = q(f"{rng.randint(12, 16)}/16")
    k = bump_on(Interval(a, b))
    if rng.random() < 0.5:
        k = k.inverse()
    cuts = sorted(rng.sample(range(1, 64), 2 * rng.randint(1, 2)))
    h = IDENTITY
    for lo, hi in zip(cuts[::2], cuts[1::2]):
        f = bump_on(Interval(a + (b - a) * q(f"{lo}/64"), a + (b - a) * q(f"{hi}/64")))
        h = h * (f if rng.random() < 0.5 else f.inverse())
    return h, k


def test_efficiency_monotone():
    rng = random.Random(4)
    for _ in range(30):
        h, k = nested_pair(rng)
        j, e = efficiency_exponents(h, k)
        assert mutual_efficiency(power(h, j), power(k, e))
        assert mutual_efficiency(power(h, j + 1), power(k, e))
        assert mutual_efficiency(power(h, j), power(k, e + 1))
        if e > 1:
            assert not mutual_efficiency(power(h, j), power(k, e - 1))


# -- double commutators --------------------------------------------------------------


def test_dc_examples():
    h, k = bump_on(iv("1/16", "7/64")), bump_on(Interval(0, 1))
    rep = dc_properties_check(h, k)
    assert iv("1/16", "7/64") in orbital_intervals(rep.f)
    assert rep.property1 and rep.ok
    rep = dc_properties_check(IDENTITY, k)
    assert rep.f == IDENTITY and rep.ok


def test_dc_corpus():
    rng = random.Random(8)
    for _ in range(100):
        h, k = nested_pair(rng)
        j, e = efficiency_exponents(h, k)
        h, k = power(h, j), power(k, e)
        rep = dc_properties_check(h, k)
        assert rep.f == double_commutator(h, k)
        assert rep.property1 and rep.property2


def test_dc_needs_efficiency():
    with pytest.raises(PreconditionError):
        dc_properties_check(bump_on(iv("1/16", "1/8")), bump_on(Interval(0, 1)))


# -- obstruction -------------------------------------------------------------------


def test_obstruction_disjoint_alpha_beta():
    alpha, beta = bump_on(iv(0, "1/4")), bump_on(iv("1/2", 1))
    gamma = bump_on(iv("5/8", "11/16"))
    res = obstruction_demo(alpha, beta, gamma)
    assert [s["step"] for s in res.log] == ["start", "efficiency against beta", "check"]
    assert not any(A.meets(B) for A in orbital_intervals(res.gamma) for B in orbital_intervals(alpha))


def test_obstruction_degenerate():
    a = bump_on(Interval(0, 1))
    assert theta_search(a, a, Interval(0, 1))[:2] == (1, -1)
    with pytest.raises(DegenerateInputError):
        obstruction_demo(a, a, bump_on(iv("1/16", "7/64")))


def test_obstruction_theta_two_minus_one():
    a = bump_on(iv(0, "1/2"))
    beta = bump_on(iv("1/2", 1)) * power(a, 2)
    gamma = bump_on(iv("5/8", "3/4"))
    res = obstruction_demo(a, beta, gamma)
    theta = [s for s in res.log if s["step"] == "theta"]
    assert [(s["m"], s["n"]) for s in theta] == [(2, -1)]
    g = res.gamma
    assert not g.is_identity()
    assert commutator(g, a) == IDENTITY
    assert not any(A.meets(B) for A in orbital_intervals(g) for B in orbital_intervals(a))


def test_obstruction_preconditions():
    a = bump_on(iv(0, "3/4"))
    b = bump_on(iv("1/2", 1))
    with pytest.raises(PreconditionError):
        obstruction_demo(a, b, bump_on(iv("1/8", "1/4")))
    with pytest.raises(PreconditionError):
        obstruction_demo(a, a, IDENTITY)


def test_theta_respects_bound():
    a = bump_on(Interval(0, 1))
    b = PLMap([(0, 0), ("1/4", "3/4"), (1, 1)])
    assert theta_search(a, b, Interval(0, 1), bound=4) is None


@given(st.integers(1, 4), st.integers(1, 4))
def test_powers_of_a_common_root(m, n):
    r = bump_on(Interval(0, 1))
    a, b = power(r, n), power(r, m)
    hit = theta_search(a, b, Interval(0, 1))
    assert hit is not None
    mm, nn, theta = hit
    assert power(a, mm) * power(b, nn) == IDENTITY
