import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from conftest import A_NODES, X1_NODES, bump, dyadic_maps, dyadic_points, iv, q
from plgroups import (
    IDENTITY,
    Direction,
    DomainError,
    Interval,
    InvalidMapError,
    NotAnOrbitalError,
    PLMap,
    PreconditionError,
    commutator,
    compare_left_order,
    compose,
    conjugate,
    double_commutator,
    edge_slopes,
    evaluate,
    inverse,
    orbitals_of_map,
    power,
    project,
)
from plgroups.plmap import Order, affine_components, orbital_intervals


def nodes(f):
    return [(x, y) for x, y in f.nodes]


def as_oracle(f):
    return oracle.nodes_of(f.nodes)


# -- construction ----------------------------------------------------------------


def test_identity_nodes():
    assert nodes(IDENTITY) == [(0, 0), (1, 1)]
    assert PLMap.identity() == IDENTITY


def test_canonical_drops_collinear_nodes():
    f = PLMap([(0, 0), ("1/4", "1/4"), ("1/2", "1/2"), (1, 1)])
    assert f == IDENTITY
    assert len(f) == 2


@pytest.mark.parametrize(
    "bad, where",
    [
        ([(0, 0), ("1/2", "1/4"), ("1/4", "1/2"), (1, 1)], "node 2"),
        ([(0, 0), ("1/2", "1/2"), ("3/4", "1/4"), (1, 1)], "node 2"),
        ([("1/8", 0), (1, 1)], "node 0"),
        ([(0, 0), ("1/2", "1/2")], "(1,1)"),
        ([(0, 0)], "at least"),
    ],
)
def test_invalid_nodes_are_rejected(bad, where):
    with pytest.raises(InvalidMapError, match=where.replace("(", r"\(").replace(")", r"\)")):
        PLMap(bad)


def test_floats_are_refused():
    with pytest.raises(TypeError):
        PLMap([(0, 0), (0.5, 0.25), (1, 1)])


# -- evaluate ------------------------------------------------------------------


def test_evaluate_examples(A):
    assert evaluate(IDENTITY, q("1/3")) == q("1/3")
    assert evaluate(A, q("1/2")) == q("1/4")
    assert evaluate(A, q("5/8")) == q("3/8")
    assert oracle.fr(evaluate(A, q("5/8"))) == oracle.ev(oracle.nodes_of(A_NODES), q("5/8"))


def test_evaluate_endpoints_and_domain(A):
    assert A(0) == 0 and A(1) == 1
    with pytest.raises(DomainError):
        A(q("3/2"))


# -- compose / inverse / power ----------------------------------------------------


def test_compose_examples(A):
    AA = compose(A, A)
    expect = [(0, 0), ("1/2", "1/8"), ("3/4", "1/4"), ("7/8", "1/2"), (1, 1)]
    assert nodes(AA) == [(q(x), q(y)) for x, y in expect]
    assert as_oracle(AA) == oracle.compose(as_oracle(A), as_oracle(A))
    assert compose(A, inverse(A)) == IDENTITY
    assert compose(IDENTITY, A) == A


def test_compose_is_right_action(A, x1):
    t = q("5/8")
    assert (A * x1)(t) == x1(A(t))


def test_inverse_examples(A):
    assert inverse(IDENTITY) == IDENTITY
    assert nodes(inverse(A)) == [(q(x), q(y)) for x, y in [(0, 0), ("1/4", "1/2"), ("1/2", "3/4"), (1, 1)]]
    assert inverse(inverse(A)) == A
    assert ~A == inverse(A)


def test_power_examples(A):
    assert power(A, 0) == IDENTITY
    assert power(A, 2) == compose(A, A)
    assert power(A, -1) == inverse(A)
    assert A ** 3 == A * A * A


# -- conjugates and commutators ------------------------------------------------------


def test_conjugate_examples(A):
    b = bump("1/4", "1/2")
    assert conjugate(b, IDENTITY) == b
    assert orbital_intervals(conjugate(b, A)) == [iv("1/8", "1/4")]
    assert conjugate(IDENTITY, A) == IDENTITY


def test_conjugate_formula(A, x1):
    assert conjugate(x1, A) == inverse(A) * x1 * A


def test_commutator_examples(A):
    assert commutator(A, A) == IDENTITY
    assert commutator(A, IDENTITY) == IDENTITY
    g = bump("1/16", "1/8")
    h = power(PLMap([(0, 0), ("1/4", "1/2"), (1, 1)]), 2)
    c = commutator(g, h)
    assert not c.is_identity()
    assert iv("1/16", "1/8") in orbital_intervals(c)


def test_commutator_formula(A, x1):
    assert commutator(A, x1) == inverse(x1 * A) * (A * x1)


def test_double_commutator_examples(A):
    k = PLMap([(0, 0), ("1/4", "1/2"), (1, 1)])
    assert double_commutator(IDENTITY, k) == IDENTITY
    assert double_commutator(A, IDENTITY) == IDENTITY
    f = double_commutator(bump("1/16", "7/64"), k)
    assert iv("1/16", "7/64") in orbital_intervals(f)


# -- affine pieces, orbitals, slopes ------------------------------------------------


def test_affine_components(A):
    one = affine_components(IDENTITY)
    assert len(one) == 1 and one[0].slope == 1 and one[0].interval == Interval(0, 1)
    assert [p.slope for p in affine_components(A)] == [q("1/2"), 1, 2]
    assert [p.slope for p in affine_components(A * A)] == [q("1/4"), q("1/2"), 2, 4]
    for p in affine_components(A):
        m = p.interval.midpoint()
        assert A(m) == p.slope * m + p.intercept


def test_orbitals_examples(A, x1):
    assert orbitals_of_map(IDENTITY) == []
    [o] = orbitals_of_map(A)
    assert o.interval == Interval(0, 1) and o.direction is Direction.LEFT
    [o] = orbitals_of_map(x1)
    assert o.interval == iv("1/2", 1) and o.direction is Direction.LEFT


def test_edge_slopes_examples(A):
    assert edge_slopes(A, Interval(0, 1)) == (q("1/2"), 2)
    assert edge_slopes(inverse(A), Interval(0, 1)) == (2, q("1/2"))
    b = bump("1/4", "1/2")
    assert edge_slopes(conjugate(b, A), iv("1/8", "1/4")) == edge_slopes(b, iv("1/4", "1/2"))
    with pytest.raises(NotAnOrbitalError):
        edge_slopes(A, iv("1/4", "1/2"))


def test_compare_left_order_examples(A, x1):
    assert compare_left_order(A, A) is Order.EQUAL
    assert compare_left_order(A, x1) is Order.LESS
    assert compare_left_order(x1, A) is Order.GREATER


def test_project_examples(x1):
    assert project(IDENTITY, iv("1/4", "1/2")) == IDENTITY
    assert project(x1, iv("1/2", 1)) == x1
    f = bump("1/8", "1/4") * bump("1/2", "3/4")
    p = project(f, iv("1/2", "3/4"))
    assert orbital_intervals(p) == [iv("1/2", "3/4")]
    for t in [q("9/16"), q("5/8"), q("11/16")]:
        assert p(t) == f(t)
    for t in [q("1/8"), q("3/16"), q("1/4")]:
        assert p(t) == t


def test_project_needs_invariant_interval(A):
    with pytest.raises(PreconditionError):
        project(A, iv("1/4", "1/2"))


# -- properties ----------------------------------------------------------------


@given(dyadic_maps(), dyadic_maps(), dyadic_maps())
def test_group_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * f.inverse() == IDENTITY
    assert f.inverse() * f == IDENTITY


@given(dyadic_maps(), st.integers(-4, 4), st.integers(-4, 4))
def test_power_law(f, m, n):
    assert power(f, m + n) == power(f, m) * power(f, n)


@given(dyadic_maps(), dyadic_maps(), st.lists(dyadic_points(), min_size=1, max_size=8))
def test_pointwise_law(f, g, pts):
    fg = f * g
    for x in pts:
        assert fg(x) == g(f(x))


@given(dyadic_maps(), dyadic_maps())
def test_compose_matches_oracle(f, g):
    assert as_oracle(f * g) == oracle.compose(as_oracle(f), as_oracle(g))


@given(dyadic_maps(), dyadic_maps())
def test_breakpoint_law(g, h):
    bg, bh = set(g.breakpoints()), set(h.breakpoints())
    for b in (g * h).breakpoints():
        assert b in bg or g(b) in bh


@given(dyadic_maps(), dyadic_maps())
def test_induced_orbitals_and_slopes(g, h):
    got = orbitals_of_map(conjugate(g, h))
    want = orbitals_of_map(g)
    assert [o.interval for o in got] == [Interval(h(o.interval.left), h(o.interval.right)) for o in want]
    assert [o.direction for o in got] == [o.direction for o in want]
    for o, p in zip(want, got):
        assert edge_slopes(conjugate(g, h), p.interval) == edge_slopes(g, o.interval)


@given(dyadic_maps())
def test_orbitals_match_oracle(f):
    want = [(a, b, 1 if d is Direction.RIGHT else -1) for (a, b), d in
            (((o.interval.left, o.interval.right), o.direction) for o in orbitals_of_map(f))]
    assert [(oracle.fr(a), oracle.fr(b), s) for a, b, s in want] == oracle.orbitals(as_oracle(f))


@given(dyadic_maps(), st.integers(1, 20))
def test_escape_to_ends(f, k):
    eps = q(1) / 2 ** k
    for o in orbitals_of_map(f):
        x = o.interval.midpoint()
        g = f if o.direction is Direction.RIGHT else f.inverse()
        n = g.escape(x, o.interval.right - eps, 1 << 16)
        assert n >= 1
        assert o.interval.right - power(g, n)(x) < eps


@given(dyadic_maps())
def test_canonical_idempotent(f):
    assert PLMap(f.nodes) == f
    assert nodes(PLMap(f.nodes)) == nodes(f)


def test_x1_nodes_exact(x1):
    assert nodes(x1) == [(q(x), q(y)) for x, y in X1_NODES]
