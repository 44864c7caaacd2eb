"""Wreath-product realizations and the double-commutator obstruction.

Placement: the top generator is ``bump_on(ambient)``; base generators are
affine copies squeezed into the fundamental domain [x0, x0 t) with x0 the
bump's first interior node, so distinct copies (conjugates by powers of t)
have disjoint supports and commute.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .errors import DegenerateInputError, InconclusiveError, PreconditionError, ResourceError
from .plmap import (
    Interval,
    PLMap,
    commutator,
    conjugate,
    double_commutator,
    orbital_intervals,
    power,
    right_slope,
)
from .rat import format_rat
from .towers import fundamental_exponent
from .words import GroupSpec

DEFAULT_NODE_CAP = 20_000
DEFAULT_THETA_BOUND = 32


def bump_on(A):
    """One-orbital map on A moving right, slopes 2 then 2/3."""
    a, b = A.left, A.right
    q = (b - a) / 4
    nodes = [(0, 0)] if a > 0 else []
    nodes += [(a, a), (a + q, a + 2 * q), (b, b)]
    if b < 1:
        nodes.append((1, 1))
    return PLMap(nodes)


def rescale_into(f, A):
    """Affine copy of f supported in A: x -> a + (b - a) x conjugated in."""
    a, w = A.left, A.length
    nodes = [(0, 0)] if a > 0 else []
    nodes += [(a + w * x, a + w * y) for x, y in f.nodes]
    if A.right < 1:
        nodes.append((1, 1))
    return PLMap(nodes)


def fundamental_domain_of_bump(A):
    """(x0, x0 t) for t = bump_on(A): the interval base copies live in."""
    q = A.length / 4
    return Interval(A.left + q, A.left + 2 * q)


@dataclass
class WreathRealization:
    base_generators: list
    top_generator: tuple
    ambient: Interval
    copies_materialized: int = 1
    copies: list = field(default_factory=list)

    def as_group(self):
        return GroupSpec(list(self.base_generators) + [self.top_generator])

    def copy(self, j):
        """Base generators conjugated by t^j, as (name, map) pairs."""
        t = self.top_generator[1]
        tj = power(t, j)
        return [(f"{n}@{j}", conjugate(f, tj)) for n, f in self.base_generators]


def wreath_with_Z(G, ambient=None, copies=1):
    """Realize G wr Z with top generator bump_on(ambient).

    ``G`` may be None (or empty) for the trivial group, giving just Z.
    The pairwise commutation of distinct materialized copies is checked.
    """
    if copies < 1:
        raise PreconditionError("at least one copy must be materialized")
    ambient = ambient or Interval(0, 1)
    t = bump_on(ambient)
    dom = fundamental_domain_of_bump(ambient)
    base = [] if G is None else [(n, rescale_into(f, dom)) for n, f in G]
    names = {n for n, _ in base}
    top = "t" if "t" not in names else f"t{len(names) + 1}"
    W = WreathRealization(base, (top, t), ambient, copies)
    W.copies = [W.copy(j) for j in range(copies)]
    for i in range(copies):
        for j in range(i + 1, copies):
            for _, f in W.copies[i]:
                for _, g in W.copies[j]:
                    if f * g != g * f:
                        raise AssertionError("distinct base copies fail to commute")
    return W


def _check_nodes(G, cap):
    total = sum(len(f) for f in G.maps)
    if total > cap:
        raise ResourceError(f"realization needs {total} nodes, over the cap of {cap}")


def _w_group(i, ambient, cap):
    # generators t1 (innermost) ... ti (outermost, bump on ambient)
    G = None
    for level in range(1, i + 1):
        W = wreath_with_Z(G, ambient)
        gens = list(W.base_generators) + [(f"t{level}", W.top_generator[1])]
        G = GroupSpec(gens)
        _check_nodes(G, cap)
    return G


def build_family(kind, i, m=1, cap=DEFAULT_NODE_CAP):
    """GroupSpec realizing W_i, or G_i with the direct sum cut to m copies.

    W_i: generators t1..ti, t_j a bump nested in a fundamental domain of
    t_{j+1}. G_i: (0,1) is split into m equal pieces and each piece holds
    a copy of G_{i-1} wr Z; generator names get a "_c" suffix for copy c.
    """
    kind = kind.upper()
    if i < 1 or m < 1:
        raise PreconditionError("need i >= 1 and m >= 1")
    if kind == "W":
        return _w_group(i, Interval(0, 1), cap)
    if kind != "G":
        raise PreconditionError(f"unknown family {kind!r}")
    return _g_group(i, Interval(0, 1), m, cap)


def _g_group(i, ambient, m, cap):
    gens = []
    width = ambient.length / m
    for c in range(m):
        piece = Interval(ambient.left + c * width, ambient.left + (c + 1) * width)
        if i == 1:
            gens.append((f"t1_{c}", bump_on(piece)))
        else:
            inner = _g_group(i - 1, Interval(0, 1), m, cap)
            dom = fundamental_domain_of_bump(piece)
            gens += [(f"{n}_{c}", rescale_into(f, dom)) for n, f in inner]
            gens.append((f"t{i}_{c}", bump_on(piece)))
    G = GroupSpec(gens)
    _check_nodes(G, cap)
    return G


# -- mutual efficiency ----------------------------------------------------------


class NestingViolation(NamedTuple):
    first: Interval
    second: Interval


def nesting_violations(h, k):
    out = []
    for A in orbital_intervals(h):
        for B in orbital_intervals(k):
            if A.meets(B) and not (A == B or A.closure_inside(B) or B.closure_inside(A)):
                out.append(NestingViolation(A, B))
    return out


def _check_nesting(h, k):
    bad = nesting_violations(h, k)
    if bad:
        A, B = bad[0]
        raise PreconditionError(f"orbitals {A} and {B} neither nest nor coincide")


def _hull_in(f, C):
    orbs = [o for o in orbital_intervals(f) if C.contains_interval(o)]
    return (orbs[0].left, orbs[-1].right) if orbs else None


def _containing_orbitals(h, k):
    # (C, closed hull of supp(k) in C) for orbitals C of h properly containing one of k
    out = []
    for C in orbital_intervals(h):
        if any(C.properly_contains(B) for B in orbital_intervals(k)):
            out.append((C, _hull_in(k, C)))
    return out


@dataclass
class EfficiencyReport:
    ok: bool
    violation: Optional[tuple] = None

    def __bool__(self):
        return self.ok


def mutual_efficiency(h, k):
    """Both supports fit one fundamental domain inside each properly containing orbital."""
    _check_nesting(h, k)
    for outer, inner, tag in ((h, k, "h"), (k, h, "k")):
        for C, S in _containing_orbitals(outer, inner):
            n = fundamental_exponent(outer, C, S, 1)
            if n != 1:
                return EfficiencyReport(False, (tag, C))
    return EfficiencyReport(True)


def efficiency_exponents(h, k, cap=1 << 20):
    """Least (j, kexp) with h^j and k^kexp mutually efficient.

    The two sides decouple: j depends only on the orbitals of h that
    properly contain orbitals of k, kexp only on the symmetric ones.
    """
    _check_nesting(h, k)
    exps = []
    for outer, inner in ((h, k), (k, h)):
        e = 1
        for C, S in _containing_orbitals(outer, inner):
            n = fundamental_exponent(outer, C, S, cap)
            if n < 0:
                raise ResourceError(f"no exponent up to {cap} makes the support fit in {C}")
            e = max(e, n)
        exps.append(e)
    return exps[0], exps[1]


class OrbitalClass(NamedTuple):
    orbital: Interval
    kind: str
    ok: bool


@dataclass
class DCReport:
    f: PLMap
    property1: bool
    property2: bool
    orbitals: list

    @property
    def ok(self):
        return self.property1 and self.property2

    def __bool__(self):
        return self.ok


def dc_properties_check(h, k):
    """Compute f = [[h,k],k] and check both orbital-set properties exactly.

    1. every orbital of h properly inside an orbital of k is an orbital of f;
    2. every orbital of f lies properly inside an orbital of k that contains
       an orbital of h.
    """
    if not mutual_efficiency(h, k):
        raise PreconditionError("the pair is not mutually efficient")
    f = double_commutator(h, k)
    fo, ho, ko = orbital_intervals(f), orbital_intervals(h), orbital_intervals(k)
    rows = []
    p1 = True
    for A in ho:
        if any(B.properly_contains(A) for B in ko):
            ok = A in fo
            p1 &= ok
            rows.append(OrbitalClass(A, "h-orbital inside a k-orbital", ok))
    p2 = True
    for A in fo:
        ok = any(B.properly_contains(A) and any(B.contains_interval(H) for H in ho) for B in ko)
        p2 &= ok
        rows.append(OrbitalClass(A, "f-orbital", ok))
    return DCReport(f, p1, p2, rows)


# -- the obstruction loop ----------------------------------------------------


def shared_orbitals(a, b):
    bo = set(orbital_intervals(b))
    return [A for A in orbital_intervals(a) if A in bo]


def _theta_candidates(bound):
    pairs = [(m, n) for m in range(-bound, bound + 1) for n in range(-bound, bound + 1) if m and n]
    pairs.sort(key=lambda p: (max(abs(p[0]), abs(p[1])), abs(p[0]) + abs(p[1]), -p[0], -p[1]))
    return pairs


def theta_search(alpha, beta, A, bound=DEFAULT_THETA_BOUND):
    """Least (m, n) with alpha^m beta^n the identity on A, or None.

    Candidates must first satisfy the leading-slope equation
    slope(alpha)^m slope(beta)^n = 1 at the left end of A.
    """
    sa, sb = right_slope(alpha, A.left), right_slope(beta, A.left)
    for m, n in _theta_candidates(bound):
        if sa ** m * sb ** n != 1:
            continue
        theta = power(alpha, m) * power(beta, n)
        if not any(O.meets(A) for O in orbital_intervals(theta)):
            return m, n, theta
    return None


def _improve(gamma, other, label, log):
    j, kexp = efficiency_exponents(gamma, other)
    gamma = double_commutator(power(gamma, j), power(other, kexp))
    log.append({"step": label, "j": j, "k": kexp, "gamma": gamma.to_strings()})
    if gamma.is_identity():
        raise DegenerateInputError(f"gamma became the identity at step {label!r}", )
    return gamma


@dataclass
class ObstructionResult:
    gamma: PLMap
    log: list


def obstruction_demo(alpha, beta, gamma, bound=DEFAULT_THETA_BOUND):
    """Improve gamma until it is non-trivial, disjoint from alpha and commutes with it."""
    if alpha * beta != beta * alpha:
        raise PreconditionError("alpha and beta do not commute")
    if gamma.is_identity():
        raise PreconditionError("gamma must be non-trivial")
    log = [{"step": "start", "gamma": gamma.to_strings()}]
    gamma = _improve(gamma, beta, "efficiency against beta", log)
    for A in shared_orbitals(alpha, beta):
        hit = theta_search(alpha, beta, A, bound)
        if hit is None:
            raise InconclusiveError(f"no theta = alpha^m beta^n with |m|,|n| <= {bound} is trivial on {A}")
        m, n, theta = hit
        log.append({"step": "theta", "orbital": [format_rat(A.left), format_rat(A.right)],
                    "m": m, "n": n, "theta": theta.to_strings()})
        gamma = _improve(gamma, theta, f"efficiency against theta on {A}", log)
    disjoint = not any(O.meets(P) for O in orbital_intervals(gamma) for P in orbital_intervals(alpha))
    commutes = commutator(gamma, alpha).is_identity()
    log.append({"step": "check", "nontrivial": not gamma.is_identity(),
                "disjoint_from_alpha": disjoint, "commutes_with_alpha": commutes})
    if not (disjoint and commutes):
        raise AssertionError("obstruction postcondition failed")
    return ObstructionResult(gamma, log)
