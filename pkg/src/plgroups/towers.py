"""Signed-orbital towers: search, exemplary checks, conjugation and
fundamental domains."""

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DomainError, NotAnOrbitalError, PreconditionError
from .geometry import DEFAULT_ESCAPE_LIMIT, SignedOrbital
from .plmap import Direction, Interval, Order, compare_left_order, conjugate, orbitals_of_map
from .rat import as_rat
from .words import DEFAULT_ELEMENT_CAP, enumerate_elements


class Tower:
    """Chain of signed orbitals under proper inclusion, smallest first."""

    __slots__ = ("levels",)

    def __init__(self, levels):
        levels = tuple(levels)
        for lo, hi in zip(levels, levels[1:]):
            if not hi.orbital.properly_contains(lo.orbital):
                raise PreconditionError(
                    f"orbital {hi.orbital} does not properly contain {lo.orbital}"
                )
        self.levels = levels

    @property
    def height(self):
        return len(self.levels)

    def __len__(self):
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    def __getitem__(self, i):
        return self.levels[i]

    @property
    def orbitals(self):
        return [lv.orbital for lv in self.levels]

    @property
    def signatures(self):
        return [lv.signature for lv in self.levels]

    def __eq__(self, other):
        return isinstance(other, Tower) and self.levels == other.levels

    def __hash__(self):
        return hash(self.levels)

    def __repr__(self):
        return "Tower[" + ", ".join(str(lv.orbital) for lv in self.levels) + "]"


def signed_orbitals_up_to(G, L, cap=DEFAULT_ELEMENT_CAP):
    """Every (orbital, element, word) for the distinct non-identity elements of length <= L.

    The search truncates at ``cap`` elements rather than failing; the
    returned list then covers only the fully explored radii plus a partial
    sphere.
    """
    if L < 1:
        raise DomainError("L must be at least 1")
    out = []
    for w, f in enumerate_elements(G, L, cap=cap, truncate=True):
        for o in orbitals_of_map(f):
            out.append(SignedOrbital(o.interval, f, w))
    return out


def _best_signatures(S):
    # one signed orbital per orbital: least signature in the left total order
    best = {}
    for so in S:
        cur = best.get(so.orbital)
        if cur is None or compare_left_order(so.signature, cur.signature) is Order.LESS:
            best[so.orbital] = so
    return best


class _MaxFenwick:
    def __init__(self, n):
        self.t = [0] * (n + 1)

    def update(self, i, v):
        i += 1
        while i < len(self.t):
            if self.t[i] < v:
                self.t[i] = v
            i += i & -i

    def query(self, i):
        # max over positions 0..i
        i += 1
        r = 0
        while i > 0:
            if self.t[i] > r:
                r = self.t[i]
            i -= i & -i
        return r


def chain_heights(intervals):
    """For each interval, the longest chain of proper inclusions ending at it."""
    ivs = list(intervals)
    lefts = sorted({iv.left for iv in ivs}, reverse=True)
    rank = {x: i for i, x in enumerate(lefts)}  # larger left -> smaller rank
    fw = _MaxFenwick(len(lefts))
    down = {}
    for iv in sorted(ivs, key=lambda iv: (iv.right, -iv.left)):
        h = fw.query(rank[iv.left]) + 1
        down[iv] = h
        fw.update(rank[iv.left], h)
    return down


def max_tower(S):
    """A longest tower selectable from the signed orbitals S.

    Ties: levels are fixed from the outermost inwards, each time taking the
    candidate with the least (left, right) ends; each orbital carries its
    least signature in the left total order.
    """
    best = _best_signatures(S)
    if not best:
        return Tower(())
    down = chain_heights(best)
    height = max(down.values())
    chosen = []
    outer = None
    for level in range(height, 0, -1):
        cands = [
            iv for iv, h in down.items()
            if h == level and (outer is None or outer.properly_contains(iv))
        ]
        outer = min(cands)
        chosen.append(best[outer])
    return Tower(reversed(chosen))


class Violation(NamedTuple):
    lower: int
    upper: int
    orbital: Interval
    rule: str


@dataclass
class ExemplaryReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def is_exemplary(T):
    """Check both exemplary conditions for every ordered pair of levels.

    For levels (A, g) below (B, h): no orbital of g may contain an end of B,
    and no orbital of g inside B may share an end with B.
    """
    violations = []
    levels = list(T)
    for i, lo in enumerate(levels):
        orbs = [o.interval for o in orbitals_of_map(lo.signature)]
        for j in range(i + 1, len(levels)):
            B = levels[j].orbital
            for O in orbs:
                if B.left in O or B.right in O:
                    violations.append(Violation(i, j, O, "contains an end"))
                elif B.contains_interval(O) and (O.left == B.left or O.right == B.right):
                    violations.append(Violation(i, j, O, "shares an end"))
    return ExemplaryReport(not violations, violations)


def conjugate_tower(T, k):
    """T^k: orbitals carried by k, signatures conjugated by k."""
    levels = []
    for lv in T:
        A = Interval(k.evaluate(lv.orbital.left), k.evaluate(lv.orbital.right))
        levels.append(SignedOrbital(A, conjugate(lv.signature, k)))
    return Tower(levels)


def direction_of(g, A):
    for o in orbitals_of_map(g):
        if o.interval == A:
            return o.direction
    raise NotAnOrbitalError(f"{A} is not an orbital of the map")


def rightward(g, A):
    """g or its inverse, whichever moves points right on the orbital A."""
    return g if direction_of(g, A) is Direction.RIGHT else g.inverse()


def fits_fundamental_domain(g, A, S):
    """Whether the closed interval S = (lo, hi) lies in one fundamental domain of g on A.

    With g normalized to move right on A, this is the endpoint test
    evaluate(g, lo) > hi.
    """
    lo, hi = (as_rat(v) for v in S)
    if lo > hi:
        raise DomainError("empty closed interval")
    if not (A.left < lo and hi < A.right):
        raise DomainError(f"[{lo}, {hi}] is not inside {A}")
    return rightward(g, A).evaluate(lo) > hi


def fundamental_exponent(g, A, S, limit=DEFAULT_ESCAPE_LIMIT):
    """Least n >= 1 with S inside one fundamental domain of g^n on A, or -1."""
    lo, hi = (as_rat(v) for v in S)
    if not (A.left < lo and hi < A.right):
        raise DomainError(f"[{lo}, {hi}] is not inside {A}")
    return rightward(g, A).escape(lo, hi, limit)
