"""Geometry of finitely generated subgroups: group orbitals, movers,
transition chains and end-realization."""

import bisect
import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import DomainError, PreconditionError, ResourceError
from .plmap import Direction, Interval, Orbital, PLMap, orbitals_of_map
from .rat import as_rat, format_rat
from .words import DEFAULT_ELEMENT_CAP, GroupSpec, Word, enumerate_elements

DEFAULT_ESCAPE_LIMIT = 1 << 20


@dataclass(frozen=True)
class SignedOrbital:
    orbital: Interval
    signature: PLMap
    witness: Optional[Word] = None

    def __post_init__(self):
        if self.orbital not in [o.interval for o in orbitals_of_map(self.signature)]:
            raise PreconditionError(f"{self.orbital} is not an orbital of its signature")

    @property
    def direction(self):
        for o in orbitals_of_map(self.signature):
            if o.interval == self.orbital:
                return o.direction

    def __eq__(self, other):
        return (
            isinstance(other, SignedOrbital)
            and self.orbital == other.orbital
            and self.signature == other.signature
        )

    def __hash__(self):
        return hash((self.orbital, self.signature))


@dataclass(frozen=True)
class TransitionChainWitness:
    first: SignedOrbital
    second: SignedOrbital

    def __post_init__(self):
        a1, a2 = self.first.orbital.left, self.first.orbital.right
        b1, b2 = self.second.orbital.left, self.second.orbital.right
        if not (a1 < b1 < a2 < b2):
            raise PreconditionError("orbitals do not interleave")


class Realization(enum.Enum):
    NO_END = "NoEnd"
    LEADING_ONLY = "LeadingOnly"
    TRAILING_ONLY = "TrailingOnly"
    CONSISTENT_BOTH = "ConsistentBoth"
    INCONSISTENT_BOTH = "InconsistentBoth"

    @property
    def imbalanced(self):
        return self in (Realization.LEADING_ONLY, Realization.TRAILING_ONLY)


@dataclass(frozen=True)
class RealizationClass:
    tag: Realization
    leading: Optional[Orbital] = None
    trailing: Optional[Orbital] = None


class ImbalanceWitness(NamedTuple):
    word: Word
    orbital: Interval
    realization: RealizationClass


class InconsistentWitness(NamedTuple):
    word: Word
    orbital: Interval
    realization: RealizationClass


def merge_intervals(intervals):
    """Components of a union of open intervals (touching ends stay apart)."""
    out = []
    for iv in sorted(intervals):
        if out and iv.left < out[-1].right:
            if iv.right > out[-1].right:
                out[-1] = Interval(out[-1].left, iv.right)
        else:
            out.append(iv)
    return out


def group_orbitals(G):
    """Connected components of the union of the generator supports."""
    return merge_intervals(o.interval for f in G.maps for o in orbitals_of_map(f))


def orbital_containing(G, x):
    x = as_rat(x)
    for A in group_orbitals(G):
        if x in A:
            return A
    return None


class CoverStep(NamedTuple):
    generator: int
    orbital: Interval
    sign: int
    exponent: int


def _cover(G, A, c, d):
    # greedy chain of generator orbitals covering [c, d]; each orbital
    # comes with the sign that makes its generator move points right on it
    pool = []
    for i, f in enumerate(G.maps):
        for o in orbitals_of_map(f):
            if A.contains_interval(o.interval):
                pool.append((o.interval, i, 1 if o.direction is Direction.RIGHT else -1))
    chain = []
    pos = c
    while True:
        best = None
        for iv, i, s in pool:
            if pos in iv and (best is None or iv.right > best[0].right):
                best = (iv, i, s)
        if best is None:
            raise PreconditionError(f"point {format_rat(pos)} is not moved by any generator")
        chain.append(best)
        if best[0].right > d:
            return chain
        pos = best[0].right


def mover_steps(G, A, c, d, limit=DEFAULT_ESCAPE_LIMIT):
    """The cover and exponents behind :func:`find_mover`."""
    c, d = as_rat(c), as_rat(d)
    if not (A.left < c <= d < A.right):
        raise DomainError(f"[{format_rat(c)}, {format_rat(d)}] is not inside {A}")
    chain = _cover(G, A, c, d)
    steps = []
    x = c
    for k, (iv, i, s) in enumerate(chain):
        target = chain[k + 1][0].left if k + 1 < len(chain) else d
        g = G.maps[i] if s > 0 else G.maps[i].inverse()
        m = g.escape(x, target, limit)
        if m < 0:
            raise ResourceError(f"no exponent below {limit} moves past {format_rat(target)}")
        for _ in range(m):
            x = g.evaluate(x)
        steps.append(CoverStep(i, iv, s, m))
    return steps


def find_mover(G, A, c, d, limit=DEFAULT_ESCAPE_LIMIT):
    """Word g = g1^m1 ... gn^mn over a chain of generator orbitals with c g > d.

    Each g_k is a generator or its inverse, chosen to move points right on
    the k-th orbital of a greedy cover of [c, d]; m_k is the least positive
    exponent carrying the running point past the left end of the next
    orbital (past d for the last one).
    """
    steps = mover_steps(G, A, c, d, limit)
    w = Word((st.generator, st.sign * st.exponent) for st in steps)
    g = G.evaluate(w)
    assert g.evaluate(as_rat(c)) > as_rat(d)
    return w, g


def _distinct_orbitals(ball):
    # first (shortest, shortlex-least) signature for every orbital
    found = {}
    for w, f in ball:
        for o in orbitals_of_map(f):
            if o.interval not in found:
                found[o.interval] = (w, f)
    return found


def find_interleaving(intervals):
    """Lexicographically least pair (I, J) with I.left < J.left < I.right < J.right."""
    ivs = sorted(intervals)
    lefts = [iv.left for iv in ivs]
    for I in ivs:
        lo = bisect.bisect_right(lefts, I.left)
        hi = bisect.bisect_left(lefts, I.right)
        for J in ivs[lo:hi]:
            if J.right > I.right:
                return I, J
    return None


def detect_transition_chain(G, L, cap=DEFAULT_ELEMENT_CAP):
    """Transition chain of length two with signatures of word length <= L, or None."""
    if L < 1:
        raise DomainError("L must be at least 1")
    found = _distinct_orbitals(enumerate_elements(G, L, cap=cap, truncate=True))
    pair = find_interleaving(found)
    if pair is None:
        return None
    I, J = pair
    (wi, fi), (wj, fj) = found[I], found[J]
    return TransitionChainWitness(SignedOrbital(I, fi, wi), SignedOrbital(J, fj, wj))


def classify_realization(h, A):
    inside = []
    for o in orbitals_of_map(h):
        if not o.interval.meets(A):
            continue
        if not A.contains_interval(o.interval):
            raise PreconditionError(f"orbital {o.interval} straddles an end of {A}")
        inside.append(o)
    leading = inside[0] if inside and inside[0].interval.left == A.left else None
    trailing = inside[-1] if inside and inside[-1].interval.right == A.right else None
    if leading and trailing:
        tag = (
            Realization.CONSISTENT_BOTH
            if leading.direction == trailing.direction
            else Realization.INCONSISTENT_BOTH
        )
    elif leading:
        tag = Realization.LEADING_ONLY
    elif trailing:
        tag = Realization.TRAILING_ONLY
    else:
        tag = Realization.NO_END
    return RealizationClass(tag, leading, trailing)


def _realization_search(G, L, cap, accept):
    if L < 1:
        raise DomainError("L must be at least 1")
    orbs = group_orbitals(G)
    for w, f in enumerate_elements(G, L, cap=cap, truncate=True):
        if f.is_identity():
            continue
        for A in orbs:
            rc = classify_realization(f, A)
            if accept(rc.tag):
                return w, A, rc
    return None


def imbalance_search(G, L, cap=DEFAULT_ELEMENT_CAP):
    """First element (in enumeration order) realizing exactly one end of a group orbital."""
    hit = _realization_search(G, L, cap, lambda t: t.imbalanced)
    return ImbalanceWitness(*hit) if hit else None


def inconsistent_search(G, L, cap=DEFAULT_ELEMENT_CAP):
    """First element realizing both ends of a group orbital in opposite directions."""
    hit = _realization_search(G, L, cap, lambda t: t is Realization.INCONSISTENT_BOTH)
    return InconsistentWitness(*hit) if hit else None


def subgroup(*maps, prefix="s"):
    """GroupSpec on the given maps, named s0, s1, ..."""
    return GroupSpec.of(*maps, prefix=prefix)
