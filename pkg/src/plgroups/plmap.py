"""Single PL homeomorphisms of [0, 1] and their local geometry.

Maps act on the right: ``f * g`` (or ``compose(f, g)``) applies ``f`` first
and then ``g``, so ``evaluate(f * g, x) == evaluate(g, evaluate(f, x))``.
Conjugation follows the same convention: ``conjugate(g, h)`` is ``h^-1 g h``
and carries each orbital ``A`` of ``g`` to ``A h``.
"""

import enum
import hashlib
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, InvalidMapError, NotAnOrbitalError, PreconditionError
from .kernel import Nodes
from .rat import Rat, as_rat, format_rat

ZERO = Rat(0)
ONE = Rat(1)


@dataclass(frozen=True, order=True)
class Interval:
    """Open interval (left, right) inside [0, 1]."""

    left: Rat
    right: Rat

    def __post_init__(self):
        left, right = as_rat(self.left), as_rat(self.right)
        if not (ZERO <= left < right <= ONE):
            raise DomainError(f"not an interval of [0,1]: ({left}, {right})")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def __contains__(self, x):
        return self.left < x < self.right

    def closure_contains(self, x):
        return self.left <= x <= self.right

    def contains_interval(self, other):
        """True when ``other`` is a subset of this interval."""
        return self.left <= other.left and other.right <= self.right

    def properly_contains(self, other):
        return self.contains_interval(other) and self != other

    def closure_inside(self, other):
        """True when the closure of this interval lies inside the open ``other``."""
        return other.left < self.left and self.right < other.right

    def meets(self, other):
        return self.left < other.right and other.left < self.right

    def midpoint(self):
        return (self.left + self.right) / 2

    @property
    def length(self):
        return self.right - self.left

    def __str__(self):
        return f"({format_rat(self.left)}, {format_rat(self.right)})"


class Direction(enum.Enum):
    LEFT = "Left"
    RIGHT = "Right"

    def flipped(self):
        return Direction.RIGHT if self is Direction.LEFT else Direction.LEFT


class Orbital(NamedTuple):
    interval: Interval
    direction: Direction


class AffinePiece(NamedTuple):
    interval: Interval
    slope: Rat
    intercept: Rat


class Order(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _validate(xs, ys):
    if len(xs) != len(ys) or len(xs) < 2:
        raise InvalidMapError("a map needs at least the nodes (0,0) and (1,1)")
    if xs[0] != 0 or ys[0] != 0:
        raise InvalidMapError(f"node 0 must be (0,0), got ({format_rat(xs[0])},{format_rat(ys[0])})")
    last = len(xs) - 1
    if xs[last] != 1 or ys[last] != 1:
        raise InvalidMapError(
            f"node {last} must be (1,1), got ({format_rat(xs[last])},{format_rat(ys[last])})"
        )
    for i in range(1, len(xs)):
        if not xs[i] > xs[i - 1]:
            raise InvalidMapError(f"node {i}: x = {format_rat(xs[i])} is not increasing")
        if not ys[i] > ys[i - 1]:
            raise InvalidMapError(f"node {i}: y = {format_rat(ys[i])} is not increasing")


class PLMap:
    """Orientation-preserving PL homeomorphism of [0, 1] in canonical form.

    Interior nodes are exactly the breakpoints, so two maps are equal iff
    their node lists are equal.
    """

    __slots__ = ("_n", "_orb", "__weakref__")

    def __init__(self, nodes):
        xs = [as_rat(x) for x, _ in nodes]
        ys = [as_rat(y) for _, y in nodes]
        _validate(xs, ys)
        self._n = Nodes.from_sequences(xs, ys, canonical=False)
        self._orb = None

    @classmethod
    def _wrap(cls, n):
        f = cls.__new__(cls)
        f._n = n
        f._orb = None
        return f

    @classmethod
    def identity(cls):
        return cls._wrap(Nodes.identity())

    @property
    def xs(self):
        return self._n.xs

    @property
    def ys(self):
        return self._n.ys

    @property
    def nodes(self):
        return tuple(zip(self._n.xs, self._n.ys))

    def breakpoints(self):
        return self._n.xs[1:-1]

    def slopes(self):
        xs, ys = self._n.xs, self._n.ys
        return [(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(len(xs) - 1)]

    def is_identity(self):
        return self._n.is_identity()

    def evaluate(self, x):
        x = as_rat(x)
        if not (ZERO <= x <= ONE):
            raise DomainError(f"point {format_rat(x)} is outside [0,1]")
        return self._n.evaluate(x)

    __call__ = evaluate

    def compose(self, other):
        return PLMap._wrap(self._n.compose(other._n))

    def __mul__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return PLMap._wrap(self._n.compose(other._n))

    def inverse(self):
        return PLMap._wrap(self._n.inverse())

    def __invert__(self):
        return self.inverse()

    def __pow__(self, n):
        return power(self, n)

    def escape(self, x, bound, limit):
        """Smallest n >= 1 with x f^n > bound, or -1 within ``limit`` steps."""
        return self._n.escape(as_rat(x), as_rat(bound), limit)

    def __eq__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return self._n == other._n

    def __hash__(self):
        return hash(self._n)

    def __len__(self):
        return len(self._n)

    def to_strings(self):
        return [[format_rat(x), format_rat(y)] for x, y in zip(self._n.xs, self._n.ys)]

    def digest(self):
        """Short content hash, stable across runs and kernels."""
        text = ";".join(f"{a},{b}" for a, b in self.to_strings())
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def __repr__(self):
        body = ", ".join(f"({a},{b})" for a, b in self.to_strings())
        return f"PLMap[{body}]"

    def __reduce__(self):
        return (_from_strings, (self.to_strings(),))


def _from_strings(pairs):
    return PLMap(pairs)


IDENTITY = PLMap.identity()


def identity():
    return IDENTITY


def evaluate(f, x):
    return f.evaluate(x)


def compose(f, g):
    """The product fg: apply f, then g."""
    return f * g


def inverse(f):
    return f.inverse()


def power(f, n):
    n = int(n)
    if n < 0:
        f, n = f.inverse(), -n
    result = IDENTITY
    base = f
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def conjugate(g, h):
    """g^h = h^-1 g h."""
    return h.inverse() * g * h


def commutator(a, b):
    """[a, b] = a^-1 b^-1 a b."""
    return (b * a).inverse() * (a * b)


def double_commutator(h, k):
    return commutator(commutator(h, k), k)


def affine_components(f):
    xs, ys = f.xs, f.ys
    pieces = []
    for i in range(len(xs) - 1):
        slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
        pieces.append(AffinePiece(Interval(xs[i], xs[i + 1]), slope, ys[i] - slope * xs[i]))
    return pieces


def fixed_points(f):
    """Sorted isolated fixed points and ends of fixed segments, 0 and 1 included."""
    xs, ys = f.xs, f.ys
    pts = [ZERO]
    for i in range(len(xs) - 1):
        d0 = ys[i] - xs[i]
        d1 = ys[i + 1] - xs[i + 1]
        if d0 != 0 and d1 != 0 and (d0 > 0) != (d1 > 0):
            pts.append(xs[i] + d0 * (xs[i + 1] - xs[i]) / (d0 - d1))
        if d1 == 0:
            pts.append(xs[i + 1])
    return pts


def orbitals_of_map(f):
    """Components of the support, left to right, each with its direction."""
    if f._orb is not None:
        return list(f._orb)
    out = []
    if not f.is_identity():
        pts = fixed_points(f)
        for p, q in zip(pts, pts[1:]):
            m = (p + q) / 2
            fm = f.evaluate(m)
            if fm != m:
                out.append(Orbital(Interval(p, q), Direction.RIGHT if fm > m else Direction.LEFT))
    f._orb = tuple(out)
    return out


def orbital_intervals(f):
    return [o.interval for o in orbitals_of_map(f)]


def direction_on(f, A):
    """Direction of f on its orbital A."""
    for o in orbitals_of_map(f):
        if o.interval == A:
            return o.direction
    raise NotAnOrbitalError(f"{A} is not an orbital of the map")


def _segment_right_of(xs, x):
    # index i with xs[i] <= x < xs[i+1]
    lo, hi = 0, len(xs) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if xs[mid] <= x:
            lo = mid
        else:
            hi = mid
    return lo


def right_slope(f, x):
    xs, ys = f.xs, f.ys
    i = _segment_right_of(xs, x)
    return (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])


def left_slope(f, x):
    xs, ys = f.xs, f.ys
    i = _segment_right_of(xs, x)
    if xs[i] == x:
        i -= 1
    return (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])


def edge_slopes(f, A):
    """(leading, trailing) slopes of f at the two ends of its orbital A."""
    if A not in orbital_intervals(f):
        raise NotAnOrbitalError(f"{A} is not an orbital of the map")
    return right_slope(f, A.left), left_slope(f, A.right)


def compare_left_order(f, g):
    """Compare right derivatives at the last point where f and g agree from 0."""
    x = ZERO
    fx, gx = f.xs, g.xs
    while x < ONE:
        sf, sg = right_slope(f, x), right_slope(g, x)
        if sf != sg:
            return Order.LESS if sf < sg else Order.GREATER
        nf = fx[_segment_right_of(fx, x) + 1]
        ng = gx[_segment_right_of(gx, x) + 1]
        x = min(nf, ng)
    return Order.EQUAL


def left_order_key(f):
    """Sort key realising the left total order."""
    return _LeftOrderKey(f)


class _LeftOrderKey:
    __slots__ = ("f",)

    def __init__(self, f):
        self.f = f

    def __lt__(self, other):
        return compare_left_order(self.f, other.f) is Order.LESS

    def __eq__(self, other):
        return self.f == other.f


def project(f, A):
    """The map equal to f on A and the identity elsewhere."""
    a, b = A.left, A.right
    if f.evaluate(a) != a or f.evaluate(b) != b:
        raise PreconditionError(f"the map does not preserve {A}")
    nodes = [(ZERO, ZERO)]
    if a > 0:
        nodes.append((a, a))
    nodes.extend((x, y) for x, y in f.nodes if a < x < b)
    if b < 1:
        nodes.append((b, b))
    nodes.append((ONE, ONE))
    return PLMap(nodes)


def support_hull(f):
    """Smallest closed interval containing the support, as an Interval, or None."""
    orbs = orbital_intervals(f)
    if not orbs:
        return None
    return Interval(orbs[0].left, orbs[-1].right)


def support_within(f, A):
    """Hull of the orbitals of f that meet A, clipped to A; None when f is trivial there."""
    pieces = [o for o in orbital_intervals(f) if o.meets(A)]
    if not pieces:
        return None
    return Interval(max(pieces[0].left, A.left), min(pieces[-1].right, A.right))


def supports_disjoint(f, g):
    return all(not a.meets(b) for a in orbital_intervals(f) for b in orbital_intervals(g))
