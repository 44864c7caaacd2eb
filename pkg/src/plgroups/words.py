"""Words in named generators, generating sets, and ball enumeration."""

from collections import OrderedDict

from .errors import DomainError, ResourceError
from .plmap import IDENTITY, PLMap, power

DEFAULT_ELEMENT_CAP = 50_000


class Word:
    """Product of generator powers, read left to right (leftmost acts first).

    ``letters`` is a tuple of (generator index, nonzero exponent) with adjacent
    indices distinct.
    """

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        out = []
        for idx, exp in letters:
            idx, exp = int(idx), int(exp)
            if exp == 0:
                continue
            if out and out[-1][0] == idx:
                e = out[-1][1] + exp
                if e:
                    out[-1] = (idx, e)
                else:
                    out.pop()
            else:
                out.append((idx, exp))
        self.letters = tuple(out)

    @classmethod
    def gen(cls, idx, exp=1):
        return cls(((idx, exp),))

    def __len__(self):
        return sum(abs(e) for _, e in self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __mul__(self, other):
        return Word(self.letters + other.letters)

    def inverse(self):
        return Word((i, -e) for i, e in reversed(self.letters))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** -n
        return Word(self.letters * n)

    def conjugate(self, by):
        return by.inverse() * self * by

    def commutator(self, other):
        return self.inverse() * other.inverse() * self * other

    def expanded(self):
        """Unit letters: each (i, e) becomes |e| copies of (i, sign e)."""
        out = []
        for i, e in self.letters:
            s = 1 if e > 0 else -1
            out.extend([(i, s)] * abs(e))
        return out

    def sort_key(self):
        # shortlex over unit letters; (i, +1) precedes (i, -1)
        return (len(self), [(i, 0 if s > 0 else 1) for i, s in self.expanded()])

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def format(self, names):
        if not self.letters:
            return "1"
        parts = []
        for i, e in self.letters:
            parts.append(names[i] if e == 1 else f"{names[i]}^{e}")
        return " ".join(parts)

    def to_json(self):
        return [[i, e] for i, e in self.letters]

    @classmethod
    def from_json(cls, data):
        return cls((int(i), int(e)) for i, e in data)

    def __repr__(self):
        return f"Word({list(self.letters)})"


class GroupSpec:
    """Ordered, named generating set of a subgroup of PL+(I)."""

    def __init__(self, generators):
        gens = OrderedDict()
        for name, f in generators:
            if not isinstance(name, str) or not name:
                raise DomainError("generator names must be nonempty strings")
            if name in gens:
                raise DomainError(f"duplicate generator name {name!r}")
            if not isinstance(f, PLMap):
                raise DomainError(f"generator {name!r} is not a PLMap")
            gens[name] = f
        if not gens:
            raise DomainError("a group needs at least one generator")
        self.names = tuple(gens)
        self.maps = tuple(gens.values())

    @classmethod
    def of(cls, *maps, prefix="g"):
        return cls([(f"{prefix}{i}", f) for i, f in enumerate(maps)])

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(zip(self.names, self.maps))

    def __eq__(self, other):
        return isinstance(other, GroupSpec) and self.names == other.names and self.maps == other.maps

    def index(self, name):
        return self.names.index(name)

    def evaluate(self, word):
        result = IDENTITY
        for i, e in word.letters:
            result = result * power(self.maps[i], e)
        return result

    def format(self, word):
        return word.format(self.names)

    def parse_word(self, text):
        """Inverse of :meth:`format`: "a b^-2 a" style, "1" for the empty word."""
        text = text.strip()
        if text in ("", "1"):
            return Word()
        letters = []
        for tok in text.split():
            name, _, exp = tok.partition("^")
            if name not in self.names:
                raise DomainError(f"unknown generator {name!r} in word {text!r}")
            letters.append((self.index(name), int(exp) if exp else 1))
        return Word(letters)

    def __repr__(self):
        return f"GroupSpec({list(self.names)})"


class Ball(list):
    """Result of :func:`enumerate_elements`: (Word, PLMap) pairs.

    ``complete_radius`` is the largest length whose sphere was fully explored;
    ``truncated`` records whether the element cap stopped the search early.
    """

    truncated = False
    complete_radius = 0


def _letters(n):
    for i in range(n):
        yield i, 1
        yield i, -1


def enumerate_elements(G, L, cap=DEFAULT_ELEMENT_CAP, truncate=False):
    """Distinct elements of the ball of radius L, each with its shortlex-least word.

    Breadth-first: the identity first, then spheres of increasing radius.
    Within a sphere, parents are taken in discovery order and letters in the
    order (0,+1), (0,-1), (1,+1), ..., which makes the first word found for an
    element its shortlex-least word. Exceeding ``cap`` raises
    :class:`ResourceError` unless ``truncate`` is set, in which case the
    partial ball is returned with ``truncated=True``.
    """
    if L < 0:
        raise DomainError("word length bound must be non-negative")
    steps = [(i, s, power(G.maps[i], s)) for i, s in _letters(len(G))]
    seen = {IDENTITY: Word()}
    out = Ball([(Word(), IDENTITY)])
    frontier = [(Word(), IDENTITY)]
    for radius in range(1, L + 1):
        nxt = []
        for w, f in frontier:
            last = w.letters[-1] if w.letters else None
            for i, s, g in steps:
                if last is not None and last[0] == i and (last[1] > 0) != (s > 0):
                    continue
                h = f * g
                if h in seen:
                    continue
                nw = Word(w.letters + ((i, s),))
                seen[h] = nw
                out.append((nw, h))
                nxt.append((nw, h))
                if len(out) > cap:
                    if truncate:
                        out.pop()
                        out.truncated = True
                        out.complete_radius = radius - 1
                        return out
                    raise ResourceError(
                        f"more than {cap} elements within word length {radius}", partial=out
                    )
        out.complete_radius = radius
        frontier = nxt
        if not frontier:
            out.complete_radius = L
            break
    return out
