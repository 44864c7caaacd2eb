"""Pure-Python node kernel.

Mirrors the API of the compiled ``_ckernel`` extension exactly; it is used
when the extension is unavailable or when ``PLGROUPS_KERNEL=python`` is set.
A map is stored as two parallel tuples of exact rationals, ``xs`` and
``ys``, starting at (0, 0) and ending at (1, 1).
"""

from .rat import Rat, as_rat

ZERO = Rat(0)
ONE = Rat(1)

NAME = "python"


def _collinear(x0, y0, x1, y1, x2, y2):
    return (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0)


class Nodes:
    """Immutable breakpoint list of a PL homeomorphism of [0, 1]."""

    __slots__ = ("xs", "ys", "_hash")

    def __init__(self, xs, ys):
        self.xs = xs
        self.ys = ys
        self._hash = None

    @classmethod
    def from_sequences(cls, xs, ys, canonical=True):
        xs = [as_rat(v) for v in xs]
        ys = [as_rat(v) for v in ys]
        if canonical:
            return cls(tuple(xs), tuple(ys))
        out_x = [xs[0]]
        out_y = [ys[0]]
        for x, y in zip(xs[1:], ys[1:]):
            if len(out_x) >= 2 and _collinear(out_x[-2], out_y[-2], out_x[-1], out_y[-1], x, y):
                out_x[-1] = x
                out_y[-1] = y
            else:
                out_x.append(x)
                out_y.append(y)
        return cls(tuple(out_x), tuple(out_y))

    @classmethod
    def identity(cls):
        return cls((ZERO, ONE), (ZERO, ONE))

    def __len__(self):
        return len(self.xs)

    def __eq__(self, other):
        if not isinstance(other, Nodes):
            return NotImplemented
        return self.xs == other.xs and self.ys == other.ys

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.xs, self.ys))
        return self._hash

    def is_identity(self):
        return len(self.xs) == 2

    def inverse(self):
        return Nodes(self.ys, self.xs)

    def compose(self, other):
        """Apply ``self`` first, then ``other``."""
        fx, fy, gx, gy = self.xs, self.ys, other.xs, other.ys
        xs = [ZERO]
        ys = [ZERO]
        i = j = 1
        nf = len(fx)
        while i < nf:
            a = fy[i]
            b = gx[j]
            if a < b:
                x = fx[i]
                z = gy[j - 1] + (a - gx[j - 1]) * (gy[j] - gy[j - 1]) / (b - gx[j - 1])
                i += 1
            elif b < a:
                x = fx[i - 1] + (b - fy[i - 1]) * (fx[i] - fx[i - 1]) / (a - fy[i - 1])
                z = gy[j]
                j += 1
            else:
                x = fx[i]
                z = gy[j]
                i += 1
                j += 1
            n = len(xs)
            if n >= 2 and _collinear(xs[n - 2], ys[n - 2], xs[n - 1], ys[n - 1], x, z):
                xs[n - 1] = x
                ys[n - 1] = z
            else:
                xs.append(x)
                ys.append(z)
        return Nodes(tuple(xs), tuple(ys))

    def _segment(self, x):
        # index i with xs[i] <= x < xs[i+1]; the last segment also owns x = 1
        xs = self.xs
        lo, hi = 0, len(xs) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if xs[mid] <= x:
                lo = mid
            else:
                hi = mid
        return lo

    def evaluate(self, x):
        x = as_rat(x)
        xs, ys = self.xs, self.ys
        i = self._segment(x)
        if xs[i] == x:
            return ys[i]
        return ys[i] + (x - xs[i]) * (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])

    def escape(self, x, bound, limit):
        """Smallest n >= 1 with x f^n > bound, or -1 if none within ``limit``."""
        p = as_rat(x)
        bound = as_rat(bound)
        for n in range(1, limit + 1):
            p = self.evaluate(p)
            if p > bound:
                return n
        return -1
