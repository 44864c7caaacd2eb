"""Derived-series sampling, Thompson generators and the solvability report."""

import enum
from dataclasses import dataclass, field
from typing import Optional

from .builders import depth_lower_bound
from .errors import DomainError, ResourceError
from .geometry import (
    detect_transition_chain,
    group_orbitals,
    imbalance_search,
    inconsistent_search,
)
from .plmap import Interval, PLMap, conjugate, orbital_intervals
from .rat import Rat
from .words import DEFAULT_ELEMENT_CAP, GroupSpec, Word, enumerate_elements
from .wreath import rescale_into

DEFAULT_COMMUTATOR_CAP = 200_000
DEFAULT_MAX_WORD_LENGTH = 8


class DerivedSample(list):
    """Non-identity maps sampled from one derived level.

    ``truncated`` is set when a cap cut the sample (or its inputs) short;
    ``level_sizes[i]`` is the size of the level-(i+1) sample that was built
    on the way (for lower levels, the prefix the next layer actually read).
    """

    truncated = False
    level_sizes = ()

    def __init__(self, maps=(), words=(), sources=()):
        super().__init__(maps)
        self._words = list(words)
        self._sources = list(sources)

    def word(self, index, level=None):
        """Word in the generators for entry ``index`` of the given level (default: last)."""
        level = len(self._sources) if level is None else level
        if level == 0:
            return self._words[index]
        i, j = self._sources[level - 1][index]
        return self.word(i, level - 1).commutator(self.word(j, level - 1))


def _disjoint(a, b):
    oa, ob = orbital_intervals(a), orbital_intervals(b)
    i = j = 0
    while i < len(oa) and j < len(ob):
        if oa[i].meets(ob[j]):
            return False
        if oa[i].right <= ob[j].left:
            i += 1
        else:
            j += 1
    return True


def commutator_layer(maps, cap=DEFAULT_COMMUTATOR_CAP, keep=None):
    """Distinct non-identity [a_i, a_j], i < j, in triangular order.

    At most ``cap`` pairs are examined; the result stops growing at ``keep``
    maps. Returns (maps, sources, truncated) with sources the index pairs.
    """
    out = {}
    count = 0
    n = len(maps)
    for j in range(n):
        b = maps[j]
        for i in range(j):
            if count >= cap:
                return list(out), list(out.values()), True
            count += 1
            a = maps[i]
            if _disjoint(a, b):
                continue
            ab, ba = a * b, b * a
            if ab == ba:
                continue
            c = ba.inverse() * ab
            if c not in out:
                out[c] = (i, j)
                if keep is not None and len(out) >= keep:
                    return list(out), list(out.values()), count < n * (n - 1) // 2
    return list(out), list(out.values()), False


def pairs_prefix(cap):
    """Least m with m(m-1)/2 >= cap: triangular order never reads past map m."""
    m = 1
    while m * (m - 1) // 2 < cap:
        m += 1
    return m


def derived_sample(G, level, L, element_cap=DEFAULT_ELEMENT_CAP,
                   commutator_cap=DEFAULT_COMMUTATOR_CAP, keep=None, strict=False):
    """Sample of the level-th derived subgroup, identities removed.

    Level 1 takes commutators of pairs from the ball of radius L; level i
    takes commutators of pairs from the level i-1 sample. Caps truncate the
    sample (``truncated`` is set); with ``strict`` they raise instead.
    ``keep`` bounds the size of every level's sample.
    """
    if level < 1:
        raise DomainError("level must be at least 1")
    ball = enumerate_elements(G, L, cap=element_cap, truncate=not strict)
    cur = [f for _, f in ball]
    truncated = ball.truncated
    sizes, sources = [], []
    for i in range(level):
        keep_i = element_cap if keep is None else min(keep, element_cap)
        if i + 1 < level:
            # the next layer reads only the maps entering its first `cap` pairs
            keep_i = min(keep_i, pairs_prefix(commutator_cap))
        cur, src, cut = commutator_layer(cur, commutator_cap, keep_i)
        sources.append(src)
        if cut and strict:
            raise ResourceError(f"derived sampling hit the cap ({commutator_cap} pairs or {keep_i} maps)")
        truncated |= cut
        sizes.append(len(cur))
        if not cur:
            break
    sizes += [0] * (level - len(sizes))
    out = DerivedSample(cur, [w for w, _ in ball], sources)
    out.truncated = truncated
    out.level_sizes = tuple(sizes)
    return out


# -- Thompson groups F_n -----------------------------------------------------------


def _x0(n):
    n = Rat(n)
    return PLMap([(0, 0), ((n - 1) / n, (n - 1) / n ** 2), ((n * n - n + 1) / n ** 2, 1 / n), (1, 1)])


def f_element(n, m):
    """x_m of the infinite generating set of F_n.

    x_0 has slopes 1/n, 1, n; writing m = q(n-1) + i with 1 <= i <= n-1,
    x_m is x_0 squeezed affinely onto [1 - (n-i)/n^(q+1), 1].
    """
    if m == 0:
        return _x0(n)
    q, i = divmod(m - 1, n - 1)
    i += 1
    left = 1 - Rat(n - i, n ** (q + 1))
    return rescale_into(_x0(n), Interval(left, 1))


def f_generators(n=2):
    """Generators x_0, ..., x_{n-1} of F_n (for n = 2, the standard x0, x1)."""
    if int(n) != n or n < 2:
        raise DomainError("F_n needs an integer n >= 2")
    n = int(n)
    return GroupSpec([(f"x{i}", f_element(n, i)) for i in range(n)])


def f_relators():
    """The two defining relators of F as words in x0, x1, read left to right.

    Products act on the right (x0 x1 applies x0 first), so the familiar
    presentation [x0 x1^-1, x0^-1 x1 x0], [x0 x1^-1, x0^-2 x1 x0^2], written
    for composition of functions, appears here mirrored.
    """
    x0, x1 = Word.gen(0), Word.gen(1)
    a = x1.inverse() * x0
    return [a.commutator(x1.conjugate(x0.inverse())), a.commutator(x1.conjugate(x0 ** -2))]


def f_relator_failures(n, upto=None):
    """Pairs (j, i), j < i, where x_j x_i x_j^-1 != x_{i+n-1}; empty when all hold."""
    upto = upto if upto is not None else 2 * n
    bad = []
    for i in range(1, upto):
        for j in range(i):
            lhs = conjugate(f_element(n, i), f_element(n, j).inverse())
            if lhs != f_element(n, i + n - 1):
                bad.append((j, i))
    return bad


# -- analysis ----------------------------------------------------------------


class VerdictKind(enum.Enum):
    NONSOLVABLE_CERTIFIED = "NonsolvableCertified"
    DERIVED_LENGTH_AT_LEAST = "DerivedLengthAtLeast"
    INCONCLUSIVE_UP_TO = "InconclusiveUpTo"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    certificate: Optional[str] = None  # imbalance / transition-chain / inconsistent
    n: Optional[int] = None

    def __str__(self):
        if self.kind is VerdictKind.NONSOLVABLE_CERTIFIED:
            return f"NonsolvableCertified({self.certificate})"
        return f"{self.kind.value}({self.n})"


@dataclass
class AnalysisConfig:
    L: int = 4
    tower_height: int = 4
    element_cap: int = DEFAULT_ELEMENT_CAP
    commutator_cap: int = DEFAULT_COMMUTATOR_CAP
    max_derived_level: int = 4

    def __post_init__(self):
        if self.L < 1 or self.tower_height < 1:
            raise DomainError("bounds must be positive")
        if self.L > DEFAULT_MAX_WORD_LENGTH:
            raise DomainError(f"word length bound is capped at {DEFAULT_MAX_WORD_LENGTH}")


@dataclass
class DerivedLevel:
    level: int
    nontrivial: bool
    witness: Optional[Word]
    truncated: bool


@dataclass
class AnalysisReport:
    config: AnalysisConfig
    orbitals: list
    transition_chain: object = None
    imbalance: object = None
    inconsistent: object = None
    depth_lower_bound: int = 0
    certificate: object = None
    derived_series: list = field(default_factory=list)
    cross_check: bool = True
    verdict: Verdict = None
    notes: list = field(default_factory=list)
    group: Optional[GroupSpec] = None


def analyze(G, config=None):
    """Run every search and assemble a report; resource limits degrade the verdict."""
    cfg = config or AnalysisConfig()
    rep = AnalysisReport(cfg, group_orbitals(G), group=G)
    try:
        rep.transition_chain = detect_transition_chain(G, cfg.L, cfg.element_cap)
        rep.imbalance = imbalance_search(G, cfg.L, cfg.element_cap)
        rep.inconsistent = inconsistent_search(G, cfg.L, cfg.element_cap)
        n, cert = depth_lower_bound(G, cfg.L, cfg.tower_height, cfg.element_cap)
        rep.depth_lower_bound, rep.certificate = n, cert
        rep.derived_series = _derived_levels(G, cfg, n)
    except ResourceError as e:
        rep.verdict = Verdict(VerdictKind.INCONCLUSIVE_UP_TO, n=cfg.L)
        rep.notes.append(f"resource limit: {e}")
        return rep
    for lv in rep.derived_series:
        if lv.level < rep.depth_lower_bound and not lv.nontrivial:
            rep.cross_check = False
            rep.notes.append(f"derived level {lv.level} has no sampled witness below the tower height")
    if rep.imbalance is not None:
        rep.verdict = Verdict(VerdictKind.NONSOLVABLE_CERTIFIED, "imbalance")
    elif rep.transition_chain is not None:
        rep.verdict = Verdict(VerdictKind.NONSOLVABLE_CERTIFIED, "transition-chain")
    elif rep.inconsistent is not None:
        rep.verdict = Verdict(VerdictKind.NONSOLVABLE_CERTIFIED, "inconsistent")
    else:
        top = max([lv.level + 1 for lv in rep.derived_series if lv.nontrivial], default=0)
        rep.verdict = Verdict(VerdictKind.DERIVED_LENGTH_AT_LEAST, n=max(rep.depth_lower_bound, top))
    return rep


def _derived_levels(G, cfg, n):
    top = min(max(n, 1), cfg.max_derived_level)
    sample = derived_sample(G, top, cfg.L, cfg.element_cap, cfg.commutator_cap)
    out = []
    for level, size in enumerate(sample.level_sizes, 1):
        w = sample.word(0, level) if size else None
        out.append(DerivedLevel(level, size > 0, w, sample.truncated))
    return out
