"""Replayable construction logs for towers.

A :class:`Recorder` keeps an environment of named maps, seeded with the
generators. Every step defines one new name from existing ones and stores a
digest of the result, so a serialized log can be re-executed and compared
step by step. Steps:

``word``        out = e1^k1 e2^k2 ... for environment names e_i
``conjugate``   out = of^by
``commutator``  out = [a, b]

Levels of the final tower reference environment names.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .errors import PreconditionError, VerificationError
from .geometry import SignedOrbital
from .plmap import IDENTITY, Interval, PLMap, commutator, conjugate, orbitals_of_map, power
from .towers import Tower, is_exemplary
from .words import GroupSpec, Word


def reflect(f):
    """Conjugate by x -> 1 - x; an automorphism of PL+(I) of order two."""
    nodes = [(1 - x, 1 - y) for x, y in reversed(f.nodes)]
    return PLMap(nodes)


def reflect_interval(A):
    return Interval(1 - A.right, 1 - A.left)


class Frame:
    """Coordinates a builder works in; ``to_work``/``from_work`` are inverse."""

    reflected = False

    def to_work(self, f):
        return f

    def interval_to_work(self, A):
        return A

    def interval_from_work(self, A):
        return A


class Reflected(Frame):
    reflected = True

    def to_work(self, f):
        return reflect(f)

    def interval_to_work(self, A):
        return reflect_interval(A)

    interval_from_work = interval_to_work


@dataclass
class Step:
    op: str
    out: str
    args: dict
    digest: str
    note: str = ""


class Level(NamedTuple):
    interval: Interval
    name: str


@dataclass
class TowerCertificate:
    generators: GroupSpec
    steps: list
    levels: list
    exemplary_claimed: bool = False
    kind: str = "generic"
    info: dict = field(default_factory=dict)
    env: dict = field(default_factory=dict, repr=False)
    words: dict = field(default_factory=dict, repr=False)
    # level maps as read from a file; replay checks them against the log
    claimed: dict = field(default_factory=dict, repr=False)

    @property
    def tower(self):
        return Tower(
            SignedOrbital(lv.interval, self.env[lv.name], self.words.get(lv.name))
            for lv in self.levels
        )

    @property
    def height(self):
        return len(self.levels)

    @property
    def log(self):
        """Human-readable construction steps."""
        return [_describe(s) for s in self.steps]

    def recorder(self):
        """A recorder continuing from the end of this certificate."""
        rec = Recorder(self.generators)
        rec.steps = list(self.steps)
        rec.env = dict(self.env)
        rec.words = dict(self.words)
        return rec


def _describe(s):
    if s.op == "word":
        body = " ".join(n if k == 1 else f"{n}^{k}" for n, k in s.args["factors"]) or "1"
    elif s.op == "conjugate":
        body = f"{s.args['of']}^({s.args['by']})"
    else:
        body = f"[{s.args['a']}, {s.args['b']}]"
    text = f"{s.out} = {body}"
    return f"{text}  -- {s.note}" if s.note else text


def _apply(op, args, env):
    if op == "word":
        f = IDENTITY
        for name, k in args["factors"]:
            f = f * power(env[name], k)
        return f
    if op == "conjugate":
        return conjugate(env[args["of"]], env[args["by"]])
    if op == "commutator":
        return commutator(env[args["a"]], env[args["b"]])
    raise VerificationError(f"unknown step kind {op!r}")


def _apply_word(op, args, words):
    if op == "word":
        w = Word()
        for name, k in args["factors"]:
            w = w * (words[name] ** k)
        return w
    if op == "conjugate":
        return words[args["of"]].conjugate(words[args["by"]])
    return words[args["a"]].commutator(words[args["b"]])


class Recorder:
    """Records named construction steps over a generating set.

    Maps handed back to the caller are in the recorder's working frame; the
    log itself always lives in the generators' own coordinates.
    """

    def __init__(self, G, frame=None):
        self.generators = G
        self.frame = frame or Frame()
        self.env = {name: f for name, f in G}
        self.words = {name: Word.gen(i) for i, name in enumerate(G.names)}
        self.steps = []
        self._work = {}

    def with_frame(self, frame):
        rec = Recorder.__new__(Recorder)
        rec.generators = self.generators
        rec.frame = frame
        rec.env = self.env
        rec.words = self.words
        rec.steps = self.steps
        rec._work = {}
        return rec

    def fresh(self, stem):
        if stem not in self.env:
            return stem
        i = 1
        while f"{stem}_{i}" in self.env:
            i += 1
        return f"{stem}_{i}"

    def get(self, name):
        """The map named ``name`` in working coordinates."""
        f = self._work.get(name)
        if f is None:
            f = self.frame.to_work(self.env[name])
            self._work[name] = f
        return f

    def _record(self, op, out, args, note):
        out = self.fresh(out)
        for ref in _refs(op, args):
            if ref not in self.env:
                raise PreconditionError(f"step refers to unknown name {ref!r}")
        f = _apply(op, args, self.env)
        self.env[out] = f
        self.words[out] = _apply_word(op, args, self.words)
        self.steps.append(Step(op, out, args, f.digest(), note))
        return out

    def word(self, out, factors, note=""):
        factors = [[n, int(k)] for n, k in factors if int(k) != 0]
        return self._record("word", out, {"factors": factors}, note)

    def power(self, out, name, k, note=""):
        return self.word(out, [(name, k)], note)

    def conjugate(self, out, of, by, note=""):
        return self._record("conjugate", out, {"of": of, "by": by}, note)

    def commutator(self, out, a, b, note=""):
        return self._record("commutator", out, {"a": a, "b": b}, note)

    def generator_word(self, out, word, names=None, note=""):
        """Record a Word whose letters index ``names`` (defaults to the generators)."""
        names = names or self.generators.names
        return self.word(out, [(names[i], e) for i, e in word.letters], note)

    def finish(self, levels, exemplary=False, kind="generic", info=None):
        """``levels`` are (working-frame Interval, name) pairs, smallest first."""
        lv = [Level(self.frame.interval_from_work(A), name) for A, name in levels]
        cert = TowerCertificate(
            self.generators, list(self.steps), lv, exemplary, kind, dict(info or {}),
            dict(self.env), dict(self.words),
        )
        cert.tower  # validates nesting and orbitals
        return cert


def rebuild(G, steps):
    """(env, words) after executing ``steps`` over G, without digest checks."""
    env = {name: f for name, f in G}
    words = {name: Word.gen(i) for i, name in enumerate(G.names)}
    for s in steps:
        env[s.out] = _apply(s.op, s.args, env)
        words[s.out] = _apply_word(s.op, s.args, words)
    return env, words


def _refs(op, args):
    if op == "word":
        return [n for n, _ in args["factors"]]
    if op == "conjugate":
        return [args["of"], args["by"]]
    return [args["a"], args["b"]]


class ReplayResult(NamedTuple):
    ok: bool
    message: str
    step: Optional[int] = None
    tower: Optional[Tower] = None


def replay(cert):
    """Re-execute a certificate's log from its generators and re-check its claims."""
    env = {name: f for name, f in cert.generators}
    for i, s in enumerate(cert.steps):
        try:
            f = _apply(s.op, s.args, env)
        except KeyError as e:
            return ReplayResult(False, f"step {i} ({s.out}): unknown name {e}", i)
        if f.digest() != s.digest:
            return ReplayResult(False, f"step {i} ({s.out}): digest mismatch", i)
        env[s.out] = f
    levels = []
    for lv in cert.levels:
        g = env.get(lv.name)
        if g is None:
            return ReplayResult(False, f"level refers to unknown name {lv.name!r}")
        if lv.interval not in [o.interval for o in orbitals_of_map(g)]:
            return ReplayResult(False, f"{lv.interval} is not an orbital of {lv.name}")
        if lv.name in cert.claimed and cert.claimed[lv.name] != g:
            return ReplayResult(False, f"level map {lv.name!r} differs from the one its log produces")
        levels.append(SignedOrbital(lv.interval, g))
    try:
        tower = Tower(levels)
    except PreconditionError as e:
        return ReplayResult(False, f"levels do not form a tower: {e}")
    if cert.exemplary_claimed:
        rep = is_exemplary(tower)
        if not rep:
            v = rep.violations[0]
            return ReplayResult(False, f"tower is not exemplary: level {v.lower} {v.rule} of level {v.upper}")
    return ReplayResult(True, f"verified height-{tower.height} tower", None, tower)


def certificate_for_tower(G, T, names=None):
    """Certificate whose levels are words in G: each level's witness word is logged."""
    rec = Recorder(G)
    levels = []
    for i, lv in enumerate(T):
        if lv.witness is None:
            raise PreconditionError("every level needs a witness word")
        name = rec.generator_word(f"t{i + 1}", lv.witness, note="tower level from word search")
        levels.append((lv.orbital, name))
    return rec.finish(levels, exemplary=False, kind="search")


def certificate_from_signatures(T, exemplary=None):
    """Certificate for a bare tower; its generators are the signatures themselves."""
    G = GroupSpec([(f"s{i + 1}", lv.signature) for i, lv in enumerate(T)])
    rec = Recorder(G)
    if exemplary is None:
        exemplary = bool(is_exemplary(T))
    return rec.finish([(lv.orbital, f"s{i + 1}") for i, lv in enumerate(T)], exemplary, "given")
