"""One exact text format for every artifact.

Documents are JSON objects tagged with ``"kind"``; every rational is a
"p/q" string (just "p" for integers). Maps are node lists
``[["0","0"], ["1/2","1/4"], ...]`` and words are written over generator
names, e.g. ``"x0^2 x1^-1"``. ``dumps`` is canonical: dumping what ``loads``
returns reproduces the input byte for byte.

Parse failures raise :class:`ParseError` with the line and column of the
offending value, whether the JSON itself is malformed or a value inside it
(a rational, a node) is not acceptable.
"""

import json
import re

from .certificates import Level, Step, TowerCertificate, rebuild
from .errors import InvalidMapError, ParseError, PLGroupsError
from .geometry import (
    ImbalanceWitness,
    InconsistentWitness,
    Realization,
    RealizationClass,
    SignedOrbital,
    TransitionChainWitness,
)
from .groups import AnalysisConfig, AnalysisReport, DerivedLevel, Verdict, VerdictKind
from .plmap import Direction, Interval, Orbital, PLMap
from .rat import RationalSyntaxError, format_rat, parse_rat
from .towers import Tower
from .words import GroupSpec
from .wreath import ObstructionResult, WreathRealization

_WS = re.compile(r"\s*")


# -- writing ------------------------------------------------------------------


def map_data(f):
    return f.to_strings()


def interval_data(A):
    return [format_rat(A.left), format_rat(A.right)]


def group_data(G):
    return {name: map_data(f) for name, f in G}


def _orbital_data(o):
    if o is None:
        return None
    return {"interval": interval_data(o.interval), "direction": o.direction.value}


def _signed_data(so, G):
    d = {"interval": interval_data(so.orbital), "nodes": map_data(so.signature)}
    if so.witness is not None and G is not None:
        d["word"] = G.format(so.witness)
    return d


def _realization_data(rc):
    return {"tag": rc.tag.value, "leading": _orbital_data(rc.leading),
            "trailing": _orbital_data(rc.trailing)}


def _witness_data(w, G):
    if w is None:
        return None
    if isinstance(w, TransitionChainWitness):
        return {"kind": "transition-chain", "generators": group_data(G),
                "first": _signed_data(w.first, G), "second": _signed_data(w.second, G)}
    kind = "imbalance" if isinstance(w, ImbalanceWitness) else "inconsistent"
    return {"kind": kind, "generators": group_data(G), "word": G.format(w.word),
            "nodes": map_data(G.evaluate(w.word)), "orbital": interval_data(w.orbital),
            "realization": _realization_data(w.realization)}


def _step_data(s):
    d = {"op": s.op, "out": s.out}
    d.update(s.args)
    d["digest"] = s.digest
    if s.note:
        d["note"] = s.note
    return d


def certificate_data(c):
    G = c.generators
    levels = []
    for lv in c.levels:
        entry = {"interval": interval_data(lv.interval), "name": lv.name,
                 "nodes": map_data(c.env[lv.name])}
        if lv.name in c.words:
            entry["word"] = G.format(c.words[lv.name])
        levels.append(entry)
    return {"kind": "certificate", "type": c.kind, "exemplary": c.exemplary_claimed,
            "generators": group_data(G), "steps": [_step_data(s) for s in c.steps],
            "levels": levels, "info": c.info}


def tower_data(T):
    return {"kind": "tower", "levels": [_signed_data(lv, None) for lv in T]}


def _verdict_data(v):
    if v is None:
        return None
    d = {"kind": v.kind.value}
    if v.certificate is not None:
        d["certificate"] = v.certificate
    if v.n is not None:
        d["n"] = v.n
    return d


def report_data(r):
    G = r.group
    cfg = r.config
    return {
        "kind": "report",
        "generators": group_data(G),
        "config": {"L": cfg.L, "tower_height": cfg.tower_height, "element_cap": cfg.element_cap,
                   "commutator_cap": cfg.commutator_cap, "max_derived_level": cfg.max_derived_level},
        "verdict": _verdict_data(r.verdict),
        "orbitals": [interval_data(A) for A in r.orbitals],
        "transition_chain": _witness_data(r.transition_chain, G),
        "imbalance": _witness_data(r.imbalance, G),
        "inconsistent": _witness_data(r.inconsistent, G),
        "depth_lower_bound": r.depth_lower_bound,
        "certificate": certificate_data(r.certificate) if r.certificate is not None else None,
        "derived_series": [
            {"level": d.level, "nontrivial": d.nontrivial,
             "word": G.format(d.witness) if d.witness is not None else None,
             "truncated": d.truncated}
            for d in r.derived_series
        ],
        "cross_check": r.cross_check,
        "notes": list(r.notes),
    }


def wreath_data(W):
    return {"kind": "wreath", "ambient": interval_data(W.ambient),
            "base": group_data(GroupSpec(W.base_generators)) if W.base_generators else {},
            "top": {W.top_generator[0]: map_data(W.top_generator[1])},
            "copies": W.copies_materialized}


def obstruction_data(res):
    return {"kind": "obstruction", "gamma": map_data(res.gamma), "log": res.log}


def to_data(obj):
    """JSON-ready data for any supported value."""
    if isinstance(obj, PLMap):
        return {"kind": "map", "nodes": map_data(obj)}
    if isinstance(obj, Interval):
        return {"kind": "interval", "interval": interval_data(obj)}
    if isinstance(obj, GroupSpec):
        return {"kind": "group", "generators": group_data(obj)}
    if isinstance(obj, TowerCertificate):
        return certificate_data(obj)
    if isinstance(obj, Tower):
        return tower_data(obj)
    if isinstance(obj, AnalysisReport):
        return report_data(obj)
    if isinstance(obj, WreathRealization):
        return wreath_data(obj)
    if isinstance(obj, ObstructionResult):
        return obstruction_data(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    """Canonical text for ``obj`` (or for ready-made data), newline-terminated."""
    data = obj if isinstance(obj, dict) else to_data(obj)
    return json.dumps(data, indent=2, ensure_ascii=True) + "\n"


def write(path, obj):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps(obj))


def dumps_witness(w, G):
    return dumps(_witness_data(w, G))


# -- reading ------------------------------------------------------------------


def _locate(text, path):
    """Offset of the value at ``path`` (keys and indices) in JSON ``text``, or None."""
    dec = json.JSONDecoder()
    i = _WS.match(text, 0).end()
    try:
        for key in path:
            if text[i] == "[":
                i = _WS.match(text, i + 1).end()
                for _ in range(key):
                    _, i = dec.raw_decode(text, i)
                    i = _WS.match(text, i).end() + 1  # the comma
                    i = _WS.match(text, i).end()
            elif text[i] == "{":
                i = _WS.match(text, i + 1).end()
                while True:
                    name, i = dec.raw_decode(text, i)
                    i = _WS.match(text, _WS.match(text, i).end() + 1).end()
                    if name == key:
                        break
                    _, i = dec.raw_decode(text, i)
                    i = _WS.match(text, _WS.match(text, i).end() + 1).end()
            else:
                return None
        return i
    except (ValueError, IndexError, TypeError):
        return None


class _Doc:
    """Parsed JSON plus the source text, for positioned errors."""

    def __init__(self, text):
        self.text = text

    def fail(self, msg, path=()):
        off = _locate(self.text, list(path))
        if off is None:
            raise ParseError(msg)
        line = self.text.count("\n", 0, off) + 1
        col = off - (self.text.rfind("\n", 0, off) + 1) + 1
        raise ParseError(msg, line, col)

    def get(self, data, key, path, kind=None):
        if not isinstance(data, dict) or key not in data:
            self.fail(f"missing field {key!r}", path)
        v = data[key]
        if kind is not None and not isinstance(v, kind):
            self.fail(f"field {key!r} has the wrong type", list(path) + [key])
        return v

    def rat(self, v, path):
        if isinstance(v, bool) or not isinstance(v, (str, int)):
            self.fail("rationals must be \"p/q\" strings", path)
        try:
            return parse_rat(v) if isinstance(v, str) else parse_rat(str(v))
        except RationalSyntaxError as e:
            self.fail(str(e), path)

    def plmap(self, nodes, path):
        if not isinstance(nodes, list):
            self.fail("a map is a list of [x, y] nodes", path)
        pts = []
        for i, node in enumerate(nodes):
            if not isinstance(node, list) or len(node) != 2:
                self.fail(f"node {i} is not an [x, y] pair", list(path) + [i])
            pts.append((self.rat(node[0], list(path) + [i, 0]), self.rat(node[1], list(path) + [i, 1])))
        try:
            return PLMap(pts)
        except InvalidMapError as e:
            m = re.match(r"node (\d+)", str(e))
            where = list(path) + [int(m.group(1))] if m else path
            if m is None and "(1,1)" in str(e) and pts:
                where = list(path) + [len(pts) - 1]
            self.fail(str(e), where)

    def interval(self, v, path):
        if not isinstance(v, list) or len(v) != 2:
            self.fail("an interval is a pair [left, right]", path)
        lo, hi = self.rat(v[0], list(path) + [0]), self.rat(v[1], list(path) + [1])
        try:
            return Interval(lo, hi)
        except PLGroupsError as e:
            self.fail(str(e), path)

    def group(self, v, path):
        if not isinstance(v, dict) or not v:
            self.fail("generators must be a nonempty name -> nodes mapping", path)
        return GroupSpec([(name, self.plmap(nodes, list(path) + [name])) for name, nodes in v.items()])

    def word(self, G, text, path):
        if not isinstance(text, str):
            self.fail("words are strings like \"x0^2 x1^-1\"", path)
        try:
            return G.parse_word(text)
        except (PLGroupsError, ValueError) as e:
            self.fail(str(e), path)


def _orbital(doc, d, path):
    if d is None:
        return None
    A = doc.interval(doc.get(d, "interval", path), list(path) + ["interval"])
    try:
        return Orbital(A, Direction(doc.get(d, "direction", path)))
    except ValueError:
        doc.fail("direction must be \"Left\" or \"Right\"", list(path) + ["direction"])


def _signed(doc, d, path, G=None):
    A = doc.interval(doc.get(d, "interval", path), list(path) + ["interval"])
    f = doc.plmap(doc.get(d, "nodes", path), list(path) + ["nodes"])
    w = doc.word(G, d["word"], list(path) + ["word"]) if G is not None and "word" in d else None
    try:
        return SignedOrbital(A, f, w)
    except PLGroupsError as e:
        doc.fail(str(e), path)


def _witness(doc, d, path):
    if d is None:
        return None
    G = doc.group(doc.get(d, "generators", path), list(path) + ["generators"])
    kind = doc.get(d, "kind", path)
    if kind == "transition-chain":
        try:
            return TransitionChainWitness(_signed(doc, doc.get(d, "first", path), list(path) + ["first"], G),
                                          _signed(doc, doc.get(d, "second", path), list(path) + ["second"], G))
        except PLGroupsError as e:
            doc.fail(str(e), path)
    if kind not in ("imbalance", "inconsistent"):
        doc.fail(f"unknown witness kind {kind!r}", list(path) + ["kind"])
    w = doc.word(G, doc.get(d, "word", path), list(path) + ["word"])
    A = doc.interval(doc.get(d, "orbital", path), list(path) + ["orbital"])
    rd = doc.get(d, "realization", path, dict)
    rp = list(path) + ["realization"]
    try:
        tag = Realization(doc.get(rd, "tag", rp))
    except ValueError:
        doc.fail("unknown realization tag", rp + ["tag"])
    rc = RealizationClass(tag, _orbital(doc, rd.get("leading"), rp + ["leading"]),
                          _orbital(doc, rd.get("trailing"), rp + ["trailing"]))
    cls = ImbalanceWitness if kind == "imbalance" else InconsistentWitness
    return cls(w, A, rc)


def _certificate(doc, d, path=()):
    G = doc.group(doc.get(d, "generators", path), list(path) + ["generators"])
    steps = []
    for i, sd in enumerate(doc.get(d, "steps", path, list)):
        sp = list(path) + ["steps", i]
        if not isinstance(sd, dict):
            doc.fail("a step is an object", sp)
        op = doc.get(sd, "op", sp)
        keys = {"word": ("factors",), "conjugate": ("of", "by"), "commutator": ("a", "b")}.get(op)
        if keys is None:
            doc.fail(f"unknown step kind {op!r}", sp + ["op"])
        args = {k: doc.get(sd, k, sp) for k in keys}
        if op == "word":
            try:
                args["factors"] = [[str(n), int(k)] for n, k in args["factors"]]
            except (TypeError, ValueError):
                doc.fail("factors are [name, exponent] pairs", sp + ["factors"])
        steps.append(Step(op, doc.get(sd, "out", sp, str), args, doc.get(sd, "digest", sp, str),
                          sd.get("note", "")))
    try:
        env, words = rebuild(G, steps)
    except KeyError as e:
        doc.fail(f"step refers to unknown name {e}", list(path) + ["steps"])
    levels, claimed = [], {}
    for i, ld in enumerate(doc.get(d, "levels", path, list)):
        lp = list(path) + ["levels", i]
        A = doc.interval(doc.get(ld, "interval", lp), lp + ["interval"])
        name = doc.get(ld, "name", lp, str)
        if name not in env:
            doc.fail(f"level refers to unknown name {name!r}", lp + ["name"])
        claimed[name] = doc.plmap(doc.get(ld, "nodes", lp), lp + ["nodes"])
        levels.append(Level(A, name))
    return TowerCertificate(G, steps, levels, bool(doc.get(d, "exemplary", path, bool)),
                            doc.get(d, "type", path, str), d.get("info", {}), env, words, claimed)


def _report(doc, d):
    G = doc.group(doc.get(d, "generators", []), ["generators"])
    c = doc.get(d, "config", [], dict)
    cfg = AnalysisConfig(c["L"], c["tower_height"], c["element_cap"], c["commutator_cap"], c["max_derived_level"])
    vd = d.get("verdict")
    verdict = None
    if vd is not None:
        verdict = Verdict(VerdictKind(vd["kind"]), vd.get("certificate"), vd.get("n"))
    series = [
        DerivedLevel(e["level"], e["nontrivial"],
                     doc.word(G, e["word"], ["derived_series", i, "word"]) if e.get("word") is not None else None,
                     e["truncated"])
        for i, e in enumerate(doc.get(d, "derived_series", [], list))
    ]
    cert = d.get("certificate")
    return AnalysisReport(
        cfg,
        [doc.interval(v, ["orbitals", i]) for i, v in enumerate(doc.get(d, "orbitals", [], list))],
        _witness(doc, d.get("transition_chain"), ["transition_chain"]),
        _witness(doc, d.get("imbalance"), ["imbalance"]),
        _witness(doc, d.get("inconsistent"), ["inconsistent"]),
        doc.get(d, "depth_lower_bound", [], int),
        _certificate(doc, cert, ["certificate"]) if cert is not None else None,
        series,
        bool(d.get("cross_check", True)),
        verdict,
        list(d.get("notes", [])),
        G,
    )


def _wreath(doc, d):
    A = doc.interval(doc.get(d, "ambient", []), ["ambient"])
    base = doc.get(d, "base", [], dict)
    base_gens = list(doc.group(base, ["base"])) if base else []
    top = doc.get(d, "top", [], dict)
    if len(top) != 1:
        doc.fail("top must hold exactly one generator", ["top"])
    (tname, tnodes), = top.items()
    W = WreathRealization(base_gens, (tname, doc.plmap(tnodes, ["top", tname])), A,
                          doc.get(d, "copies", [], int))
    W.copies = [W.copy(j) for j in range(W.copies_materialized)]
    return W


def from_data(data, text=None):
    doc = _Doc(text if text is not None else json.dumps(data, indent=2))
    if isinstance(data, list):  # a bare node list is a map
        return doc.plmap(data, [])
    if not isinstance(data, dict):
        doc.fail("expected a JSON object")
    kind = doc.get(data, "kind", [], str)
    if kind == "map":
        return doc.plmap(doc.get(data, "nodes", []), ["nodes"])
    if kind == "interval":
        return doc.interval(doc.get(data, "interval", []), ["interval"])
    if kind == "group":
        return doc.group(doc.get(data, "generators", []), ["generators"])
    if kind == "certificate":
        return _certificate(doc, data)
    if kind == "tower":
        levels = [_signed(doc, lv, ["levels", i]) for i, lv in enumerate(doc.get(data, "levels", [], list))]
        try:
            return Tower(levels)
        except PLGroupsError as e:
            doc.fail(str(e), ["levels"])
    if kind == "report":
        return _report(doc, data)
    if kind == "wreath":
        return _wreath(doc, data)
    if kind == "obstruction":
        return ObstructionResult(doc.plmap(doc.get(data, "gamma", []), ["gamma"]), doc.get(data, "log", [], list))
    if kind in ("imbalance", "inconsistent", "transition-chain"):
        return _witness(doc, data, [])
    doc.fail(f"unknown kind {kind!r}", ["kind"])


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    return from_data(data, text)


def read(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
