"""Constructive towers: the derivation step and the three exemplary-tower
builders, plus the depth lower bound that combines them with search.

Builders work on finite prefixes: a request for height k materializes k
consecutive levels of the (conceptually bi-infinite) tower. Every exponent
search iterates upward from 1 and gives up past ``limit``.
"""

from dataclasses import dataclass

from .certificates import (
    Frame,
    Recorder,
    Reflected,
    TowerCertificate,
    certificate_for_tower,
    certificate_from_signatures,
    reflect,
    replay,
)
from .errors import PreconditionError, ResourceError
from .geometry import (
    DEFAULT_ESCAPE_LIMIT,
    ImbalanceWitness,
    InconsistentWitness,
    Realization,
    SignedOrbital,
    TransitionChainWitness,
    classify_realization,
    detect_transition_chain,
    find_mover,
    group_orbitals,
    imbalance_search,
    inconsistent_search,
)
from .plmap import Direction, Interval, orbitals_of_map
from .rat import format_rat
from .towers import Tower, fundamental_exponent, is_exemplary, max_tower, signed_orbitals_up_to
from .words import DEFAULT_ELEMENT_CAP, GroupSpec


def _support_in(f, A):
    """Closed hull (lo, hi) of the orbitals of f meeting A, clipped to A; None if none."""
    orbs = [o.interval for o in orbitals_of_map(f) if o.interval.meets(A)]
    if not orbs:
        return None
    return max(orbs[0].left, A.left), min(orbs[-1].right, A.right)


def _orbital_with_left(f, x):
    for o in orbitals_of_map(f):
        if o.interval.left == x:
            return o
    return None


def _orbital_around(f, lo, hi):
    for o in orbitals_of_map(f):
        if o.interval.left < lo and hi < o.interval.right:
            return o
    return None


def _escape(f, x, bound, limit, what):
    n = f.escape(x, bound, limit)
    if n < 0:
        raise ResourceError(f"exponent search for {what} exceeded {limit}")
    return n


def _escape_below(f, x, bound, limit, what):
    # least n >= 1 with x f^n < bound, via the reflection x -> 1 - x
    return _escape(reflect(f), 1 - x, 1 - bound, limit, what)


def _subgroup(rec, names):
    return GroupSpec([(n, rec.get(n)) for n in names])


# -- derivation ---------------------------------------------------------------


def derive_tower(T, limit=DEFAULT_ESCAPE_LIMIT):
    """Height n-1 tower of commutators from an exemplary height-n tower.

    Signatures are first normalized to move right on their orbitals. For
    i >= 2, n_i is the least exponent for which the part of supp(g_{i-1})
    inside A_i fits one fundamental domain of g_i^{n_i}; with h_1 = g_1 and
    h_i = g_i^{n_i}, level i of the result is (A_i, [h_i, h_{i+1}]).

    ``T`` may be a :class:`Tower` or a :class:`TowerCertificate`; a
    certificate's log is continued so the result replays from the original
    generators.
    """
    if isinstance(T, TowerCertificate):
        cert = T
    else:
        cert = certificate_from_signatures(T, exemplary=False)
    tower = cert.tower
    if tower.height < 2:
        raise PreconditionError("derivation needs a tower of height at least 2")
    rep = is_exemplary(tower)
    if not rep:
        v = rep.violations[0]
        raise PreconditionError(f"tower is not exemplary: level {v.lower} {v.rule} of level {v.upper}")
    rec = cert.recorder()
    names = []
    for i, (lv, level) in enumerate(zip(cert.levels, tower)):
        name = lv.name
        if level.signature.is_identity():
            raise PreconditionError("identity signature")
        if level.direction is Direction.LEFT:
            name = rec.power(f"{name}_r", name, -1, note="inverted to move right on its orbital")
        names.append(name)
    hs = [names[0]]
    exps = [1]
    for i in range(1, tower.height):
        A = tower[i].orbital
        S = _support_in(rec.env[names[i - 1]], A)
        n = fundamental_exponent(rec.env[names[i]], A, S, limit)
        if n < 0:
            raise ResourceError(f"fundamental-domain exponent for level {i + 1} exceeded {limit}")
        exps.append(n)
        if n == 1:
            hs.append(names[i])
        else:
            hs.append(rec.power(f"{names[i]}_p", names[i], n, note=f"n_{i + 1} = {n}"))
    levels = []
    for i in range(tower.height - 1):
        v = rec.commutator(f"d{i + 1}", hs[i], hs[i + 1], note=f"v_{i + 1} = [h_{i + 1}, h_{i + 2}]")
        A = tower[i].orbital
        if A not in [o.interval for o in orbitals_of_map(rec.env[v])]:
            raise PreconditionError(f"{A} is not an orbital of the derived signature {v}")
        levels.append((A, v))
    derived = Tower(SignedOrbital(A, rec.env[v]) for A, v in levels)
    return rec.finish(
        levels,
        exemplary=bool(is_exemplary(derived)),
        kind="derived",
        info={"exponents": exps, "source_kind": cert.kind},
    )


# -- imbalance ---------------------------------------------------------------


def _imbalance_trailing(rec, names, A, g0, k, limit):
    """Levels (D_j, v_j), j < k, from g0 realizing only the right end of A.

    Everything is in the recorder's working frame.
    """
    f0 = rec.get(g0)
    inside = [o for o in orbitals_of_map(f0) if A.contains_interval(o.interval)]
    if not inside or inside[-1].interval.right != A.right or inside[0].interval.left == A.left:
        raise PreconditionError("witness does not realize exactly the trailing end")
    if inside[-1].direction is Direction.LEFT:
        g0 = rec.power("g0", g0, -1, note="inverted to move right on B_0")
        f0 = rec.get(g0)
    a0 = inside[-1].interval.left
    w = (A.left + inside[0].interval.left) / 2
    G = _subgroup(rec, names)
    word, alpha_map = find_mover(G, A, w, a0, limit)
    alpha = rec.generator_word("alpha", word, names, note=f"mover: w = {format_rat(w)} past a_0 = {format_rat(a0)}")
    r = rec.get(alpha).evaluate(w)
    alpha_inv = rec.power("alpha_inv", alpha, -1)
    gm1 = rec.conjugate("g_m1", g0, alpha, note=f"support right of r = {format_rat(r)}")
    levels = []
    h = g0
    info = {"w": format_rat(w), "a0": format_rat(a0), "r": format_rat(r), "m": []}
    prev = None
    for j in range(k):
        if j > 0:
            h = rec.conjugate(f"h{j}", h, alpha_inv, note=f"h_{j} = g_0^(alpha^-{j})")
        hf = rec.get(h)
        c = orbitals_of_map(hf)
        c = [o for o in c if A.contains_interval(o.interval)][-1].interval.left
        u = rec.word(f"u{j}", [(h, 1), (gm1, -1)], note=f"u_{j} = h_{j} g_-1^-1")
        C = _orbital_with_left(rec.get(u), c)
        if C is None or not C.interval.right > r:
            raise PreconditionError(f"u_{j} has no orbital (c_{j}, d) with d > r")
        d = C.interval.right
        if j == 0:
            v, D = u, C.interval
        else:
            lo, hi = _support_in(rec.get(prev), A)
            if not c < lo:
                raise PreconditionError(f"support of v_{j - 1} reaches c_{j}")
            m = _escape(hf, d, hi, limit, f"m_{j}")
            info["m"].append(m)
            hm = rec.power(f"h{j}_m", h, m, note=f"m_{j} = {m}")
            v = rec.conjugate(f"v{j}", u, hm, note=f"v_{j} = u_{j}^(h_{j}^{m})")
            D = Interval(c, hf.evaluate(d) if m == 1 else _iterate(hf, d, m))
            if D not in [o.interval for o in orbitals_of_map(rec.get(v))]:
                raise PreconditionError(f"D_{j} is not an orbital of v_{j}")
        levels.append((D, v))
        prev = v
    return levels, info


def _iterate(f, x, n):
    for _ in range(n):
        x = f.evaluate(x)
    return x


def _imbalance(rec, names, A, g0, tag, k, limit):
    if tag is Realization.TRAILING_ONLY:
        return _imbalance_trailing(rec, names, A, g0, k, limit)
    if tag is not Realization.LEADING_ONLY:
        raise PreconditionError(f"not an imbalance witness: {tag.value}")
    # the leading case is the trailing case seen through x -> 1 - x
    frame = Frame() if rec.frame.reflected else Reflected()
    sub = rec.with_frame(frame)
    A_sub = frame.interval_to_work(rec.frame.interval_from_work(A))
    levels, info = _imbalance_trailing(sub, names, A_sub, g0, k, limit)
    info["reflected"] = True
    back = [(rec.frame.interval_to_work(frame.interval_from_work(D)), v) for D, v in levels]
    return back, info


# -- inconsistent realization ------------------------------------------------


def _inconsistent(rec, names, A, h, k, limit):
    hf = rec.get(h)
    inside = [o for o in orbitals_of_map(hf) if A.contains_interval(o.interval)]
    first, last = inside[0], inside[-1]
    if not (first.interval.left == A.left and last.interval.right == A.right and first.direction != last.direction):
        raise PreconditionError("element does not realize the orbital inconsistently")
    if first.direction is Direction.RIGHT:
        h = rec.power("h_n", h, -1, note="inverted to move left on its first orbital")
        hf = rec.get(h)
    r, s = first.interval.right, last.interval.left
    G = _subgroup(rec, names)
    word, gmap = find_mover(G, A, r, s, limit)
    g = rec.generator_word("mover", word, names, note=f"mover: r = {format_rat(r)} past s = {format_rat(s)}")
    gmap = rec.get(g)
    t, u = gmap.evaluate(r), gmap.evaluate(s)
    kk = _escape(hf, t, u, limit, "k")
    g0 = rec.word("g0", [(h, -kk), (g, 1), (h, kk), (g, -1)], note=f"g_0 = h^-{kk} g h^{kk} g^-1")
    f0 = rec.get(g0)
    if not f0.evaluate(r) > s:
        raise PreconditionError("[r,s] g_0 meets [r,s]")
    B = _orbital_around(f0, r, s)
    if B is None:
        B = next(o for o in orbitals_of_map(f0) if o.interval.left < r and s <= o.interval.right)
    B = B.interval
    info = {"r": format_rat(r), "s": format_rat(s), "k": kk, "n": [],
            "check": "[r,s] g_0 and [r,s] are disjoint"}
    levels = [(B, g0)]
    cur = g0
    for i in range(1, k):
        lo, hi = _support_in(rec.get(cur), A)
        n_right = _escape(hf, B.right, hi, limit, f"n_{i}")
        n_left = _escape_below(hf, B.left, lo, limit, f"n_{i}")
        n = max(n_left, n_right)
        info["n"].append(n)
        hn = rec.power(f"h_pow{i}", h, n, note=f"n_{i} = {n}")
        cur = rec.conjugate(f"g{i}", cur, hn, note=f"g_{i} = g_{i - 1}^(h^{n})")
        B = Interval(_iterate(hf, B.left, n), _iterate(hf, B.right, n))
        if B not in [o.interval for o in orbitals_of_map(rec.get(cur))]:
            raise PreconditionError(f"B_{i} is not an orbital of g_{i}")
        levels.append((B, cur))
    return levels, info


# -- transition chains -------------------------------------------------------


def _gaps(f, O):
    """Components of Fix(f) inside O for an f realizing both ends of O."""
    orbs = [o.interval for o in orbitals_of_map(f) if O.contains_interval(o.interval)]
    return [(a.right, b.left) for a, b in zip(orbs, orbs[1:])]


def _disjoint_closed(xs, ys):
    return all(b1 < a2 or b2 < a1 for a1, b1 in xs for a2, b2 in ys)


def _transition(rec, c1, c2, k, limit):
    names = [c1, c2]
    sub = _subgroup(rec, names)
    O = None
    for P in group_orbitals(sub):
        if any(P.contains_interval(o.interval) for o in orbitals_of_map(rec.get(c1))) and \
           any(P.contains_interval(o.interval) for o in orbitals_of_map(rec.get(c2))):
            O = P if O is None else O
    if O is None:
        raise PreconditionError("chain orbitals do not share a group orbital")
    g, h = None, None
    for a, b in ((c1, c2), (c2, c1)):
        rc = classify_realization(rec.get(a), O)
        if rc.leading is not None:
            g, h, cls = a, b, rc
            break
    info = {"O": [format_rat(O.left), format_rat(O.right)]}
    if cls.tag is Realization.LEADING_ONLY:
        info["case"] = "imbalanced"
        levels, sub_info = _imbalance(rec, names, O, g, cls.tag, k, limit)
        info.update(sub_info)
        return levels, info
    if cls.tag is Realization.INCONSISTENT_BOTH:
        info["case"] = "inconsistent"
        levels, sub_info = _inconsistent(rec, names, O, g, k, limit)
        info.update(sub_info)
        return levels, info
    info["case"] = "consistent"
    if cls.leading.direction is Direction.LEFT:
        g = rec.power("g_r", g, -1, note="inverted to move right near both ends of O")
    gf, hf = rec.get(g), rec.get(h)
    F = _gaps(gf, O)
    if not F:
        raise PreconditionError("the chain element has no fixed points inside O")
    pts = [p for iv in F for p in iv]
    n = 0
    while True:
        n += 1
        if n > limit:
            raise ResourceError(f"no power of h moves Fix(g) off itself within {limit}")
        pts = [hf.evaluate(p) for p in pts]
        if _disjoint_closed(F, list(zip(pts[::2], pts[1::2]))):
            break
    info["n"] = n
    hn = rec.power("h_n", h, n, note=f"Fix(g) h^{n} misses Fix(g)")
    kc = rec.commutator("kcomm", g, hn, note=f"k = [g, h^{n}]")
    lo_f, hi_f = F[0][0], F[-1][1]
    # conjugates k^(g^j), |j| <= J, until one group orbital holds [min F, max F]
    J = 0
    conj = {}
    while True:
        for j in ([0] if J == 0 else [J, -J]):
            if j == 0:
                conj[0] = kc
            else:
                gj = rec.power(f"g_pow{j}", g, j)
                conj[j] = rec.conjugate(f"k_g{j}", kc, gj)
        cnames = [conj[j] for j in sorted(conj)]
        csub = _subgroup(rec, cnames)
        P = next((P for P in group_orbitals(csub) if P.left < lo_f and hi_f < P.right), None)
        if P is not None:
            break
        J += 1
        if J > 64:
            raise ResourceError("conjugates of k do not cover Fix(g) within |j| <= 64")
    x1, y1 = (P.left + lo_f) / 2, (hi_f + P.right) / 2
    word, _ = find_mover(csub, P, x1, y1, limit)
    q = rec.generator_word("q", word, cnames, note=f"x_1 q > y_1 with x_1 = {format_rat(x1)}, y_1 = {format_rat(y1)}")
    qf = rec.get(q)
    C = _orbital_around(qf, lo_f, hi_f)
    if C is None:
        raise PreconditionError("Fix(g) is not inside one orbital of q")
    a3, b3 = C.interval.left, C.interval.right
    x2, y2 = _support_in(qf, O)
    i, xa, xb = 0, x2, b3
    while True:
        i += 1
        if i > limit:
            raise ResourceError("no power of g separates the ends of q")
        xa, xb = gf.evaluate(xa), gf.evaluate(xb)
        if a3 < xa < b3 and xb > y2:
            break
    gi = rec.power("g_i", g, i, note=f"i = {i}")
    p = rec.conjugate("p", q, gi, note="p = q^(g^i)")
    b4 = xb
    A3 = Interval(a3, b4)
    sub3 = _subgroup(rec, [q, p])
    if A3 not in group_orbitals(sub3):
        raise PreconditionError(f"{A3} is not a group orbital of <q, p>")
    rc = classify_realization(qf, A3)
    info.update({"J": J, "i": i, "a3": format_rat(a3), "b4": format_rat(b4)})
    levels, sub_info = _imbalance(rec, [q, p], A3, q, rc.tag, k, limit)
    info["imbalance"] = sub_info
    return levels, info


# -- public entry points -----------------------------------------------------


@dataclass(frozen=True)
class Imbalance:
    witness: ImbalanceWitness


@dataclass(frozen=True)
class Inconsistent:
    witness: InconsistentWitness


@dataclass(frozen=True)
class TransitionChain:
    witness: TransitionChainWitness


def _check_ambient(G, A):
    if A not in group_orbitals(G):
        raise PreconditionError(f"{A} is not a group orbital")


def build_exemplary_tower(G, mode, k, limit=DEFAULT_ESCAPE_LIMIT):
    """Exemplary tower of height exactly k inside the witness's ambient orbital."""
    if k < 1:
        raise PreconditionError("requested height must be at least 1")
    if isinstance(mode, (ImbalanceWitness, InconsistentWitness, TransitionChainWitness)):
        mode = {ImbalanceWitness: Imbalance, InconsistentWitness: Inconsistent,
                TransitionChainWitness: TransitionChain}[type(mode)](mode)
    rec = Recorder(G)
    wit = mode.witness
    if isinstance(mode, (Imbalance, Inconsistent)):
        _check_ambient(G, wit.orbital)
        f = G.evaluate(wit.word)
        rc = classify_realization(f, wit.orbital)
        name = rec.generator_word("w0", wit.word, note="witness")
        ambient = wit.orbital
        if isinstance(mode, Imbalance):
            if not rc.tag.imbalanced:
                raise PreconditionError(f"witness realizes {rc.tag.value}, not exactly one end")
            levels, info = _imbalance(rec, list(G.names), ambient, name, rc.tag, k, limit)
            kind = "imbalance"
        else:
            if rc.tag is not Realization.INCONSISTENT_BOTH:
                raise PreconditionError(f"witness realizes {rc.tag.value}, not inconsistently")
            levels, info = _inconsistent(rec, list(G.names), ambient, name, k, limit)
            kind = "inconsistent"
    elif isinstance(mode, TransitionChain):
        ch = wit
        for so in (ch.first, ch.second):
            if so.witness is None:
                raise PreconditionError("transition-chain witness needs generator words")
            if G.evaluate(so.witness) != so.signature:
                raise PreconditionError("witness word does not evaluate to its signature")
        c1 = rec.generator_word("c1", ch.first.witness, note=f"chain orbital {ch.first.orbital}")
        c2 = rec.generator_word("c2", ch.second.witness, note=f"chain orbital {ch.second.orbital}")
        levels, info = _transition(rec, c1, c2, k, limit)
        ambient = next(A for A in group_orbitals(G) if A.contains_interval(ch.first.orbital))
        kind = "transition-chain"
    else:
        raise PreconditionError(f"unknown mode {mode!r}")
    cert = rec.finish(levels, exemplary=True, kind=kind, info=info)
    T = cert.tower
    if T.height != k:
        raise AssertionError("builder produced the wrong height")
    if not all(ambient.contains_interval(A) for A in T.orbitals):
        raise AssertionError("builder left the ambient orbital")
    rep = is_exemplary(T)
    if not rep:
        raise AssertionError(f"builder produced a non-exemplary tower: {rep.violations[0]}")
    return cert


def find_witness(G, L, cap=DEFAULT_ELEMENT_CAP):
    """First available non-solvability witness: imbalance, inconsistent, transition chain."""
    w = imbalance_search(G, L, cap)
    if w is not None:
        return Imbalance(w)
    w = inconsistent_search(G, L, cap)
    if w is not None:
        return Inconsistent(w)
    w = detect_transition_chain(G, L, cap)
    if w is not None:
        return TransitionChain(w)
    return None


def depth_lower_bound(G, L, k_target=None, cap=DEFAULT_ELEMENT_CAP, limit=DEFAULT_ESCAPE_LIMIT):
    """(n, certificate): best tower from word search, pushed to k_target by a builder
    whenever a non-solvability witness turns up."""
    T = max_tower(signed_orbitals_up_to(G, L, cap))
    cert = certificate_for_tower(G, T)
    cert.exemplary_claimed = bool(is_exemplary(T))
    if k_target is not None and k_target > T.height:
        mode = find_witness(G, L, cap)
        if mode is not None:
            cert = build_exemplary_tower(G, mode, k_target, limit)
    res = replay(cert)
    if not res.ok:
        raise AssertionError(f"certificate failed to replay: {res.message}")
    return cert.height, cert
