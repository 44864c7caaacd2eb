"""Command-line interface.

    plgroups analyze GROUP.json [--max-word-length L] [--tower-height K]
    plgroups orbitals GROUP.json
    plgroups tower GROUP.json --tower-height K
    plgroups derive-tower CERT.json
    plgroups build-wreath [GROUP.json] [--copies M] | --family W|G --index I
    plgroups f-group [--n N]
    plgroups obstruction TRIPLE.json
    plgroups verify CERT.json
    plgroups plot INPUT.json --svg OUT.svg

Documents are read and written in the exact JSON format of
:mod:`plgroups.serialize`. Exit status: 0 on success (any verdict), 2 on a
parse error, 3 when a resource cap is hit, 4 when verification fails, 1 for
any other library error.
"""

import argparse
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import serialize, svg
from .builders import build_exemplary_tower, depth_lower_bound, derive_tower, find_witness
from .certificates import TowerCertificate, replay
from .errors import ParseError, PLGroupsError, ResourceError, VerificationError
from .geometry import group_orbitals
from .groups import DEFAULT_COMMUTATOR_CAP, AnalysisConfig, AnalysisReport, analyze, f_generators
from .plmap import PLMap, orbitals_of_map
from .rat import format_rat
from .towers import Tower
from .words import DEFAULT_ELEMENT_CAP, GroupSpec
from .wreath import build_family, obstruction_demo, wreath_with_Z

EXIT_OK, EXIT_ERROR, EXIT_PARSE, EXIT_RESOURCE, EXIT_VERIFY = 0, 1, 2, 3, 4

SUBCOMMANDS = ("analyze", "orbitals", "tower", "derive-tower", "build-wreath",
               "f-group", "obstruction", "verify", "plot")


@dataclass
class CommandConfig:
    subcommand: str
    inputs: list = field(default_factory=list)
    L: int = 4
    k_target: int = 4
    element_cap: int = DEFAULT_ELEMENT_CAP
    commutator_cap: int = DEFAULT_COMMUTATOR_CAP
    copies: int = 1
    fmt: str = "text"
    svg: Optional[str] = None
    output: Optional[str] = None
    family: Optional[str] = None
    index: int = 1
    n: int = 2

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        for name in ("L", "k_target", "element_cap", "commutator_cap", "copies", "index"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


def _parse_caps(text):
    caps = {}
    for part in text.split(","):
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in ("elements", "commutators") or not val.strip().isdigit():
            raise argparse.ArgumentTypeError("caps look like elements=50000,commutators=200000")
        caps[key] = int(val)
    return caps


def build_parser():
    p = argparse.ArgumentParser(prog="plgroups", description="Exact computations in subgroups of PL+(I).")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("inputs", nargs="*", help="input documents")
    p.add_argument("--max-word-length", "-L", type=int, default=4, dest="L")
    p.add_argument("--tower-height", "-k", type=int, default=4, dest="k_target")
    p.add_argument("--copies", type=int, default=1)
    p.add_argument("--caps", type=_parse_caps, default={})
    p.add_argument("--svg", help="write an SVG figure here")
    p.add_argument("--format", choices=("text", "markdown"), default="text", dest="fmt")
    p.add_argument("--output", "-o", help="write the document here instead of stdout")
    p.add_argument("--family", choices=("W", "G"), help="build-wreath: named family instead of a file")
    p.add_argument("--index", type=int, default=1, help="build-wreath: family index i")
    p.add_argument("--n", type=int, default=2, help="f-group: build F_n")
    return p


def config_from_args(argv):
    a = build_parser().parse_args(argv)
    return CommandConfig(
        a.subcommand, a.inputs, a.L, a.k_target,
        a.caps.get("elements", DEFAULT_ELEMENT_CAP), a.caps.get("commutators", DEFAULT_COMMUTATOR_CAP),
        a.copies, a.fmt, a.svg, a.output, a.family, a.index, a.n,
    )


# -- markdown rendering ---------------------------------------------------------


def _iv(A):
    return f"({format_rat(A.left)}, {format_rat(A.right)})"


def report_markdown(r):
    G = r.group
    out = ["# Analysis report", ""]
    out.append(f"- generators: {', '.join(G.names)}")
    out.append(f"- word length bound: {r.config.L}; tower height target: {r.config.tower_height}")
    out.append(f"- verdict: **{r.verdict}**")
    out.append(f"- group orbitals: {', '.join(_iv(A) for A in r.orbitals) or 'none'}")
    out.append("")
    out.append("## Witnesses")
    out.append("")
    tc = r.transition_chain
    if tc is not None:
        out.append(f"- transition chain: {G.format(tc.first.witness)} on {_iv(tc.first.orbital)}, "
                   f"{G.format(tc.second.witness)} on {_iv(tc.second.orbital)}")
    else:
        out.append("- transition chain: none found")
    for label, w in (("imbalance", r.imbalance), ("inconsistent realization", r.inconsistent)):
        if w is None:
            out.append(f"- {label}: none found")
        else:
            out.append(f"- {label}: {G.format(w.word)} on {_iv(w.orbital)} ({w.realization.tag.value})")
    out.append("")
    out.append("## Depth")
    out.append("")
    out.append(f"Lower bound {r.depth_lower_bound}.")
    if r.certificate is not None:
        out.append("")
        out.append("| level | orbital | signature |")
        out.append("|---|---|---|")
        for i, lv in enumerate(r.certificate.levels, 1):
            out.append(f"| {i} | {_iv(lv.interval)} | {lv.name} |")
    out.append("")
    out.append("## Derived series sample")
    out.append("")
    out.append("| level | nontrivial | truncated | witness |")
    out.append("|---|---|---|---|")
    for d in r.derived_series:
        w = G.format(d.witness) if d.witness is not None else ""
        if len(w) > 60:
            w = w[:57] + "..."
        out.append(f"| {d.level} | {'yes' if d.nontrivial else 'no'} | {'yes' if d.truncated else 'no'} | {w} |")
    if r.notes:
        out.append("")
        out.append("## Notes")
        out.append("")
        out.extend(f"- {n}" for n in r.notes)
    return "\n".join(out) + "\n"


def orbitals_data(G):
    return {
        "kind": "orbitals",
        "group": [serialize.interval_data(A) for A in group_orbitals(G)],
        "generators": {
            name: [{"interval": serialize.interval_data(o.interval), "direction": o.direction.value}
                   for o in orbitals_of_map(f)]
            for name, f in G
        },
    }


def orbitals_markdown(G):
    out = ["# Orbitals", "", f"Group: {', '.join(_iv(A) for A in group_orbitals(G)) or 'none'}", ""]
    for name, f in G:
        orbs = ", ".join(f"{_iv(o.interval)} {o.direction.value}" for o in orbitals_of_map(f))
        out.append(f"- {name}: {orbs or 'identity'}")
    return "\n".join(out) + "\n"


# -- commands ----------------------------------------------------------------


def _one_input(cfg, what):
    if len(cfg.inputs) != 1:
        raise ParseError(f"{cfg.subcommand} needs exactly one {what} file")
    return serialize.read(cfg.inputs[0])


def _group(obj):
    if isinstance(obj, PLMap):
        return GroupSpec([("f", obj)])
    if not isinstance(obj, GroupSpec):
        raise ParseError("expected a group document")
    return obj


def _certificate(obj):
    if not isinstance(obj, TowerCertificate):
        raise ParseError("expected a certificate document")
    return obj


def cmd_analyze(cfg):
    G = _group(_one_input(cfg, "group"))
    rep = analyze(G, AnalysisConfig(cfg.L, cfg.k_target, cfg.element_cap, cfg.commutator_cap))
    text = report_markdown(rep) if cfg.fmt == "markdown" else serialize.dumps(rep)
    return EXIT_OK, text, rep


def cmd_orbitals(cfg):
    G = _group(_one_input(cfg, "group"))
    text = orbitals_markdown(G) if cfg.fmt == "markdown" else serialize.dumps(orbitals_data(G))
    return EXIT_OK, text, G


def cmd_tower(cfg):
    """Exemplary tower of the requested height when a witness exists, else the best search tower."""
    G = _group(_one_input(cfg, "group"))
    mode = find_witness(G, cfg.L, cfg.element_cap)
    if mode is not None:
        cert = build_exemplary_tower(G, mode, cfg.k_target)
    else:
        _, cert = depth_lower_bound(G, cfg.L, None, cfg.element_cap)
    return EXIT_OK, serialize.dumps(cert), cert


def cmd_derive_tower(cfg):
    cert = derive_tower(_certificate(_one_input(cfg, "certificate")))
    return EXIT_OK, serialize.dumps(cert), cert


def cmd_build_wreath(cfg):
    if cfg.family:
        G = build_family(cfg.family, cfg.index, cfg.copies)
        return EXIT_OK, serialize.dumps(G), G
    G = _group(serialize.read(cfg.inputs[0])) if cfg.inputs else None
    W = wreath_with_Z(G, copies=cfg.copies)
    return EXIT_OK, serialize.dumps(W), W.as_group()


def cmd_f_group(cfg):
    G = f_generators(cfg.n)
    return EXIT_OK, serialize.dumps(G), G


def cmd_obstruction(cfg):
    G = _group(_one_input(cfg, "group"))
    try:
        alpha, beta, gamma = (G.maps[G.index(n)] for n in ("alpha", "beta", "gamma"))
    except ValueError:
        raise ParseError("the obstruction input needs generators alpha, beta and gamma") from None
    res = obstruction_demo(alpha, beta, gamma)
    return EXIT_OK, serialize.dumps(res), res.gamma


def cmd_verify(cfg):
    cert = _certificate(_one_input(cfg, "certificate"))
    res = replay(cert)
    status = "verified" if res.ok else "MISMATCH"
    line = f"{status}: {res.message}\n"
    if cfg.fmt == "markdown":
        line = f"# Certificate check\n\n{line}"
    return (EXIT_OK if res.ok else EXIT_VERIFY), line, res.tower


def cmd_plot(cfg):
    if not cfg.svg:
        raise ParseError("plot needs --svg PATH")
    obj = _one_input(cfg, "input")
    return EXIT_OK, "", obj


def figure(obj):
    """SVG text for a map, group, tower or certificate."""
    if isinstance(obj, PLMap):
        return svg.plot_map(obj)
    if isinstance(obj, GroupSpec):
        return svg.plot_group(obj)
    if isinstance(obj, TowerCertificate):
        return svg.plot_tower(obj.tower)
    if isinstance(obj, Tower):
        return svg.plot_tower(obj)
    if isinstance(obj, AnalysisReport):
        return svg.plot_group(obj.group)
    raise ParseError(f"nothing to plot for a {type(obj).__name__}")


COMMANDS = {
    "analyze": cmd_analyze, "orbitals": cmd_orbitals, "tower": cmd_tower,
    "derive-tower": cmd_derive_tower, "build-wreath": cmd_build_wreath, "f-group": cmd_f_group,
    "obstruction": cmd_obstruction, "verify": cmd_verify, "plot": cmd_plot,
}


def run(cfg, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        code, text, obj = COMMANDS[cfg.subcommand](cfg)
        if cfg.svg and obj is not None:
            with open(cfg.svg, "w", encoding="ascii", newline="\n") as fh:
                fh.write(figure(obj))
    except ParseError as e:
        print(f"parse error: {e}", file=stderr)
        return EXIT_PARSE
    except OSError as e:
        print(f"parse error: {e}", file=stderr)
        return EXIT_PARSE
    except ResourceError as e:
        print(f"resource cap: {e}", file=stderr)
        return EXIT_RESOURCE
    except VerificationError as e:
        print(f"verification failed: {e}", file=stderr)
        return EXIT_VERIFY
    except PLGroupsError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_ERROR
    if text:
        if cfg.output:
            with open(cfg.output, "w", encoding="ascii", newline="\n") as fh:
                fh.write(text)
        else:
            stdout.write(text)
    return code


def main(argv=None):
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except ValueError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_PARSE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
