"""Command line front end: ``autfix SUBCOMMAND FILE [options]``.

Exit status: 0 success or verdict equal, 2 unequal, 3 out of scope,
4 search bound exhausted, 1 input or usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import engine, stallings
from .automorphism import InverseMismatch, fixed_subgroup_oracle
from .filtered_graph.calculus import SearchBoundExhausted
from .filtered_graph.graph import IncidenceError, format_path
from .filtered_graph.maps import NotUpperTriangular, UpperTriangularMap, marked_automorphism
from .filtered_graph.nielsen import NormalizationError, common_INPs_at_height, normalize
from .formats import HEADER, Document, preamble, NotAutomorphism, format_graph, format_sub, graph_to_dot, parse_document
from .free_group import RankMismatch, WordSyntaxError

INPUT_ERROR = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which is the "unequal" verdict here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="autfix", description="Fixed subgroups of free group automorphisms and witnesses.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, depth=True, bound=False, fmt=False):
        p.add_argument("input", help="input file in autfix-format 1, or - for stdin")
        p.add_argument("--output", "-o", help="write here instead of stdout")
        if depth:
            p.add_argument("--depth", "-L", type=_positive, default=engine.DEFAULT_DEPTH, help="oracle word length")
        if bound:
            p.add_argument("--bound", "-b", type=_positive, default=8, help="Nielsen path length bound")
        if fmt:
            p.add_argument("--format", choices=("text", "dot"), default="text")
        return p

    p = common(sub.add_parser("fix", help="oracle fixed subgroup of each automorphism"), fmt=True)
    p.add_argument("--aut", action="append", help="restrict to these automorphisms")
    p = common(sub.add_parser("intersect", help="intersection of subgroups and fixed subgroups"), fmt=True)
    p.add_argument("--of", action="append", help="sub or aut names (default: every sub, else every aut)")
    p = common(sub.add_parser("witness", help="search for a single automorphism with the common fixed subgroup"), bound=True)
    _pair_options(p)
    p.add_argument("--graph", help="graph block holding upper triangular representatives")
    p.add_argument("--maps", nargs=2, metavar=("F", "G"), help="map names inside the graph block")
    p = common(sub.add_parser("normalize", help="normal form of a pair of upper triangular maps"), depth=False, bound=True)
    p.add_argument("--graph", help="graph block (default: the first)")
    p.add_argument("--maps", nargs=2, metavar=("F", "G"))
    p.add_argument("--strict", action="store_true", help="fail when some height has no INP within the bound")
    p = common(sub.add_parser("npaths", help="common INPs per height"), depth=False, bound=True)
    p.add_argument("--graph", help="graph block (default: the first)")
    p.add_argument("--maps", nargs=2, metavar=("F", "G"))
    p.add_argument("--normalized", action="store_true", help="normalize before listing")
    p = common(sub.add_parser("verify", help="re-check a claimed witness"))
    _pair_options(p)
    p.add_argument("--chi", required=True, help="the claimed witness")
    p = common(sub.add_parser("render", help="DOT for a subgroup, a fixed subgroup or a filtered graph"))
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--sub")
    group.add_argument("--aut", help="render the oracle fixed subgroup")
    group.add_argument("--graph")
    return parser


def _pair_options(p):
    p.add_argument("--phi", help="first automorphism (default: first aut block)")
    p.add_argument("--psi", help="second automorphism (default: second aut block)")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


# ---------------------------------------------------------------------------
# subcommands; each returns (exit status, output text)


def _aut(doc: Document, name: str | None, position: int):
    if name is None:
        names = list(doc.auts)
        if len(names) <= position:
            raise UsageError(f"need at least {position + 1} aut blocks")
        name = names[position]
    if name not in doc.auts:
        raise UsageError(f"no aut block named {name!r}")
    return name, doc.auts[name]


def _graph(doc: Document, name: str | None, maps: Sequence[str] | None):
    if not doc.graphs:
        raise UsageError("no graph block in the input")
    name = name or next(iter(doc.graphs))
    if name not in doc.graphs:
        raise UsageError(f"no graph block named {name!r}")
    spec = doc.graphs[name]
    if maps:
        for m in maps:
            if m not in spec.maps:
                raise UsageError(f"graph {name} has no map {m!r}")
        f, g = spec.maps[maps[0]], spec.maps[maps[1]]
        labels = list(maps)
    else:
        items = list(spec.maps.items())
        if not items:
            f = g = UpperTriangularMap.identity(spec.graph)
            labels = ["id", "id"]
        elif len(items) == 1:
            f = g = items[0][1]
            labels = [items[0][0]] * 2
        else:
            (a, f), (b, g) = items[:2]
            labels = [a, b]
    return name, spec.graph, f, g, labels


def cmd_fix(doc: Document, args) -> tuple[int, str]:
    names = args.aut or list(doc.auts)
    if not names:
        raise UsageError("no aut blocks in the input")
    out = [] if args.format == "dot" else [preamble(doc.rank, doc.names)]
    for n in names:
        _, phi = _aut(doc, n, 0)
        rep = fixed_subgroup_oracle(phi, args.depth)
        if args.format == "dot":
            out.append(stallings.to_dot(rep.graph, doc.names, f"Fix_{n}").rstrip("\n"))
            continue
        sat = "yes" if rep.saturated else "no"
        out.append(format_sub(f"Fix_{n}", rep.generators, doc.names, f"fix {n}: depth {args.depth}, rank {rep.rank}, saturated {sat}").rstrip("\n"))
    return 0, "\n".join(out) + "\n"


def _subgroup(doc: Document, name: str, depth: int) -> stallings.SubgroupGraph:
    if name in doc.subs:
        return stallings.fold(doc.subs[name], doc.rank)
    if name in doc.auts:
        return fixed_subgroup_oracle(doc.auts[name], depth).graph
    raise UsageError(f"no sub or aut block named {name!r}")


def cmd_intersect(doc: Document, args) -> tuple[int, str]:
    names = args.of or list(doc.subs) or list(doc.auts)
    if not names:
        raise UsageError("nothing to intersect")
    H = _subgroup(doc, names[0], args.depth)
    for n in names[1:]:
        H = stallings.intersect(H, _subgroup(doc, n, args.depth))
    if args.format == "dot":
        return 0, stallings.to_dot(H, doc.names, "intersection")
    comment = f"intersection of {', '.join(names)}: depth {args.depth}, rank {stallings.rank(H)}"
    return 0, preamble(doc.rank, doc.names) + "\n" + format_sub("intersection", stallings.basis(H), doc.names, comment)


def cmd_witness(doc: Document, args) -> tuple[int, str]:
    if not doc.auts and doc.graphs and args.phi is None and args.psi is None:
        # no aut blocks: the pair is whatever the graph maps induce
        name, G, f, g, labels = _graph(doc, args.graph, args.maps)
        a, b = f"{name}.{labels[0]}", f"{name}.{labels[1]}"
        phi, psi = marked_automorphism(f), marked_automorphism(g)
        report = engine.witness_search(phi, psi, args.depth, norm=normalize(f, g, args.bound), length_bound=args.bound)
        return report.status, report.to_text(doc.names, [(a, phi), (b, psi)])
    a, phi = _aut(doc, args.phi, 0)
    b, psi = _aut(doc, args.psi, 1)
    norm = None
    if args.graph:
        _, G, f, g, _ = _graph(doc, args.graph, args.maps)
        if marked_automorphism(f) != phi or marked_automorphism(g) != psi:
            raise UsageError(f"the maps of graph {args.graph} do not induce {a} and {b} through the marking")
        norm = normalize(f, g, args.bound)
    report = engine.witness_search(phi, psi, args.depth, norm=norm, length_bound=args.bound)
    return report.status, report.to_text(doc.names, [(a, phi), (b, psi)])


def cmd_verify(doc: Document, args) -> tuple[int, str]:
    a, phi = _aut(doc, args.phi, 0)
    b, psi = _aut(doc, args.psi, 1)
    c, chi = _aut(doc, args.chi, 0)
    report = engine.verify_witness(phi, psi, chi, args.depth)
    report.case = f"claimed witness {c}"
    return report.status, report.to_text(doc.names, [(a, phi), (b, psi), (c, chi)])


def cmd_normalize(doc: Document, args) -> tuple[int, str]:
    name, G, f, g, labels = _graph(doc, args.graph, args.maps)
    norm = normalize(f, g, args.bound, strict=args.strict)
    out = [HEADER, f"# normalize {name} with maps {labels[0]}, {labels[1]}: search bound {args.bound}"]
    for r, delta in norm.slides:
        out.append(f"# slide E{r} along {format_path(delta)}")
    for d in norm.data:
        out.append("# " + d.describe())
    flagged = [d.height for d in norm.data if d.form == "none"]
    if flagged:
        out.append("# heights without a common INP are empirical absences at the search bound: " + " ".join(map(str, flagged)))
    maps = {labels[0]: norm.f, labels[1]: norm.g}
    out.append(format_graph(f"{name}_normal", norm.graph, maps).rstrip("\n"))
    return 0, "\n".join(out) + "\n"


def cmd_npaths(doc: Document, args) -> tuple[int, str]:
    name, G, f, g, labels = _graph(doc, args.graph, args.maps)
    if args.normalized:
        norm = normalize(f, g, args.bound)
        f, g = norm.f, norm.g
    out = [f"# common INPs of {labels[0]}, {labels[1]} on {name} with inner length <= {args.bound}"]
    for r in range(1, G.n_edges + 1):
        inps = common_INPs_at_height(f, g, r, args.bound)
        out.append(f"height {r}: {len(inps)}")
        for p in inps:
            out.append(f"  {format_path(p)}")
    return 0, "\n".join(out) + "\n"


def cmd_render(doc: Document, args) -> tuple[int, str]:
    if args.graph:
        name, G, *_ = _graph(doc, args.graph, None)
        return 0, graph_to_dot(G, name)
    if args.sub:
        return 0, stallings.to_dot(_subgroup(doc, args.sub, args.depth), doc.names, args.sub)
    return 0, stallings.to_dot(_subgroup(doc, args.aut, args.depth), doc.names, f"Fix_{args.aut}")


COMMANDS = {
    "fix": cmd_fix,
    "intersect": cmd_intersect,
    "witness": cmd_witness,
    "verify": cmd_verify,
    "normalize": cmd_normalize,
    "npaths": cmd_npaths,
    "render": cmd_render,
}


def run(argv: Sequence[str] | None = None, stdin=None) -> tuple[int, str, str]:
    """Parse arguments and run; returns (status, stdout text, stderr text)."""
    return execute(build_parser().parse_args(argv), stdin)


def execute(args: argparse.Namespace, stdin=None) -> tuple[int, str, str]:
    try:
        if args.input == "-":
            text = (stdin or sys.stdin).read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        doc = parse_document(text)
        if args.command in ("verify", "witness", "fix") and args.depth < 4:
            raise UsageError("--depth must be at least 4")
        status, out = COMMANDS[args.command](doc, args)
    except OSError as exc:
        return INPUT_ERROR, "", f"error: {exc}\n"
    except WordSyntaxError as exc:
        return INPUT_ERROR, "", f"syntax error: {exc}\n"
    except (UsageError, RankMismatch, NotUpperTriangular, IncidenceError, InverseMismatch, NotAutomorphism) as exc:
        return INPUT_ERROR, "", f"error: {exc}\n"
    except NormalizationError as exc:
        return INPUT_ERROR, "", f"normalization error: {exc}\n"
    except SearchBoundExhausted as exc:
        return engine.EXHAUSTED, "", f"search bound exhausted: {exc}\n"
    except ValueError as exc:
        return INPUT_ERROR, "", f"error: {exc}\n"
    return status, out, ""


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    status, out, err = execute(args)
    if err:
        sys.stderr.write(err)
    if out:
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
