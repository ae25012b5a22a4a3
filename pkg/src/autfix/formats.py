"""The ``autfix-format 1`` text grammar and DOT export for filtered graphs.

A document starts with the header line ``autfix-format 1``.  ``#`` starts a
comment.  Blocks begin with an unindented ``KIND NAME:`` line and run until
the next block header::

    autfix-format 1
    rank 3                  # optional when the first aut block lists every letter
    aut phi:
      x -> x
      y -> y x
      z -> z
      inverse:              # optional, checked when present
      y -> y x^-1
    sub K:                  # one generator per line
      x
      y x y^-1
    graph G:
      vertices v0 v1
      E1: v0 -> v0
      E2: v0 -> v1
      E3: v1 -> v0
      base v0
      tree E2
      f E3 = E3 E1          # full image starting with E3, or the suffix alone
      g E3 = E1

Unlisted letters of an automorphism are fixed, as are unlisted edges of a map.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from . import stallings
from .automorphism import Automorphism
from .filtered_graph.graph import FilteredGraph, Path, format_path
from .filtered_graph.maps import NotUpperTriangular, UpperTriangularMap
from .free_group import Word, WordSyntaxError, default_names, format_word, parse_letters, reduce, reduce_letters

HEADER = "autfix-format 1"


def preamble(rank: int, names: Sequence[str] | None = None) -> str:
    """Header plus the top level lines that make a sub-only document parse on its own."""
    lines = [HEADER, f"rank {rank}"]
    if names and list(names) != default_names(rank):
        lines.append("names " + " ".join(names))
    return "\n".join(lines)


class NotAutomorphism(ValueError):
    """Images that do not generate the whole free group."""


_BLOCK = re.compile(r"^(aut|graph|sub)\s+([A-Za-z_][\w-]*)\s*:\s*$")
_EDGE = re.compile(r"^E(\d+)\s*:\s*(\S+)\s*->\s*(\S+)$")
_MAP = re.compile(r"^([A-Za-z_]\w*)\s+E(\d+)\s*=\s*(.*)$")
_PATH_TOKEN = re.compile(r"E(\d+)(\^-1)?")


@dataclass
class GraphSpec:
    graph: FilteredGraph
    maps: dict[str, UpperTriangularMap] = field(default_factory=dict)


@dataclass
class Document:
    rank: int | None = None
    names: list[str] = field(default_factory=list)
    auts: dict[str, Automorphism] = field(default_factory=dict)
    subs: dict[str, list[Word]] = field(default_factory=dict)
    graphs: dict[str, GraphSpec] = field(default_factory=dict)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_path(text: str, n_edges: int | None = None, line: int | None = None) -> Path:
    """Parse ``E2 E1 E1^-1`` (``1`` is the trivial path) and reduce it."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    out = []
    pos = 0
    while pos < len(text):
        if text[pos] in " \t*.":
            pos += 1
            continue
        m = _PATH_TOKEN.match(text, pos)
        if m is None:
            raise WordSyntaxError(f"expected an edge like E2 or E2^-1 at {text[pos:]!r}", line, pos + 1)
        e = int(m.group(1))
        if e == 0 or (n_edges is not None and e > n_edges):
            raise WordSyntaxError(f"no edge E{e}", line, pos + 1)
        out.append(-e if m.group(2) else e)
        pos = m.end()
    return reduce_letters(out)


def _split_blocks(text: str):
    lines = text.splitlines()
    body = [(i + 1, _strip(l)) for i, l in enumerate(lines)]
    body = [(n, l) for n, l in body if l.strip()]
    if not body or body[0][1].strip() != HEADER:
        n = body[0][0] if body else 1
        raise WordSyntaxError(f"missing header line {HEADER!r}", n, 1)
    top: list[tuple[int, str]] = []
    blocks: list[tuple[str, str, int, list[tuple[int, str]]]] = []
    for n, l in body[1:]:
        m = _BLOCK.match(l)
        if m:
            blocks.append((m.group(1), m.group(2), n, []))
        elif l[0] in " \t" and blocks:
            blocks[-1][3].append((n, l.strip(), len(l) - len(l.lstrip())))
        elif not blocks:
            top.append((n, l.strip()))
        else:
            raise WordSyntaxError(f"expected an indented line or a block header, got {l.strip()!r}", n, 1)
    return top, blocks


def parse_document(text: str) -> Document:
    top, blocks = _split_blocks(text)
    doc = Document()
    for n, l in top:
        parts = l.split()
        if parts[0] == "rank" and len(parts) == 2 and parts[1].isdigit() and int(parts[1]) > 0:
            doc.rank = int(parts[1])
        elif parts[0] == "names" and len(parts) > 1:
            doc.names = parts[1:]
        else:
            raise WordSyntaxError(f"unknown top level line {l!r}", n, 1)
    if doc.names and doc.rank is None:
        doc.rank = len(doc.names)
    if doc.rank is None:
        # without a rank line the first aut block lists every letter
        for kind, _, _, lines in blocks:
            if kind == "aut":
                heads = [l for _, l, _ in lines]
                doc.rank = heads.index("inverse:") if "inverse:" in heads else len(heads)
                break
    if doc.rank is not None and not doc.names:
        doc.names = default_names(doc.rank)
    if doc.names and len(doc.names) != doc.rank:
        raise WordSyntaxError(f"{len(doc.names)} names declared for rank {doc.rank}", top[0][0] if top else 1, 1)
    seen = set()
    for kind, name, n, lines in blocks:
        if (kind, name) in seen:
            raise WordSyntaxError(f"{kind} {name} defined twice", n, 1)
        seen.add((kind, name))
        if kind == "aut":
            doc.auts[name] = _parse_aut(doc, name, n, lines)
        elif kind == "sub":
            if doc.rank is None:
                raise WordSyntaxError("declare 'rank N' before a sub block when there is no aut block", n, 1)
            doc.subs[name] = [_word(doc, l, ln, off) for ln, l, off in lines]
        else:
            doc.graphs[name] = _parse_graph(name, n, lines)
    return doc


def _located(parse, text, *args, offset=0):
    # shift reported columns by the position of text inside its source line
    try:
        return parse(text, *args)
    except WordSyntaxError as exc:
        if exc.column is None:
            raise
        message = str(exc).split(": ", 1)[1]
        raise WordSyntaxError(message, exc.line, exc.column + offset) from None


def _word(doc: Document, text: str, line: int, offset: int = 0) -> Word:
    return reduce(_located(parse_letters, text, doc.names, line, offset=offset), doc.rank)


def _parse_aut(doc: Document, name: str, n: int, lines) -> Automorphism:
    assert doc.rank is not None
    images: dict[int, Word] = {}
    inverse: dict[int, Word] = {}
    target = images
    for ln, l, off in lines:
        if l == "inverse:":
            if target is inverse:
                raise WordSyntaxError("second inverse: section", ln, off + 1)
            target = inverse
            continue
        if "->" not in l:
            raise WordSyntaxError(f"expected 'letter -> word', got {l!r}", ln, off + 1)
        lhs, rhs = l.split("->", 1)
        letter = _word(doc, lhs, ln, off).letters
        if len(letter) != 1 or letter[0] < 0:
            raise WordSyntaxError(f"left side must be a single basis letter, got {lhs.strip()!r}", ln, off + 1)
        if letter[0] in target:
            raise WordSyntaxError(f"image of {lhs.strip()} given twice", ln, off + 1)
        target[letter[0]] = _word(doc, rhs, ln, off + len(lhs) + 2)
    gens = [Word.generator(i, doc.rank) for i in range(1, doc.rank + 1)]
    imgs = [images.get(i, gens[i - 1]) for i in range(1, doc.rank + 1)]
    inv = [inverse.get(i, gens[i - 1]) for i in range(1, doc.rank + 1)] if inverse else None
    # a surjective endomorphism of F_n is an automorphism (Hopfian)
    if inv is None and not stallings.equal_subgroups(stallings.fold(imgs, doc.rank), stallings.whole_group(doc.rank)):
        raise NotAutomorphism(f"aut {name}: the images do not generate the free group, so this is not an automorphism")
    return Automorphism(imgs, inv)


def _parse_graph(name: str, n: int, lines) -> GraphSpec:
    vertices: list[str] | None = None
    ends: dict[int, tuple[int, int]] = {}
    base = None
    tree = None
    map_lines: list[tuple[int, int, str, int, str, int]] = []
    for ln, l, off in lines:
        parts = l.split()
        if parts[0] == "vertices":
            vertices = parts[1:]
            if len(set(vertices)) != len(vertices) or not vertices:
                raise WordSyntaxError("vertex names must be distinct and nonempty", ln, off + 1)
            continue
        m = _EDGE.match(l)
        if m:
            if vertices is None:
                raise WordSyntaxError("declare vertices before edges", ln, off + 1)
            i = int(m.group(1))
            for v in (m.group(2), m.group(3)):
                if v not in vertices:
                    raise WordSyntaxError(f"unknown vertex {v!r}", ln, off + l.index(v) + 1)
            if i in ends:
                raise WordSyntaxError(f"E{i} declared twice", ln, off + 1)
            ends[i] = (vertices.index(m.group(2)), vertices.index(m.group(3)))
            continue
        if parts[0] == "base" and len(parts) == 2:
            if vertices is None or parts[1] not in vertices:
                raise WordSyntaxError(f"unknown base vertex {parts[1]!r}", ln, off + 6)
            base = vertices.index(parts[1])
            continue
        if parts[0] == "tree":
            items = [t for t in re.split(r"[,\s]+", l[4:].strip()) if t]
            tree = []
            for t in items:
                if not re.fullmatch(r"E\d+", t):
                    raise WordSyntaxError(f"tree entries are edges like E2, got {t!r}", ln, off + l.index(t) + 1)
                tree.append(int(t[1:]))
            continue
        m = _MAP.match(l)
        if m:
            map_lines.append((ln, off, m.group(1), int(m.group(2)), m.group(3), off + m.start(3)))
            continue
        raise WordSyntaxError(f"unrecognised graph line {l!r}", ln, off + 1)
    if vertices is None or not ends:
        raise WordSyntaxError(f"graph {name} needs vertices and edges", n, 1)
    m_edges = max(ends)
    missing = [i for i in range(1, m_edges + 1) if i not in ends]
    if missing:
        raise WordSyntaxError(f"edges must be E1..E{m_edges}; missing E{missing[0]}", n, 1)
    G = FilteredGraph(vertices, [ends[i] for i in range(1, m_edges + 1)], base or 0, tree)
    images: dict[str, dict[int, Path]] = {}
    for ln, off, mname, i, rhs, col in map_lines:
        if i > m_edges:
            raise WordSyntaxError(f"no edge E{i}", ln, off + 1)
        path = _located(parse_path, rhs, m_edges, ln, offset=col)
        if i in path or -i in path:
            if path[0] != i or (-i in path) or path.count(i) != 1:
                raise NotUpperTriangular(
                    f"line {ln}: image of E{i} must begin with E{i} and cross it once; "
                    f"subdivide E{i} so that its image has a trivial prefix"
                )
        else:
            path = (i,) + path
        table = images.setdefault(mname, {})
        if i in table:
            raise WordSyntaxError(f"{mname} E{i} given twice", ln, off + 1)
        table[i] = path
    maps = {mname: UpperTriangularMap.from_images(G, table) for mname, table in images.items()}
    return GraphSpec(G, maps)


# ---------------------------------------------------------------------------
# writers


def format_sub(name: str, words: Sequence[Word], names: Sequence[str] | None = None, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"sub {name}:")
    for w in words:
        lines.append(f"  {format_word(w, names)}")
    return "\n".join(lines) + "\n"


def format_map(name: str, f: UpperTriangularMap) -> list[str]:
    return [f"  {name} E{i} = {format_path((i,) + u)}" for i, u in enumerate(f.suffixes, start=1) if u]


def format_graph(name: str, G: FilteredGraph, maps: dict[str, UpperTriangularMap]) -> str:
    lines = [f"graph {name}:", "  vertices " + " ".join(G.vertices)]
    for i, (o, t) in enumerate(G.ends, start=1):
        lines.append(f"  E{i}: {G.vertices[o]} -> {G.vertices[t]}")
    lines.append(f"  base {G.vertices[G.base]}")
    if G.tree:
        lines.append("  tree " + ",".join(f"E{i}" for i in sorted(G.tree)))
    for mname, f in maps.items():
        lines.extend(format_map(mname, f))
    return "\n".join(lines) + "\n"


_PALETTE = ["black", "blue", "red", "darkgreen", "orange", "purple", "brown", "magenta", "cyan4", "gold4"]


def graph_to_dot(G: FilteredGraph, title: str = "G") -> str:
    """DOT for a filtered graph; the edge colour encodes the height."""
    lines = [f'digraph "{title}" {{', "  rankdir=LR;"]
    for v, name in enumerate(G.vertices):
        shape = "doublecircle" if v == G.base else "circle"
        lines.append(f'  v{v} [label="{name}", shape={shape}];')
    for i, (o, t) in enumerate(G.ends, start=1):
        colour = _PALETTE[(i - 1) % len(_PALETTE)]
        style = ", style=bold" if i in G.tree else ""
        lines.append(f'  v{o} -> v{t} [label="E{i}", color={colour}, fontcolor={colour}{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
