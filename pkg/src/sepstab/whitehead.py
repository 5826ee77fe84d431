"""Whitehead graphs of conjugacy classes and their analysis.

The meridian model is the canonical boundary-connect-sum system: one disc
per surface factor and one per free letter.  Cutting produces one ball
component and one surface component per surface factor.  The ball keeps a
vertex pair per disc; for surface factors the pair is combinatorial
bookkeeping (the crossing orientation of a factor syllable), chosen so that
the limit-set-sampled construction reproduces the same graphs.

Edges are stored one per distinct (vertex, label, vertex) triple with a
support count; the count records how many syllable transitions or sampled
axis pairs back the edge and only surfaces in DOT output.

Strong connectedness follows the cycle-with-nontrivial-label definition on
surface components.  Ball components have trivial label group, where the
notion degenerates: a ball component is strongly connected when it is
connected and every vertex lies on a cycle (equivalently min degree >= 2,
loops counting twice).  This degeneration recovers the classical
Whitehead-graph criteria and is an interpretation, not a quotation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from sepstab import groups as G
from sepstab.groups import CyclicNormalForm, GroupSpec, Word, inv


class WhiteheadError(Exception):
    pass


class NotCyclicallyReduced(WhiteheadError):
    pass


@dataclass(frozen=True, order=True)
class DiscVertex:
    component: str     # "ball" or "surface<fid>"
    disc: str          # disc name, e.g. "D1", "Dt1"
    side: int          # +1 / -1 on the ball, 0 for the interior copy

    def label(self) -> str:
        if self.side == 0:
            return self.disc
        return self.disc + ("+" if self.side > 0 else "-")


@dataclass(frozen=True)
class Edge:
    """Undirected edge; label is the canonical spelling of {g, g^-1} for
    surface components and () on the ball."""
    u: DiscVertex
    v: DiscVertex
    label: Word = ()
    support: int = 1

    def key(self):
        uu, vv = sorted((self.u, self.v))
        return (uu, vv, self.label)


@dataclass
class Component:
    cid: str                       # "ball" | "surface<fid>"
    kind: str                      # "ball" | "surface"
    fid: Optional[int]             # surface factor id for surface components
    vertices: Tuple[DiscVertex, ...]
    edges: Tuple[Edge, ...] = ()


@dataclass
class WhiteheadGraph:
    group: GroupSpec
    components: Tuple[Component, ...]

    def component(self, cid: str) -> Component:
        for c in self.components:
            if c.cid == cid:
                return c
        raise KeyError(cid)

    def edge_multiset(self) -> FrozenSet:
        out = []
        for c in self.components:
            for e in c.edges:
                out.append((c.cid,) + e.key())
        return frozenset(out)


@dataclass(frozen=True)
class MuSpec:
    """Endpoint data: a conjugacy class or sampled axis endpoint pairs."""
    conjugacy_class: Optional[CyclicNormalForm] = None
    sampled_pairs: Tuple[Tuple[complex, complex], ...] = ()


# ---------------------------------------------------------------------------
# meridian model


def _disc_name(group: GroupSpec, fid: int) -> str:
    f = group.factors[fid]
    if f.kind == "surface":
        surf_index = sum(1 for ff in group.factors[:fid]
                         if ff.kind == "surface") + 1
        return f"D{surf_index}"
    free_index = sum(1 for ff in group.factors[:fid]
                     if ff.kind == "free") + 1
    return f"Dt{free_index}"


def standard_meridian_model(group: GroupSpec) -> List[Component]:
    """Vertex layout of the canonical boundary-connect-sum disc system."""
    ball_vertices = []
    comps: List[Component] = []
    for f in group.factors:
        name = _disc_name(group, f.index)
        ball_vertices.append(DiscVertex("ball", name, +1))
        ball_vertices.append(DiscVertex("ball", name, -1))
    comps.append(Component("ball", "ball", None, tuple(ball_vertices)))
    for f in group.factors:
        if f.kind == "surface":
            name = _disc_name(group, f.index)
            cid = f"surface{f.index}"
            comps.append(Component(
                cid, "surface", f.index,
                (DiscVertex(cid, name, 0),)))
    return comps


# ---------------------------------------------------------------------------
# combinatorial construction


def syllable_orientation(word: Word, group: GroupSpec, fid: int) -> int:
    """Canonical crossing sign of a surface syllable: +1 when the syllable's
    canonical spelling is lexicographically no larger than its inverse's."""
    w = G.dehn_canonical(word, group, fid)
    wi = G.dehn_canonical(G.word_inverse(word), group, fid)
    return 1 if w <= wi else -1


def _hybrid_sequence(cnf: CyclicNormalForm, group: GroupSpec):
    """Cyclic crossing sequence: free syllables at letter level, each
    surface syllable as one oriented crossing of its factor disc."""
    seq = []
    for fid, w in cnf.syllables:
        if group.factors[fid].kind == "free":
            for x in w:
                seq.append(("free", fid, x))
        else:
            seq.append(("surface", fid, w))
    return seq


def _crossing_vertex(group: GroupSpec, item, inverse: bool) -> DiscVertex:
    kind, fid, payload = item
    name = _disc_name(group, fid)
    if kind == "free":
        letter = inv(payload) if inverse else payload
        sign = -1 if letter & 1 else +1
        return DiscVertex("ball", name, sign)
    word = G.word_inverse(payload) if inverse else payload
    return DiscVertex("ball", name, syllable_orientation(word, group, fid))


def _canonical_label(word: Word, group: GroupSpec, fid: int) -> Word:
    """Canonical representative among the spellings of {g, g^-1}."""
    w = G.dehn_canonical(word, group, fid)
    wi = G.dehn_canonical(G.word_inverse(word), group, fid)
    return min(w, wi)


def whitehead_graph_combinatorial(cnf: CyclicNormalForm,
                                  group: GroupSpec) -> WhiteheadGraph:
    """Whitehead graph of a conjugacy class for the standard disc system.

    Ball edges come from cyclically adjacent crossings (u, v): an edge
    between u's disc side and v^-1's disc side.  A pure single-syllable
    surface class never leaves its I-bundle and produces no edges.  Surface
    components get a loop labeled by each syllable flanked by crossings of
    other factors.
    """
    _check_cyclically_reduced(cnf, group)
    comps = {c.cid: c for c in standard_meridian_model(group)}
    ball_edges: Dict[tuple, int] = {}
    surf_edges: Dict[str, Dict[tuple, int]] = {
        cid: {} for cid in comps if cid != "ball"}

    seq = _hybrid_sequence(cnf, group)
    n = len(seq)
    single_surface = (n == 1 and seq[0][0] == "surface")
    if n and not single_surface:
        for i in range(n):
            u = seq[i]
            v = seq[(i + 1) % n]
            vu = _crossing_vertex(group, u, inverse=False)
            vv = _crossing_vertex(group, v, inverse=True)
            uu, ww = sorted((vu, vv))
            key = (uu, ww, ())
            ball_edges[key] = ball_edges.get(key, 0) + 1
        # surface loops from flanked syllables
        for i in range(n):
            kind, fid, payload = seq[i]
            if kind != "surface":
                continue
            cid = f"surface{fid}"
            vert = comps[cid].vertices[0]
            label = _canonical_label(payload, group, fid)
            key = (vert, vert, label)
            surf_edges[cid][key] = surf_edges[cid].get(key, 0) + 1

    out = []
    for cid, comp in comps.items():
        if cid == "ball":
            edges = tuple(Edge(u, v, lab, cnt) for (u, v, lab), cnt
                          in sorted(ball_edges.items()))
        else:
            edges = tuple(Edge(u, v, lab, cnt) for (u, v, lab), cnt
                          in sorted(surf_edges[cid].items()))
        out.append(Component(comp.cid, comp.kind, comp.fid,
                             comp.vertices, edges))
    return WhiteheadGraph(group, tuple(out))


def _check_cyclically_reduced(cnf: CyclicNormalForm, group: GroupSpec):
    sylls = cnf.syllables
    if not sylls:
        raise NotCyclicallyReduced("empty class")
    if len(sylls) >= 2 and sylls[0][0] == sylls[-1][0]:
        raise NotCyclicallyReduced("first and last syllables share a factor")
    for fid, w in sylls:
        if group.factors[fid].kind == "free":
            if not w or len(set(w)) != 1:
                raise NotCyclicallyReduced(
                    "free syllable must be a nonzero power of one letter")
        else:
            if not w or G.dehn_reduce(w, group, fid) != w:
                raise NotCyclicallyReduced("surface syllable not Dehn-reduced")


# ---------------------------------------------------------------------------
# analysis


def _adjacency(comp: Component):
    adj: Dict[DiscVertex, List[Tuple[DiscVertex, Edge]]] = {
        v: [] for v in comp.vertices}
    for e in comp.edges:
        if e.u == e.v:
            adj[e.u].append((e.v, e))
        else:
            adj[e.u].append((e.v, e))
            adj[e.v].append((e.u, e))
    return adj


def _connected_pieces(comp: Component) -> List[List[DiscVertex]]:
    adj = _adjacency(comp)
    seen = set()
    pieces = []
    for v in comp.vertices:
        if v in seen:
            continue
        stack, piece = [v], []
        seen.add(v)
        while stack:
            x = stack.pop()
            piece.append(x)
            for y, _ in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        pieces.append(sorted(piece))
    return pieces


def _degree(comp: Component, v: DiscVertex) -> int:
    d = 0
    for e in comp.edges:
        if e.u == v and e.v == v:
            d += 2
        elif e.u == v or e.v == v:
            d += 1
    return d


def _cycle_basis_labels(comp: Component, group: GroupSpec) -> List[Tuple[Word, List[Edge]]]:
    """Labels of a closed-walk basis via a spanning tree.

    Walking an edge from u to v contributes its label; the reverse
    traversal contributes the inverse.  Loop edges are their own cycles.
    """
    adj = _adjacency(comp)
    potential: Dict[DiscVertex, Word] = {}
    tree_edges = set()
    basis = []
    for root in comp.vertices:
        if root in potential:
            continue
        potential[root] = ()
        stack = [root]
        while stack:
            x = stack.pop()
            for y, e in adj[x]:
                if e.u == e.v:
                    continue
                if y not in potential:
                    lab = e.label if e.u == x else G.word_inverse(e.label)
                    potential[y] = G.word_mul(potential[x], lab)
                    tree_edges.add(id(e))
                    stack.append(y)
    for e in comp.edges:
        if e.u == e.v:
            basis.append((e.label, [e]))
            continue
        if id(e) in tree_edges:
            continue
        # closed walk root -> u -> v -> root
        lab = G.word_mul(potential[e.u], e.label,
                         G.word_inverse(potential[e.v]))
        basis.append((lab, [e]))
    return basis


def is_strongly_connected(wh: WhiteheadGraph) -> Dict[str, Tuple[bool, Optional[list]]]:
    """Per-component verdict with a witness cycle when true."""
    out = {}
    for comp in wh.components:
        out[comp.cid] = _strongly_connected_component(comp, wh.group)
    return out


def _strongly_connected_component(comp: Component, group: GroupSpec,
                                  allow_trivial_vertex: bool = False):
    pieces = _connected_pieces(comp)
    if len(pieces) != 1:
        return False, None
    if len(comp.vertices) == 1 and not comp.edges and allow_trivial_vertex:
        return True, None
    if comp.kind == "ball":
        # connected and every vertex on a cycle: min degree >= 2
        if any(_degree(comp, v) < 2 for v in comp.vertices):
            return False, None
        return True, _spanning_closed_walk(comp)
    # surface: connected plus a cycle whose label is nontrivial
    for lab, edges in _cycle_basis_labels(comp, group):
        if G.dehn_reduce(lab, group, comp.fid):
            return True, edges
    return False, None


def _spanning_closed_walk(comp: Component):
    """A closed walk visiting every vertex (witness for ball components)."""
    adj = _adjacency(comp)
    if not comp.vertices:
        return []
    walk = []
    seen = set()

    def dfs(x):
        seen.add(x)
        walk.append(x)
        for y, e in adj[x]:
            if y not in seen:
                dfs(y)
                walk.append(x)
    dfs(comp.vertices[0])
    return walk


def strong_cutpoints(wh: WhiteheadGraph) -> Dict[str, List[DiscVertex]]:
    """Per-component strong cutpoints.

    A vertex v is a strong cutpoint when the component splits as a union of
    two subgraphs meeting only at v with one side not strongly connected.
    A bare one-vertex side counts as trivially strongly connected, so in a
    component that itself fails strong connectedness every vertex splits
    against the whole graph and is reported.
    """
    out = {}
    for comp in wh.components:
        cuts = []
        for piece in _connected_pieces(comp):
            if len(piece) == 1 and not any(
                    e.u == piece[0] or e.v == piece[0] for e in comp.edges):
                continue  # isolated vertex: nothing to split
            sub = _induced(comp, set(piece))
            strong, _ = _strongly_connected_component(sub, wh.group)
            if not strong:
                cuts.extend(piece)
                continue
            for v in piece:
                if _is_strong_cutpoint(sub, v, wh.group):
                    cuts.append(v)
        out[comp.cid] = sorted(set(cuts))
    return out


def _induced(comp: Component, vertices: set) -> Component:
    edges = tuple(e for e in comp.edges
                  if e.u in vertices and e.v in vertices)
    return Component(comp.cid, comp.kind, comp.fid,
                     tuple(sorted(vertices)), edges)


def _is_strong_cutpoint(comp: Component, v: DiscVertex, group: GroupSpec) -> bool:
    """Two-subgraph splits at v of a strongly connected component piece.

    A split assigns each connected block of (piece minus v) wholly to one
    side; loops at v may go either way and only ever help a side, so the
    failing side is searched loop-free while the complement absorbs them.
    """
    rest = set(comp.vertices) - {v}
    adj: Dict[DiscVertex, List[DiscVertex]] = {u: [] for u in rest}
    for e in comp.edges:
        if v in (e.u, e.v):
            continue
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    blocks: List[set] = []
    seen = set()
    for u in sorted(rest):
        if u in seen:
            continue
        stack, blk = [u], set()
        seen.add(u)
        while stack:
            x = stack.pop()
            blk.add(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        blocks.append(blk)
    if not blocks:
        return False
    indices = range(len(blocks))
    for r in range(1, len(blocks) + 1):
        for chosen in itertools.combinations(indices, r):
            side_vertices = {v} | set().union(*(blocks[i] for i in chosen))
            side = _induced_loopfree(comp, side_vertices, v)
            strong, _ = _strongly_connected_component(
                side, group, allow_trivial_vertex=True)
            if not strong:
                return True
    return False


def _induced_loopfree(comp: Component, vertices: set, v: DiscVertex) -> Component:
    edges = tuple(e for e in comp.edges
                  if e.u in vertices and e.v in vertices
                  and not (e.u == v and e.v == v))
    return Component(comp.cid, comp.kind, comp.fid,
                     tuple(sorted(vertices)), edges)


# ---------------------------------------------------------------------------
# DOT emission


def emit_dot_component(comp: Component, group: GroupSpec) -> str:
    """Deterministic Graphviz text for one component; the support count is
    kept as an edge attribute so multiplicities stay inspectable."""
    lines = [f'graph "{comp.cid}" {{']
    for v in sorted(comp.vertices):
        lines.append(f'  "{v.label()}";')
    for e in sorted(comp.edges, key=lambda e: e.key()):
        attrs = []
        if e.label:
            attrs.append(f'label="{group.format_word(e.label)}"')
        if e.support != 1:
            attrs.append(f'support={e.support}')
        attr_txt = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f'  "{e.u.label()}" -- "{e.v.label()}"{attr_txt};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dot(wh: WhiteheadGraph) -> str:
    """All components, one graph block per component, byte-stable."""
    return "".join(emit_dot_component(c, wh.group) for c in wh.components)
