import pytest

from sepstab.groups import GroupSpec, cyclic_reduce
from sepstab.whitehead import (NotCyclicallyReduced, emit_dot,
                               is_strongly_connected, standard_meridian_model,
                               strong_cutpoints, whitehead_graph_combinatorial)

F2 = GroupSpec((), 2)
S2Z = GroupSpec((2,), 1)
TWO_SURF = GroupSpec((2, 3), 1)


def graph_of(text, group=F2):
    cnf, _ = cyclic_reduce(group.parse_word(text), group)
    return whitehead_graph_combinatorial(cnf, group)


def edge_pairs(wh, cid="ball"):
    return sorted((e.u.label(), e.v.label()) for e in wh.component(cid).edges)


class TestMeridianModel:
    def test_f2_single_ball(self):
        comps = standard_meridian_model(F2)
        assert [c.cid for c in comps] == ["ball"]
        assert [v.label() for v in comps[0].vertices] == [
            "Dt1+", "Dt1-", "Dt2+", "Dt2-"]

    def test_s2z_layout(self):
        comps = standard_meridian_model(S2Z)
        assert [c.cid for c in comps] == ["ball", "surface0"]
        assert [v.label() for v in comps[0].vertices] == [
            "D1+", "D1-", "Dt1+", "Dt1-"]
        assert [v.label() for v in comps[1].vertices] == ["D1"]

    def test_two_surfaces_layout(self):
        comps = standard_meridian_model(TWO_SURF)
        assert len(comps[0].vertices) == 6
        assert [c.cid for c in comps] == ["ball", "surface0", "surface1"]


class TestCombinatorial:
    def test_single_letter(self):
        wh = graph_of("a")
        assert edge_pairs(wh) == [("Dt1-", "Dt1+")]
        strong = is_strongly_connected(wh)
        assert strong["ball"][0] is False  # isolated b vertices

    def test_commutator_four_cycle(self):
        wh = graph_of("a b A B")
        assert len(wh.component("ball").edges) == 4
        strong = is_strongly_connected(wh)
        assert strong["ball"][0] is True
        assert strong["ball"][1]  # witness cycle present
        assert strong_cutpoints(wh)["ball"] == []

    def test_mixed_word_edges(self):
        wh = graph_of("a1 t1", S2Z)
        assert edge_pairs(wh) == [("D1+", "Dt1-"), ("D1-", "Dt1+")]
        loops = wh.component("surface0").edges
        assert [(e.u.label(), S2Z.format_word(e.label)) for e in loops] == [
            ("D1", "a1")]

    def test_surface_loop_strongly_connected(self):
        wh = graph_of("a1 t1", S2Z)
        strong = is_strongly_connected(wh)
        assert strong["surface0"][0] is True   # nontrivial label
        assert strong["ball"][0] is False      # two disjoint edges

    def test_pure_surface_word_has_no_edges(self):
        wh = graph_of("a1 b1", S2Z)
        assert all(not c.edges for c in wh.components)

    def test_squares_word_is_four_cycle(self):
        # the articulation-point oracle on the 4-vertex graph of a a b b:
        # each vertex has degree two on one cycle, so no cut vertex exists
        wh = graph_of("a a b b")
        degs = {}
        for e in wh.component("ball").edges:
            degs[e.u.label()] = degs.get(e.u.label(), 0) + 1
            degs[e.v.label()] = degs.get(e.v.label(), 0) + 1
        assert set(degs.values()) == {2}
        assert is_strongly_connected(wh)["ball"][0] is True
        assert strong_cutpoints(wh)["ball"] == []

    def test_requires_cyclically_reduced(self):
        from sepstab.groups import CyclicNormalForm
        bad = CyclicNormalForm(((1, (8,)), (0, (0,)), (1, (9,))))
        with pytest.raises(NotCyclicallyReduced):
            whitehead_graph_combinatorial(bad, S2Z)

    def test_rotation_invariance(self):
        base = graph_of("a b A B b")
        word = F2.parse_word("a b A B b")
        for k in range(1, len(word)):
            rot = word[k:] + word[:k]
            cnf, _ = cyclic_reduce(rot, F2)
            assert whitehead_graph_combinatorial(cnf, F2).edge_multiset() \
                == base.edge_multiset()

    def test_reversal_symmetry_is_structural(self):
        # undirected edges with {g, g^-1}-canonical labels: the reverse of
        # every edge is the edge itself, checked via inverse-class equality
        from sepstab.groups import word_inverse, canonical_class
        for text, grp in (("a b A B b", F2), ("a1 t1 b1 T1", S2Z)):
            wh = graph_of(text, grp)
            inv_word = word_inverse(grp.parse_word(text))
            cnf, _ = cyclic_reduce(inv_word, grp)
            wh_inv = whitehead_graph_combinatorial(cnf, grp)
            assert wh.edge_multiset() == wh_inv.edge_multiset()


class TestStrongCutpoints:
    def test_two_vertex_single_edge(self):
        wh = graph_of("a")
        cuts = strong_cutpoints(wh)["ball"]
        assert sorted(v.label() for v in cuts) == ["Dt1+", "Dt1-"]

    def test_four_cycle_empty(self):
        assert strong_cutpoints(graph_of("a b A B"))["ball"] == []

    def test_connected_with_articulation(self):
        # a b b: path-shaped graph, interior vertices are strong cutpoints
        wh = graph_of("a b b")
        cuts = {v.label() for v in strong_cutpoints(wh)["ball"]}
        assert {"Dt1-", "Dt2+"} <= cuts or {"Dt2-", "Dt2+"} & cuts


class TestDot:
    def test_single_letter_layout(self):
        text = emit_dot(graph_of("a"))
        assert text.count('--') == 1
        assert text.count(';') == 5  # 4 vertices + 1 edge

    def test_commutator_cycle(self):
        text = emit_dot(graph_of("a b A B"))
        assert text.count('--') == 4

    def test_empty_graph_header_only(self):
        text = emit_dot(graph_of("a1 b1", S2Z))
        assert text.count('--') == 0
        assert 'graph "ball"' in text and 'graph "surface0"' in text

    def test_deterministic(self):
        a = emit_dot(graph_of("a1 t1 b1 T1", S2Z))
        b = emit_dot(graph_of("a1 t1 b1 T1", S2Z))
        assert a == b

    def test_labels_dehn_reduced(self):
        grp = S2Z
        rel = grp.relator(0)
        word = rel[:7] + grp.parse_word("t1")  # syllable equal to b2
        cnf, _ = cyclic_reduce(word, grp)
        wh = whitehead_graph_combinatorial(cnf, grp)
        text = emit_dot(wh)
        assert 'label="b2"' in text
