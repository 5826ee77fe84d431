import pytest

from sepstab.gallery import build
from sepstab.groups import cyclic_reduce, enumerate_elements
from sepstab.pingpong import UnverifiedDisks, ping_pong_verify
from sepstab.sampling import (graphs_agree, sample_mu, whitehead_graph_sampled,
                              whitehead_graph_sampled_for)
from sepstab.whitehead import MuSpec, whitehead_graph_combinatorial


def _reference():
    rep, disks = build("s2-times-z")
    ping_pong_verify(rep, disks)
    return rep, disks


REP, DISKS = _reference()
GRP = REP.group


def cnf_of(text):
    cnf, _ = cyclic_reduce(GRP.parse_word(text), GRP)
    return cnf


class TestSampling:
    def test_unverified_disks_rejected(self):
        rep, disks = build("s2-times-z")  # fresh, no certificate
        with pytest.raises(UnverifiedDisks):
            whitehead_graph_sampled(rep, disks, MuSpec(sampled_pairs=()))

    def test_empty_mu_gives_empty_graph(self):
        wh = whitehead_graph_sampled(REP, DISKS, MuSpec(sampled_pairs=()))
        assert all(not c.edges for c in wh.components)

    def test_depth_zero_free_letter(self):
        wh = whitehead_graph_sampled(REP, DISKS,
                                     sample_mu(REP, cnf_of("t1"), 0))
        ball = wh.component("ball")
        assert [(e.u.label(), e.v.label()) for e in ball.edges] == [
            ("Dt1-", "Dt1+")]
        assert not wh.component("surface0").edges

    def test_mu_pairs_swap_closed(self):
        mu = sample_mu(REP, cnf_of("a1 t1"), 2)
        pairs = set(mu.sampled_pairs)
        assert pairs and all((q, p) in pairs for p, q in pairs)

    def test_schottky_generators_depth_one(self):
        # axes of the generator pair at depth 1 already reproduce the
        # combinatorial graphs of the generators and their product
        rep, disks = build("schottky2")
        ping_pong_verify(rep, disks)
        grp = rep.group
        for text in ("a", "b", "a b"):
            cnf, _ = cyclic_reduce(grp.parse_word(text), grp)
            comb = whitehead_graph_combinatorial(cnf, grp)
            samp = whitehead_graph_sampled_for(rep, disks, cnf, 1)
            assert graphs_agree(comb, samp)

    def test_schottky_longer_words_need_rotation_depth(self):
        rep, disks = build("schottky2")
        ping_pong_verify(rep, disks)
        grp = rep.group
        for text in ("a b A B", "a a b"):
            cnf, _ = cyclic_reduce(grp.parse_word(text), grp)
            comb = whitehead_graph_combinatorial(cnf, grp)
            samp = whitehead_graph_sampled_for(rep, disks, cnf, 3)
            assert graphs_agree(comb, samp)

    @pytest.mark.parametrize("text", [
        "t1", "a1", "B1", "a1 a2", "a1 b1", "a1 t1", "t1 t1",
        "a1 t1 A1 T1", "a1 t1 b1 t1", "a1 t1 t1",
    ])
    def test_cross_construction_words(self, text):
        cnf = cnf_of(text)
        comb = whitehead_graph_combinatorial(cnf, GRP)
        samp = whitehead_graph_sampled_for(REP, DISKS, cnf, 3)
        assert graphs_agree(comb, samp)

    def test_cross_construction_full_length_two(self):
        for cnf in enumerate_elements(GRP, 2):
            comb = whitehead_graph_combinatorial(cnf, GRP)
            samp = whitehead_graph_sampled_for(REP, DISKS, cnf, 3)
            assert graphs_agree(comb, samp), GRP.format_word(cnf.letters())
