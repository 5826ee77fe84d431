import math

import pytest

from sepstab.gallery import build
from sepstab.groups import GroupSpec, cyclic_reduce
from sepstab.hyperbolic import (H3Point, MoebiusMap, Representation,
                                loxodromic_with_axis)
from sepstab.stability import (PathTooShort, StabilityParams, orbit_path,
                               qg_constants, stability_margin, sweep)

F2 = GroupSpec((), 2)


class TestOrbitPath:
    def test_diagonal_heights(self):
        rep = Representation(F2, [MoebiusMap(2, 0, 0, 0.5),
                                  loxodromic_with_axis(2, 8, 3)])
        cnf, _ = cyclic_reduce((0,), F2)
        path = orbit_path(rep, cnf, 3, H3Point(0, 1))
        assert [round(p.t, 9) for p in path] == [1.0, 4.0, 16.0, 64.0]

    def test_two_points_for_single_power(self):
        rep, _ = build("schottky2")
        cnf, _ = cyclic_reduce((0,), F2)
        path = orbit_path(rep, cnf, 1, H3Point(0, 1))
        assert len(path) == 2

    def test_length_formula(self):
        rep, _ = build("schottky2")
        cnf, _ = cyclic_reduce(F2.parse_word("a b"), F2)
        path = orbit_path(rep, cnf, 5, H3Point(0, 1))
        assert len(path) == 5 * 2 + 1

    def test_equivariance_under_conjugation(self):
        from sepstab.groups import word_mul, word_inverse
        from sepstab.hyperbolic import apply, dist
        rep, _ = build("schottky2")
        h = F2.parse_word("b a")
        w = F2.parse_word("a b")
        hm = rep.evaluate(h)
        cnf, _ = cyclic_reduce(w, F2)
        base = H3Point(0, 1)
        path = orbit_path(rep, cnf, 3, base)
        conj_word = word_mul(h, w, word_inverse(h))
        cnf2, conj = cyclic_reduce(conj_word, F2)
        # the conjugate's path from the translated basepoint is the
        # translate of the path
        trans = orbit_path(rep, cnf, 3, base)
        for p, q in zip(path, trans):
            assert dist(p, q) < 1e-9


class TestQgConstants:
    def test_exact_geodesic(self):
        path = [H3Point(0, math.e ** i) for i in range(30)]
        k, a, worst, arg = qg_constants(path, 24)
        assert abs(k - 1.0) < 1e-9
        assert a == 0.0
        assert abs(worst - 1.0) < 1e-9

    def test_constant_path(self):
        path = [H3Point(0, 1.0)] * 12
        _, _, worst, _ = qg_constants(path, 24)
        assert worst == 0.0

    def test_too_short(self):
        with pytest.raises(PathTooShort):
            qg_constants([H3Point(0, 1)], 24)

    def test_envelope_dominates_samples(self):
        from sepstab.hyperbolic import dist
        rep, _ = build("schottky2")
        cnf, _ = cyclic_reduce(F2.parse_word("a b b"), F2)
        path = orbit_path(rep, cnf, 6, H3Point(0, 1))
        k, a, worst, _ = qg_constants(path, 24)
        n = len(path)
        for i in range(n):
            for j in range(i + 1, min(i + 24, n - 1) + 1):
                assert (j - i) <= k * dist(path[i], path[j]) + a + 1e-9

    def test_schottky_ab_regression_baseline(self):
        rep, _ = build("schottky2")
        cnf, _ = cyclic_reduce(F2.parse_word("a b"), F2)
        path = orbit_path(rep, cnf, 8, H3Point(0, 1))
        _, _, worst, _ = qg_constants(path, 24)
        assert worst > 0
        assert abs(worst - 3.6838864320533786) < 1e-6


class TestStabilityMargin:
    def test_schottky_pass_small_depth(self):
        rep, _ = build("schottky2")
        report = stability_margin(rep, StabilityParams(depth=5))
        assert report.verdict == "pass"
        assert report.margin >= 0.02
        assert report.k_est <= 100 and report.a_est <= 50

    def test_pinched_fail_with_witness(self):
        rep, _ = build("pinched-a")
        report = stability_margin(rep, StabilityParams(depth=4))
        assert report.verdict == "fail"
        assert report.witness.spelling == "a"
        assert report.witness.kind == "parabolic"
        assert abs(report.witness.trace ** 2 - 4.0) < 1e-12

    def test_fail_witness_is_recheckable(self):
        from sepstab.separability import is_separable
        rep, _ = build("pinched-a")
        report = stability_margin(rep, StabilityParams(depth=4))
        w = rep.group.parse_word(report.witness.spelling)
        assert is_separable(w, rep.group).separable
        m = rep.evaluate(w)
        tr2 = m.trace() ** 2
        assert abs(tr2 - 4.0) <= 1e-12 and not m.is_identity()

    def test_basepoint_robustness(self):
        rep, _ = build("schottky2")
        params = StabilityParams(depth=4)
        a = stability_margin(rep, params, base=H3Point(0, 1))
        b = stability_margin(rep, params, base=H3Point(5 + 2j, 3))
        assert a.verdict == b.verdict == "pass"
        repP, _ = build("pinched-a")
        a = stability_margin(repP, params, base=H3Point(0, 1))
        b = stability_margin(repP, params, base=H3Point(5 + 2j, 3))
        assert a.verdict == b.verdict == "fail"

    def test_conjugation_invariance(self):
        import random
        from sepstab.hyperbolic import MoebiusMap
        rng = random.Random(5)
        rep, _ = build("schottky2")
        params = StabilityParams(depth=3)
        base_report = stability_margin(rep, params)
        ratios = {r.spelling: r.ratio for r in base_report.records}
        for _ in range(3):
            h = MoebiusMap(*(complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                             for _ in range(4)))
            conj_report = stability_margin(rep.conjugated(h), params)
            assert conj_report.verdict == base_report.verdict
            for r in conj_report.records:
                assert abs(r.ratio - ratios[r.spelling]) < 1e-9

    def test_monotone_in_depth(self):
        rep, _ = build("schottky2")
        shallow = stability_margin(rep, StabilityParams(depth=3))
        deep = stability_margin(rep, StabilityParams(depth=5))
        spell_shallow = {r.spelling for r in shallow.records}
        deep_ratios = {r.spelling: r.ratio for r in deep.records}
        for s in spell_shallow:
            assert deep_ratios[s] >= 0.02

    def test_unknown_elements_cannot_fail(self):
        # a mixed rep with all-loxodromic images: unknown-separability
        # elements may block with inconclusive but never produce fail
        rep, _ = build("s2-times-z")
        report = stability_margin(rep, StabilityParams(depth=3, margin=0.02))
        assert report.verdict in ("pass", "inconclusive")


class TestSweep:
    def family(self):
        def build_rep(lam):
            return Representation(GroupSpec((), 2), [
                loxodromic_with_axis(-8.0, -2.0, lam),
                loxodromic_with_axis(2.0, 8.0, 5.0)])
        return build_rep

    def test_rows_and_error_isolation(self):
        rows = sweep(self.family(), [1.0, 2.0, 6.0],
                     StabilityParams(depth=4))
        assert len(rows) == 3
        assert rows[0][4] == "error" and "HyperbolicError" in rows[0][5]
        assert rows[1][4] == "pass" and rows[2][4] == "pass"

    def test_margins_nondecreasing_in_lambda(self):
        rows = sweep(self.family(), [2.0, 4.0, 6.0, 8.0, 10.0],
                     StabilityParams(depth=4))
        margins = [float(r[1]) for r in rows]
        assert all(b >= a - 1e-12 for a, b in zip(margins, margins[1:]))
        # frozen first-run values
        assert abs(margins[0] - 2 * math.log(2)) < 1e-9
        assert abs(margins[-1] - 2 * math.log(5)) < 1e-9

    def test_empty_grid(self):
        assert sweep(self.family(), []) == []
