import random

import pytest

from sepstab.disks import Disk, DiskError, isometric_disk
from sepstab.gallery import build, octagon_generators
from sepstab.groups import GroupSpec
from sepstab.hyperbolic import MoebiusMap, Representation, loxodromic_with_axis
from sepstab.pingpong import (DiskCountMismatch, PingPongDisks,
                              ping_pong_verify)

F2 = GroupSpec((), 2)


class TestDisks:
    def test_interior_membership(self):
        d = Disk.interior(1 + 1j, 2.0)
        assert d.contains_point(1 + 1j)
        assert d.contains_point(2.5 + 1j)
        assert not d.contains_point(4 + 1j)
        assert not d.contains_point(None)

    def test_exterior_membership(self):
        d = Disk.exterior(0, 1.0)
        assert not d.contains_point(0.5)
        assert d.contains_point(3)
        assert d.contains_point(None)

    def test_image_matches_pointwise(self):
        rng = random.Random(2)
        for _ in range(200):
            c = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            r = rng.uniform(0.2, 2.0)
            D = Disk.interior(c, r) if rng.random() < 0.5 else Disk.exterior(c, r)
            m = MoebiusMap(*(complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                             for _ in range(4)))
            Dm = D.image(m)
            for _ in range(10):
                z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
                if abs(D.value(z)) < 1e-6:
                    continue
                w = m.moebius(z)
                if w is None:
                    continue
                assert Dm.contains_point(w, 1e-9) == D.contains_point(z)

    def test_containment_cases(self):
        assert Disk.interior(0, 3).contains_disk(Disk.interior(1, 1), 0.5)
        assert not Disk.interior(0, 3).contains_disk(Disk.interior(2.5, 1))
        assert Disk.exterior(0, 1).contains_disk(Disk.interior(5, 2), 0.5)
        assert not Disk.exterior(0, 1).contains_disk(Disk.interior(0.5, 0.2))

    def test_disjointness(self):
        assert Disk.interior(0, 1).disjoint_from(Disk.interior(3, 1), 0.5)
        assert not Disk.interior(0, 1).disjoint_from(Disk.interior(1.5, 1))

    def test_isometric_disk_requires_c(self):
        with pytest.raises(DiskError):
            isometric_disk(MoebiusMap(2, 0, 0, 0.5))


class TestPingPong:
    def test_schottky_verifies(self):
        rep, disks = build("schottky2")
        cert = ping_pong_verify(rep, disks)
        assert cert.ok and not cert.failures

    def test_mixed_gallery_verifies(self):
        rep, disks = build("s2-times-z")
        cert = ping_pong_verify(rep, disks)
        assert cert.ok
        assert 0 in cert.surface_circles
        center, radius = cert.surface_circles[0]
        assert abs(center) < 1e-6 and abs(radius - 1.0) < 1e-9

    def test_parabolic_generator_fails(self):
        rep, disks = build("pinched-a")
        cert = ping_pong_verify(rep, disks)
        assert not cert.ok
        assert any("mapping inequality" in f for f in cert.failures)

    def test_overlapping_disks_fail(self):
        rep, _ = build("schottky2")
        disks = PingPongDisks(free={
            0: Disk.interior(-2, 3.0), 1: Disk.interior(-8, 3.0),
            2: Disk.interior(8, 3.0), 3: Disk.interior(2, 3.0)},
            factor={})
        cert = ping_pong_verify(rep, disks)
        assert not cert.ok
        assert any("not disjoint" in f for f in cert.failures)

    def test_disk_count_mismatch(self):
        rep, _ = build("schottky2")
        with pytest.raises(DiskCountMismatch):
            ping_pong_verify(rep, PingPongDisks(
                free={0: Disk.interior(-2, 1)}, factor={}))

    def test_certificate_attached(self):
        rep, disks = build("schottky2")
        assert disks.certificate is None or disks.certificate.ok
        cert = ping_pong_verify(rep, disks)
        assert disks.certificate is cert


class TestOctagon:
    def test_relator_residual(self):
        a1, b1, a2, b2 = octagon_generators()

        def comm(x, y):
            return x * y * x.inverse() * y.inverse()

        rel = comm(a1, b1) * comm(a2, b2)
        assert rel.dist_to_pm_identity() < 1e-10

    def test_generators_preserve_unit_circle(self):
        import cmath
        for m in octagon_generators():
            for k in range(16):
                z = cmath.exp(2j * cmath.pi * k / 16)
                assert abs(abs(m.moebius(z)) - 1) < 1e-12
