"""Klein-combination (ping-pong) certificates for reference representations.

Free letters carry a Schottky disk pair; all letters of one surface factor
share a single factor disk.  The verified inequalities:

  * distinct disks are pairwise disjoint with margin;
  * each letter maps the complement of its inverse's disk strictly into its
    own disk (closed form on disk images, a 256-point boundary sample, and
    an interval-arithmetic recheck of the containment inequality);
  * surface factors additionally preserve a fitted round circle inside the
    factor disk and have all generator isometric disks inside it, and their
    relator residual must be below 1e-8.

A passing certificate witnesses discreteness, faithfulness and the
free-product structure for the letters checked; for surface factors this is
modulo the factor being Fuchsian by construction, which is what the circle
and relator conditions pin down numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import mpmath

from sepstab.disks import Disk, DiskError, isometric_disk
from sepstab.groups import GroupSpec, inv
from sepstab.hyperbolic import (MoebiusMap, Representation, classify,
                                fixed_points)

DEFAULT_MARGIN = 1e-6
BOUNDARY_SAMPLES = 256
RELATOR_RESIDUAL_MAX = 1e-8


class PingPongError(Exception):
    pass


class DiskCountMismatch(PingPongError):
    pass


class UnverifiedDisks(PingPongError):
    pass


@dataclass
class PingPongCertificate:
    ok: bool
    margin: float
    failures: List[str] = field(default_factory=list)
    surface_circles: Dict[int, Tuple[complex, float]] = field(default_factory=dict)


@dataclass
class PingPongDisks:
    """Round disk per generator letter; surface letters share their factor's
    disk, free letters have one disk per sign."""

    free: Dict[int, Disk]          # free letter id -> disk
    factor: Dict[int, Disk]        # surface factor id -> shared disk
    certificate: Optional[PingPongCertificate] = None

    def disk_for_letter(self, group: GroupSpec, letter: int) -> Disk:
        fid = group.letter_factor(letter)
        if group.factors[fid].kind == "surface":
            return self.factor[fid]
        return self.free[letter]

    def distinct_disks(self) -> List[Tuple[str, Disk]]:
        out = [(f"factor{fid}", d) for fid, d in sorted(self.factor.items())]
        out += [(f"letter{lid}", d) for lid, d in sorted(self.free.items())]
        return out

    def require_verified(self):
        if self.certificate is None or not self.certificate.ok:
            raise UnverifiedDisks("ping-pong certificate absent or failing")


# ---------------------------------------------------------------------------
# interval helpers (complex intervals as coordinate boxes)


def _iv(x: float):
    return mpmath.iv.mpf(x)


class _IvComplex:
    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = re
        self.im = im

    @staticmethod
    def of(z: complex) -> "_IvComplex":
        return _IvComplex(_iv(z.real), _iv(z.imag))

    def __add__(self, o):
        return _IvComplex(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return _IvComplex(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        return _IvComplex(self.re * o.re - self.im * o.im,
                          self.re * o.im + self.im * o.re)

    def conj(self):
        return _IvComplex(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def abs(self):
        s = self.abs2()
        if s.a < 0:  # rounding can push the lower endpoint just below zero
            s = mpmath.iv.mpf([0, s.b])
        return mpmath.iv.sqrt(s)


def _interval_containment(m: MoebiusMap, src_ext_of: Disk, target: Disk,
                          margin: float) -> bool:
    """Interval recheck that m(complement of src_ext_of) fits in target.

    Both disks bounded (the gallery certificates only use bounded disks for
    this path); falls back to False when interval bounds cannot confirm.
    """
    if not (src_ext_of.bounded and target.bounded):
        return True  # closed-form + sampling are authoritative here
    minv = m.inverse()
    a, b, c, d = (_IvComplex.of(minv.a), _IvComplex.of(minv.b),
                  _IvComplex.of(minv.c), _IvComplex.of(minv.d))
    # exterior form of the source: -|z-c0|^2 + r0^2 <= 0 outside
    c0 = _IvComplex.of(src_ext_of.center)
    r0 = _iv(src_ext_of.radius)
    A = -_iv(1.0)
    B = c0
    C = r0 * r0 - c0.abs2()
    A2 = (A * a.abs2() + _iv(2.0) * (B * a.conj() * c).re + C * c.abs2())
    C2 = (A * b.abs2() + _iv(2.0) * (B * b.conj() * d).re + C * d.abs2())
    B2 = (a.conj() * b * _IvComplex(A, _iv(0.0))
          + a.conj() * d * B
          + c.conj() * b * B.conj()
          + c.conj() * d * _IvComplex(C, _iv(0.0)))
    disc = B2.abs2() - A2 * C2
    if not disc > 0:
        return False
    # image is a bounded disk only if A2 > 0
    if not A2 > 0:
        return False
    center = _IvComplex(-B2.re / A2, -B2.im / A2)
    radius = mpmath.iv.sqrt(disc) / A2
    tc = _IvComplex.of(target.center)
    tr = _iv(target.radius)
    lhs = (center - tc).abs() + radius
    rhs = tr - _iv(margin)
    return lhs < rhs


# ---------------------------------------------------------------------------
# verification


def _fit_circle(p: complex, q: complex, r: complex):
    """Circle through three points; returns (center, radius) or None."""
    ax, ay, bx, by, cx, cy = p.real, p.imag, q.real, q.imag, r.real, r.imag
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-12:
        return None
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / d
    center = complex(ux, uy)
    return center, abs(p - center)


def ping_pong_verify(rep: Representation, disks: PingPongDisks,
                     margin: float = DEFAULT_MARGIN) -> PingPongCertificate:
    """Check the Klein-combination inequalities; attaches and returns the
    certificate."""
    group = rep.group
    failures: List[str] = []

    # disk bookkeeping matches the group
    for f in group.factors:
        if f.kind == "surface":
            if f.index not in disks.factor:
                raise DiskCountMismatch(f"no disk for surface factor {f.index}")
        else:
            base = group.gen_base(f.index)
            for lid in (base, base + 1):
                if lid not in disks.free:
                    raise DiskCountMismatch(
                        f"no disk for free letter {group.letter_name(lid)}")
    extra = set(disks.free) - {
        lid for f in group.factors if f.kind == "free"
        for lid in (group.gen_base(f.index), group.gen_base(f.index) + 1)}
    if extra or set(disks.factor) - {
            f.index for f in group.factors if f.kind == "surface"}:
        raise DiskCountMismatch("disks for letters outside the group")

    named = disks.distinct_disks()
    for i, (ni, di) in enumerate(named):
        for nj, dj in named[i + 1:]:
            try:
                if not di.disjoint_from(dj, margin):
                    failures.append(f"disks {ni} and {nj} are not disjoint")
            except DiskError:
                failures.append(f"disjointness of {ni}, {nj} undecidable")

    # per-letter mapping inequality
    for letter in range(group.n_letters):
        m = rep.image(letter)
        src = disks.disk_for_letter(group, inv(letter))
        tgt = disks.disk_for_letter(group, letter)
        name = group.letter_name(letter)
        try:
            if src.bounded:
                image = Disk.exterior(src.center, src.radius).image(m)
            else:
                image = Disk.interior(src.center, src.radius).image(m)
            if not tgt.contains_disk(image, margin):
                failures.append(f"mapping inequality fails for {name}")
                continue
        except DiskError:
            failures.append(f"mapping inequality degenerate for {name}")
            continue
        # boundary sample
        bad = 0
        for z in src.boundary_points(BOUNDARY_SAMPLES):
            w = m.moebius(z)
            if w is None or not tgt.contains_point(w, -margin * abs(tgt.A)):
                bad += 1
        if bad:
            failures.append(
                f"boundary sample fails for {name} at {bad} points")
            continue
        if not _interval_containment(m, src, tgt, margin):
            if src.bounded and tgt.bounded:
                failures.append(f"interval recheck fails for {name}")

    # surface-factor conditions
    circles: Dict[int, Tuple[complex, float]] = {}
    residuals = rep.relator_residuals()
    for f in group.factors:
        if f.kind != "surface":
            continue
        fid = f.index
        if residuals[fid] >= RELATOR_RESIDUAL_MAX:
            failures.append(
                f"relator residual {residuals[fid]:.3g} too large for "
                f"factor {fid}")
        letters = list(group.factor_letters(fid))
        # fit the invariant circle through attracting fixed points
        pts = []
        for lid in letters[::2]:
            mm = rep.image(lid)
            if classify(mm) != "loxodromic":
                failures.append(
                    f"surface generator {group.letter_name(lid)} is not "
                    f"loxodromic")
                continue
            fp = fixed_points(mm)[-1]
            if fp is not None:
                pts.append(fp)
        circle = _fit_circle(*pts[:3]) if len(pts) >= 3 else None
        if circle is None:
            failures.append(f"no invariant circle for factor {fid}")
            continue
        center, radius = circle
        circles[fid] = (center, radius)
        fdisk = disks.factor[fid]
        if not fdisk.bounded:
            failures.append(f"factor {fid} disk must be bounded")
            continue
        if abs(center - fdisk.center) + radius >= fdisk.radius - margin:
            failures.append(f"invariant circle not inside factor {fid} disk")
        # generators preserve the circle and their isometric disks fit
        npts = 64
        for lid in letters:
            mm = rep.image(lid)
            worst = 0.0
            for k in range(npts):
                z = center + radius * complex(math.cos(2 * math.pi * k / npts),
                                              math.sin(2 * math.pi * k / npts))
                w = mm.moebius(z)
                if w is None:
                    worst = float("inf")
                    break
                worst = max(worst, abs(abs(w - center) - radius))
            if worst > 1e-9 * max(1.0, radius):
                failures.append(
                    f"{group.letter_name(lid)} moves the invariant circle "
                    f"by {worst:.3g}")
            try:
                idisk = isometric_disk(mm)
            except DiskError:
                failures.append(
                    f"{group.letter_name(lid)} has no isometric disk")
                continue
            if not fdisk.contains_disk(idisk, margin):
                failures.append(
                    f"isometric disk of {group.letter_name(lid)} leaves "
                    f"factor {fid} disk")

    cert = PingPongCertificate(ok=not failures, margin=margin,
                               failures=failures, surface_circles=circles)
    disks.certificate = cert
    return cert
