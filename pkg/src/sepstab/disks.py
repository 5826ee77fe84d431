"""Round disks on the Riemann sphere as hermitian forms.

A region is {z : A|z|^2 + 2 Re(conj(B) z) + C <= 0} with A, C real.  For
A > 0 this is a bounded euclidean disk, for A < 0 the exterior of a circle
(a disk containing infinity), for A = 0 a half-plane.  Möbius maps act on
forms by congruence, so images, membership and containment are all exact
formulas, which keeps the ping-pong inequalities honest.
"""

from __future__ import annotations

import math
from typing import Optional

from sepstab.hyperbolic import MoebiusMap


class DiskError(Exception):
    pass


class Disk:
    __slots__ = ("A", "B", "C")

    def __init__(self, A: float, B: complex, C: float):
        # normalize so the circle data is scale-free: |B|^2 - AC = r^2 A^2 > 0
        disc = abs(B) ** 2 - A * C
        if disc <= 0:
            raise DiskError("form does not define a real circle")
        s = math.sqrt(disc)
        self.A = A / s
        self.B = complex(B) / s
        self.C = C / s

    # -- constructors ---------------------------------------------------

    @staticmethod
    def interior(center: complex, radius: float) -> "Disk":
        if radius <= 0:
            raise DiskError("radius must be positive")
        c = complex(center)
        return Disk(1.0, -c, abs(c) ** 2 - radius * radius)

    @staticmethod
    def exterior(center: complex, radius: float) -> "Disk":
        if radius <= 0:
            raise DiskError("radius must be positive")
        c = complex(center)
        return Disk(-1.0, c, radius * radius - abs(c) ** 2)

    # -- geometry -------------------------------------------------------

    @property
    def bounded(self) -> bool:
        return self.A > 0

    @property
    def center(self) -> complex:
        if self.A == 0:
            raise DiskError("half-plane has no center")
        return -self.B / self.A

    @property
    def radius(self) -> float:
        if self.A == 0:
            raise DiskError("half-plane has no radius")
        return math.sqrt(abs(self.B) ** 2 - self.A * self.C) / abs(self.A)

    def value(self, z: Optional[complex]) -> float:
        """Signed form value; negative inside.  None encodes infinity, where
        the sign of A decides membership."""
        if z is None:
            return self.A
        return (self.A * (z.real * z.real + z.imag * z.imag)
                + 2.0 * (self.B.conjugate() * z).real + self.C)

    def contains_point(self, z: Optional[complex], tol: float = 0.0) -> bool:
        return self.value(z) <= tol

    def image(self, m: MoebiusMap) -> "Disk":
        """The region m(disk); congruence by m^-1."""
        inv = m.inverse()
        a, b, c, d = inv.a, inv.b, inv.c, inv.d
        # form matrix H = [[A, B], [conj(B), C]], H' = inv^H * H * inv
        A, B, C = self.A, self.B, self.C
        Bc = B.conjugate()
        a_, b_, c_, d_ = a, b, c, d
        A2 = (A * abs(a_) ** 2
              + (B * a_.conjugate() * c_).real * 2.0
              + C * abs(c_) ** 2)
        C2 = (A * abs(b_) ** 2
              + (B * b_.conjugate() * d_).real * 2.0
              + C * abs(d_) ** 2)
        B2 = (A * b_ * a_.conjugate() + B * d_ * a_.conjugate()
              + Bc * b_ * c_.conjugate() + C * d_ * c_.conjugate())
        return Disk(A2, B2, C2)

    def contains_disk(self, other: "Disk", margin: float = 0.0) -> bool:
        """True when other (plus margin) lies inside self.

        Only circle regions (A != 0) are compared; the gallery geometry
        never produces exact half-planes.
        """
        if self.A == 0 or other.A == 0:
            raise DiskError("half-plane containment not supported")
        cs, rs, cb, rb = self.center, self.radius, other.center, other.radius
        if self.bounded:
            if not other.bounded:
                return False
            return abs(cs - cb) + rb <= rs - margin
        if other.bounded:
            # exterior region contains a bounded disk iff disk avoids circle
            return abs(cs - cb) >= rs + rb + margin
        # exterior contains exterior iff the complementary disks nest
        return abs(cs - cb) + rs <= rb - margin

    def disjoint_from(self, other: "Disk", margin: float = 0.0) -> bool:
        if self.A == 0 or other.A == 0:
            raise DiskError("half-plane disjointness not supported")
        cs, rs, cb, rb = self.center, self.radius, other.center, other.radius
        if self.bounded and other.bounded:
            return abs(cs - cb) >= rs + rb + margin
        if not self.bounded and not other.bounded:
            return False  # two exteriors always share far points
        if not self.bounded:
            ext, bnd = (cs, rs), (cb, rb)
        else:
            ext, bnd = (cb, rb), (cs, rs)
        # bounded disk inside the removed hole of the exterior region
        return abs(ext[0] - bnd[0]) + bnd[1] <= ext[1] - margin

    def boundary_points(self, n: int):
        c, r = self.center, self.radius
        return [c + r * complex(math.cos(2 * math.pi * k / n),
                                math.sin(2 * math.pi * k / n))
                for k in range(n)]

    def __repr__(self):
        if self.A == 0:
            return f"Disk(half-plane B={self.B:.4g}, C={self.C:.4g})"
        kind = "interior" if self.bounded else "exterior"
        return f"Disk({kind} center={self.center:.6g}, radius={self.radius:.6g})"


def isometric_disk(m: MoebiusMap) -> Disk:
    """Interior of the isometric circle |cz + d| = 1 (requires c != 0)."""
    if abs(m.c) == 0:
        raise DiskError("isometric circle undefined for c = 0")
    return Disk.interior(-m.d / m.c, 1.0 / abs(m.c))
