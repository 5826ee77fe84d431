"""Plain-text representation files.

Structured text, hand-editable, with three blocks:

    group
      surface 2          # one line per surface factor: its genus
      free 1             # number of infinite-cyclic factors
    generators
      a1 = (a_re, a_im) (b_re, b_im) (c_re, c_im) (d_re, d_im)
      ...
    disks                # optional ping-pong data
      factor 1 center (x, y) radius r
      t1 center (x, y) radius r
      T1 center (x, y) radius r
    meta                 # optional free-form key value lines
      name example

Numbers are emitted with repr(float), which round-trips exactly, so
parse -> emit -> parse is the identity.  Unknown keys are rejected with a
line/column diagnostic.  Generator matrices are renormalized to determinant
one when the determinant is within 1e-6 of one and rejected otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from sepstab.disks import Disk
from sepstab.groups import GroupSpec
from sepstab.hyperbolic import MoebiusMap, Representation
from sepstab.pingpong import PingPongDisks

DET_REJECT = 1e-6


class RepFileError(Exception):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class RepFile:
    rep: Representation
    disks: Optional[PingPongDisks] = None
    meta: Dict[str, str] = field(default_factory=dict)
    # raw disk parameters keyed as emitted ("factor N" or letter name), kept
    # so emit reproduces parsed files byte for byte
    disk_params: Dict[str, Tuple[float, float, float]] = field(
        default_factory=dict)


_COMPLEX = r"\(\s*([^\s,()]+)\s*,\s*([^\s,()]+)\s*\)"


def _parse_float(tok: str, line_no: int, col: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise RepFileError(f"bad number {tok!r}", line_no, col)


def parse_rep(text: str) -> RepFile:
    lines = text.splitlines()
    section = None
    genera: List[int] = []
    free_rank = 0
    gen_lines: List[Tuple[int, str]] = []
    disk_lines: List[Tuple[int, str]] = []
    meta: Dict[str, str] = {}
    group_done = False

    for idx, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if not raw[:1].isspace():
            name = line.strip()
            if name not in ("group", "generators", "disks", "meta"):
                raise RepFileError(f"unknown section {name!r}", idx)
            section = name
            continue
        body = line.strip()
        if section == "group":
            parts = body.split()
            if parts[0] == "surface" and len(parts) == 2:
                genera.append(int(_parse_float(parts[1], idx, 1)))
            elif parts[0] == "free" and len(parts) == 2:
                free_rank = int(_parse_float(parts[1], idx, 1))
            else:
                raise RepFileError(f"unknown group key {parts[0]!r}", idx)
        elif section == "generators":
            gen_lines.append((idx, body))
        elif section == "disks":
            disk_lines.append((idx, body))
        elif section == "meta":
            parts = body.split(None, 1)
            meta[parts[0]] = parts[1] if len(parts) > 1 else ""
        else:
            raise RepFileError("content before any section header", idx)

    if not genera and not free_rank:
        raise RepFileError("missing group section", max(1, len(lines)))
    group = GroupSpec(tuple(genera), free_rank)

    images: Dict[str, MoebiusMap] = {}
    for idx, body in gen_lines:
        m = re.match(rf"(\S+)\s*=\s*{_COMPLEX}\s*{_COMPLEX}\s*{_COMPLEX}\s*{_COMPLEX}\s*$",
                     body)
        if not m:
            raise RepFileError("expected `name = (re,im) x4`", idx)
        name = m.group(1)
        vals = [_parse_float(m.group(k), idx, 1) for k in range(2, 10)]
        a, b, c, d = (complex(vals[0], vals[1]), complex(vals[2], vals[3]),
                      complex(vals[4], vals[5]), complex(vals[6], vals[7]))
        det = a * d - b * c
        if abs(det - 1.0) > DET_REJECT:
            raise RepFileError(
                f"determinant {det:.6g} off by more than {DET_REJECT}", idx)
        # keep entries bit-stable when the determinant is within budget
        images[name] = MoebiusMap(a, b, c, d,
                                  normalize=abs(det - 1.0) > 1e-12)

    expected = [group.letter_name(2 * k) for k in range(group.n_letters // 2)]
    missing = [n for n in expected if n not in images]
    if missing:
        raise RepFileError(f"missing generators: {', '.join(missing)}",
                           max(1, len(lines)))
    unknown = [n for n in images if n not in expected]
    if unknown:
        raise RepFileError(f"unknown generators: {', '.join(unknown)}",
                           max(1, len(lines)))
    rep = Representation(group, [images[n] for n in expected])

    disks = None
    disk_params: Dict[str, Tuple[float, float, float]] = {}
    if disk_lines:
        free: Dict[int, Disk] = {}
        factor: Dict[int, Disk] = {}
        for idx, body in disk_lines:
            m = re.match(rf"(factor\s+(\d+)|\S+)\s+center\s*{_COMPLEX}\s*radius\s+(\S+)\s*$",
                         body)
            if not m:
                raise RepFileError(
                    "expected `factor N|letter center (x,y) radius r`", idx)
            cx = _parse_float(m.group(3), idx, 1)
            cy = _parse_float(m.group(4), idx, 1)
            r = _parse_float(m.group(5), idx, 1)
            disk = Disk.interior(complex(cx, cy), r)
            if m.group(2) is not None:
                surf_index = int(m.group(2))
                surface_fids = [f.index for f in group.factors
                                if f.kind == "surface"]
                if not 1 <= surf_index <= len(surface_fids):
                    raise RepFileError(f"no surface factor {m.group(2)}", idx)
                factor[surface_fids[surf_index - 1]] = disk
                disk_params[f"factor {surf_index}"] = (cx, cy, r)
            else:
                name = m.group(1)
                try:
                    letter = group.parse_word(name)[0]
                except Exception:
                    raise RepFileError(f"unknown letter {name!r}", idx)
                free[letter] = disk
                disk_params[name] = (cx, cy, r)
        disks = PingPongDisks(free=free, factor=factor)

    return RepFile(rep=rep, disks=disks, meta=meta, disk_params=disk_params)


def _fmt_complex(z: complex) -> str:
    return f"({z.real!r}, {z.imag!r})"


def emit_rep(repfile: RepFile) -> str:
    rep = repfile.rep
    group = rep.group
    out: List[str] = ["group"]
    for f in group.factors:
        if f.kind == "surface":
            out.append(f"  surface {f.genus}")
    if group.free_rank:
        out.append(f"  free {group.free_rank}")
    out.append("generators")
    for k, m in enumerate(rep.generator_images()):
        name = group.letter_name(2 * k)
        out.append(f"  {name} = {_fmt_complex(m.a)} {_fmt_complex(m.b)} "
                   f"{_fmt_complex(m.c)} {_fmt_complex(m.d)}")
    if repfile.disks is not None:
        out.append("disks")

        def disk_line(key: str, d: Disk) -> str:
            if key in repfile.disk_params:
                cx, cy, r = repfile.disk_params[key]
            else:
                cx, cy, r = d.center.real, d.center.imag, d.radius
            return f"  {key} center ({cx!r}, {cy!r}) radius {r!r}"

        for fid in sorted(repfile.disks.factor):
            surf_index = sum(1 for ff in group.factors[:fid]
                             if ff.kind == "surface") + 1
            out.append(disk_line(f"factor {surf_index}",
                                 repfile.disks.factor[fid]))
        for letter in sorted(repfile.disks.free):
            out.append(disk_line(group.letter_name(letter),
                                 repfile.disks.free[letter]))
    if repfile.meta:
        out.append("meta")
        for k in sorted(repfile.meta):
            out.append(f"  {k} {repfile.meta[k]}".rstrip())
    return "\n".join(out) + "\n"
