"""Depth-bounded certification / refutation of separable-stability.

The exact condition quantifies over all separable elements and bi-infinite
geodesics; the checker truncates to conjugacy classes of cyclic length at
most L, traces the letter path of g^N from a basepoint, and measures

  * the translation-length margin: trans_len(rho(g)) / cyclic length, the
    effective compactness test (a separable element with a non-loxodromic
    image refutes stability outright);
  * quasi-geodesic constants of the orbit path over subsegments up to a
    window W.

A Pass is therefore "certified at depth (L, N, W)", never more.  Elements
whose separability is Unknown are swept as well (a superset of the
separable set only strengthens a Pass) but can only block with
Inconclusive, never Fail.

Pair distances are computed in local frames, dist(x, rho(w[i:j]) x), so
window products stay short and no global drift accumulates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from sepstab import groups as G
from sepstab import separability as S
from sepstab.groups import CyclicNormalForm, GroupSpec, TrivialElement, Word
from sepstab.hyperbolic import (H3Point, MoebiusMap, Representation, apply,
                                classify, dist, translation_length)

PARABOLIC_EXACT = 1e-12
PARABOLIC_FUZZY = 1e-6
TREND_TOL = 1e-9


class StabilityError(Exception):
    pass


class PathTooShort(StabilityError):
    pass


@dataclass
class StabilityParams:
    depth: int = 8            # L: max cyclic length of swept elements
    powers: int = 16          # N: powers of g traced
    window: int = 24          # W: subsegment length for QG checks
    margin: float = 0.02      # eps0: translation/QG ratio threshold
    k_max: float = 100.0
    a_max: float = 50.0

    def __post_init__(self):
        if self.depth < 1 or self.powers < 2 or self.window < 2:
            raise StabilityError("need depth >= 1, powers >= 2, window >= 2")
        if self.margin <= 0:
            raise StabilityError("margin must be positive")

    @staticmethod
    def defaults_for(group: GroupSpec) -> "StabilityParams":
        mixed = any(f.kind == "surface" for f in group.factors)
        return StabilityParams(depth=5 if mixed else 8)


@dataclass
class ElementRecord:
    spelling: str
    length: int
    separability: str            # "separable" | "unknown" (swept verdicts)
    trace: complex
    kind: str                    # classify() of the image
    trans_len: float
    ratio: float                 # trans_len / length
    worst_qg: float
    worst_qg_half: Optional[float] = None
    k_est: float = 0.0
    a_est: float = 0.0
    flags: Tuple[str, ...] = ()


@dataclass
class StabilityReport:
    params: StabilityParams
    verdict: str                          # "pass" | "fail" | "inconclusive"
    margin: float                         # min translation ratio
    k_est: float
    a_est: float
    records: List[ElementRecord] = field(default_factory=list)
    witness: Optional[ElementRecord] = None
    reason: str = ""
    n_separable: int = 0
    n_unknown: int = 0

    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "inconclusive": 2}[self.verdict]

    def header(self) -> str:
        p = self.params
        return (f"separable-stability certified at depth "
                f"(L={p.depth}, N={p.powers}, W={p.window}); "
                f"margin threshold {p.margin}")


# ---------------------------------------------------------------------------
# orbit paths and quasi-geodesic constants


def orbit_path(rep: Representation, cnf: CyclicNormalForm, powers: int,
               base: H3Point) -> List[H3Point]:
    """Images of the prefixes of the letter sequence of g^powers at base.

    Global coordinates; fine for modest lengths, while the stability sweep
    itself uses local-frame distances.
    """
    if cnf.is_trivial():
        raise TrivialElement("orbit path needs a nontrivial element")
    if powers < 1:
        raise StabilityError("powers must be >= 1")
    letters = cnf.letters() * powers
    pts = [base]
    m = MoebiusMap.identity()
    for x in letters:
        m = (m * rep.image(x)).renormalized()
        pts.append(apply(m, base))
    return pts


def _qg_pairs_local(rep: Representation, letters: Word, window: int,
                    base: H3Point) -> List[Tuple[int, float]]:
    """(combinatorial, hyperbolic) distances for index pairs up to window,
    each measured as dist(base, rho(subword) base)."""
    n = len(letters)
    pairs = []
    for i in range(n):
        m = MoebiusMap.identity()
        top = min(window, n - i)
        for c in range(1, top + 1):
            m = (m * rep.image(letters[i + c - 1])).renormalized()
            pairs.append((c, dist(base, apply(m, base))))
    return pairs


def qg_fit(pairs: Sequence[Tuple[int, float]], window: int,
           a_max: float) -> Tuple[float, float, float]:
    """(k_est, a_est, worst_ratio) for c <= K d + A over sampled pairs.

    worst_ratio is min d/c over pairs with c at least half the effective
    window.  The envelope minimizes the additive constant first (the
    geodesic case then fits exactly as (1, 0)), then the slope, and is
    re-verified for feasibility.
    """
    if not pairs:
        raise PathTooShort("no sampled pairs")
    max_c = max(c for c, _ in pairs)
    threshold = max(1, min(window // 2, max_c // 2))
    ratios = [d / c for c, d in pairs if c >= threshold]
    worst = min(ratios) if ratios else 0.0
    a_est = min(max((c for c, d in pairs if d <= 1e-12), default=0.0), a_max)
    k_candidates = [(c - a_est) / d for c, d in pairs if d > 1e-12]
    k_est = max(k_candidates) if k_candidates else 0.0
    k_est = max(k_est, 0.0)
    for c, d in pairs:  # feasibility re-check of the fitted envelope
        if c > k_est * d + a_est + 1e-9:
            raise StabilityError("QG envelope fit is infeasible")
    return k_est, a_est, worst


def qg_constants(path: Sequence[H3Point], window: int,
                 a_max: float = 50.0):
    """(k_est, a_est, worst_ratio, argmin pair) over subsegments of a path."""
    if len(path) < 2:
        raise PathTooShort("need at least two points")
    pairs = []
    tagged = []
    n = len(path)
    for i in range(n):
        for j in range(i + 1, min(i + window, n - 1) + 1):
            c = j - i
            d = dist(path[i], path[j])
            pairs.append((c, d))
            tagged.append((c, d, (i, j)))
    k_est, a_est, worst = qg_fit(pairs, window, a_max)
    argmin = None
    max_c = max(c for c, _ in pairs)
    threshold = max(1, min(window // 2, max_c // 2))
    best = None
    for c, d, ij in tagged:
        if c >= threshold:
            r = d / c
            if best is None or r < best:
                best, argmin = r, ij
    return k_est, a_est, worst, argmin


# ---------------------------------------------------------------------------
# the margin checker


def _classify_banded(m: MoebiusMap) -> Tuple[str, float]:
    """(kind, |tr^2 - 4|) with the parabolic band split at the exact and
    fuzzy tolerances."""
    tr2 = m.trace() ** 2
    band = abs(tr2 - 4.0)
    return classify(m), band


def stability_margin(rep: Representation,
                     params: Optional[StabilityParams] = None,
                     base: Optional[H3Point] = None,
                     elements: Optional[Iterable[CyclicNormalForm]] = None
                     ) -> StabilityReport:
    """Sweep separable (and separability-unknown) classes to the depth
    bound; verdict per the compactness margin and QG constants."""
    group = rep.group
    if params is None:
        params = StabilityParams.defaults_for(group)
    if base is None:
        base = H3Point(0.0, 1.0)
    if elements is None:
        elements = G.enumerate_elements(group, params.depth)

    records: List[ElementRecord] = []
    fail_witness: Optional[ElementRecord] = None
    fail_reason = ""
    blockers: List[Tuple[ElementRecord, str]] = []
    all_pairs: List[Tuple[int, float]] = []
    n_sep = n_unk = 0

    for cnf in elements:
        verdict = S.is_separable(cnf.letters(), group)
        if verdict.status == "not_separable":
            continue
        certified = verdict.status == "separable"
        if certified:
            n_sep += 1
        else:
            n_unk += 1
        letters = cnf.letters()
        length = cnf.cyclic_length
        m = rep.evaluate(letters)
        kind, band = _classify_banded(m)
        tl = translation_length(m)
        ratio = tl / length
        flags: List[str] = []

        if kind != "loxodromic":
            if band <= PARABOLIC_EXACT or kind in ("identity", "elliptic"):
                flags.append("non_loxodromic")
            else:
                flags.append("parabolic_adjacent")
        elif band < PARABOLIC_FUZZY:
            flags.append("parabolic_adjacent")

        rec = ElementRecord(
            spelling=group.format_word(letters), length=length,
            separability=verdict.status, trace=m.trace(), kind=kind,
            trans_len=tl, ratio=ratio, worst_qg=0.0)

        if "non_loxodromic" in flags:
            rec.flags = tuple(flags)
            records.append(rec)
            if certified and fail_witness is None:
                fail_witness = rec
                fail_reason = (f"separable element {rec.spelling} has a "
                               f"{kind} image")
            elif not certified:
                blockers.append((rec, "unknown-separability element with a "
                                      "non-loxodromic image"))
            continue

        full = letters * params.powers
        pairs = _qg_pairs_local(rep, full, params.window, base)
        all_pairs.extend(pairs)
        k_est, a_est, worst = qg_fit(pairs, params.window, params.a_max)
        rec.k_est, rec.a_est, rec.worst_qg = k_est, a_est, worst

        if worst < params.margin or ratio < params.margin:
            half = letters * max(1, params.powers // 2)
            _, _, worst_half = qg_fit(
                _qg_pairs_local(rep, half, params.window, base),
                params.window, params.a_max)
            rec.worst_qg_half = worst_half
            decreasing = worst < worst_half - TREND_TOL
            if certified and worst < params.margin and decreasing:
                flags.append("decreasing_qg")
                rec.flags = tuple(flags)
                records.append(rec)
                if fail_witness is None:
                    fail_witness = rec
                    fail_reason = (f"separable element {rec.spelling} has "
                                   f"QG ratio {worst:.4g} below the margin "
                                   f"and decreasing across powers")
                continue
            flags.append("below_margin")
            blockers.append((rec, "ratio below margin without a decreasing "
                                  "trend" if certified else
                                  "unknown-separability element below margin"))
        if "parabolic_adjacent" in flags and certified:
            blockers.append((rec, "separable element in the parabolic band"))
        rec.flags = tuple(flags)
        records.append(rec)

    margin = min((r.ratio for r in records), default=float("inf"))
    if all_pairs:
        k_global, a_global, _ = qg_fit(all_pairs, params.window, params.a_max)
    else:
        k_global = a_global = 0.0

    if fail_witness is not None:
        verdict, reason, witness = "fail", fail_reason, fail_witness
    elif blockers:
        witness, reason = blockers[0]
        verdict = "inconclusive"
    elif k_global > params.k_max or a_global > params.a_max:
        verdict, witness = "inconclusive", None
        reason = (f"QG constants ({k_global:.3g}, {a_global:.3g}) exceed "
                  f"caps")
    else:
        verdict, witness, reason = "pass", None, ""

    return StabilityReport(
        params=params, verdict=verdict, margin=margin,
        k_est=k_global, a_est=a_global, records=records, witness=witness,
        reason=reason, n_separable=n_sep, n_unknown=n_unk)


# ---------------------------------------------------------------------------
# CSV and sweeps

CSV_COLUMNS = ("element", "length", "separable", "trace_re", "trace_im",
               "trans_len", "ratio", "worst_qg", "verdict_flags")


def report_csv_rows(report: StabilityReport) -> List[List[str]]:
    rows = []
    for r in sorted(report.records, key=lambda r: (r.length, r.spelling)):
        rows.append([
            r.spelling, str(r.length), r.separability,
            repr(r.trace.real), repr(r.trace.imag), repr(r.trans_len),
            repr(r.ratio), repr(r.worst_qg), "|".join(r.flags)])
    return rows


SWEEP_COLUMNS = ("parameter", "margin", "k_est", "a_est", "verdict", "error")


def sweep(family: Callable[[float], Representation],
          grid: Sequence[float],
          params: Optional[StabilityParams] = None) -> List[List[str]]:
    """One row per grid point; per-point errors are recorded in-row and the
    sweep continues."""
    rows = []
    for value in grid:
        try:
            rep = family(value)
            report = stability_margin(rep, params)
            rows.append([repr(float(value)), repr(report.margin),
                         repr(report.k_est), repr(report.a_est),
                         report.verdict, ""])
        except Exception as exc:  # per-point isolation is the contract
            rows.append([repr(float(value)), "", "", "", "error",
                         f"{type(exc).__name__}: {exc}"])
    return rows
