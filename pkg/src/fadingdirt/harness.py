"""Parameter sweeps over the bound evaluators, gap-claim checks, and report
emission.

Each grid point yields one GapReport row: inner and outer bound, measured
gap, the claimed gap constant of the relevant theorem, and whether the
claim held.  Claim violations are data, not errors — the point of the sweep
is to surface where the printed constants fail numerically.  Rows are
produced in deterministic grid order regardless of the worker count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bounds_norcsi as bn
from . import bounds_rcsi as br
from .errors import SpecInvalid, UnsupportedFormat, ZeroGain
from .fading import (
    FadingDistribution,
    binomial_fading,
    entropy_power_alpha,
    geometric_fading,
    parse_distribution,
    strong_support,
)

THEOREMS = ("no-rcsi", "mass-half", "strong", "phase-binomial", "continuous")

CANONICAL_P = (0.1, 1.0, 10.0, 100.0, 1000.0)
CANONICAL_C2 = (0.25, 1.0, 3.0, 10.0, 100.0, 1e4)
SMOKE_P = (1.0, 100.0)
SMOKE_C2 = (1.0, 10.0, 100.0)

CSV_COLUMNS = (
    "theorem", "branch_inner", "branch_outer", "P", "c2", "mu_A", "dist_id",
    "inner_bits", "outer_bits", "measured_gap", "claimed_gap", "satisfied",
    "assumptions_ok",
)


@dataclass(frozen=True)
class SweepSpec:
    theorem: str
    dist: object = None          # FadingDistribution, JSON literal, or shorthand
    P_list: tuple = CANONICAL_P
    c2_list: tuple = CANONICAL_C2
    Q_list: tuple = (1.0,)       # phase-fading theorem only
    Delta: float = math.pi / 2   # phase-fading theorem only
    interval: tuple = None       # continuous theorem only
    mu_A: float = 0.0
    dist_id: str = None
    seed: int = 0

    def __post_init__(self):
        if self.theorem not in THEOREMS:
            raise SpecInvalid(f"unknown theorem {self.theorem!r}; choose from {THEOREMS}")
        for name, grid in (("P_list", self.P_list), ("c2_list", self.c2_list),
                           ("Q_list", self.Q_list)):
            if len(grid) == 0:
                raise SpecInvalid(f"{name} is empty")
            if any(not math.isfinite(v) for v in grid):
                raise SpecInvalid(f"{name} contains a non-finite value")
        if any(p < 0 for p in self.P_list):
            raise SpecInvalid("P values must be >= 0")

    def resolved_dist(self) -> FadingDistribution:
        if self.dist is None:
            raise SpecInvalid(f"theorem {self.theorem!r} needs a distribution")
        return parse_distribution(self.dist)


@dataclass(frozen=True)
class GapReport:
    theorem: str
    branch_inner: str
    branch_outer: str
    P: float
    c2: float
    mu_A: float
    dist_id: str
    inner_bits: float
    outer_bits: float
    measured_gap: float
    claimed_gap: float
    satisfied: bool
    assumptions_ok: bool

    def to_row(self):
        return [getattr(self, c) for c in CSV_COLUMNS]

    def to_json(self):
        return {c: getattr(self, c) for c in CSV_COLUMNS}


def _report(theorem, inner, outer, P, c2, mu_A, dist_id, claimed, assumptions_ok):
    measured = outer.bits - inner.bits
    return GapReport(
        theorem=theorem, branch_inner=inner.branch, branch_outer=outer.branch,
        P=float(P), c2=float(c2), mu_A=float(mu_A), dist_id=dist_id,
        inner_bits=float(inner.bits), outer_bits=float(outer.bits),
        measured_gap=float(measured), claimed_gap=float(claimed),
        satisfied=bool(measured <= claimed + 1e-9),
        assumptions_ok=bool(assumptions_ok),
    )


def _point_no_rcsi(spec, dist, dist_id, P, c2):
    params = bn.ChannelParams(P=P, c=math.sqrt(c2), mu_A=dist.mean)
    alpha = entropy_power_alpha(dist).alpha
    inner = bn.inner_no_rcsi(params)
    try:
        outer = bn.outer_no_rcsi(params, alpha)
        ok = c2 >= 3.0  # paper's partial-approximate-capacity regime
    except ZeroGain:
        outer = bn.RateBound(bits=0.5 * math.log2(1 + P), theorem="no-rcsi-outer",
                             branch="awgn-fallback", assumptions_ok={})
        ok = False
    return _report("no-rcsi", inner, outer, P, c2, dist.mean, dist_id,
                   bn.gap_no_rcsi(alpha), ok)


def _point_mass_half(spec, dist, dist_id, P, c2):
    params = bn.ChannelParams(P=P, c=math.sqrt(c2), mu_A=dist.mean)
    try:
        mp = br.mass_half_params(dist)
        ok = True
    except br.NoDominantAtom:
        # evaluate anyway against the largest atom; flagged as out of scope
        i = int(np.argmax(dist.probs))
        a_p, P_p = float(dist.values[i]), float(dist.probs[i])
        rest = [(v, p) for j, (v, p) in enumerate(zip(dist.values, dist.probs)) if j != i]
        G = float(sum(p * math.log2((v - a_p) ** 2) for v, p in rest))
        Gp = float(sum(p * math.log2((v - a_p) ** 2 / (v * v) + 1.0) for v, p in rest))
        mp = br.MassHalfParams(a_prime=a_p, P_prime=P_p, P_bar=1.0 - P_p, G=G, G_prime=Gp)
        ok = False
    inner = br.inner_mass_half(params, dist, mp)
    outer = br.outer_mass_half(params, mp)
    return _report("mass-half", inner, outer, P, c2, dist.mean, dist_id,
                   mp.G_prime - mp.G + 3.0, ok)


def _point_strong(spec, dist, dist_id, P, c2):
    c = math.sqrt(c2)
    params = bn.ChannelParams(P=P, c=c, mu_A=dist.mean)
    alpha_sf = c2 / (c2 + 1.0)
    ok = br.strong_condition_check(dist, c, alpha_sf)
    sp = br.strong_params(dist, c, alpha_sf)
    inner = br.inner_strong(params, dist)
    outer = br.outer_strong(params, sp, condition_ok=True)
    claimed = max(math.log2(alpha_sf) / 2.0 - sp.G_tilde + 3.0, 1.0)
    return _report("strong", inner, outer, P, c2, dist.mean, dist_id, claimed, ok)


def _point_phase(spec, P, Q):
    c_eff2 = math.sin(spec.Delta) ** 2 * Q
    params = bn.ChannelParams(P=P, c=0.0, Q=Q)
    outer = br.outer_phase_binomial(params, spec.Delta)
    # generic treat-dirt-as-noise baseline on the same channel
    inner = bn.RateBound(bits=0.5 * math.log2(1.0 + P / (1.0 + Q)),
                         theorem="phase-binomial-inner", branch="treat-as-noise",
                         assumptions_ok={})
    return _report("phase-binomial", inner, outer, P, c_eff2, 0.0,
                   f"phase{spec.Delta:.4g}", 3.0, True)


def _point_continuous(spec, dist, dist_id, P, c2):
    params = bn.ChannelParams(P=P, c=math.sqrt(c2), mu_A=dist.mean)
    interval = spec.interval
    if interval is None:
        lo, hi = dist.support()
        interval = (lo, hi)
    cp = br.continuous_interval_params(dist, interval)
    outer = br.outer_continuous(params, dist, interval)
    inner = br.inner_continuous(params, dist, cp.a_prime)
    return _report("continuous", inner, outer, P, c2, dist.mean, dist_id,
                   float("nan"), cp.prob_I >= 0.5)


def run_sweep(spec: SweepSpec, threads: int = 1):
    """Evaluate the theorem's bounds over the grid; one GapReport per point,
    in grid order.  Points violating the theorem's preconditions are kept
    and flagged with assumptions_ok=False rather than dropped."""
    if spec.theorem == "phase-binomial":
        points = [(P, Q) for P in spec.P_list for Q in spec.Q_list]
        fn = lambda pq: _point_phase(spec, pq[0], pq[1])
    else:
        dist = spec.resolved_dist()
        dist_id = spec.dist_id or dist.label()
        point_fn = {
            "no-rcsi": _point_no_rcsi,
            "mass-half": _point_mass_half,
            "strong": _point_strong,
            "continuous": _point_continuous,
        }[spec.theorem]
        points = [(P, c2) for P in spec.P_list for c2 in spec.c2_list]
        fn = lambda pc: point_fn(spec, dist, dist_id, pc[0], pc[1])
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            return list(pool.map(fn, points))
    return [fn(pt) for pt in points]


# ---------------------------------------------------------------------------
# claim presets
# ---------------------------------------------------------------------------

def _preset_specs(theorem: str, preset: str):
    P = SMOKE_P if preset == "smoke" else CANONICAL_P
    c2 = SMOKE_C2 if preset == "smoke" else CANONICAL_C2
    if theorem == "gaussian-smoke":
        return [SweepSpec("no-rcsi", dist="gaussian", P_list=(1.0, 10.0, 100.0),
                          c2_list=(4.0, 16.0, 64.0))]
    if theorem == "no-rcsi":
        dists = ["gaussian", "uniform"] if preset == "smoke" else ["gaussian", "uniform", "rayleigh"]
        return [SweepSpec("no-rcsi", dist=d, P_list=P, c2_list=c2) for d in dists]
    if theorem == "mass-half":
        specs = [
            SweepSpec("mass-half", dist="two-point", P_list=P, c2_list=c2, dist_id="two-point"),
            # p = 0.55 keeps the dominant mass >= 1/2 while avoiding the
            # lattice point at exactly 0 that p = 0.5 produces (rejected by
            # the G' divergence contract)
            SweepSpec("mass-half", dist=geometric_fading(0.55), P_list=P, c2_list=c2,
                      dist_id="geometric0.55"),
            SweepSpec("mass-half", dist=binomial_fading(1, 0.5), P_list=P, c2_list=c2,
                      dist_id="binomial1"),
        ]
        if preset != "smoke":
            specs.append(SweepSpec("mass-half", dist=binomial_fading(2, 0.5), P_list=P,
                                   c2_list=c2, dist_id="binomial2"))
        return specs
    if theorem == "strong":
        Ms = (3, 4) if preset == "smoke" else (3, 4, 5)
        return [SweepSpec("strong", dist=strong_support(M, c), P_list=P,
                          c2_list=(c * c,), dist_id=f"strongM{M}")
                for M in Ms for c in (2.0, 4.0, 8.0)]
    if theorem == "phase-binomial":
        return [SweepSpec("phase-binomial", P_list=P, Q_list=(0.25, 1.0, 4.0, 16.0),
                          Delta=d) for d in ((math.pi / 2,) if preset == "smoke"
                                             else (math.pi / 4, math.pi / 2))]
    raise SpecInvalid(f"unknown preset {theorem!r}")


def verify_claims(theorem: str = "all", preset: str = "smoke", threads: int = 1):
    """Run the canonical grids for one theorem (or 'all') and summarize.

    Returns (summary, rows).  Never asserts: violated claims are counted and
    reported, with the worst measured gap and worst excess over the claim.
    """
    names = ("no-rcsi", "mass-half", "strong", "phase-binomial") if theorem == "all" else (theorem,)
    rows = []
    for name in names:
        for spec in _preset_specs(name, preset):
            rows.extend(run_sweep(spec, threads=threads))
    checked = [r for r in rows if r.assumptions_ok]
    summary = {
        "points": len(rows),
        "checked": len(checked),
        "satisfied": sum(r.satisfied for r in checked),
        "violated": sum(not r.satisfied for r in checked),
        "worst_gap": max((r.measured_gap for r in rows), default=float("nan")),
        "worst_excess": max((r.measured_gap - r.claimed_gap for r in checked),
                            default=float("nan")),
    }
    return summary, rows


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.12g" % v
    return str(v)


def emit(rows, fmt: str) -> bytes:
    """Serialize GapReport rows to deterministic bytes."""
    if not rows:
        raise UnsupportedFormat("empty report table")
    if fmt == "csv":
        lines = [",".join(CSV_COLUMNS)]
        lines += [",".join(_fmt(v) for v in r.to_row()) for r in rows]
        return ("\n".join(lines) + "\n").encode()
    if fmt == "json":
        payload = [{k: (("%.12g" % v) if isinstance(v, float) else v)
                    for k, v in r.to_json().items()} for r in rows]
        return (json.dumps(payload, indent=1, sort_keys=False) + "\n").encode()
    if fmt == "plotdata":
        lines = ["# " + " ".join(CSV_COLUMNS)]
        lines += [" ".join(_fmt(v) for v in r.to_row()) for r in rows]
        return ("\n".join(lines) + "\n").encode()
    if fmt == "svg":
        return _emit_svg(rows)
    raise UnsupportedFormat(f"unknown format {fmt!r}")


_SVG_W, _SVG_H, _SVG_PAD = 640, 420, 50
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2",
           "#7f7f7f", "#bcbd22", "#17becf", "#ff7f0e")


def _emit_svg(rows) -> bytes:
    series = {}
    for r in rows:
        series.setdefault((r.theorem, r.dist_id, r.P), []).append(r)
    xs = [math.log10(r.c2) for r in rows if r.c2 > 0] or [0.0]
    ys = [v for r in rows for v in (r.inner_bits, r.outer_bits) if math.isfinite(v)]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys + [0.0]), max(ys + [1.0])
    if x1 - x0 < 1e-12:
        x1 = x0 + 1.0
    if y1 - y0 < 1e-12:
        y1 = y0 + 1.0

    def px(x):
        return _SVG_PAD + (x - x0) / (x1 - x0) * (_SVG_W - 2 * _SVG_PAD)

    def py(y):
        return _SVG_H - _SVG_PAD - (y - y0) / (y1 - y0) * (_SVG_H - 2 * _SVG_PAD)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}">',
        f'<rect x="0" y="0" width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<line x1="{_SVG_PAD}" y1="{_SVG_H - _SVG_PAD}" x2="{_SVG_W - _SVG_PAD}" '
        f'y2="{_SVG_H - _SVG_PAD}" stroke="black"/>',
        f'<line x1="{_SVG_PAD}" y1="{_SVG_PAD}" x2="{_SVG_PAD}" '
        f'y2="{_SVG_H - _SVG_PAD}" stroke="black"/>',
        f'<text x="{_SVG_W // 2}" y="{_SVG_H - 10}" text-anchor="middle" '
        f'font-size="12">log10(c^2)</text>',
        f'<text x="15" y="{_SVG_H // 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {_SVG_H // 2})">bits/channel-use</text>',
    ]
    for i, key in enumerate(sorted(series, key=str)):
        pts = sorted(series[key], key=lambda r: r.c2)
        color = _COLORS[i % len(_COLORS)]
        for attr, dash in (("inner_bits", ""), ("outer_bits", ' stroke-dasharray="5,3"')):
            coords = " ".join(
                "%.6g,%.6g" % (px(math.log10(max(r.c2, 1e-12))), py(getattr(r, attr)))
                for r in pts)
            parts.append(f'<polyline points="{coords}" fill="none" '
                         f'stroke="{color}"{dash}/>')
        label = "%s %s P=%.6g" % key
        parts.append(f'<text x="{_SVG_W - _SVG_PAD + 2}" y="{_SVG_PAD + 14 * i}" '
                     f'font-size="9" fill="{color}">{label}</text>')
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode()
