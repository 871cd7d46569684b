"""The V-convergence semidistance and entourage membership.

For a probe ``a`` the single-point factor is
``inf_k sup_{x in B(a, r_k)} d_i(f(x), g(x))``; over a probe set it is the
maximum of the single-point factors.  The sup at each scale is estimated on
a deterministic grid.  A sample taken inside ``B(a, r_j)`` for ``j >= k``
also lies inside ``B(a, r_k)``, so the recorded value at scale ``k`` is the
largest sampled gap over all scales ``>= k`` that were visited.  That keeps
each recorded value a lower bound of the true sup at its scale and makes the
profile non-increasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .options import DEFAULT, Options
from .space import FINITE, FnObject, FnSequence, ProbeSet, Region, Space, effective_depth, neighborhood, sample_region
from .verdict import Verdict


@dataclass(frozen=True)
class Entourage:
    member: int
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("entourage radius must be > 0")


@dataclass(frozen=True)
class SupEstimate:
    k: int
    radius: float
    value: float
    raw: float
    rigorous_upper: float | None
    depth: int
    count: int
    witness: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "radius": self.radius,
            "value": self.value,
            "raw": self.raw,
            "rigorous_upper": self.rigorous_upper,
            "depth": self.depth,
            "count": self.count,
            "witness": list(self.witness),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SupEstimate":
        return cls(doc["k"], doc["radius"], doc["value"], doc["raw"], doc["rigorous_upper"],
                   doc["depth"], doc["count"], tuple(doc["witness"]))


@dataclass(frozen=True)
class ScaleProfile:
    probe: tuple[float, ...]
    member: int
    scales: tuple[SupEstimate, ...]
    stalled: bool

    @property
    def delta_hat(self) -> float:
        return self.scales[-1].value

    @property
    def values(self) -> list[float]:
        return [s.value for s in self.scales]

    @property
    def rigorous(self) -> bool:
        return self.scales[-1].rigorous_upper is not None

    def to_dict(self) -> dict:
        return {
            "probe": list(self.probe),
            "member": self.member,
            "delta_hat": self.delta_hat,
            "stalled": self.stalled,
            "scales": [s.to_dict() for s in self.scales],
        }

    def csv_rows(self):
        return ["probe", "k", "s_k"], [[_label(self.probe), s.k, s.value] for s in self.scales]

    def plot_series(self):
        return "scale k", "s_k", [(f"a={_label(self.probe)}", [s.k for s in self.scales], self.values)]

    @classmethod
    def from_dict(cls, doc: dict) -> "ScaleProfile":
        return cls(tuple(doc["probe"]), doc["member"], tuple(SupEstimate.from_dict(s) for s in doc["scales"]), doc["stalled"])


@dataclass(frozen=True)
class VDistanceReport:
    probes: tuple[tuple[float, ...], ...]
    member: int
    profiles: tuple[ScaleProfile, ...]
    delta: float
    f_name: str = ""
    g_name: str = ""

    kind = "vdistance"

    @property
    def rigorous_upper(self) -> float | None:
        ups = [p.scales[-1].rigorous_upper for p in self.profiles]
        if not ups or any(u is None for u in ups):
            return None
        return max(ups)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "f": self.f_name,
            "g": self.g_name,
            "member": self.member,
            "probes": [list(p) for p in self.probes],
            "delta": self.delta,
            "rigorous_upper": self.rigorous_upper,
            "profiles": [p.to_dict() for p in self.profiles],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "VDistanceReport":
        return cls(
            tuple(tuple(p) for p in doc["probes"]),
            doc["member"],
            tuple(ScaleProfile.from_dict(p) for p in doc["profiles"]),
            doc["delta"],
            doc.get("f", ""),
            doc.get("g", ""),
        )

    def csv_rows(self):
        rows = []
        for prof in self.profiles:
            label = _label(prof.probe)
            for s in prof.scales:
                rows.append([label, s.k, s.value])
        return ["probe", "k", "s_k"], rows

    def plot_series(self):
        return "scale k", "s_k", [(f"a={_label(p.probe)}", [s.k for s in p.scales], p.values) for p in self.profiles]


def _label(pt) -> str:
    return ";".join(repr(float(c)) for c in pt)


def _mesh(region: Region, depth: int, opts: Options) -> float:
    if region.domain.kind == FINITE:
        return 0.0
    return region.mesh(effective_depth(region.domain, depth, opts.max_depth))


def _settled(dom, p, pts, F, G, vals, arg, h, opts, kargs) -> np.ndarray:
    """Rows whose sup at this scale cannot drop further at finer scales.

    Either the sup already equals the gap at the centre (every ball contains
    the centre), or it is attained at a sample nearest the centre, so the
    gap is concentrated at the probe at this resolution.  A plain "value
    unchanged" rule is fooled by features narrower than several scales.
    """
    c = int(np.flatnonzero(dom.distance(p, pts) == 0)[0])
    at_centre, _ = kernels.batch_sup(np.ascontiguousarray(F[:, c : c + 1]), np.ascontiguousarray(G[c : c + 1]), *kargs)
    near = dom.distance(p, pts[arg]) <= h * (1 + 1e-9)
    return (vals - at_centre < opts.tol_stall) | near


def scale_profiles(
    space: Space,
    a,
    member: int,
    evaluate: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    count: int,
    lipschitz: np.ndarray | None = None,
    opts: Options = DEFAULT,
) -> list[ScaleProfile]:
    """Shrinking-scale profiles for ``count`` functions against one partner.

    ``evaluate(pts)`` returns ``(F, G)`` with ``F`` of shape
    ``(count, npts, m)`` and ``G`` of shape ``(npts, m)``.  Each batch row
    gets the profile a single-pair computation would give, since stopping is
    decided per row from that row's values alone.
    """
    dom = space.domain
    p = dom.point(a)
    kind, index, w = space.family.member(member).kernel_args(space.family.dim)
    space_k = opts.k_max + 1
    raw = np.empty((space_k, count))
    arg_pts: list[np.ndarray] = []
    meta: list[tuple[float, int, int, float]] = []
    active = np.ones(count, dtype=bool)
    run = np.zeros(count, dtype=int)
    used = np.full(count, space_k)
    stalled = np.zeros(count, dtype=bool)
    for k in range(space_k):
        region = neighborhood(dom, p, k)
        depth = opts.base_depth + k
        pts = sample_region(region, depth, opts.max_depth)
        F, G = evaluate(pts)
        F, G = np.ascontiguousarray(F), np.ascontiguousarray(G)
        vals, arg = kernels.batch_sup(F, G, kind, index, w)
        raw[k] = vals
        arg_pts.append(pts[arg])
        h = _mesh(region, depth, opts)
        meta.append((region.radius, effective_depth(dom, depth, opts.max_depth), len(pts), h))
        if k > 0:
            close = (np.abs(raw[k] - raw[k - 1]) < opts.tol_stall) & _settled(dom, p, pts, F, G, vals, arg, h, opts,
                                                                            (kind, index, w))
            run = np.where(close, run + 1, 0)
            newly = active & (run >= opts.stall_span)
            used[newly] = k + 1
            stalled[newly] = True
            active &= ~newly
        if not active.any():
            break
    profiles = []
    for b in range(count):
        K = int(used[b])
        seq = raw[:K, b]
        best = np.maximum.accumulate(seq[::-1])[::-1]
        src = np.empty(K, dtype=int)
        j = K - 1
        for kk in range(K - 1, -1, -1):
            if seq[kk] >= seq[j]:
                j = kk
            src[kk] = j
        L = None if lipschitz is None else float(lipschitz[b])
        ests = []
        for kk in range(K):
            radius, depth, npts, h = meta[kk]
            upper = None if L is None else float(seq[kk] + L * h / 2)
            ests.append(SupEstimate(kk, float(radius), float(best[kk]), float(seq[kk]), upper, depth, npts,
                                    tuple(float(c) for c in arg_pts[src[kk]][b])))
        profiles.append(ScaleProfile(tuple(float(c) for c in p), member, tuple(ests), bool(stalled[b])))
    return profiles


def _pair_lipschitz(f: FnObject, g: FnObject):
    if f.lipschitz is None or g.lipschitz is None:
        return None
    return np.array([f.lipschitz + g.lipschitz])


def sup_over_region(space: Space, f: FnObject, g: FnObject, member: int, region: Region, depth: int,
                    opts: Options = DEFAULT) -> SupEstimate:
    """Sampled ``sup_{x in region} d_i(f(x), g(x))``."""
    pts = sample_region(region, depth, opts.max_depth)
    kind, index, w = space.family.member(member).kernel_args(space.family.dim)
    F = f.eval_many(pts)[None]
    vals, arg = kernels.batch_sup(F, g.eval_many(pts), kind, index, w)
    value = float(vals[0])
    L = _pair_lipschitz(f, g)
    h = _mesh(region, depth, opts)
    upper = None if L is None else value + float(L[0]) * h / 2
    return SupEstimate(region.k, region.radius, value, value, upper, effective_depth(region.domain, depth, opts.max_depth),
                       len(pts), tuple(float(c) for c in pts[arg[0]]))


def point_v_semidistance(space: Space, f: FnObject, g: FnObject, member: int, a, opts: Options = DEFAULT) -> ScaleProfile:
    def evaluate(pts):
        return f.eval_many(pts)[None], g.eval_many(pts)

    return scale_profiles(space, a, member, evaluate, 1, _pair_lipschitz(f, g), opts)[0]


def v_semidistance(space: Space, f: FnObject, g: FnObject, member: int, probes, opts: Options = DEFAULT) -> VDistanceReport:
    """``delta_{i,A}(f, g)``; an empty probe set gives 0."""
    A = probes if isinstance(probes, ProbeSet) else space.probes(probes)
    profiles = tuple(point_v_semidistance(space, f, g, member, a, opts) for a in A)
    delta = max((p.delta_hat for p in profiles), default=0.0)
    return VDistanceReport(tuple(tuple(float(c) for c in a) for a in A), member, profiles, delta, f.name, g.name)


def sequence_profiles(space: Space, seq: FnSequence, candidate: FnObject, member: int, a,
                      indices=None, opts: Options = DEFAULT) -> list[ScaleProfile]:
    """Profiles of ``f_n`` against ``candidate`` at probe ``a`` for many ``n`` at once."""
    idx = seq.indices() if indices is None else np.asarray(list(indices), dtype=int)

    def evaluate(pts):
        return seq.values_on(pts, idx), candidate.eval_many(pts)

    lips = None
    if candidate.lipschitz is not None:
        ls = [seq[int(n)].lipschitz for n in idx]
        if all(L is not None for L in ls):
            lips = np.array(ls, dtype=float) + candidate.lipschitz
    return scale_profiles(space, a, member, evaluate, len(idx), lips, opts)


@dataclass(frozen=True)
class EntourageVerdict:
    verdict: Verdict
    entourage: Entourage
    report: VDistanceReport
    witnesses: tuple[dict, ...] = field(default=())

    kind = "entourage"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict.value,
            "member": self.entourage.member,
            "radius": self.entourage.radius,
            "witnesses": list(self.witnesses),
            "report": self.report.to_dict(),
        }

    def csv_rows(self):
        return self.report.csv_rows()

    def plot_series(self):
        return self.report.plot_series()


def entourage_test(space: Space, f: FnObject, g: FnObject, W: Entourage, probes, opts: Options = DEFAULT) -> EntourageVerdict:
    """Is ``(f, g)`` in the entourage ``U_{W,A}``?

    Holds when the estimated semidistance is below ``radius - margin``.
    Fails when some probe shows a sampled gap above ``radius + margin`` at
    every visited scale; the sampled points are returned as witnesses.
    """
    rep = v_semidistance(space, f, g, W.member, probes, opts)
    if rep.delta <= W.radius - opts.margin:
        return EntourageVerdict(Verdict.HOLDS, W, rep)
    bad = [p for p in rep.profiles if p.delta_hat > W.radius + opts.margin]
    if bad:
        wit = tuple(
            {"probe": list(p.probe), "scales": [{"k": s.k, "x": list(s.witness), "gap": s.value} for s in p.scales]}
            for p in bad
        )
        return EntourageVerdict(Verdict.FAILS, W, rep, wit)
    return EntourageVerdict(Verdict.INCONCLUSIVE, W, rep)
