"""Closure checks: oscillation and semicontinuity defects, the semi-local
approximation condition, and first-match patching of local approximants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import EvaluationError
from .options import DEFAULT, Options
from .space import FINITE, FnObject, ProbeSet, Region, Space, constant, effective_depth, neighborhood, sample_region
from .verdict import Verdict
from .vmetric import Entourage


@dataclass(frozen=True)
class OscillationProfile:
    point: tuple[float, ...]
    values: tuple[float, ...]
    raw: tuple[float, ...]
    witnesses: tuple[tuple[tuple[float, ...], tuple[float, ...]], ...]
    stalled: bool

    @property
    def defect(self) -> float:
        return self.values[-1]

    def to_dict(self) -> dict:
        return {
            "point": list(self.point),
            "defect": self.defect,
            "stalled": self.stalled,
            "osc": list(self.values),
            "raw": list(self.raw),
        }


def _shrinking(raw_fn, a, space: Space, opts: Options, depth_cap: int):
    """Raw per-scale statistic with the common stall rule.

    ``raw_fn(pts, centre, mesh)`` returns ``(value, info, settled)``; only
    settled scales count toward a stall (see ``vmetric._settled``).
    """
    dom = space.domain
    p = dom.point(a)
    raw, extra = [], []
    run, stalled = 0, False
    for k in range(opts.k_max + 1):
        region = neighborhood(dom, p, k)
        pts = sample_region(region, opts.base_depth + k, depth_cap)
        h = 0.0 if dom.kind == FINITE else region.mesh(effective_depth(dom, opts.base_depth + k, depth_cap))
        v, info, settled = raw_fn(pts, p, h)
        raw.append(v)
        extra.append(info)
        if k > 0:
            run = run + 1 if settled and abs(raw[k] - raw[k - 1]) < opts.tol_stall else 0
            if run >= opts.stall_span:
                stalled = True
                break
    return p, np.array(raw), extra, stalled


def oscillation_defect(space: Space, f: FnObject, x, member: int = 0, opts: Options = DEFAULT) -> OscillationProfile:
    """Shrinking-ball oscillation ``sup d_i(f(u), f(v))`` about ``x``.

    The recorded value at each scale folds in the finer scales (their
    samples lie in the larger ball), so the profile is non-increasing.  A
    defect near zero means continuity at ``x`` at the probed resolution.
    """
    kind, index, w = space.family.member(member).kernel_args(space.family.dim)

    def stat(pts, p, h):
        vals = f.eval_many(pts)
        d, i, j = kernels.diameter(vals, kind, index, w)
        settled = d < opts.tol_stall or bool(np.all(space.domain.distance(p, pts[[i, j]]) <= h * (1 + 1e-9)))
        return float(d), (tuple(pts[i].tolist()), tuple(pts[j].tolist())), settled

    p, raw, wit, stalled = _shrinking(stat, x, space, opts, opts.osc_max_depth)
    best = np.maximum.accumulate(raw[::-1])[::-1]
    return OscillationProfile(tuple(p.tolist()), tuple(best.tolist()), tuple(raw.tolist()), tuple(wit), stalled)


def semicontinuity_defect(space: Space, f: FnObject, x, kind: str = "upper", opts: Options = DEFAULT) -> float:
    """Sampled evidence against upper (or lower) semicontinuity at ``x``.

    ``upper``: ``max(0, limsup_{y -> x} f(y) - f(x))``; ``lower``:
    ``max(0, f(x) - liminf_{y -> x} f(y))``.  The centre is excluded from the
    ball samples.
    """
    if f.dim != 1:
        raise ValueError("semicontinuity needs a scalar function")
    if kind not in ("upper", "lower"):
        raise ValueError("kind must be 'upper' or 'lower'")
    sign = 1.0 if kind == "upper" else -1.0

    def stat(pts, p, h):
        punct = pts[space.domain.distance(p, pts) > 0]
        if len(punct) == 0:
            return -np.inf, None, True
        vals = sign * f.eval_many(punct)[:, 0]
        j = int(np.argmax(vals))
        return float(vals[j]), None, bool(space.domain.distance(p, punct[j : j + 1])[0] <= h * (1 + 1e-9))

    p, raw, _, _ = _shrinking(stat, x, space, opts, opts.max_depth)
    finite = raw[np.isfinite(raw)]
    if len(finite) == 0:
        return 0.0
    lim = sign * np.maximum.accumulate(finite[::-1])[::-1][-1]
    fx = float(f(p)[0])
    return max(0.0, lim - fx) if kind == "upper" else max(0.0, fx - lim)


# --- semi-local condition -----------------------------------------------


@dataclass(frozen=True)
class PropertyOracle:
    """A class ``P`` of functions: membership test plus local approximant generator.

    ``generator(point, region, f)`` returns a member of ``P`` meant to be
    close to ``f`` on ``region``.
    """

    name: str
    membership: Callable[[FnObject], str]
    generator: Callable[[np.ndarray, Region, FnObject], FnObject] | None = None


def continuous_oracle(opts: Options = DEFAULT) -> PropertyOracle:
    """Continuous functions; Lipschitz-certified inputs count as members.

    For other inputs the generator returns the mid-range constant of the
    sampled values, the best continuous constant in the sup-norm.
    """

    def membership(f):
        return "in" if f.lipschitz is not None else "unknown"

    def generator(p, region, f):
        if f.lipschitz is not None:
            return f
        vals = f.eval_many(sample_region(region, opts.base_depth + region.k, opts.max_depth))
        mid = (vals.max(axis=0) + vals.min(axis=0)) / 2
        return constant(mid, f.dim, name=f"midrange@{p.tolist()}")

    return PropertyOracle("continuous", membership, generator)


def piecewise_constant_oracle(opts: Options = DEFAULT) -> PropertyOracle:
    """Step functions; the generator uses the one-sided values next to the point (1-d)."""

    def membership(f):
        return "unknown"

    def generator(p, region, f):
        if region.domain.dim != 1:
            return constant(f(p), f.dim)
        h = region.mesh(effective_depth(region.domain, opts.base_depth + region.k, opts.max_depth))
        c = float(p[0])
        lo, hi = float(region.lower[0]), float(region.upper[0])
        left = f([max(c - h, lo)]) if c > lo else f(p)
        right = f([min(c + h, hi)]) if c < hi else f(p)
        mid = f(p)

        def func(pts):
            x = pts[:, 0:1]
            return np.where(x < c, left, np.where(x > c, right, mid))

        return FnObject(f"step@{c}", func, f.dim)

    return PropertyOracle("piecewise-constant", membership, generator)


@dataclass(frozen=True)
class SemilocalResult:
    verdict: Verdict
    entourage: Entourage
    oracle: str
    per_probe: tuple[dict, ...]
    conclusion: str | None

    kind = "semilocal"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict.value,
            "oracle": self.oracle,
            "member": self.entourage.member,
            "radius": self.entourage.radius,
            "conclusion": self.conclusion,
            "per_probe": list(self.per_probe),
        }


def semilocal_condition(space: Space, f: FnObject, oracle: PropertyOracle, probes, W: Entourage,
                        opts: Options = DEFAULT) -> SemilocalResult:
    """Check that near every probe some member of ``P`` is ``W``-close to ``f``.

    When the condition holds on the probes, membership of ``f`` in the
    V-closure of ``P`` is the reported conclusion.
    """
    A = probes if isinstance(probes, ProbeSet) else space.probes(probes)
    if oracle.generator is None:
        return SemilocalResult(Verdict.INCONCLUSIVE, W, oracle.name, (), None)
    kind, index, w = space.family.member(W.member).kernel_args(space.family.dim)
    rows, verdict = [], Verdict.HOLDS
    for a in A:
        found, gaps = None, []
        for k in range(opts.k_max + 1):
            region = neighborhood(space.domain, a, k)
            try:
                g = oracle.generator(region.center, region, f)
                pts = sample_region(region, opts.base_depth + k, opts.max_depth)
                vals, arg = kernels.batch_sup(f.eval_many(pts)[None], g.eval_many(pts), kind, index, w)
            except Exception as exc:
                rows.append({"probe": a.tolist(), "status": "generator-error", "error": str(exc)})
                verdict = Verdict.INCONCLUSIVE if verdict is Verdict.HOLDS else verdict
                found = "error"
                break
            gaps.append(float(vals[0]))
            if vals[0] <= W.radius:
                found = k
                break
        if found == "error":
            continue
        if found is None:
            rows.append({"probe": a.tolist(), "status": "fails", "gaps": gaps})
            verdict = Verdict.FAILS
        else:
            rows.append({"probe": a.tolist(), "status": "holds", "k": found, "gap": gaps[-1]})
    conclusion = f"f lies in the V-closure of {oracle.name}" if verdict is Verdict.HOLDS else None
    return SemilocalResult(verdict, W, oracle.name, tuple(rows), conclusion)


# --- patching ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CoverPiece:
    region: Region
    approximant: FnObject


def patch(pieces, name: str = "patch") -> FnObject:
    """Glue local approximants: ``x`` takes the first piece whose open ball contains it."""
    pieces = tuple(pieces)
    if not pieces:
        raise ValueError("patch needs at least one piece")
    dim = pieces[0].approximant.dim

    def func(pts):
        out = np.empty((len(pts), dim))
        done = np.zeros(len(pts), dtype=bool)
        for piece in pieces:
            mask = ~done & piece.region.contains(pts, open=True)
            if mask.any():
                out[mask] = piece.approximant.eval_many(pts[mask])
                done |= mask
        if not done.all():
            raise EvaluationError(pts[~done][0], message="point outside the union of cover pieces")
        return out

    return FnObject(name, func, dim)


def piece_index(pieces, x) -> int | None:
    for k, piece in enumerate(pieces):
        if piece.region.contains(np.atleast_2d(x), open=True)[0]:
            return k
    return None


@dataclass(frozen=True)
class PatchReport:
    verdict: Verdict
    piece_errors: tuple[float, ...]
    patch_error: float
    slack: float
    rigorous: bool
    samples: int
    eps: float | None = None

    kind = "patch"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict.value,
            "piece_errors": list(self.piece_errors),
            "patch_error": self.patch_error,
            "eps": self.eps,
            "bound": (max(self.piece_errors) if self.eps is None else self.eps) + self.slack,
            "slack": self.slack,
            "rigorous": self.rigorous,
            "samples": self.samples,
        }

    def csv_rows(self):
        return ["piece", "error"], [[k, e] for k, e in enumerate(self.piece_errors)]

    def plot_series(self):
        return "piece", "error", [("error", list(range(len(self.piece_errors))), list(self.piece_errors))]


def patch_check(space: Space, pieces, target: FnObject, depth: int = 14, member: int = 0, eps: float | None = None,
                opts: Options = DEFAULT) -> PatchReport:
    """Compare the patched function with ``target`` on a whole-domain grid.

    Each piece's error is sampled on its own region; the patch must stay
    within the largest piece error plus the Lipschitz mesh slack (zero, and
    flagged non-rigorous, without certificates).  With ``eps`` the pieces
    must also be ``eps``-close and the bound becomes ``eps`` plus slack.
    """
    pieces = tuple(pieces)
    kind, index, w = space.family.member(member).kernel_args(space.family.dim)
    grid = space.domain.grid(effective_depth(space.domain, depth, depth))
    errs = []
    for piece in pieces:
        inside = grid[piece.region.contains(grid, open=True)]
        pts = inside if len(inside) else piece.region.center[None, :]
        v, _ = kernels.batch_sup(piece.approximant.eval_many(pts)[None], target.eval_many(pts), kind, index, w)
        errs.append(float(v[0]))
    g = patch(pieces)
    v, _ = kernels.batch_sup(g.eval_many(grid)[None], target.eval_many(grid), kind, index, w)
    lips = [target.lipschitz] + [p.approximant.lipschitz for p in pieces]
    rigorous = all(L is not None for L in lips)
    h = float(np.max(space.domain.upper - space.domain.lower)) / 2 ** effective_depth(space.domain, depth, depth) \
        if space.domain.kind == "box" else 0.0
    slack = (target.lipschitz + max(lips[1:])) * h / 2 if rigorous else 0.0
    err = float(v[0])
    bound = max(errs) if eps is None else eps
    ok = err <= bound + slack and (eps is None or max(errs) <= eps)
    verdict = Verdict.HOLDS if ok else Verdict.FAILS
    return PatchReport(verdict, tuple(errs), err, float(slack), rigorous, len(grid), eps)
