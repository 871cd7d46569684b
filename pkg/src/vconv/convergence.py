"""Convergence-mode classification, the sequence Cauchy-type criterion for
V-convergence, the normal and Abel series rules, and limit interchange.

Every ``for all n >= N`` is truncated at the sequence horizon, so a
``holds`` verdict always means "holds up to the horizon".
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .closure import oscillation_defect
from .errors import ConfigError, HorizonMismatchError
from .options import DEFAULT, Options
from .space import FnObject, FnSequence, ProbeSet, SemidistanceFamily, Space, neighborhood, partial_sums, sample_region
from .verdict import STRENGTH, Verdict
from .vmetric import sequence_profiles

MODES = ("pointwise", "V", "locally-uniform", "uniform")
CHAIN = ("uniform", "locally-uniform", "V", "pointwise")  # strongest first


def _probes(space: Space, probes) -> ProbeSet:
    return probes if isinstance(probes, ProbeSet) else space.probes(probes)


def tail_verdict(indices, values, eps: float, min_tail: int):
    """``(verdict, N, witness_n)`` for "values[n] <= eps for all n >= N".

    Holds when the trailing run of values ``<= eps`` is at least
    ``min_tail`` long (``N`` is where that run starts).  Fails when the last
    ``min_tail`` values all exceed ``eps``.
    """
    values = np.asarray(values, dtype=float)
    ok = values <= eps
    if ok[-1]:
        bad = np.flatnonzero(~ok)
        start = int(bad[-1]) + 1 if len(bad) else 0
        if len(values) - start >= min_tail:
            return Verdict.HOLDS, int(indices[start]), None
    if np.all(values[-min_tail:] > eps):
        return Verdict.FAILS, None, int(indices[-1])
    return Verdict.INCONCLUSIVE, None, None


def coerce_chain(modes: dict) -> list[str]:
    """Force the verdict vector monotone along uniform => locally-uniform => V => pointwise."""
    changed = []
    for _ in CHAIN:
        for strong, weak in zip(CHAIN, CHAIN[1:]):
            if modes[strong] is Verdict.HOLDS and modes[weak] is not Verdict.HOLDS:
                modes[weak] = Verdict.HOLDS
                changed.append(weak)
            if modes[weak] is Verdict.FAILS and modes[strong] is not Verdict.FAILS:
                modes[strong] = Verdict.FAILS
                changed.append(strong)
    return changed


def is_monotone(modes: dict) -> bool:
    return all(STRENGTH[modes[s]] <= STRENGTH[modes[w]] for s, w in zip(CHAIN, CHAIN[1:]))


def _sup_rows(space, member, F, G):
    kind, index, w = space.family.member(member).kernel_args(space.family.dim)
    return kernels.batch_sup(np.ascontiguousarray(F), np.ascontiguousarray(G), kind, index, w)


@dataclass(frozen=True)
class ConvergenceVerdict:
    sequence: str
    limit: str
    eps: float
    member: int
    probes: list
    indices: list[int]
    modes: dict
    first_index: dict
    values: dict
    witnesses: dict
    coerced: list

    kind = "classify"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "sequence": self.sequence,
            "limit": self.limit,
            "eps": self.eps,
            "member": self.member,
            "probes": self.probes,
            "modes": {m: self.modes[m].value for m in MODES},
            "monotone": is_monotone(self.modes),
            "coerced": self.coerced,
            "N": {m: self.first_index[m] for m in MODES},
            "witnesses": self.witnesses,
            "indices": self.indices,
            "values": {m: self.values[m] for m in MODES},
        }

    def csv_rows(self):
        rows = [[n] + [self.values[m][j] for m in MODES] for j, n in enumerate(self.indices)]
        return ["n", "pointwise", "V", "locally_uniform", "uniform"], rows

    def plot_series(self):
        return "n", "gap", [(m, self.indices, self.values[m]) for m in MODES]


def classify(space: Space, seq: FnSequence, limit: FnObject, probes, eps: float, member: int = 0,
             opts: Options = DEFAULT) -> ConvergenceVerdict:
    """Tail verdicts for pointwise, V, locally-uniform and uniform convergence.

    Per ``n``: the pointwise gap is the largest gap at the probes; the V gap
    is the semidistance over the probes; the locally-uniform gap is the
    sampled sup over the scale-0 balls about the probes; the uniform gap is
    the sup over a whole-domain grid and those balls.
    """
    A = _probes(space, probes)
    idx = seq.indices()
    if len(idx) < opts.min_tail:
        raise ConfigError(f"horizon too short: need at least {opts.min_tail} terms")
    if len(A) == 0:
        raise ConfigError("classification needs at least one probe")
    T = len(idx)
    pw = np.zeros(T)
    vq = np.zeros(T)
    lu = np.zeros(T)
    pw_arg = np.zeros(T, dtype=int)
    v_src, lu_src = [None] * T, [None] * T
    for j, a in enumerate(A):
        vals, _ = _sup_rows(space, member, seq.values_on(a[None], idx), limit.eval_many(a[None]))
        upd = vals > pw
        pw = np.where(upd, vals, pw)
        pw_arg = np.where(upd, j, pw_arg)
        profs = sequence_profiles(space, seq, limit, member, a, idx, opts)
        for t, prof in enumerate(profs):
            if j == 0 or prof.delta_hat > vq[t]:
                vq[t] = prof.delta_hat
                v_src[t] = prof
            if j == 0 or prof.scales[0].value > lu[t]:
                lu[t] = prof.scales[0].value
                lu_src[t] = prof
    grid = space.domain.grid(min(opts.uniform_depth, max(opts.uniform_depth // space.domain.dim, 1)))
    gvals, garg = _sup_rows(space, member, seq.values_on(grid, idx), limit.eval_many(grid))
    uq = np.maximum(gvals, lu)
    values = {"pointwise": pw, "V": vq, "locally-uniform": lu, "uniform": uq}
    modes, first, wit = {}, {}, {}
    for m in MODES:
        v, N, wn = tail_verdict(idx, values[m], eps, opts.min_tail)
        modes[m], first[m] = v, N
        if v is Verdict.FAILS:
            t = wn - int(idx[0])
            if m == "pointwise":
                wit[m] = {"n": wn, "probe": A.points[pw_arg[t]].tolist(), "gap": float(pw[t])}
            elif m == "V":
                s = v_src[t].scales[-1]
                wit[m] = {"n": wn, "probe": list(v_src[t].probe), "k": s.k, "x": list(s.witness), "gap": s.value}
            elif m == "locally-uniform":
                s = lu_src[t].scales[0]
                wit[m] = {"n": wn, "probe": list(lu_src[t].probe), "k": 0, "x": list(s.witness), "gap": s.value}
            else:
                wit[m] = {"n": wn, "x": grid[garg[t]].tolist(), "gap": float(uq[t])}
    coerced = coerce_chain(modes)
    return ConvergenceVerdict(seq.name, limit.name, eps, member, A.tolist(), idx.tolist(), modes, first,
                              {m: values[m].tolist() for m in MODES}, wit, coerced)


@dataclass(frozen=True)
class LimitTest:
    verdict: Verdict
    N: int | None
    eps: float
    probes: list
    indices: list[int]
    deltas: list[float]
    witness: dict | None = None
    sequence: str = ""
    candidate: str = ""

    kind = "v-limit"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict.value,
            "sequence": self.sequence,
            "candidate": self.candidate,
            "eps": self.eps,
            "N": self.N,
            "probes": self.probes,
            "witness": self.witness,
            "indices": self.indices,
            "deltas": self.deltas,
        }

    def csv_rows(self):
        return ["n", "delta"], [[n, d] for n, d in zip(self.indices, self.deltas)]

    def plot_series(self):
        return "n", "delta", [("delta", self.indices, self.deltas)]


def v_limit_test(space: Space, seq: FnSequence, candidate: FnObject, probes, eps: float, member: int = 0,
                 opts: Options = DEFAULT) -> LimitTest:
    """Does ``delta_{i,A}(f_n, candidate) <= eps`` hold for all ``n >= N``?"""
    A = _probes(space, probes)
    idx = seq.indices()
    deltas = np.zeros(len(idx))
    src = [None] * len(idx)
    for a in A:
        for t, prof in enumerate(sequence_profiles(space, seq, candidate, member, a, idx, opts)):
            if src[t] is None or prof.delta_hat > deltas[t]:
                deltas[t] = prof.delta_hat
                src[t] = prof
    if len(idx) < opts.min_tail:
        v, N, wn = Verdict.INCONCLUSIVE, None, None
    else:
        v, N, wn = tail_verdict(idx, deltas, eps, opts.min_tail)
    witness = None
    if v is Verdict.FAILS:
        prof = src[wn - int(idx[0])]
        witness = {"n": wn, "probe": list(prof.probe), "x": list(prof.scales[-1].witness), "gap": prof.delta_hat}
    return LimitTest(v, N, eps, A.tolist(), idx.tolist(), deltas.tolist(), witness, seq.name, candidate.name)


@dataclass(frozen=True)
class CauchyWitness:
    verdict: Verdict
    probe: list
    eps: float
    N: int | None
    n_top: int
    p_cap: int
    min_radius: float
    scales: list[int]
    entries: list
    failure: dict | None
    status: dict

    kind = "cauchy"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict.value,
            "probe": self.probe,
            "eps": self.eps,
            "N": self.N,
            "n_top": self.n_top,
            "p_cap": self.p_cap,
            "min_radius": self.min_radius,
            "scales": self.scales,
            "status": self.status,
            "failure": self.failure,
            "entries": self.entries,
        }

    def csv_rows(self):
        rows = []
        for e in self.entries:
            for x, P, d in zip(e["x"], e["P"], e["max_dev"]):
                rows.append([e["n"], e["k"], ";".join(repr(c) for c in x), P, d])
        return ["n", "k", "x", "P", "max_dev"], rows

    def plot_series(self):
        ns = [e["n"] for e in self.entries]
        return "n", "max tail deviation", [("deviation", ns, [max(e["max_dev"], default=0.0) for e in self.entries])]


def v_cauchy_sequence(space: Space, seq: FnSequence, a, eps: float, member: int = 0,
                      opts: Options = DEFAULT) -> CauchyWitness:
    """Sequence criterion: for n >= N there is a ball about ``a`` on which
    every sampled x has some P with ``d(f_n(x), f_p(x)) <= eps`` for all p >= P.

    Truncation: ``n`` ranges up to ``n_top`` (default: first eighth of the
    index range), ``P`` must leave at least ``min_tail`` terms before the
    horizon, and scales and sample points closer to ``a`` than the horizon
    resolution ``min_radius`` are not used, because index horizons cannot
    resolve behaviour at arbitrarily small distances.
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    dom = space.domain
    p0 = dom.point(a)
    s, H = seq.start, seq.horizon
    T = H - s + 1
    n_top = opts.cauchy_n_top if opts.cauchy_n_top is not None else s + (H - s) // 8
    p_cap = H - opts.min_tail
    if n_top - s < opts.probe_span or p_cap <= n_top:
        raise ConfigError("horizon too short for the Cauchy search")
    min_r = opts.cauchy_min_radius if opts.cauchy_min_radius is not None else 8 * dom.r0 / T
    kind, index, w = space.family.member(member).kernel_args(space.family.dim)
    ns = np.arange(s, n_top + 1)
    rows = (ns - s).astype(np.int64)
    ok_at: dict[int, dict] = {}
    refuted = np.ones(len(ns), dtype=bool)
    refute_log: list[list] = [[] for _ in ns]
    scales = [k for k in range(opts.k_max + 1) if k == 0 or dom.radius(k) >= min_r]
    for k in scales:
        region = neighborhood(dom, p0, k)
        pts = sample_region(region, opts.cauchy_depth, opts.max_depth)
        dist = dom.distance(p0, pts)
        pts = pts[(dist == 0) | (dist >= min_r)]
        V = seq.values_on(pts)
        first, dev_first, dev_cap = kernels.tail_scan(V, rows, eps, p_cap - s, kind, index, w)
        for r, n in enumerate(ns):
            n = int(n)
            if n in ok_at:
                continue
            if np.all(first[r] <= p_cap - s):
                ok_at[n] = {
                    "n": n,
                    "k": k,
                    "x": pts.tolist(),
                    "P": (first[r] + s).tolist(),
                    "max_dev": dev_first[r].tolist(),
                }
                continue
            worst = int(np.argmax(dev_cap[r]))
            hit = dev_cap[r, worst] > eps + opts.margin
            refuted[r] &= bool(hit)
            refute_log[r].append({"k": k, "x": pts[worst].tolist(), "deviation": float(dev_cap[r, worst])})
    status = {}
    for r, n in enumerate(ns):
        n = int(n)
        status[n] = "ok" if n in ok_at else ("refuted" if refuted[r] else "open")
    span = opts.probe_span
    starts = range(s, n_top - span + 1)
    N = next((N for N in starts if all(status[n] == "ok" for n in range(N, N + span + 1))), None)
    failure = None
    if N is not None:
        verdict = Verdict.HOLDS
        entries = [ok_at[n] for n in range(N, N + span + 1)]
    else:
        entries = []
        if all(any(status[n] == "refuted" for n in range(N0, N0 + span + 1)) for N0 in starts):
            verdict = Verdict.FAILS
            last = [n for n in range(n_top - span, n_top + 1) if status[n] == "refuted"][-1]
            failure = {"n": last, "p_range": [p_cap, H], "scales": refute_log[last - s]}
        else:
            verdict = Verdict.INCONCLUSIVE
    return CauchyWitness(verdict, p0.tolist(), eps, N, n_top, p_cap, float(min_r), scales, entries, failure,
                         {str(n): st for n, st in status.items()})


# --- series ----------------------------------------------------------------


def _scalar(space: Space) -> Space:
    return Space(space.domain, SemidistanceFamily(1))


def _norms(space: Space, member: int, F: np.ndarray) -> np.ndarray:
    return space.family.member(member).rows(F, np.zeros_like(F))


@dataclass(frozen=True)
class SeriesReport:
    verdict: Verdict
    hypotheses_hold: bool
    conclusion_claimed: bool
    probes: list
    norm_partial_range: list[float]
    norm_stable: list[bool]
    norm_limit: list[float]
    norm_oscillation: list[float]
    vector_partial_range: list[float]
    limit_samples: list
    limit_test: LimitTest | None

    kind = "series"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict.value,
            "hypotheses_hold": self.hypotheses_hold,
            "conclusion_claimed": self.conclusion_claimed,
            "probes": self.probes,
            "norm_partial_range": self.norm_partial_range,
            "norm_stable": self.norm_stable,
            "norm_limit": self.norm_limit,
            "norm_oscillation": self.norm_oscillation,
            "vector_partial_range": self.vector_partial_range,
            "limit_samples": self.limit_samples,
            "limit_test": None if self.limit_test is None else self.limit_test.to_dict(),
        }

    def csv_rows(self):
        if self.limit_test is None:
            return ["n", "delta"], []
        return self.limit_test.csv_rows()

    def plot_series(self):
        return self.limit_test.plot_series() if self.limit_test else ("n", "delta", [])


def normal_series_test(space: Space, terms: FnSequence, probes, eps: float = 1e-2, member: int | None = None,
                       opts: Options = DEFAULT) -> SeriesReport:
    """Normal-convergence rule: if ``sum ||f_n||`` settles at every probe to a
    function continuous there, the vector partial sums V-converge.

    Hypotheses are checked first; only when they pass is the conclusion
    (``v_limit_test`` of partial sums against the final partial sum) claimed.
    """
    A = _probes(space, probes)
    i = space.family.norm_member() if member is None else member
    if not space.family.member(i).is_norm:
        raise ConfigError("normal series test needs a norm-like member")
    F = terms.values_on(A.points)
    norm_sums = np.cumsum(_norms(space, i, F), axis=0)
    vec_sums = np.cumsum(F, axis=0)
    w = min(opts.window, len(F))
    norm_range = np.ptp(norm_sums[-w:], axis=0)
    vec_range = np.max(np.ptp(vec_sums[-w:], axis=0), axis=-1)
    stable = norm_range <= opts.series_tol

    def norm_series(pts):
        return np.sum(_norms(space, i, terms.values_on(pts)), axis=0)

    fn = FnObject(f"sum-norm[{terms.name}]", norm_series)
    osc = [oscillation_defect(_scalar(space), fn, a, 0, opts).defect for a in A]
    hyp = bool(np.all(stable) and all(o <= opts.osc_tol for o in osc))
    lim = None
    if hyp:
        sums = partial_sums(terms)
        lim = v_limit_test(space, sums, sums[sums.horizon], A, eps, i, opts)
        verdict = lim.verdict
    else:
        verdict = Verdict.INCONCLUSIVE
    return SeriesReport(verdict, hyp, hyp, A.tolist(), norm_range.tolist(), stable.tolist(),
                        norm_sums[-1].tolist(), osc, vec_range.tolist(), vec_sums[-1].tolist(), lim)


@dataclass(frozen=True)
class AbelReport:
    verdict: Verdict
    hypotheses_hold: bool
    probes: list
    identity_error: float
    bound_estimate: list[float]
    bounded: list[bool]
    local_bound: list[float]
    locally_bounded: list[bool]
    weights_at_horizon: float
    weights_decay: bool
    variation: list[float]
    variation_range: list[float]
    variation_stable: bool
    variation_oscillation: list[float]
    values_direct: list
    values_by_parts: list
    continuity_defect: list[float]
    checks: dict = field(default_factory=dict)

    kind = "abel"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict.value,
            "hypotheses_hold": self.hypotheses_hold,
            "probes": self.probes,
            "identity_error": self.identity_error,
            "bound_estimate": self.bound_estimate,
            "bounded": self.bounded,
            "local_bound": self.local_bound,
            "locally_bounded": self.locally_bounded,
            "weights_at_horizon": self.weights_at_horizon,
            "weights_decay": self.weights_decay,
            "variation": self.variation,
            "variation_range": self.variation_range,
            "variation_stable": self.variation_stable,
            "variation_oscillation": self.variation_oscillation,
            "values": self.values_direct,
            "values_by_parts": self.values_by_parts,
            "continuity_defect": self.continuity_defect,
            "checks": self.checks,
        }

    def csv_rows(self):
        rows = [[";".join(repr(float(c)) for c in np.atleast_1d(p)), ";".join(repr(float(c)) for c in np.atleast_1d(v)), d]
                for p, v, d in zip(self.probes, self.values_direct, self.continuity_defect)]
        return ["probe", "value", "continuity_defect"], rows

    def plot_series(self):
        xs = [float(np.atleast_1d(p)[0]) for p in self.probes]
        return "probe", "sum", [("sum", xs, [float(np.atleast_1d(v)[0]) for v in self.values_direct])]


def _bounded(norms: np.ndarray, growth: float, tol: float) -> np.ndarray:
    """Running maximum stops growing: the second half adds at most a factor ``growth``."""
    half = max(len(norms) // 2, 1)
    first = norms[:half].max(axis=0)
    return norms.max(axis=0) <= growth * first + tol


def abel_series(space: Space, terms: FnSequence, weights: FnSequence, probes, member: int | None = None,
                opts: Options = DEFAULT) -> AbelReport:
    """Abel's rule for ``sum_n f_n(x) eps_n(x)``.

    Hypotheses: bounded partial sums of ``f_n`` (at the probes and on small
    balls), ``eps_n -> 0``, and ``sum |eps_n - eps_{n-1}|`` settling to a
    function continuous at the probes.  The series is evaluated both directly
    and by summation by parts; the conclusion checked is continuity of the
    evaluated sum at the probes.
    """
    if terms.start != weights.start or terms.horizon != weights.horizon:
        raise HorizonMismatchError("terms and weights must share start and horizon")
    if weights.dim != 1:
        raise ConfigError("weights must be scalar")
    A = _probes(space, probes)
    i = space.family.norm_member() if member is None else member
    F = terms.values_on(A.points)
    E = np.ascontiguousarray(weights.values_on(A.points)[:, :, 0])
    direct, parts = kernels.abel_sums(F, E)
    scale = np.maximum(1.0, np.maximum(np.abs(direct), np.abs(parts)))
    identity_error = float(np.max(np.abs(direct - parts) / scale))

    S_norm = _norms(space, i, np.cumsum(F, axis=0))
    bound = S_norm.max(axis=0)
    bounded = _bounded(S_norm, opts.bound_growth, opts.series_tol)

    local_bound, local_ok, eps_end = [], [], [float(np.max(np.abs(E[-1])))]
    for a in A:
        pts = sample_region(neighborhood(space.domain, a, opts.local_k), opts.base_depth, opts.max_depth)
        Sl = _norms(space, i, np.cumsum(terms.values_on(pts), axis=0))
        local_bound.append(float(Sl.max()))
        local_ok.append(bool(np.all(_bounded(Sl, opts.bound_growth, opts.series_tol))))
        eps_end.append(float(np.max(np.abs(weights.values_on(pts, [weights.horizon])))))
    decay = max(eps_end) <= opts.decay_tol

    var = np.cumsum(np.abs(np.diff(E, axis=0)), axis=0) if len(E) > 1 else np.zeros((1, len(A)))
    wv = min(opts.window, len(var))
    var_range = np.ptp(var[-wv:], axis=0)
    var_stable = bool(np.all(var_range <= opts.series_tol))

    def variation_fn(pts):
        e = weights.values_on(pts)[:, :, 0]
        return np.sum(np.abs(np.diff(e, axis=0)), axis=0) if len(e) > 1 else np.zeros(len(pts))

    def sum_fn(pts):
        d, _ = kernels.abel_sums(terms.values_on(pts), np.ascontiguousarray(weights.values_on(pts)[:, :, 0]))
        return d[-1]

    scalar = _scalar(space)
    var_osc = [oscillation_defect(scalar, FnObject("variation", variation_fn), a, 0, opts).defect for a in A]
    limit_fn = FnObject(f"abel-sum[{terms.name}]", sum_fn, terms.dim)
    cont = [oscillation_defect(space, limit_fn, a, i, opts).defect for a in A]

    checks = {
        "identity": identity_error <= 1e-10,
        "bounded": bool(np.all(bounded)),
        "locally_bounded": all(local_ok),
        "weights_decay": decay,
        "variation_stable": var_stable,
        "variation_continuous": all(o <= opts.osc_tol for o in var_osc),
    }
    hyp = all(v for k, v in checks.items() if k != "identity")
    checks["limit_continuous"] = all(c <= opts.osc_tol for c in cont)
    if not checks["identity"]:
        verdict = Verdict.FAILS
    elif not hyp:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.HOLDS if checks["limit_continuous"] else Verdict.FAILS
    return AbelReport(verdict, hyp, A.tolist(), identity_error, bound.tolist(), bounded.tolist(), local_bound,
                      local_ok, max(eps_end), decay, var[-1].tolist(), var_range.tolist(), var_stable, var_osc,
                      direct[-1].tolist(), parts[-1].tolist(), cont, checks)


# --- limit interchange -------------------------------------------------------


@dataclass(frozen=True)
class InterchangeReport:
    verdict: Verdict
    precondition_ok: bool
    precondition: LimitTest
    point: list
    indices: list[int]
    inner: list
    inner_range: list[float]
    unstable: list[int]
    lhs: list[float]
    lhs_range: float
    rhs: list[float]
    rhs_range: float
    discrepancy: float
    tol: float

    kind = "interchange"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict.value,
            "precondition_ok": self.precondition_ok,
            "precondition_violated": not self.precondition_ok,
            "point": self.point,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "discrepancy": self.discrepancy,
            "tol": self.tol,
            "lhs_range": self.lhs_range,
            "rhs_range": self.rhs_range,
            "unstable": self.unstable,
            "indices": self.indices,
            "inner": self.inner,
            "inner_range": self.inner_range,
            "precondition": self.precondition.to_dict(),
        }

    def csv_rows(self):
        return ["p", "inner_limit", "inner_range"], [
            [p, v[0] if len(v) == 1 else ";".join(map(repr, v)), r]
            for p, v, r in zip(self.indices, self.inner, self.inner_range)
        ]

    def plot_series(self):
        return "p", "inner limit", [("inner", self.indices, [v[0] for v in self.inner])]


def interchange_check(space: Space, seq: FnSequence, g: FnObject, a_seq, a=None, probes=None, eps: float = 1e-2,
                      member: int = 0, tol: float | None = None, opts: Options = DEFAULT) -> InterchangeReport:
    """Compare ``lim_p lim_n f_p(a_n)`` with ``lim_n g(a_n)``.

    Inner and outer limits are the means of the last ``window`` values, each
    with a max-minus-min stabilisation check.  The comparison is only
    meaningful when ``f_p`` V-converges to ``g`` at probes including the
    limit point ``a``; otherwise the numbers are reported descriptively with
    an inconclusive verdict.
    """
    dom = space.domain
    pts = np.asarray(a_seq, dtype=float).reshape(-1, dom.dim)
    a = pts[-1] if a is None else dom.point(a)
    extra = [] if probes is None else list(np.asarray(probes, dtype=float).reshape(-1, dom.dim))
    A = space.probes([np.asarray(a, dtype=float)] + extra)
    tol = opts.limit_tol if tol is None else tol
    pre = v_limit_test(space, seq, g, A, eps, member, opts)
    mem = space.family.member(member)

    w = min(opts.window, len(pts))
    vals = seq.values_on(pts[-w:])
    inner = vals.mean(axis=1)
    inner_range = np.max(np.ptp(vals, axis=1), axis=-1)
    idx = seq.indices()
    unstable = [int(p) for p, r in zip(idx, inner_range) if r > tol]
    wo = min(opts.window, len(inner))
    lhs = inner[-wo:].mean(axis=0)
    lhs_range = float(np.max(np.ptp(inner[-wo:], axis=0)))
    gv = g.eval_many(pts[-w:])
    rhs = gv.mean(axis=0)
    rhs_range = float(np.max(np.ptp(gv, axis=0)))
    disc = float(mem.rows(lhs[None], rhs[None])[0])

    if pre.verdict is not Verdict.HOLDS:
        verdict = Verdict.INCONCLUSIVE
    elif unstable or lhs_range > tol or rhs_range > tol:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.HOLDS if disc <= tol else Verdict.FAILS
    return InterchangeReport(verdict, pre.verdict is Verdict.HOLDS, pre, np.atleast_1d(a).tolist(), idx.tolist(),
                             inner.tolist(), inner_range.tolist(), unstable, lhs.tolist(), lhs_range, rhs.tolist(),
                             rhs_range, disc, tol)
