"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every test records a pass/fail line that is printed in the terminal summary.
"""

import itertools
import math

import numpy as np

from conftest import record
from vconv import kernels
from vconv.cli import main
from vconv.closure import CoverPiece, patch, patch_check
from vconv.convergence import (
    abel_series,
    classify,
    interchange_check,
    is_monotone,
    normal_series_test,
    v_cauchy_sequence,
    v_limit_test,
)
from vconv.corpus import lookup
from vconv.options import DEFAULT
from vconv.space import DomainSpec, Region, Space, neighborhood, partial_sums, sample_region
from vconv.verdict import Verdict
from vconv.vmetric import sequence_profiles, v_semidistance

UNIT = DomainSpec.interval(0.0, 1.0)
SPACE = Space(UNIT)
PROBE_GRID = [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0]
SEQUENCES = ["power-sequence", "moving-bump", "shrinking-indicator", "damped-oscillation", "shifted-identity"]


def corpus_functions():
    fns = []
    for name in SEQUENCES:
        seq = lookup(name).sequence()
        fns += [seq[n] for n in (1, 2, 5, 20)]
    fns.append(lookup("step").function())
    fns.append(lookup("step").function(at=0.25))
    fns.append(lookup("regulated").function())
    fns += [lookup("monomial").function(power=k) for k in (1, 2, 3)]
    fns += [lookup("sine-wave").function(freq=w) for w in (1.0, 3.0, 7.0)]
    fns += [lookup("affine").function(slope=s, intercept=b) for s, b in ((0.5, 0.1), (-1.0, 1.0))]
    fns += [lookup("constant").function(value=v) for v in (0.0, 0.4)]
    return fns


FUNCTIONS = corpus_functions()


def _pairs(count, seed):
    rng = np.random.default_rng(seed)
    combos = list(itertools.combinations(range(len(FUNCTIONS)), 2))
    picks = rng.choice(len(combos), size=count, replace=False)
    out = []
    for p in picks:
        i, j = combos[p]
        probes = sorted(rng.choice(PROBE_GRID, size=int(rng.integers(1, 4)), replace=False).tolist())
        out.append((FUNCTIONS[i], FUNCTIONS[j], probes))
    return out


def test_criterion_01_semidistance_laws():
    pairs = _pairs(60, seed=1)
    zero_ok = all(v_semidistance(SPACE, f, f, 0, probes).delta == 0.0 for f, _, probes in pairs)
    sym_ok = all(
        v_semidistance(SPACE, f, g, 0, probes).delta == v_semidistance(SPACE, g, f, 0, probes).delta
        for f, g, probes in pairs
    )
    rng = np.random.default_rng(2)
    worst = -np.inf
    for _ in range(20):
        i, j, k = rng.choice(len(FUNCTIONS), size=3, replace=False)
        f, g, h = FUNCTIONS[i], FUNCTIONS[j], FUNCTIONS[k]
        probes = sorted(rng.choice(PROBE_GRID, size=2, replace=False).tolist())
        d = lambda u, v: v_semidistance(SPACE, u, v, 0, probes).delta  # noqa: E731
        worst = max(worst, d(f, h) - d(f, g) - d(g, h))
    passed = zero_ok and sym_ok and worst <= 2e-6
    record(1, "semidistance laws on 60 pairs, triangle on 20 triples", passed,
           f"zero={zero_ok}, symmetric={sym_ok}, worst triangle excess={worst:.2e}")
    assert passed


def _fixed_ball_sup(f, g, a):
    """Independent oracle: largest gap over every sample the schedule draws inside B(a, r0)."""
    pts = np.concatenate([sample_region(neighborhood(UNIT, a, k), DEFAULT.base_depth + k, DEFAULT.max_depth)
                          for k in range(DEFAULT.k_max + 1)])
    return float(np.max(np.abs(f.eval_many(pts) - g.eval_many(pts))))


def test_criterion_02_comparison_chain():
    lower_worst, upper_worst = -np.inf, -np.inf
    for f, g, probes in _pairs(60, seed=3):
        delta = v_semidistance(SPACE, f, g, 0, probes).delta
        pointwise = max(abs(float(f([a])[0] - g([a])[0])) for a in probes)
        ball = max(_fixed_ball_sup(f, g, a) for a in probes)
        lower_worst = max(lower_worst, pointwise - delta)
        upper_worst = max(upper_worst, delta - ball)
    monotone, untouched = True, True
    for name in SEQUENCES:
        e = lookup(name)
        for probes in ([0.0], [0.5], [1.0], [0.0, 0.5, 1.0], list(e.probes)):
            cv = classify(SPACE, e.sequence(), e.limit_fn(), probes, 1e-2)
            monotone &= is_monotone(cv.modes)
            untouched &= not cv.coerced
    passed = lower_worst <= 1e-6 and upper_worst <= 1e-6 and monotone
    record(2, "pointwise <= delta <= fixed-ball sup, monotone mode vectors", passed,
           f"max(pw-delta)={lower_worst:.2e}, max(delta-ball)={upper_worst:.2e}, monotone={monotone}, "
           f"coercion needed={not untouched}")
    assert passed


def test_criterion_03_continuous_pair_equality():
    lip = [f for f in FUNCTIONS if f.lipschitz is not None]
    combos = list(itertools.combinations(range(len(lip)), 2))
    rng = np.random.default_rng(4)
    picks = rng.choice(len(combos), size=20, replace=False)
    worst = 0.0
    for p in picks:
        f, g = lip[combos[p][0]], lip[combos[p][1]]
        for a in (0.0, 0.25, 0.5, 0.75, 1.0):
            delta = v_semidistance(SPACE, f, g, 0, [a]).delta
            worst = max(worst, abs(delta - abs(float(f([a])[0] - g([a])[0]))))
    passed = worst <= 1e-3
    record(3, "20 Lipschitz pairs x 5 probes match pointwise gap", passed, f"worst={worst:.2e}")
    assert passed


def test_criterion_04_closedness_exhibits():
    e = lookup("power-sequence")
    seq = e.sequence()
    deltas = [p.delta_hat for p in sequence_profiles(SPACE, seq, e.limit_fn(), 0, 1.0, range(1, 201))]
    pinned = all(abs(d - 1) <= 0.05 for d in deltas)
    pw = classify(SPACE, seq, e.limit_fn(), [1.0], 1e-2)
    b = lookup("moving-bump")
    bump = classify(SPACE, b.sequence(), b.limit_fn(), [0.0], 1e-2)
    s = lookup("shrinking-indicator")
    ind = classify(SPACE, s.sequence(), s.limit_fn(), [0.0], 1e-2)
    checks = {
        "power delta=1": pinned,
        "power V fails": pw.modes["V"] is Verdict.FAILS,
        "power pointwise holds": pw.modes["pointwise"] is Verdict.HOLDS,
        "bump V holds": bump.modes["V"] is Verdict.HOLDS,
        "bump loc-unif fails": bump.modes["locally-uniform"] is Verdict.FAILS,
        "indicator pointwise holds": ind.modes["pointwise"] is Verdict.HOLDS,
        "indicator V fails": ind.modes["V"] is Verdict.FAILS,
    }
    passed = all(checks.values())
    record(4, "power pinned at 1, bump V-only, indicator pointwise-only", passed,
           f"delta range [{min(deltas):.4f}, {max(deltas):.4f}]" + "".join(f"; {k}" for k, v in checks.items() if not v))
    assert passed


def _cauchy_cases():
    cases = []
    for name in SEQUENCES:
        e = lookup(name)
        cases.append((name, e.sequence(), e.limit_fn()))
    sums = partial_sums(lookup("damped-power-series").sequence())
    cases.append(("damped-power-series sums", sums, sums[sums.horizon]))
    return cases


def test_criterion_05_criterion_coherence():
    eps = 0.2
    checked, bad = 0, []
    for name, seq, limit in _cauchy_cases():
        for a in (0.0, 0.25, 0.5, 0.75, 1.0):
            if v_limit_test(SPACE, seq, limit, [a], eps / 2).verdict is Verdict.HOLDS:
                checked += 1
                if v_cauchy_sequence(SPACE, seq, a, eps).verdict is not Verdict.HOLDS:
                    bad.append((name, a))
    w = v_cauchy_sequence(SPACE, lookup("power-sequence").sequence(), 1.0, 0.4)
    witness_ok = (
        w.verdict is Verdict.FAILS
        and w.failure is not None
        and all(s["deviation"] > 0.4 for s in w.failure["scales"])
    )
    detail = f"{checked} limit-holds cases, mismatches={bad}"
    if witness_ok:
        s = w.failure["scales"][-1]
        detail += f"; power witness n={w.failure['n']}, x={s['x'][0]:.6f}, deviation={s['deviation']:.4f}"
    passed = not bad and checked >= 10 and witness_ok
    record(5, "limit at eps/2 implies Cauchy at eps; power fails at a=1, eps=0.4", passed, detail)
    assert passed


def test_criterion_06_normal_rule():
    probes = [0.5, 0.9, 1.0]
    damped = normal_series_test(SPACE, lookup("damped-power-series").sequence(), probes, 1e-2)
    plain = normal_series_test(SPACE, lookup("geometric-series").sequence(), probes, 1e-2)
    passed = (
        damped.hypotheses_hold
        and damped.limit_test is not None
        and damped.limit_test.verdict is Verdict.HOLDS
        and not plain.hypotheses_hold
        and not plain.conclusion_claimed
    )
    record(6, "normal rule: damped passes, undamped claims nothing", passed,
           f"damped={damped.verdict.value}, undamped hypotheses={plain.hypotheses_hold}")
    assert passed


def test_criterion_07_abel_rule():
    e = lookup("dirichlet-kernel")
    dom = e.domain_spec()
    sp = Space(dom)
    terms, weights = e.sequence(), e.weight_sequence()
    pts = np.linspace(0.5, 5.5, 41)[:, None]
    direct, parts = kernels.abel_sums(terms.values_on(pts), np.ascontiguousarray(weights.values_on(pts)[:, :, 0]))
    scale = np.maximum(1.0, np.maximum(np.abs(direct), np.abs(parts)))
    identity = float(np.max(np.abs(direct - parts) / scale))
    rng = np.random.default_rng(5)
    F, E = rng.normal(size=(2000, 4, 2)), rng.normal(size=(2000, 4))
    d2, p2 = kernels.abel_sums(F, E)
    identity = max(identity, float(np.max(np.abs(d2 - p2) / np.maximum(1.0, np.maximum(np.abs(d2), np.abs(p2))))))
    probes = [0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 5.5]
    rep = abel_series(sp, terms, weights, probes)
    lim_err = max(abs(v[0] - (math.pi - x) / 2) for x, v in zip(probes, rep.values_direct))
    osc = max(rep.continuity_defect)
    a = lookup("alternating-signs")
    alt = abel_series(SPACE, a.sequence(), a.weight_sequence(), [0.5])
    alt_err = abs(alt.values_direct[0][0] + math.log(2))
    passed = identity <= 1e-10 and lim_err <= 1e-2 and osc <= 1e-2 and alt_err <= 1e-3
    record(7, "Abel identity, Dirichlet limit and continuity, alternating series", passed,
           f"identity={identity:.1e}, limit err={lim_err:.1e}, oscillation={osc:.1e}, -ln2 err={alt_err:.1e}")
    assert passed


def test_criterion_08_interchange():
    b = lookup("moving-bump")
    n = np.arange(1, 10**6 + 1, dtype=float)
    bump = interchange_check(SPACE, b.sequence(), b.limit_fn(), 1 / n, 0.0)
    p = lookup("power-sequence")
    power = interchange_check(SPACE, p.sequence(), p.limit_fn(), 1 - 1 / n, 1.0)
    passed = (
        bump.discrepancy <= 1e-6
        and not power.precondition_ok
        and abs(power.lhs[0] - 1) <= 1e-3
        and abs(power.rhs[0]) <= 1e-3
    )
    record(8, "interchange: bump agrees, power flags precondition", passed,
           f"bump discrepancy={bump.discrepancy:.1e}; power lhs={power.lhs[0]:.5f}, rhs={power.rhs[0]:.5f}")
    assert passed


def test_criterion_09_patching():
    target = lookup("sine-wave").function(freq=2.0)
    pieces = []
    for c in (0.1, 0.3, 0.5, 0.7, 0.9):
        s, v = 2 * math.cos(2 * c), math.sin(2 * c)
        pieces.append(CoverPiece(Region(np.array([c]), 0.11, UNIT), lookup("affine").function(slope=s, intercept=v - s * c)))
    rep = patch_check(SPACE, pieces, target, eps=0.05)
    grid = np.linspace(0.0, 1.0, 10_000)[:, None]
    g = patch(pieces)
    err = float(np.max(np.abs(g.eval_many(grid) - target.eval_many(grid))))
    h = 1.0 / 9999
    slack = (target.lipschitz + max(pc.approximant.lipschitz for pc in pieces)) * h / 2
    xs = np.random.default_rng(6).uniform(0, 1, size=(100, 1))
    exact = True
    for x in xs:
        k = next(i for i, pc in enumerate(pieces) if abs(x[0] - pc.region.center[0]) < pc.region.radius)
        exact &= bool(np.array_equal(g.eval_many(x[None]), pieces[k].approximant.eval_many(x[None])))
    passed = max(rep.piece_errors) <= 0.05 and err <= 0.05 + slack and exact
    record(9, "5-piece patch within eps + slack on 10^4 grid, first-match exact", passed,
           f"piece max={max(rep.piece_errors):.4f}, patch err={err:.4f}, first-match exact={exact}")
    assert passed


CLI_RUNS = [
    ["vdist", "--family", "power-sequence", "--n", "50", "--probes", "1.0"],
    ["classify", "--family", "moving-bump", "--probes", "0.0"],
    ["cauchy", "--family", "power-sequence", "--point", "1.0", "--eps", "0.4"],
    ["series", "--family", "damped-power-series"],
    ["abel", "--family", "dirichlet-kernel", "--probes", "1.0", "3.0", "5.0"],
    ["interchange", "--family", "moving-bump", "--n-terms", "4000"],
    ["patch"],
    ["corpus"],
]


def test_criterion_10_cli_determinism(tmp_path):
    same = {}
    for argv in CLI_RUNS:
        blobs = []
        for rep in range(2):
            out, table = tmp_path / f"{argv[0]}-{rep}.json", tmp_path / f"{argv[0]}-{rep}.csv"
            code = main([*argv, "--out", str(out), "--csv", str(table)])
            assert code < 3, argv
            blobs.append((out.read_bytes(), table.read_bytes()))
        same[argv[0]] = blobs[0] == blobs[1]
    passed = all(same.values())
    record(10, "byte-identical JSON for every subcommand", passed,
           ", ".join(k for k, v in same.items() if not v) or f"{len(same)} subcommands")
    assert passed
