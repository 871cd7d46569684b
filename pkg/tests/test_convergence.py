import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vconv.closure import oscillation_defect
from vconv.convergence import (
    MODES,
    abel_series,
    classify,
    coerce_chain,
    interchange_check,
    is_monotone,
    normal_series_test,
    tail_verdict,
    v_cauchy_sequence,
    v_limit_test,
)
from vconv.corpus import lookup
from vconv.errors import ConfigError, HorizonMismatchError
from vconv.space import FnObject, FnSequence, Space, constant
from vconv.verdict import Verdict


def family(name, **params):
    e = lookup(name)
    return e, Space(e.domain_spec(**params)), e.sequence(**params)


def const_seq(value=0.5, horizon=100):
    return FnSequence("const", lambda n: constant(value, 1, "c"), horizon)


# --- tail verdicts and coercion -------------------------------------------------


def test_tail_verdict_cases():
    idx = np.arange(40)
    ok = np.zeros(40)
    assert tail_verdict(idx, ok, 0.1, 16) == (Verdict.HOLDS, 0, None)
    late = np.r_[np.ones(30), np.zeros(10)]
    assert tail_verdict(idx, late, 0.1, 16)[0] is Verdict.INCONCLUSIVE
    v, N, wn = tail_verdict(idx, np.ones(40), 0.1, 16)
    assert v is Verdict.FAILS and wn == 39
    assert tail_verdict(idx, np.r_[np.ones(20), np.zeros(20)], 0.1, 16)[:2] == (Verdict.HOLDS, 20)


verdicts = st.sampled_from(list(Verdict))


@settings(max_examples=200, deadline=None)
@given(st.fixed_dictionaries({m: verdicts for m in MODES}))
def test_coercion_always_monotone(modes):
    coerce_chain(modes)
    assert is_monotone(modes)


# --- classify -------------------------------------------------------------------


def test_classify_damped_oscillation_all_hold():
    e, sp, seq = family("damped-oscillation")
    cv = classify(sp, seq, e.limit_fn(), [0.3, 0.7], 1e-2)
    assert all(cv.modes[m] is Verdict.HOLDS for m in MODES)
    assert all(cv.first_index[m] <= 200 - 16 for m in MODES)


def test_classify_moving_bump():
    e, sp, seq = family("moving-bump")
    cv = classify(sp, seq, e.limit_fn(), [0.0], 1e-2)
    assert cv.modes["pointwise"] is Verdict.HOLDS
    assert cv.modes["V"] is Verdict.HOLDS
    assert cv.modes["locally-uniform"] is Verdict.FAILS
    assert cv.modes["uniform"] is Verdict.FAILS
    assert cv.witnesses["locally-uniform"]["gap"] >= 0.99


def test_classify_power_sequence():
    e, sp, seq = family("power-sequence")
    cv = classify(sp, seq, e.limit_fn(), [1.0], 1e-2)
    assert cv.modes["pointwise"] is Verdict.HOLDS
    assert cv.modes["V"] is Verdict.FAILS
    assert min(cv.values["V"]) >= 0.95
    assert cv.witnesses["V"]["x"][0] < 1.0


def test_classify_needs_horizon():
    e, sp, _ = family("power-sequence")
    with pytest.raises(ConfigError):
        classify(sp, e.sequence(horizon=5), e.limit_fn(), [1.0], 1e-2)


# --- V-limit test ------------------------------------------------------------------


def test_limit_constant_sequence():
    lt = v_limit_test(Space(lookup("constant").domain_spec()), const_seq(), constant(0.5, 1), [0.5], 1e-3)
    assert lt.verdict is Verdict.HOLDS and lt.N == 0


def test_limit_moving_bump_and_indicator():
    e, sp, seq = family("moving-bump")
    assert v_limit_test(sp, seq, e.limit_fn(), [0.0], 1e-2).verdict is Verdict.HOLDS
    e, sp, seq = family("shrinking-indicator")
    lt = v_limit_test(sp, seq, e.limit_fn(), [0.0], 0.5)
    assert lt.verdict is Verdict.FAILS
    assert lt.witness["gap"] == 1.0


# --- Cauchy criterion -------------------------------------------------------------


def test_cauchy_uniform_sequence():
    _, sp, seq = family("damped-oscillation")
    w = v_cauchy_sequence(sp, seq, 0.5, 0.1)
    assert w.verdict is Verdict.HOLDS
    assert w.entries[0]["k"] == 0
    assert all(d <= 0.1 for e in w.entries for d in e["max_dev"])


def test_cauchy_power_fails_with_witness():
    _, sp, seq = family("power-sequence")
    w = v_cauchy_sequence(sp, seq, 1.0, 0.4)
    assert w.verdict is Verdict.FAILS
    n = w.failure["n"]
    for scale in w.failure["scales"]:
        x = scale["x"][0]
        assert scale["deviation"] > 0.4
        # oracle: the tail deviation at x is at least x^n - x^horizon
        assert scale["deviation"] >= x**n - x**seq.horizon - 1e-12


def test_cauchy_constant_sequence():
    w = v_cauchy_sequence(Space(lookup("constant").domain_spec()), const_seq(), 0.3, 0.1)
    assert w.verdict is Verdict.HOLDS and w.N == 0
    assert all(d == 0.0 for e in w.entries for d in e["max_dev"])


def test_cauchy_rejects_bad_eps():
    _, sp, seq = family("power-sequence")
    with pytest.raises(ValueError):
        v_cauchy_sequence(sp, seq, 0.5, 0.0)


SEQUENCE_FAMILIES = ["power-sequence", "moving-bump", "shrinking-indicator", "damped-oscillation", "shifted-identity"]


@pytest.mark.parametrize("name", SEQUENCE_FAMILIES)
@pytest.mark.parametrize("a", [0.0, 0.5, 1.0])
def test_limit_implies_cauchy(name, a):
    e, sp, seq = family(name)
    eps = 0.2
    if v_limit_test(sp, seq, e.limit_fn(), [a], eps / 2).verdict is Verdict.HOLDS:
        assert v_cauchy_sequence(sp, seq, a, eps).verdict is Verdict.HOLDS


@pytest.mark.parametrize("name", SEQUENCE_FAMILIES)
@pytest.mark.parametrize("a", [0.0, 0.5, 1.0])
def test_cauchy_implies_limit(name, a):
    e, sp, seq = family(name)
    eps = 0.2
    if v_cauchy_sequence(sp, seq, a, eps / 3).verdict is Verdict.HOLDS:
        assert v_limit_test(sp, seq, e.limit_fn(), [a], eps).verdict is Verdict.HOLDS


@pytest.mark.parametrize("name", ["moving-bump", "damped-oscillation", "shifted-identity"])
def test_continuous_v_limits_have_small_oscillation(name):
    e, sp, seq = family(name)
    eps = 1e-2
    probes = [0.0, 0.3, 0.7]
    if v_limit_test(sp, seq, e.limit_fn(), probes, eps).verdict is Verdict.HOLDS:
        for a in probes:
            assert oscillation_defect(sp, e.limit_fn(), a).defect <= 2 * eps


# --- series -----------------------------------------------------------------------


def test_normal_rule_damped():
    _, sp, terms = family("damped-power-series")
    rep = normal_series_test(sp, terms, [0.5, 0.9, 1.0], 1e-2)
    assert rep.hypotheses_hold and rep.conclusion_claimed
    assert rep.verdict is Verdict.HOLDS
    # norm series at 1 is bounded by pi^2/6
    assert rep.norm_limit[-1] <= math.pi**2 / 6


def test_normal_rule_undamped_claims_nothing():
    _, sp, terms = family("geometric-series")
    rep = normal_series_test(sp, terms, [0.5, 0.9, 1.0], 1e-2)
    assert not rep.hypotheses_hold and not rep.conclusion_claimed
    assert rep.verdict is Verdict.INCONCLUSIVE
    assert rep.norm_stable == [True, True, False]
    assert rep.limit_test is None


def test_normal_rule_zero_terms():
    sp = Space(lookup("constant").domain_spec())
    rep = normal_series_test(sp, FnSequence("zero", lambda n: constant(0.0, 1), 40), [0.2, 0.8])
    assert rep.verdict is Verdict.HOLDS
    assert rep.norm_limit == [0.0, 0.0]


def test_abel_dirichlet():
    e, sp, terms = family("dirichlet-kernel")
    probes = [1.0, 3.0, 5.0]
    rep = abel_series(sp, terms, e.weight_sequence(), probes)
    assert rep.verdict is Verdict.HOLDS and rep.hypotheses_hold
    assert rep.identity_error <= 1e-10
    for x, v in zip(probes, rep.values_direct):
        assert abs(v[0] - (math.pi - x) / 2) <= 1e-2
    assert max(rep.continuity_defect) <= 1e-2
    # partial sums of sin(nx) are bounded by 1/|sin(x/2)|
    for x, b in zip(probes, rep.bound_estimate):
        assert b <= 1 / abs(math.sin(x / 2)) + 1e-9


def test_abel_alternating():
    e, sp, terms = family("alternating-signs")
    rep = abel_series(sp, terms, e.weight_sequence(), [0.5])
    assert rep.verdict is Verdict.HOLDS
    assert abs(rep.values_direct[0][0] + math.log(2)) <= 1e-3
    assert rep.bound_estimate == [1.0]


def test_abel_zero_weights():
    e, sp, terms = family("dirichlet-kernel", horizon=100)
    zero = FnSequence("zero", lambda n: constant(0.0, 1), 100, start=1)
    rep = abel_series(sp, terms, zero, [1.0, 4.0])
    assert rep.verdict is Verdict.HOLDS
    assert rep.values_direct == [[0.0], [0.0]]


def test_abel_horizon_mismatch():
    e, sp, terms = family("dirichlet-kernel")
    with pytest.raises(HorizonMismatchError):
        abel_series(sp, terms, e.weight_sequence(horizon=100), [1.0])


def test_abel_identity_for_all_truncations():
    e, sp, terms = family("dirichlet-kernel")
    from vconv import kernels

    pts = np.array([[0.7], [2.0], [5.5]])
    direct, parts = kernels.abel_sums(terms.values_on(pts), np.ascontiguousarray(e.weight_sequence().values_on(pts)[:, :, 0]))
    scale = np.maximum(1.0, np.maximum(np.abs(direct), np.abs(parts)))
    assert np.max(np.abs(direct - parts) / scale) <= 1e-10


# --- interchange ----------------------------------------------------------------------


def test_interchange_shifted_identity():
    e, sp, seq = family("shifted-identity")
    n = np.arange(1, 10**6 + 1, dtype=float)
    rep = interchange_check(sp, seq, e.limit_fn(), 1 / n, 0.0)
    assert rep.verdict is Verdict.HOLDS
    assert abs(rep.lhs[0]) <= 1e-4 and abs(rep.rhs[0]) <= 1e-4


def test_interchange_moving_bump():
    e, sp, seq = family("moving-bump")
    n = np.arange(1, 4001, dtype=float)
    rep = interchange_check(sp, seq, e.limit_fn(), 1 / n, 0.0)
    assert rep.precondition_ok
    assert rep.discrepancy <= 1e-6
    assert rep.verdict is Verdict.HOLDS


def test_interchange_power_flags_precondition():
    e, sp, seq = family("power-sequence")
    n = np.arange(1, 10**6 + 1, dtype=float)
    rep = interchange_check(sp, seq, e.limit_fn(), 1 - 1 / n, 1.0)
    assert not rep.precondition_ok
    assert rep.verdict is Verdict.INCONCLUSIVE
    assert abs(rep.lhs[0] - 1) <= 1e-3 and abs(rep.rhs[0]) <= 1e-3
    assert rep.to_dict()["precondition_violated"]


def test_interchange_unstable_inner_limits():
    sp = Space(lookup("constant").domain_spec())
    seq = FnSequence("osc", lambda p: FnObject("s", lambda x: np.sin(1 / np.maximum(x[:, 0], 1e-12))), 40)
    n = np.arange(1, 2001, dtype=float)
    rep = interchange_check(sp, seq, constant(0.0, 1), 1 / n, 0.0)
    assert rep.verdict is Verdict.INCONCLUSIVE
    assert rep.unstable
