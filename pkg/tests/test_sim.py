import dataclasses
import time

import numpy as np
import pytest

from healthinvest.errors import ConfigError, DomainError
from healthinvest.params import Stage1Params, Stage2Params
from healthinvest.shocks import ShockProcessConfig, generate_path, path_from_values
from healthinvest.sim import (
    STAGE1_COLUMNS,
    STAGE2_COLUMNS,
    classify_regime,
    params_hash,
    run_stage1,
    run_stage2,
    series_to_csv,
    summarize,
)
from healthinvest.stage1 import population_threshold_g
from healthinvest.stage2 import steady_state_population


def iid_path(seed=42, T=500, hi=0.1):
    return generate_path(ShockProcessConfig(kind="iid-uniform", a_lo=0.0, a_hi=hi, seed=seed), T)


def test_classify_regime():
    assert classify_regime(2.0, 1.0) == "scenario-1"
    assert classify_regime(0.5, 1.0) == "scenario-2"
    assert classify_regime(1.0, 1.0) == "boundary"
    with pytest.raises(DomainError):
        classify_regime(1.0, 0.0)


def test_seeded_run_records_and_ratchet(p1):
    s = run_stage1(p1, iid_path(), 0.38, 1.0)
    assert s.termination == "completed"
    assert len(s.records) == 501
    assert [r.t for r in s.records] == list(range(501))
    lam = s.column("lambda")
    a = s.column("a")
    assert lam[-1] >= lam[0]
    for t in range(1, len(lam)):
        assert lam[t] >= lam[t - 1]
        # lambda_t reflects the shock comparison made one period earlier
        if t >= 2:
            assert (lam[t] > lam[t - 1]) == (a[t - 1] > a[t - 2])
    assert all(r.L > 0 for r in s.records)


def test_up_tick_raises_lambda_once(p1):
    values = [0.1] * 5 + [0.2] * 11
    s = run_stage1(dataclasses.replace(p1, p=0.3), path_from_values(values), 0.3, 1.0)
    lam = s.column("lambda")
    jumps = [t for t in range(1, len(lam)) if lam[t] > lam[t - 1]]
    assert jumps == [6]


def test_constant_path_keeps_lambda_and_converges():
    p = Stage1Params(p=0.35)
    g = population_threshold_g(p, 1.0, 0.0)
    s = run_stage1(p, path_from_values([0.0] * 101), 0.9 * g, 1.0)
    assert set(s.column("lambda")) == {1.0}
    L = s.column("L")
    assert all(b >= a for a, b in zip(L, L[1:]))
    assert L[-1] == pytest.approx(g, rel=1e-10)
    d = [abs(n - 1) for n in s.column("n")]
    assert all(b <= a for a, b in zip(d, d[1:]))


def test_scenario_labels_match_fertility():
    p = Stage1Params(p=0.3)
    s = run_stage1(p, iid_path(seed=5, T=300), 0.5, 1.0)
    for r in s.records:
        if r.regime == "survival-binding" and r.scenario != "boundary":
            assert (r.n_star < 1) == (r.scenario == "scenario-1")


def test_no_threshold_label():
    s = run_stage1(Stage1Params(p=0.5), path_from_values([0.0, 0.0, 0.0]), 1.0, 1.0)
    assert all(r.scenario == "no-threshold" and r.g is None for r in s.records)


def test_extinction_halts(p1):
    s = run_stage1(p1, path_from_values([0.0] * 11), 100.0, 1.0)
    assert s.termination == "extinction"
    assert len(s.records) == 1 and s.records[-1].n_star == 0.0


def test_adversity_exceeding_technology_halts(p1):
    s = run_stage1(dataclasses.replace(p1, p=0.3), path_from_values([0.0, 0.0, 5.0, 0.0]), 0.3, 1.0)
    assert s.termination == "adversity-exceeds-technology"
    assert len(s.records) == 2


def test_stage1_errors(p1):
    with pytest.raises(DomainError):
        run_stage1(p1, path_from_values([2.0, 0.0]), 1.0, 1.0)
    with pytest.raises(ConfigError):
        run_stage1(p1, path_from_values([0.0, 0.0]), 1.0, 1.0, T=5)
    with pytest.raises(DomainError):
        run_stage1(p1, path_from_values([0.0, 0.0]), 0.0, 1.0)


def test_determinism(p1):
    a = run_stage1(p1, iid_path(), 0.38, 1.0)
    b = run_stage1(p1, iid_path(), 0.38, 1.0)
    assert a == b
    assert series_to_csv(a) == series_to_csv(b)


def test_long_run_is_fast():
    p = Stage1Params(p=0.3)
    path = iid_path(seed=1, T=10_000, hi=0.05)
    start = time.perf_counter()
    s = run_stage1(p, path, 0.3, 1.0)
    elapsed = time.perf_counter() - start
    assert len(s.records) == 10_001
    assert elapsed < 1.0


# ---------------------------------------------------------------- stage 2


def test_stage2_converges(p2):
    # mortality(0.5) = 0.5
    s = run_stage2(p2, path_from_values([0.5] * 61), 1.0)
    target = steady_state_population(p2, 0.5)
    assert abs(s.records[-1].L - target) / target < 1e-3
    dist = [abs(r.L - target) for r in s.records]
    assert all(b <= a for a, b in zip(dist, dist[1:]))


def test_stage2_fixed_point(p2):
    target = steady_state_population(p2, 0.3)
    s = run_stage2(p2, path_from_values([0.0] * 21), target)
    for r in s.records:
        assert r.L == pytest.approx(target, rel=1e-12)
        assert r.regime == "steady"


def test_stage2_step_in_adversity(p2):
    values = [0.0] * 50 + [0.5] * 51
    s = run_stage2(p2, path_from_values(values), steady_state_population(p2, 0.3))
    Lt = s.column("L_tilde")
    assert Lt[50] < Lt[49]
    assert len(set(Lt[:50])) == 1 and len(set(Lt[50:])) == 1
    L = s.column("L")
    assert all(b < a for a, b in zip(L[50:], L[51:]))
    assert abs(L[-1] - Lt[-1]) / Lt[-1] < 1e-3
    assert s.records[50].delta == pytest.approx(0.5)


def test_stage2_budget_in_records(p2):
    s = run_stage2(p2, iid_path(T=50, hi=1.0), 2.0)
    for r in s.records:
        assert r.c_star + p2.p * r.n_star == pytest.approx(r.y_star, abs=1e-12)


# ---------------------------------------------------------------- serialisation


def test_csv_layout(p1, p2):
    text = series_to_csv(run_stage1(p1, iid_path(T=10), 0.38, 1.0))
    lines = text.splitlines()
    assert lines[0].startswith("# stage=1 termination=completed records=11")
    assert "seed=42" in lines[1] and "rng=PCG64" in lines[1]
    assert lines[2].startswith(f"# params={params_hash(p1)}")
    assert lines[3] == ",".join(STAGE1_COLUMNS)
    assert len(lines) == 4 + 11
    text2 = series_to_csv(run_stage2(p2, iid_path(T=10), 1.0))
    assert text2.splitlines()[3] == ",".join(STAGE2_COLUMNS)


def test_csv_floats_round_trip(p1):
    s = run_stage1(p1, iid_path(T=20), 0.38, 1.0)
    rows = series_to_csv(s).splitlines()[4:]
    L_col = STAGE1_COLUMNS.index("L")
    assert [float(r.split(",")[L_col]) for r in rows] == s.column("L")


def test_params_hash_changes():
    assert params_hash(Stage1Params()) != params_hash(Stage1Params(p=0.3))
    assert params_hash(Stage2Params()) == params_hash(Stage2Params())


def test_summary(p1):
    info = summarize(run_stage1(p1, iid_path(), 0.38, 1.0))
    assert info["periods"] == 501
    assert info["lambda_last"] >= info["lambda_first"]
    assert info["L_up_moves"] + info["L_down_moves"] <= 500
    assert np.isfinite(info["L_last"])
