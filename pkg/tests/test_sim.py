from time import perf_counter

import numpy as np
import pytest

from ptsmc.core.config_manager import ScenarioConfig
from ptsmc.helper.control_utils.control import ControlGains, ScalarPlant, attitude_ptsmc
from ptsmc.helper.control_utils.dynamics import (
    AttitudeReference,
    AttitudeState,
    Quaternion,
    RigidBody,
    dynamics_rate,
    kinematics_rate,
)
from ptsmc.helper.control_utils.observer import (
    ObserverConfig,
    ObserverState,
    k2_bound,
    observer_rate,
)
from ptsmc.helper.control_utils.sliding import ClassicalSurface, PtSlidingSpec
from ptsmc.helper.ext_utils.exceptions import (
    DisturbanceBoundError,
    DomainError,
    NumericalBlowupError,
)
from ptsmc.helper.sim_utils.assembly import Scenario
from ptsmc.helper.sim_utils.integrator import rk4_step
from ptsmc.helper.sim_utils.scenario import (
    DisturbanceModel,
    SimConfig,
    run_attitude_scenario,
    run_scalar_scenario,
)
from ptsmc.helper.sim_utils.trajectory import (
    Trajectory,
    envelope_check,
    envelope_values,
    first_crossing,
    observer_bound_check,
    reaching_margin,
    settling_time,
)

PLANT = ScalarPlant.chain_integrator()
GAINS = ControlGains(K=0.01, K1=1.0)
FIG_DIST = DisturbanceModel.sinusoid((0.01,), 1.0)


def build(preset, **overrides):
    kind = {"fig1": "second_order", "fig2": "third_order"}.get(preset, "attitude")
    config = ScenarioConfig(kind)
    presets = {
        "case1_30": {"t_f": 30.0},
        "case1_40": {"t_f": 40.0},
        "case2_eta3": {"t_f": 35.0, "eta": 3.0},
        "case2_eta5": {"t_f": 35.0, "eta": 5.0},
    }
    config.load_dict({**presets.get(preset, {}), **overrides})
    return Scenario.build(config.validate())


# wall-clock seconds of the fixture runs
RUNTIME = {}


def timed_run(name, scenario):
    start = perf_counter()
    traj = scenario.run()
    RUNTIME[name] = perf_counter() - start
    return scenario, traj


@pytest.fixture(scope="module")
def fig1():
    return timed_run("fig1", build("fig1"))


@pytest.fixture(scope="module")
def fig2():
    return timed_run("fig2", build("fig2"))


@pytest.fixture(scope="module")
def attitude_runs():
    runs = {}
    for preset in ("case1_30", "case2_eta3", "case2_eta5"):
        runs[preset] = timed_run(preset, build(preset))
    # quaternion drift is measured on an unnormalised run
    runs["case1_40"] = timed_run("case1_40", build("case1_40", renorm=False))
    return runs


def final_error(run):
    scenario, traj = run
    return traj.error_signal()[traj.index_at(scenario.spec.t_f)]


def test_rk4_examples():
    x = np.array([1.0, -2.0])
    np.testing.assert_array_equal(rk4_step(lambda t, x: np.zeros(2), x, 0.0, 0.1), x)
    np.testing.assert_allclose(rk4_step(lambda t, x: np.ones(1), np.zeros(1), 0.0, 0.25), [0.25])
    np.testing.assert_allclose(rk4_step(lambda t, x: -x, np.ones(1), 0.0, 0.1), [0.9048375], atol=1e-12)


def test_rk4_rejects_bad_steps_and_rates():
    with pytest.raises(DomainError):
        rk4_step(lambda t, x: -x, np.ones(1), 0.0, 0.0)
    with pytest.raises(NumericalBlowupError) as err:
        rk4_step(lambda t, x: np.array([np.nan]) if t > 0 else -x, np.ones(1), 0.0, 0.1)
    assert "stage 2" in str(err.value)


def test_sim_config_validation():
    spec = PtSlidingSpec.build(2, 3.0, 5.0, 0.01)
    with pytest.raises(DomainError):
        SimConfig(dt=2e-3, t_end=6.0).validate(spec)
    with pytest.raises(DomainError):
        SimConfig(dt=1e-3, t_end=6.0, record_stride=0).validate(spec)
    sim = SimConfig(dt=1e-3, t_end=1.0, record_stride=10)
    assert sim.steps == 1000
    assert sim.records(0) and sim.records(1000) and not sim.records(5)


def test_disturbance_model():
    dist = DisturbanceModel.sinusoid((0.01, 0.01, 0.01), 0.1)
    assert dist.bound() == 0.01
    assert dist.rate_bound() == pytest.approx(0.001)
    np.testing.assert_allclose(dist(np.pi / 0.2), [0.01, 0.01, 0.01])
    np.testing.assert_array_equal(DisturbanceModel.zero(2)(3.0), np.zeros(2))


def test_disturbance_bound_gate():
    spec = PtSlidingSpec.build(2, 3.0, 5.0, 0.01)
    with pytest.raises(DisturbanceBoundError, match="Assumption 1"):
        run_scalar_scenario(
            2, spec, ControlGains(K=0.005, K1=1.0), PLANT, FIG_DIST, SimConfig(1e-3, 1.0), (5.0, 3.0)
        )


def test_fig1_reaches_origin_by_prescribed_time(fig1):
    scenario, traj = fig1
    spec = scenario.spec
    i = traj.index_at(spec.t_switch)
    assert abs(traj.times[i] - spec.t_switch) < 1e-9
    assert np.abs(traj.states[i]).max() <= 1e-2
    after = traj.times >= spec.t_f
    assert traj.times[after][-1] == pytest.approx(spec.t_f + 2.0)
    assert np.abs(traj.states[after]).max() <= 1e-2
    assert envelope_check(traj, spec).passed


def test_fig2_reaches_origin_by_prescribed_time(fig2):
    scenario, traj = fig2
    spec = scenario.spec
    i = traj.index_at(spec.t_switch)
    assert np.abs(traj.states[i]).max() <= 1e-2
    assert envelope_check(traj, spec).passed


def test_recorded_envelope_is_decreasing(fig1):
    _, traj = fig1
    env = traj.envelope[traj.prescribed]
    assert np.all(np.diff(env) < 0)
    assert np.all(np.isnan(traj.envelope[~traj.prescribed]))


def test_regime_switches_once(fig1):
    scenario, traj = fig1
    switches = np.flatnonzero(np.diff(traj.regimes))
    assert len(switches) == 1
    assert traj.times[switches[0] + 1] >= scenario.spec.t_switch


def test_reaching_condition_holds(fig1):
    scenario, traj = fig1
    margin = reaching_margin(traj, scenario.spec, scenario.dist, scenario.plant)
    s = np.abs(traj.sliding[traj.prescribed, 0])
    assert np.all(margin <= 1e-8 * (1.0 + s))


def test_settling_time_within_prescribed_time(fig1):
    scenario, traj = fig1
    assert settling_time(traj, 1e-2) <= scenario.spec.t_f


@pytest.mark.parametrize("delta", [0.1, 0.01, 0.001])
def test_control_stays_bounded_as_switch_margin_shrinks(delta):
    spec = PtSlidingSpec.build(2, 3.0, 5.0, delta)
    sim = SimConfig(dt=delta / 10, t_end=5.0, record_stride=1)
    traj = run_scalar_scenario(2, spec, GAINS, PLANT, FIG_DIST, sim, (5.0, 3.0))
    u = traj.abs_controls()[traj.prescribed]
    assert np.isfinite(u).all()
    assert u.max() <= 10.0 * u[0]


@pytest.mark.parametrize("scale", [0.1, 1.0, 10.0])
def test_first_crossing_independent_of_initial_state(scale):
    spec = PtSlidingSpec.build(2, 3.0, 5.0, 0.01)
    sim = SimConfig(dt=1e-3, t_end=5.5, record_stride=1)
    x0 = scale * np.array([5.0, 3.0])
    traj = run_scalar_scenario(2, spec, GAINS, PLANT, FIG_DIST, sim, x0)
    crossing = first_crossing(traj, 1e-2, component=0)
    assert crossing is not None and crossing <= spec.t_f


def test_zero_initial_state_stays_at_rest():
    spec = PtSlidingSpec.build(3, 4.0, 1.0, 0.01)
    sim = SimConfig(dt=1e-3, t_end=1.5)
    traj = run_scalar_scenario(
        3, spec, GAINS, PLANT, DisturbanceModel.zero(1), sim, np.zeros(3), ClassicalSurface((2.0, 3.0))
    )
    np.testing.assert_array_equal(traj.states, 0.0)
    np.testing.assert_array_equal(traj.controls, 0.0)


def test_scalar_run_rejects_bad_surface():
    spec = PtSlidingSpec.build(3, 4.0, 5.0, 0.01)
    with pytest.raises(DomainError):
        run_scalar_scenario(3, spec, GAINS, PLANT, FIG_DIST, SimConfig(1e-3, 1.0), np.ones(3), ClassicalSurface((-1.0, 3.0)))
    with pytest.raises(DomainError):
        run_scalar_scenario(3, spec, GAINS, PLANT, FIG_DIST, SimConfig(1e-3, 1.0), np.ones(3))


def test_envelope_check_on_constructed_trajectories():
    spec = PtSlidingSpec.build(2, 3.0, 5.0)
    times = np.array([0.0, 1.0, 2.0])

    def make(s):
        sliding = np.array(s, dtype=float).reshape(-1, 1)
        return Trajectory(
            kind="scalar",
            times=times.copy(),
            states=np.zeros((3, 2)),
            controls=np.zeros((3, 1)),
            sliding=sliding,
            regimes=np.zeros(3, dtype=int),
            envelope=envelope_values(times, sliding[0], spec),
        )

    report = envelope_check(make([1.0, 2.0, 0.0]), spec)
    assert not report.passed and report.max_violation > 0
    report = envelope_check(make([0.0, 0.0, 0.0]), spec)
    assert report.passed and report.max_violation <= 0
    empty = Trajectory(
        kind="scalar",
        times=np.zeros(0),
        states=np.zeros((0, 2)),
        controls=np.zeros((0, 1)),
        sliding=np.zeros((0, 1)),
        regimes=np.zeros(0, dtype=int),
        envelope=np.zeros(0),
    )
    with pytest.raises(DomainError):
        envelope_check(empty, spec)


def test_trajectory_requires_increasing_times():
    with pytest.raises(DomainError):
        Trajectory(
            kind="scalar",
            times=np.array([0.0, 0.0]),
            states=np.zeros((2, 2)),
            controls=np.zeros((2, 1)),
            sliding=np.zeros((2, 1)),
            regimes=np.zeros(2, dtype=int),
            envelope=np.zeros(2),
        )


def test_attitude_at_rest_needs_no_torque():
    body = RigidBody.diagonal(10.0, 12.0, 14.0)
    spec = PtSlidingSpec.build(2, 3.0, 1.0, 0.05)
    traj = run_attitude_scenario(
        body,
        Quaternion.identity(),
        np.zeros(3),
        AttitudeReference.constant(),
        DisturbanceModel.zero(3),
        ObserverConfig(L=(10.0, 10.0, 10.0), c=0.0, e0_bound=0.0),
        spec,
        GAINS,
        SimConfig(dt=5e-3, t_end=2.0),
    )
    np.testing.assert_array_equal(traj.controls, 0.0)
    np.testing.assert_array_equal(traj.errors, 0.0)


def test_case1_tracking_error(attitude_runs):
    assert final_error(attitude_runs["case1_30"]) <= 1e-3


def test_shorter_prescribed_time_needs_larger_initial_torque(attitude_runs):
    short = attitude_runs["case1_30"][1].abs_controls()[0]
    long = attitude_runs["case1_40"][1].abs_controls()[0]
    assert short > long


def test_case2_larger_eta_converges_faster(attitude_runs):
    eta3, eta5 = attitude_runs["case2_eta3"], attitude_runs["case2_eta5"]
    assert final_error(eta5) <= 1e-4
    assert final_error(eta5) < final_error(eta3)
    assert eta5[1].abs_controls()[0] > eta3[1].abs_controls()[0]


def test_observer_bound_holds(attitude_runs):
    for scenario, traj in attitude_runs.values():
        report = observer_bound_check(traj)
        assert report.passed, report.max_violation


def test_attitude_envelope_holds(attitude_runs):
    for scenario, traj in attitude_runs.values():
        assert envelope_check(traj, scenario.spec).passed


def test_quaternion_drift_without_renormalisation(attitude_runs):
    _, traj = attitude_runs["case1_40"]
    assert traj.max_norm_drift <= 1e-6
    _, traj = attitude_runs["case1_30"]
    assert traj.max_norm_drift <= 1e-6


def test_spin_reference_is_tracked():
    scenario = build("attitude", t_f=10.0, t_end=12.0, ref_rate=0.05)
    traj = scenario.run()
    assert final_error((scenario, traj)) <= 1e-2
    assert np.abs(traj.errors[traj.times >= 10.0, :3]).max() <= 1e-2


def test_dt_halving_keeps_fig1_within_envelope_scale(fig1):
    scenario, coarse = fig1
    spec = scenario.spec
    fine = build("fig1", dt=5e-5, record_stride=20).run()
    np.testing.assert_allclose(fine.times, coarse.times, rtol=0.0, atol=1e-12)
    scale = abs(coarse.sliding[0, 0])
    assert scale == pytest.approx(30.0)
    for t in (spec.t_switch, coarse.times[-1]):
        i = coarse.index_at(t)
        assert np.abs(fine.states[i] - coarse.states[i]).max() <= 1e-3 * scale
    i = coarse.index_at(2.5)
    np.testing.assert_allclose(fine.states[i], coarse.states[i], rtol=1e-3)


def test_fixture_runs_finish_in_time(fig1, fig2, attitude_runs):
    assert RUNTIME["fig1"] < 2.0
    assert RUNTIME["fig2"] < 2.0
    assert RUNTIME["case1_30"] < 10.0


def test_attitude_run_matches_array_operations():
    scenario = build("case1_30", t_end=0.5, record_stride=1, renorm=False)
    traj = scenario.run()
    body, cfg, ref, dist = scenario.body, scenario.obs_cfg, scenario.ref, scenario.dist

    def rate(t, y):
        q = Quaternion.from_array(y[:4], check=False)
        w = y[4:7]
        obs = ObserverState.from_z(y[7:], cfg, w)
        torque = attitude_ptsmc(
            AttitudeState(q, w), ref, obs.d_hat, k2_bound(cfg, body, t), t, scenario.spec, scenario.gains, body
        )
        v_dot, s_dot = kinematics_rate(q, w)
        return np.concatenate(
            [
                v_dot,
                [s_dot],
                dynamics_rate(body, w, torque, dist(t)),
                observer_rate(obs, cfg, body, w, torque),
            ]
        )

    y = np.concatenate([scenario.config.q0, scenario.config.w0, np.zeros(3)])
    dt = scenario.sim.dt
    for k in range(scenario.sim.steps):
        y = rk4_step(rate, y, k * dt, dt)
    np.testing.assert_allclose(traj.states[-1], y[:7], rtol=0.0, atol=1e-12)
    d_hat = ObserverState.from_z(y[7:], cfg, y[4:7]).d_hat
    np.testing.assert_allclose(traj.d_hat[-1], d_hat, rtol=0.0, atol=1e-12)
