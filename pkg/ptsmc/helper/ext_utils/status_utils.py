from ...version import get_version
from ..sim_utils.trajectory import envelope_check, observer_bound_check, settling_time

SETTLING_TOL = {"second_order": 1e-2, "third_order": 1e-2, "attitude": 1e-3}


def get_readable_time(seconds):
    periods = [("d", 86400), ("h", 3600), ("m", 60), ("s", 1)]
    result = ""
    for period_name, period_seconds in periods:
        if seconds >= period_seconds:
            period_value, seconds = divmod(seconds, period_seconds)
            result += f"{int(period_value)}{period_name}"
    return result or f"{seconds * 1000:.0f}ms"


def build_summary(scenario, traj):
    """Result block of summary.txt, in output order."""
    spec = scenario.spec
    kind = scenario.config.scenario
    abs_u = traj.abs_controls()
    envelope = envelope_check(traj, spec)
    results = {
        "final_error": float(traj.error_signal()[traj.index_at(spec.t_f)]),
        "max_abs_u": float(abs_u.max()),
        "initial_abs_u": float(abs_u[0]),
        "settling_time": settling_time(traj, SETTLING_TOL[kind]),
        "envelope_max_violation": envelope.max_violation,
        "envelope_pass": envelope.passed,
        "observer_bound_max_violation": None,
        "observer_bound_pass": None,
        "max_quaternion_drift": None,
    }
    if scenario.is_attitude:
        bound = observer_bound_check(traj)
        results["observer_bound_max_violation"] = bound.max_violation
        results["observer_bound_pass"] = bound.passed
        results["max_quaternion_drift"] = float(traj.max_norm_drift)
    results["version"] = get_version()
    return results


def failed_checks(results):
    return [
        key
        for key in ("envelope_pass", "observer_bound_pass")
        if results.get(key) is False
    ]
