from csv import writer as csv_writer
from io import StringIO
from os import path as ospath

from aiofiles import open as aiopen
from aiofiles.os import makedirs as aiomakedirs

from ...core.config_manager import format_value

TRAJECTORY_FILE = "trajectory.csv"
SUMMARY_FILE = "summary.txt"
SWEEP_FILE = "sweep.csv"

SWEEP_COLUMNS = ["key", "value", "status", "exit_code", "final_error", "max_abs_u", "initial_abs_u"]


def format_float(value):
    return format(float(value), ".17g")


def trajectory_columns(scenario, order=2):
    if scenario != "attitude":
        states = [f"x{i + 1}" for i in range(order)]
        return ["t", *states, "u", "s", "regime", "envelope"]
    axes = (1, 2, 3)
    return [
        "t",
        "q1",
        "q2",
        "q3",
        "q4",
        *(f"w{i}" for i in axes),
        *(f"eps1_{i}" for i in axes),
        "eps4",
        *(f"u{i}" for i in axes),
        *(f"s{i}" for i in axes),
        "regime",
        "envelope",
        *(f"d_hat{i}" for i in axes),
        *(f"d{i}" for i in axes),
        "k2",
    ]


def trajectory_rows(traj):
    attitude = traj.kind == "attitude"
    for k in range(len(traj)):
        head = [traj.times[k], *traj.states[k]]
        if attitude:
            head.extend(traj.errors[k])
        row = [format_float(v) for v in (*head, *traj.controls[k], *traj.sliding[k])]
        row.append(str(int(traj.regimes[k])))
        row.append(format_float(traj.envelope[k]))
        if attitude:
            tail = (*traj.d_hat[k], *traj.disturbance[k], traj.k2[k])
            row.extend(format_float(v) for v in tail)
        yield row


def render_csv(header, rows):
    buffer = StringIO()
    out = csv_writer(buffer, lineterminator="\n")
    out.writerow(header)
    out.writerows(rows)
    return buffer.getvalue()


def render_summary(config, results):
    lines = [config.dumps(), "# results\n"]
    lines.extend(
        f"{key} = {'none' if value is None else format_value(value)}\n"
        for key, value in results.items()
    )
    return "".join(lines)


async def write_text(path, text):
    await aiomakedirs(ospath.dirname(path) or ".", exist_ok=True)
    async with aiopen(path, "w") as f:
        await f.write(text)


async def write_trajectory(out_dir, config, traj):
    header = trajectory_columns(config.scenario, config.order)
    path = ospath.join(out_dir, TRAJECTORY_FILE)
    await write_text(path, render_csv(header, trajectory_rows(traj)))
    return path


async def write_summary(out_dir, config, results):
    path = ospath.join(out_dir, SUMMARY_FILE)
    await write_text(path, render_summary(config, results))
    return path


async def write_sweep(out_dir, rows):
    path = ospath.join(out_dir, SWEEP_FILE)
    await write_text(path, render_csv(SWEEP_COLUMNS, rows))
    return path
