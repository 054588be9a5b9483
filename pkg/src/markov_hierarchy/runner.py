"""Config-driven runs and parameter sweeps."""

from __future__ import annotations

import csv
import dataclasses
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RunConfig, resolve_scenario
from .dynamics import Trajectory, compare_trajectories, evolve_effective, evolve_exact, rabi_effective, rabi_exact
from .elimination import EffectiveModel, Order, compose_elimination
from .errors import NumericalError
from .model import PRESETS, PartitionPlan, partition
from .numkernel import herm_eig, symmetrize
from .picture import (
    POLE_RTOL,
    PictureCondition,
    ShiftRule,
    minimize_shift,
    norm_objective,
    search_bound,
    shift_minimize,
)

log = logging.getLogger(__name__)

METHOD_ORDERS = {"markov0": Order.M0, "markov1": Order.M1, "markov1d": Order.M1D}


class RunFailed(NumericalError):
    """A numerical failure, annotated with the plan and method that hit it."""


def select_plan_shift(h, plan: PartitionPlan, condition: PictureCondition, delta_ref: float = 1.0) -> float:
    """Picture shift for ``plan`` under ``condition``; norms use the final composed model."""
    h = symmetrize(h)
    if condition.kind is ShiftRule.FIXED:
        return float(condition.value) * delta_ref
    rel = list(plan.relevant)
    if condition.kind is ShiftRule.TRACE_ZERO:
        return -float(np.trace(h[np.ix_(rel, rel)]).real) / len(rel) + 0.0
    if len(plan.stages) == 1:
        return shift_minimize(partition(h, plan), condition.kind, condition.order)
    orders = [Order.M0] * (len(plan.stages) - 1) + [condition.order]
    first = PartitionPlan(
        tuple(plan.relevant) + tuple(i for s in plan.stages[1:] for i in s), (plan.stages[0],)
    )
    block = partition(h, first)
    poles = -herm_eig(block.delta).eigenvalues
    scale = float(np.max(np.abs(poles)))

    def objective(x: float) -> float:
        return norm_objective(compose_elimination(h, plan, orders, shift=x), condition.kind)

    return minimize_shift(objective, search_bound(partition(h, plan)), poles=poles, pole_tol=POLE_RTOL * scale)


def build_model(
    h, plan: PartitionPlan, method: str, condition_text: str, labels=None, delta_ref: float = 1.0
) -> EffectiveModel:
    """Effective model for ``method``: inner stages at zeroth order, last stage at the method's order."""
    order = METHOD_ORDERS[method]
    condition = PictureCondition.parse(condition_text, order)
    shift = select_plan_shift(h, plan, condition, delta_ref)
    orders = [Order.M0] * (len(plan.stages) - 1) + [order]
    return compose_elimination(h, plan, orders, labels=labels, shift=shift)


def format_float(x: float) -> str:
    return f"{x:.17g}"


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t"] + [f"{label}_pop" for label in traj.labels])
    for t, row in zip(traj.times, traj.populations):
        writer.writerow([format_float(t)] + [format_float(p) for p in row])
    return buf.getvalue()


@dataclass
class SummaryRow:
    method: str
    plan: str
    shift: float | None
    rabi: float | None
    max_pop_diff: float | None = None
    rms_pop_diff: float | None = None
    rabi_relative: float | None = None
    path: str = ""


@dataclass
class RunResult:
    rows: list[SummaryRow]
    trajectories: dict[str, Trajectory]
    files: list[Path]

    def table(self) -> str:
        def f(x, spec=".6g"):
            return "-" if x is None else format(x, spec)

        head = f"{'method':<10} {'plan':<7} {'shift':>12} {'rabi':>12} {'max|dp|':>10} {'rms|dp|':>10} {'rabi err':>9}"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            lines.append(
                f"{r.method:<10} {r.plan:<7} {f(r.shift):>12} {f(r.rabi):>12} "
                f"{f(r.max_pop_diff, '.3e'):>10} {f(r.rms_pop_diff, '.3e'):>10} {f(r.rabi_relative, '+.2%'):>9}"
            )
        return "\n".join(lines)


def _file_for(prefix: str, method: str, plan: str, many_plans: bool) -> Path:
    name = f"{prefix}_{method}" + (f"_{plan}" if many_plans else "") + ".csv"
    return Path(name)


def run(cfg: RunConfig, write: bool = True) -> RunResult:
    scenario = resolve_scenario(cfg)
    h, labels = scenario.hamiltonian, scenario.labels
    d = h.shape[0]
    first_plan = scenario.plan
    psi0 = np.zeros(d, dtype=np.complex128)
    psi0[first_plan.relevant[0]] = 1.0
    times = np.linspace(0.0, cfg.t_max / cfg.delta_ref, cfg.steps + 1)
    many = len(scenario.plans) > 1

    rows: list[SummaryRow] = []
    trajs: dict[str, Trajectory] = {}
    exact = None
    if "exact" in cfg.methods:
        exact = evolve_exact(h, psi0, times, labels, relevant=first_plan.relevant)
        trajs["exact"] = exact
        rows.append(SummaryRow("exact", "-", None, exact.rabi, path=str(_file_for(cfg.output, "exact", "", False))))

    for plan_name, plan in scenario.plans.items():
        for method in cfg.methods:
            if method == "exact":
                continue
            try:
                model = build_model(h, plan, method, cfg.condition, labels, cfg.delta_ref)
                traj = evolve_effective(model, psi0, times, labels)
            except NumericalError as exc:
                raise RunFailed(f"plan {plan_name}, method {method}: {exc}") from exc
            key = f"{method}[{plan_name}]" if many else method
            trajs[key] = traj
            row = SummaryRow(
                method, plan_name, model.shift, traj.rabi, path=str(_file_for(cfg.output, method, plan_name, many))
            )
            if exact is not None:
                rep = compare_trajectories(exact, traj)
                row = dataclasses.replace(
                    row, max_pop_diff=rep.worst, rms_pop_diff=float(rep.rms.max()), rabi_relative=rep.rabi_relative
                )
            rows.append(row)

    files = []
    if write:
        for row, traj in zip(rows, trajs.values()):
            path = Path(row.path)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(trajectory_csv(traj))
            files.append(path)
            log.info("wrote %s", path)
    return RunResult(rows, trajs, files)


def _sweep_point(cfg: RunConfig, param: str, value: float) -> list[tuple]:
    point = dataclasses.replace(cfg, parameters={**cfg.parameters, param: value})
    try:
        scenario = resolve_scenario(point)
    except (NumericalError, ValueError) as exc:
        return [(value, m, None, None, f"error:{type(exc).__name__}") for m in sorted(point.methods)]
    h = scenario.hamiltonian
    many = len(scenario.plans) > 1
    reference = rabi_exact(h, scenario.plan.relevant)
    out = []
    if "exact" in point.methods:
        out.append((value, "exact", reference, 0.0, "ok"))
    for plan_name, plan in scenario.plans.items():
        for method in point.methods:
            if method == "exact":
                continue
            name = f"{method}[{plan_name}]" if many else method
            try:
                rabi = rabi_effective(build_model(h, plan, method, point.condition, delta_ref=point.delta_ref))
            except NumericalError as exc:
                out.append((value, name, None, None, f"error:{type(exc).__name__}"))
                continue
            out.append((value, name, rabi, (rabi - reference) / reference, "ok"))
    return out


def sweep(cfg: RunConfig, param: str, start: float, stop: float, points: int, jobs: int = 1) -> str:
    """CSV of Rabi frequencies and relative errors against the exact gap.

    ``start``/``stop`` are in units of ``delta_ref`` like every other parameter.
    """
    if not isinstance(cfg.scenario, str):
        raise ValueError("sweeps need a preset scenario")
    if param not in PRESETS[cfg.scenario].parameters:
        raise ValueError(f"{param!r} is not a parameter of {cfg.scenario}")
    if points < 1:
        raise ValueError("need at least one sweep point")
    values = [float(v) for v in np.linspace(start, stop, points)]
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(lambda v: _sweep_point(cfg, param, v), values))
    rows = sorted((r for chunk in results for r in chunk), key=lambda r: (r[0], r[1]))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([param, "method", "rabi", "error", "status"])
    for value, method, rabi, err, status in rows:
        writer.writerow(
            [
                format_float(value),
                method,
                "" if rabi is None else format_float(rabi),
                "" if err is None else format_float(err),
                status,
            ]
        )
    return buf.getvalue()
