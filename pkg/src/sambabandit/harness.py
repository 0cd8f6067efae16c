"""
Monte Carlo experiment runner.

An experiment runs ``R`` independent replications of every agent on every
instance. Each replication owns its own random stream, derived from the base
seed and its (agent, instance, run) indices, so results never depend on
execution order or on the number of worker processes. Aggregation stacks the
per-run arrays in run-index order before reducing.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from .agents import AgentSpec, build_agent
from .bandit import BanditInstance, make_instance, sample_reward
from .env_loader import jobs_from_env
from .exceptions import ConfigError, InstanceError, PreconditionError
from .logging_config import configure_worker_logging, current_level
from .rng import derive_seed, make_rng

_logger = logging.getLogger(__name__)

METRIC_COLUMNS = [
    "agent",
    "instance",
    "t",
    "pseudo_regret_mean",
    "pseudo_regret_se",
    "realized_regret_mean",
    "p_optimal_mean",
    "p_suboptimal_play",
    "runs",
]
EXTRA_COLUMNS = ["p_suboptimal_mean", "mean_reward"]

CSV_FLOAT_FORMAT = "%.9g"


@dataclass(frozen=True)
class ExperimentConfig:
    """One fully resolved experiment: instances, agents, horizon and seeding."""

    name: str
    instances: tuple[BanditInstance, ...]
    agents: tuple[AgentSpec, ...]
    horizon: int
    replications: int
    base_seed: int = 0
    snapshots: tuple[int, ...] = ()
    record_trajectory: bool = False

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ConfigError(f"horizon must be >= 1, got {self.horizon}", "horizon")
        if self.replications < 1:
            raise ConfigError(f"replications must be >= 1, got {self.replications}", "replications")
        if not self.instances:
            raise ConfigError("experiment has no instances", "instances")
        if not self.agents:
            raise ConfigError("experiment has no agents", "agents")
        names = [a.name for a in self.agents]
        if len(set(names)) != len(names):
            raise ConfigError(f"agent names must be unique, got {names}", "agents")
        if not self.snapshots:
            object.__setattr__(self, "snapshots", tuple(snapshot_grid(self.horizon, 20)))
        else:
            object.__setattr__(
                self, "snapshots", tuple(validate_snapshots(self.snapshots, self.horizon))
            )

    def instance_label(self, index: int) -> str:
        return self.instances[index].label or str(index)


@dataclass
class ReplicationResult:
    """Per-snapshot metrics of one run; ``trajectory`` is q(t) = 1 - p_opt(t), t = 0..T."""

    snapshots: np.ndarray
    pseudo_regret: np.ndarray
    realized_regret: np.ndarray
    suboptimal_play: np.ndarray
    p_optimal: np.ndarray | None = None
    final_probs: np.ndarray | None = None
    trajectory: np.ndarray | None = field(default=None, repr=False)


@dataclass
class ExperimentRun:
    """The aggregated table plus the raw replications, keyed by (agent, instance)."""

    config: ExperimentConfig
    table: pd.DataFrame
    results: dict[tuple[int, int], list[ReplicationResult]]

    def replications_for(self, agent: str, instance: int = 0) -> list[ReplicationResult]:
        names = [a.name for a in self.config.agents]
        if agent not in names:
            raise KeyError(agent)
        return self.results[(names.index(agent), instance)]


# ---------------------------------------------------------------------------
# Grids and instances
# ---------------------------------------------------------------------------


def snapshot_grid(horizon: int, n_points: int) -> list[int]:
    """Log-spaced snapshot times in [1, horizon], deduplicated, always ending at ``horizon``."""
    if horizon < 1:
        raise ConfigError(f"horizon must be >= 1, got {horizon}", "horizon")
    if n_points < 1:
        raise ConfigError(f"n_points must be >= 1, got {n_points}", "snapshots")
    if n_points == 1 or horizon == 1:
        return [int(horizon)]
    raw = np.rint(np.logspace(0.0, math.log10(horizon), n_points)).astype(np.int64)
    times = sorted({int(min(max(x, 1), horizon)) for x in raw})
    if times[-1] != horizon:
        times.append(int(horizon))
    return times


def validate_snapshots(times: Iterable[int], horizon: int) -> list[int]:
    """Sort and deduplicate an explicit snapshot list; every time must lie in [1, horizon]."""
    out = sorted({int(t) for t in times})
    if not out:
        raise ConfigError("snapshot list is empty", "snapshots")
    if out[0] < 1 or out[-1] > horizon:
        raise ConfigError(f"snapshot times must lie in [1, {horizon}], got {out}", "snapshots")
    return out


def generate_instances(
    n_arms: int, low: float, high: float, n_instances: int, seed: int
) -> list[BanditInstance]:
    """Draw ``n_instances`` instances with i.i.d. U[low, high] arm means (fixed once drawn)."""
    if not (0.0 <= low < high <= 1.0):
        raise InstanceError(f"need 0 <= low < high <= 1, got low={low}, high={high}")
    if n_arms < 2 or n_instances < 1:
        raise InstanceError(f"need n_arms >= 2 and n_instances >= 1, got {n_arms}, {n_instances}")
    rng = make_rng(seed)
    means = rng.uniform(low, high, size=(n_instances, n_arms))
    return [make_instance(row, label=f"u{i}") for i, row in enumerate(means)]


# ---------------------------------------------------------------------------
# One replication
# ---------------------------------------------------------------------------


def run_replication(
    instance: BanditInstance,
    spec: AgentSpec,
    horizon: int,
    seed: int,
    snapshots: Sequence[int],
    record_trajectory: bool = False,
) -> ReplicationResult:
    """Run select -> reward -> update for ``horizon`` steps and record snapshot metrics.

    Realized regret is ``t * r* - sum of rewards``. A play counts as
    suboptimal when its arm has a positive gap, so tied optima never count.
    """
    if horizon < 1:
        raise PreconditionError(f"horizon must be >= 1, got {horizon}")
    snaps = validate_snapshots(snapshots, horizon)
    rng = make_rng(seed)
    agent = build_agent(spec, instance.n_arms)

    gaps = instance.gaps
    best_arm = instance.optimal_arm
    r_star = instance.optimal_mean
    tracks_probs = agent.play_probability_of(best_arm) is not None

    k = len(snaps)
    pseudo = np.zeros(k)
    realized = np.zeros(k)
    subopt = np.zeros(k, dtype=np.int8)
    p_opt = np.zeros(k) if tracks_probs else None
    traj = None
    if record_trajectory and tracks_probs:
        traj = np.empty(horizon + 1)
        traj[0] = 1.0 - agent.play_probability_of(best_arm)

    cum_pseudo = 0.0
    cum_reward = 0
    j = 0
    next_snap = snaps[0]
    for t in range(1, horizon + 1):
        arm = agent.select(rng)
        reward = sample_reward(instance, arm, rng)
        agent.update(arm, reward)
        cum_pseudo += gaps[arm]
        cum_reward += reward
        if traj is not None:
            traj[t] = 1.0 - agent.play_probability_of(best_arm)
        if t == next_snap:
            pseudo[j] = cum_pseudo
            realized[j] = t * r_star - cum_reward
            subopt[j] = 1 if gaps[arm] > 0 else 0
            if p_opt is not None:
                p_opt[j] = agent.play_probability_of(best_arm)
            j += 1
            next_snap = snaps[j] if j < k else horizon + 1

    final = getattr(agent, "state", None)
    return ReplicationResult(
        snapshots=np.asarray(snaps, dtype=np.int64),
        pseudo_regret=pseudo,
        realized_regret=realized,
        suboptimal_play=subopt,
        p_optimal=p_opt,
        final_probs=None if final is None else final.probs.copy(),
        trajectory=traj,
    )


def _replicate(task: tuple) -> tuple[tuple[int, int, int], ReplicationResult]:
    key, instance, spec, horizon, seed, snapshots, record = task
    return key, run_replication(instance, spec, horizon, seed, snapshots, record)


# ---------------------------------------------------------------------------
# Experiment
# ---------------------------------------------------------------------------


def _tasks(config: ExperimentConfig) -> list[tuple]:
    tasks = []
    for ai, spec in enumerate(config.agents):
        for ii, instance in enumerate(config.instances):
            for run in range(config.replications):
                seed = derive_seed(config.base_seed, ai, ii, run)
                tasks.append(
                    (
                        (ai, ii, run),
                        instance,
                        spec,
                        config.horizon,
                        seed,
                        config.snapshots,
                        config.record_trajectory,
                    )
                )
    return tasks


def _mean_se(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = stack.shape[0]
    mean = stack.mean(axis=0)
    if n < 2:
        return mean, np.zeros_like(mean)
    return mean, stack.std(axis=0, ddof=1) / math.sqrt(n)


def aggregate(
    config: ExperimentConfig, results: dict[tuple[int, int], list[ReplicationResult]]
) -> pd.DataFrame:
    """Reduce replications to the metrics table, one row per (agent, instance, snapshot)."""
    times = np.asarray(config.snapshots, dtype=np.int64)
    frames = []
    for ai, spec in enumerate(config.agents):
        for ii, instance in enumerate(config.instances):
            runs = results[(ai, ii)]
            pseudo_mean, pseudo_se = _mean_se(np.stack([r.pseudo_regret for r in runs]))
            realized_mean = np.stack([r.realized_regret for r in runs]).mean(axis=0)
            subopt = np.stack([r.suboptimal_play for r in runs]).mean(axis=0)
            if runs[0].p_optimal is not None:
                p_opt = np.stack([r.p_optimal for r in runs]).mean(axis=0)
                p_subopt = np.stack([1.0 - r.p_optimal for r in runs]).mean(axis=0)
            else:
                p_opt = np.full(times.size, np.nan)
                p_subopt = np.full(times.size, np.nan)
            frames.append(
                pd.DataFrame(
                    {
                        "agent": spec.name,
                        "instance": config.instance_label(ii),
                        "t": times,
                        "pseudo_regret_mean": pseudo_mean,
                        "pseudo_regret_se": pseudo_se,
                        "realized_regret_mean": realized_mean,
                        "p_optimal_mean": p_opt,
                        "p_suboptimal_play": subopt,
                        "runs": len(runs),
                        "p_suboptimal_mean": p_subopt,
                        "mean_reward": instance.optimal_mean - pseudo_mean / times,
                    }
                )
            )
    return pd.concat(frames, ignore_index=True)


def run_experiment_detailed(
    config: ExperimentConfig, jobs: int | None = None, progress: bool | None = None
) -> ExperimentRun:
    """Run every replication of ``config`` and keep the raw results alongside the table.

    ``jobs > 1`` fans replications out to a process pool; ``None`` reads
    ``SAMBA_JOBS``. ``progress=None`` shows a bar only on a terminal; ``False``
    never shows one.
    """
    if jobs is None:
        jobs = jobs_from_env()
    tasks = _tasks(config)
    disable = None if progress is None else not progress
    _logger.info(
        "Experiment %s: %d agents x %d instances x %d runs, T=%d, jobs=%d",
        config.name,
        len(config.agents),
        len(config.instances),
        config.replications,
        config.horizon,
        jobs,
    )

    collected: dict[tuple[int, int, int], ReplicationResult] = {}
    if jobs <= 1:
        for task in tqdm(tasks, desc=f"  {config.name}", unit="run", ncols=80, disable=disable):
            key, result = _replicate(task)
            collected[key] = result
    else:
        workers = min(jobs, os.cpu_count() or 1, len(tasks))
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=configure_worker_logging,
            initargs=(current_level(),),
        ) as executor:
            futures = [executor.submit(_replicate, task) for task in tasks]
            pbar = tqdm(
                as_completed(futures),
                total=len(futures),
                desc=f"  {config.name}",
                unit="run",
                ncols=80,
                disable=disable,
            )
            for fut in pbar:
                key, result = fut.result()
                collected[key] = result

    # reduce in run-index order, whatever the completion order was
    results: dict[tuple[int, int], list[ReplicationResult]] = {}
    for ai in range(len(config.agents)):
        for ii in range(len(config.instances)):
            results[(ai, ii)] = [collected[(ai, ii, run)] for run in range(config.replications)]

    table = aggregate(config, results)
    _logger.info("Experiment %s: %d metric rows", config.name, len(table))
    return ExperimentRun(config=config, table=table, results=results)


def run_experiment(
    config: ExperimentConfig, jobs: int | None = None, progress: bool | None = None
) -> pd.DataFrame:
    """Run ``config`` and return its metrics table."""
    return run_experiment_detailed(config, jobs=jobs, progress=progress).table


# ---------------------------------------------------------------------------
# Output and summaries
# ---------------------------------------------------------------------------


def write_metrics_csv(
    table: pd.DataFrame, path: str | os.PathLike, extra_columns: Sequence[str] = ()
) -> None:
    """Write the metrics table: fixed header, 9 significant digits, UTF-8, LF endings."""
    columns = METRIC_COLUMNS + [c for c in extra_columns if c not in METRIC_COLUMNS]
    missing = [c for c in columns if c not in table.columns]
    if missing:
        raise KeyError(f"metrics table lacks columns {missing}")
    table[columns].to_csv(
        path,
        index=False,
        float_format=CSV_FLOAT_FORMAT,
        na_rep="",
        encoding="utf-8",
        lineterminator="\n",
    )
    _logger.debug("Wrote %d rows to %s", len(table), path)


def final_rows(table: pd.DataFrame) -> pd.DataFrame:
    """The last snapshot of every (agent, instance)."""
    idx = table.groupby(["agent", "instance"], sort=False)["t"].idxmax()
    return table.loc[idx].reset_index(drop=True)


def summarize_final(table: pd.DataFrame) -> pd.DataFrame:
    """Final-snapshot summary per agent, averaged over instances.

    With one instance the standard errors are the replication ones; with
    several they are across instances.
    """
    last = final_rows(table)
    rows = []
    for agent, grp in last.groupby("agent", sort=False):
        n = len(grp)
        t = int(grp["t"].iloc[0])
        if n == 1:
            pr_se = float(grp["pseudo_regret_se"].iloc[0])
            mr_se = pr_se / t
        else:
            pr_se = float(grp["pseudo_regret_mean"].std(ddof=1) / math.sqrt(n))
            mr_se = float(grp["mean_reward"].std(ddof=1) / math.sqrt(n))
        rows.append(
            {
                "agent": agent,
                "instances": n,
                "t": t,
                "pseudo_regret_mean": float(grp["pseudo_regret_mean"].mean()),
                "pseudo_regret_se": pr_se,
                "mean_reward": float(grp["mean_reward"].mean()),
                "mean_reward_se": mr_se,
            }
        )
    return pd.DataFrame(rows)


@dataclass(frozen=True)
class Comparison:
    """Difference of final mean pseudo-regret between two agents on one instance."""

    agent_a: str
    agent_b: str
    mean_a: float
    mean_b: float
    pooled_se: float

    @property
    def difference(self) -> float:
        return self.mean_a - self.mean_b

    def separated(self, k: float = 2.0) -> bool:
        """True when ``mean_a < mean_b`` by at least ``k`` pooled standard errors."""
        return self.mean_b - self.mean_a >= k * self.pooled_se


def compare_agents(table: pd.DataFrame, agent_a: str, agent_b: str, instance: str | None = None) -> Comparison:
    last = final_rows(table)
    if instance is not None:
        last = last[last["instance"] == instance]
    rows = {}
    for name in (agent_a, agent_b):
        sel = last[last["agent"] == name]
        if sel.empty:
            raise KeyError(f"agent {name!r} not in table")
        rows[name] = sel.iloc[0]
    a, b = rows[agent_a], rows[agent_b]
    return Comparison(
        agent_a=agent_a,
        agent_b=agent_b,
        mean_a=float(a["pseudo_regret_mean"]),
        mean_b=float(b["pseudo_regret_mean"]),
        pooled_se=math.hypot(float(a["pseudo_regret_se"]), float(b["pseudo_regret_se"])),
    )


def fraction_absorbed_suboptimal(
    results: Sequence[ReplicationResult], instance: BanditInstance, threshold: float = 0.99
) -> float:
    """Fraction of runs whose final state puts more than ``threshold`` on a suboptimal arm."""
    finals = [r.final_probs for r in results if r.final_probs is not None]
    if not finals:
        raise PreconditionError("replications carry no probability state")
    suboptimal = np.asarray(instance.gaps) > 0
    hits = sum(1 for p in finals if np.any(p[suboptimal] > threshold))
    return hits / len(finals)


def loglog_slope(
    t: Sequence[float], y: Sequence[float], t_min: float = 0.0, t_max: float = math.inf
) -> float:
    """Least-squares slope of log y against log t over ``t_min <= t <= t_max``."""
    t_arr = np.asarray(t, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    mask = (t_arr >= t_min) & (t_arr <= t_max)
    if mask.sum() < 2:
        raise PreconditionError("need at least two points in the fitting window")
    if np.any(y_arr[mask] <= 0) or np.any(t_arr[mask] <= 0):
        raise PreconditionError("log-log fit needs positive values")
    slope, _ = np.polyfit(np.log(t_arr[mask]), np.log(y_arr[mask]), 1)
    return float(slope)
