"""Experiment runner: seeded trials, per-round accounting, CSV output, CLI.

A trial plays ``horizon`` rounds of select -> observe -> update against the
configured environment, accumulating exact pseudo-regret against the best
fixed action of the full horizon.  Records are kept at checkpoint rounds
(multiples of ``checkpoint_every``, plus the final round).  The CSV schema is

    trial,t,cum_regret,resamples,elapsed_ns

with floats at 17 significant digits and LF line endings; the ``resamples``
column counts the summed per-arm resampling draws of that round and
``elapsed_ns`` times action selection plus estimation only.  Everything
except elapsed_ns is byte-reproducible from (config, master_seed).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    ConfigError,
    ExperimentConfig,
    RoundRecord,
    derive_trial_rng,
    validate_config,
)
from .environments import make_stochastic, make_switching
from .perturbation import PerturbationDistribution
from .policy import FtplPolicy

CSV_HEADER = "trial,t,cum_regret,resamples,elapsed_ns"
THREADS_ENV_VAR = "FTPL_MSET_THREADS"


@dataclass(frozen=True)
class TrialResult:
    trial: int
    records: tuple[RoundRecord, ...]
    final_regret: float
    total_resamples: int
    truncated_rounds: tuple[int, ...]


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    trials: tuple[TrialResult, ...]
    mean_final_regret: float
    se_final_regret: float
    total_resamples: int
    wall_time_s: float

    @property
    def records(self) -> list[RoundRecord]:
        return [rec for tr in self.trials for rec in tr.records]

    def mean_resamples_per_round(self) -> float:
        cfg = self.config
        return self.total_resamples / (cfg.trials * cfg.horizon)


def _build_env(cfg: ExperimentConfig):
    if cfg.env_kind == "stochastic":
        return make_stochastic(cfg.d, cfg.m, cfg.gap)
    return make_switching(cfg.d, cfg.m, cfg.gap, phase_len=cfg.phase_len)


def run_trial(cfg: ExperimentConfig, trial: int) -> TrialResult:
    """Play one seeded trial; deterministic given (cfg, trial)."""
    rng = derive_trial_rng(cfg.master_seed, trial)
    env = _build_env(cfg)
    dist = PerturbationDistribution(cfg.dist_kind, cfg.alpha)
    policy = FtplPolicy(cfg.d, cfg.m, dist, cfg.lr_constant,
                        estimator_kind=cfg.estimator_kind,
                        resample_cap=cfg.resample_cap)
    comparator, _ = env.optimal_fixed_action(cfg.horizon)

    records: list[RoundRecord] = []
    truncated: list[int] = []
    cum_regret = 0.0
    total_resamples = 0
    for t in range(1, cfg.horizon + 1):
        t0 = time.perf_counter_ns()
        action, _ = policy.select_action(rng)
        t1 = time.perf_counter_ns()
        losses = env.loss_vector(t, rng)
        observed = {int(i): float(losses[i]) for i in action}
        t2 = time.perf_counter_ns()
        upd = policy.update(action, observed, rng)
        t3 = time.perf_counter_ns()

        cum_regret += env.pseudo_regret_increment(t, action, comparator)
        resamples = upd.outcome.total_arm_resamples
        total_resamples += resamples
        if upd.outcome.truncated:
            truncated.append(t)
        if t % cfg.checkpoint_every == 0 or t == cfg.horizon:
            records.append(RoundRecord(
                trial=trial, t=t, cum_pseudo_regret=cum_regret,
                resamples_this_round=resamples,
                elapsed_ns=(t1 - t0) + (t3 - t2),
            ))
    return TrialResult(trial=trial, records=tuple(records),
                       final_regret=cum_regret,
                       total_resamples=total_resamples,
                       truncated_rounds=tuple(truncated))


def _trial_worker(args: tuple[ExperimentConfig, int]) -> TrialResult:
    cfg, trial = args
    return run_trial(cfg, trial)


def run_experiment(cfg: ExperimentConfig, threads: int = 1,
                   continue_on_error: bool = False) -> ExperimentResult:
    """Run all trials (optionally in a process pool) and aggregate.

    Output is ordered by trial index and identical for any thread count;
    scheduling never touches a trial's private RNG stream.
    """
    cfg = validate_config(cfg)
    start = time.perf_counter()
    results: list[Optional[TrialResult]] = [None] * cfg.trials
    if threads <= 1:
        for k in range(cfg.trials):
            try:
                results[k] = run_trial(cfg, k)
            except Exception:
                if not continue_on_error:
                    raise
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            futures = {pool.submit(_trial_worker, (cfg, k)): k for k in range(cfg.trials)}
            for fut in concurrent.futures.as_completed(futures):
                k = futures[fut]
                try:
                    results[k] = fut.result()
                except Exception:
                    if not continue_on_error:
                        raise
    done = [r for r in results if r is not None]
    if not done:
        raise RuntimeError("all trials failed")
    finals = np.array([r.final_regret for r in done])
    se = float(finals.std(ddof=1) / np.sqrt(len(finals))) if len(finals) > 1 else 0.0
    return ExperimentResult(
        config=cfg,
        trials=tuple(done),
        mean_final_regret=float(finals.mean()),
        se_final_regret=se,
        total_resamples=int(sum(r.total_resamples for r in done)),
        wall_time_s=time.perf_counter() - start,
    )


def write_csv(result: ExperimentResult, path: str) -> None:
    """UTF-8, LF endings, floats at 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for tr in result.trials:
            for rec in tr.records:
                fh.write(f"{rec.trial},{rec.t},{rec.cum_pseudo_regret:.17g},"
                         f"{rec.resamples_this_round},{rec.elapsed_ns}\n")


def _verify_suite(verbose: bool = True) -> int:
    """Desk-scale oracle property suite; returns the number of failures."""
    from . import verify

    report = verify.run_all()
    if verbose:
        print(verify.format_report(report))
    return sum(1 for item in report if not item.passed)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ftpl-mset",
        description="FTPL for m-set semi-bandits with GR/CGR loss estimation",
    )
    p.add_argument("--d", type=int, default=16)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--T", type=int, default=10_000, dest="horizon")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--dist", choices=["frechet", "pareto"], default="frechet")
    p.add_argument("--estimator", choices=["gr", "cgr"], default="cgr")
    p.add_argument("--env", choices=["stochastic", "switching"], default="stochastic")
    p.add_argument("--gap", type=float, default=0.125)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--c", type=float, default=1.0, dest="lr_constant")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--checkpoint-every", type=int, default=10)
    p.add_argument("--phase-len", type=int, default=10)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--verify", action="store_true",
                   help="run the oracle property suite and exit")
    p.add_argument("--threads", type=int, default=None)
    return p


def cli_main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.verify:
        try:
            failures = _verify_suite()
        except Exception as exc:  # noqa: BLE001 - report and fail
            print(f"verify suite crashed: {exc}", file=sys.stderr)
            return 1
        return 0 if failures == 0 else 1

    cfg = ExperimentConfig(
        d=args.d, m=args.m, horizon=args.horizon, alpha=args.alpha,
        dist_kind=args.dist, estimator_kind=args.estimator,
        lr_constant=args.lr_constant, env_kind=args.env, gap=args.gap,
        trials=args.trials, master_seed=args.seed, resample_cap=args.cap,
        checkpoint_every=args.checkpoint_every, phase_len=args.phase_len,
    )
    try:
        cfg = validate_config(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    threads = args.threads
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV_VAR, "1"))
    try:
        result = run_experiment(cfg, threads=threads)
    except Exception as exc:  # noqa: BLE001 - runtime failure -> exit 1
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 1

    if args.out:
        try:
            write_csv(result, args.out)
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return 1
    print(f"trials={cfg.trials} T={cfg.horizon} "
          f"final pseudo-regret {result.mean_final_regret:.3f} "
          f"+- {result.se_final_regret:.3f} (SE), "
          f"resamples/round {result.mean_resamples_per_round():.2f}, "
          f"wall {result.wall_time_s:.1f}s")
    return 0


def main() -> None:
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
