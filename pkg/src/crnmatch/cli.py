"""Command line entry point: ``crnmatch {sweep,trial,verify}``."""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace

import numpy as np

from .config import load_config
from .fuzz import random_game
from .harness import CSV_HEADER, SweepConfig, run_sweep, simulate_trial, summary_rows, write_results
from .matching import brute_force_stable_matchings, is_stable, run_algorithm1
from .preferences import UTILITIES


def int_list(text: str):
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError("empty integer list")
    return tuple(out)


def float_pair(text: str):
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected LO,HI")
    return tuple(parts)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value text or .json config file")
    common.add_argument("--m", type=int_list, help="SU counts, e.g. 2-10 or 4,8")
    common.add_argument("--n", type=int_list, help="PU counts, e.g. 3,4")
    common.add_argument("--trials", type=int)
    common.add_argument("--seed", type=int, help="base seed")
    common.add_argument("--algorithms", type=lambda s: tuple(a.strip() for a in s.split(",")))
    common.add_argument("--alpha", type=float)
    common.add_argument("--link-radius", type=float)
    common.add_argument("--beta-range", type=float_pair)
    common.add_argument("--utility", choices=sorted(UTILITIES))
    common.add_argument("--verify-stability", action="store_true")

    p = argparse.ArgumentParser(prog="crnmatch", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", parents=[common], help="Monte Carlo sweep over M and N")
    sw.add_argument("--out", help="output file (default: stdout as CSV)")
    sw.add_argument("--format", choices=("csv", "json"), default="csv")
    sw.add_argument("--workers", type=int, default=1)

    tr = sub.add_parser("trial", parents=[common], help="trace one trial")
    tr.add_argument("--index", type=int, default=0, help="trial index")

    ve = sub.add_parser("verify", parents=[common], help="fuzz the stability oracle")
    ve.add_argument("--instances", type=int, default=1000)
    return p


def sweep_from_args(args) -> SweepConfig:
    sweep = load_config(args.config) if args.config else SweepConfig()
    scen = {}
    if args.alpha is not None:
        scen["alpha"] = args.alpha
    if args.link_radius is not None:
        scen["link_radius"] = args.link_radius
    if args.beta_range is not None:
        scen["beta_range"] = args.beta_range
    upd = {}
    if args.m:
        upd["m_values"] = args.m
    if args.n:
        upd["n_values"] = args.n
    if args.trials is not None:
        upd["trials"] = args.trials
    if args.seed is not None:
        upd["base_seed"] = args.seed
    if args.algorithms:
        upd["algorithms"] = args.algorithms
    if args.utility:
        upd["utility"] = args.utility
    if args.verify_stability:
        upd["verify_stability"] = True
    return replace(sweep, scenario=replace(sweep.scenario, **scen), **upd)


def cmd_sweep(args, sweep: SweepConfig) -> int:
    summary = run_sweep(sweep, workers=args.workers)
    out = args.out or sweep.output_path
    if out:
        write_results(summary, out, args.format)
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(summary_rows(summary))
    return 0


def cmd_trial(args, sweep: SweepConfig) -> int:
    m, n = sweep.m_values[0], sweep.n_values[0]
    scenario = replace(sweep.scenario, num_sus=m, num_pus=n)
    rec = simulate_trial(
        scenario, args.index, base_seed=sweep.seed, algorithms=sweep.algorithms,
        utility=sweep.utility, order_by=sweep.order_by, verify_stability=sweep.verify_stability,
        trace="proposed" in sweep.algorithms,
    )
    np.set_printoptions(precision=4, suppress=False, linewidth=120)
    print(f"trial {args.index}  M={m} N={n}  seed={sweep.seed}")
    print("PU active:", rec.instance.pu_active.astype(int))
    print("delta:\n", rec.delta)
    print("eta:\n", rec.eta)
    print("v:\n", rec.table.values)
    for su, lst in enumerate(rec.table.pref_lists):
        print(f"SU {su} proposes to {list(lst)}")
    if rec.trace is not None:
        for ev in rec.trace:
            extra = f" (SU {ev.displaced} displaced)" if ev.displaced is not None else ""
            print(f"round {ev.round}: SU {ev.su} -> band {ev.band}: {ev.outcome}{extra}")
    for alg, mt in rec.matchings.items():
        print(f"{alg}: pairs={sorted(mt.pairs)} proposals={mt.proposal_count} rounds={mt.rounds}")
    if rec.choices is not None:
        print("random choices:", rec.choices.tolist())
    for alg, tm in rec.metrics.items():
        print(f"{alg}: sum_rate={tm.sum_rate:.6g} min_rate={tm.min_rate:.6g} matched={tm.num_matched}")
    return 0


def cmd_verify(args, sweep: SweepConfig) -> int:
    rng = np.random.default_rng(sweep.seed)
    u_fn = UTILITIES[sweep.utility]
    unstable = not_in_oracle = 0
    for _ in range(args.instances):
        M = int(rng.integers(1, 11))
        N = int(rng.integers(1, 7))
        game = random_game(rng, M, N)
        mt = run_algorithm1(game.table, u_fn, game.pu_active)
        if not is_stable(mt, game.table, u_fn, game.pu_active).stable:
            unstable += 1
        if M <= 4 and N <= 4:
            stable = brute_force_stable_matchings(game.table, u_fn, game.pu_active)
            if mt.pairs not in {s.pairs for s in stable}:
                not_in_oracle += 1
    print(f"instances={args.instances} unstable={unstable} outside_oracle={not_in_oracle}")
    return 0 if unstable == 0 and not_in_oracle == 0 else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sweep = sweep_from_args(args)
        return {"sweep": cmd_sweep, "trial": cmd_trial, "verify": cmd_verify}[args.command](args, sweep)
    except (ValueError, OSError) as exc:
        print(f"crnmatch: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
