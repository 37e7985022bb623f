"""Command-line front end.

Subcommands::

    zealpol sweep CONFIG.json --out DIR [--workers W] [--raw]
    zealpol run --substrate poisson --c 4 --n 1000 --ic sic --pz 0 --seed 7
    zealpol metrics EDGES STATES
    zealpol generate --substrate powerlaw --alpha 2.5 --k-min 2 --n 5000 --seed 1 -o g.txt

Exit status is 0 on success, 2 for invalid input (config, flags, files) and
1 for failures while running.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .experiment import (
    SUMMARY_COLUMNS,
    ConfigError,
    Substrate,
    SweepConfig,
    build_graph,
    run_realization,
    sweep,
)
from .graph import (
    EdgeListError,
    ParameterError,
    largest_component,
    load_edge_list,
    write_edge_list,
)
from .metrics import DegenerateGraphError, correlated_polarization

log = logging.getLogger("zealpol")


class UsageError(Exception):
    """Bad user input; maps to exit status 2."""


def _add_substrate_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--substrate", choices=["poisson", "powerlaw", "edge_list"], required=True)
    p.add_argument("--n", type=int, default=5000, help="vertex count before component extraction")
    p.add_argument("--c", type=float, help="mean degree (poisson)")
    p.add_argument("--alpha", type=float, help="scaling index (powerlaw)")
    p.add_argument("--k-min", type=int, default=2, help="minimum degree (powerlaw)")
    p.add_argument("--edges", help="edge-list path (edge_list)")
    p.add_argument("--seed", type=int, default=0)


def _substrate_from_args(args) -> Substrate:
    if args.substrate == "poisson":
        sub = Substrate("poisson", c=args.c)
    elif args.substrate == "powerlaw":
        sub = Substrate("powerlaw", alpha=args.alpha, k_min=args.k_min)
    else:
        sub = Substrate("edge_list", path=args.edges)
    sub.validate()
    return sub


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zealpol", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a p_z sweep from a JSON config")
    p.add_argument("config", type=Path)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, help="master seed, if the config does not set one")
    p.add_argument("--raw", action="store_true", help="also write per-realization rows")

    p = sub.add_parser("run", help="run and report a single realization")
    _add_substrate_flags(p)
    p.add_argument("--ic", choices=["ric", "sic"], default="ric")
    p.add_argument("--zealotry", choices=["uniform", "degree"], default="uniform")
    p.add_argument("--pz", type=float, default=0.0)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--dump-states", type=Path, help="write 'vertex state' lines here")

    p = sub.add_parser("metrics", help="polarization of a graph snapshot")
    p.add_argument("edges", type=Path)
    p.add_argument("states", type=Path)

    p = sub.add_parser("generate", help="write the largest component of a random graph")
    _add_substrate_flags(p)
    p.add_argument("-o", "--output", type=Path, required=True)
    return parser


def load_sweep_config(path: Path, seed: int | None) -> SweepConfig:
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    if seed is not None:
        if isinstance(d, dict) and "master_seed" in d and d["master_seed"] != seed:
            raise UsageError(
                f"master_seed: config sets {d['master_seed']} but --seed {seed} was given"
            )
        if isinstance(d, dict):
            d["master_seed"] = seed
    try:
        return SweepConfig.from_dict(d)
    except ConfigError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_sweep(args) -> int:
    cfg = load_sweep_config(args.config, args.seed)
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    result = sweep(cfg, workers=args.workers, progress=args.verbose > 0)
    result.write(args.out, raw=args.raw)
    cols = ["pz", "phi_mean", "phi_p5", "phi_p95", "R_mean", "r_mean", "flips_mean", "nonconverged_frac"]
    idx = [SUMMARY_COLUMNS.index(c) for c in cols]
    print("  ".join(f"{c:>10}" for c in cols))
    for row in result.rows:
        vals = row.row()
        print("  ".join(f"{vals[i]:>10.4f}" for i in idx))
    print(f"wrote {args.out}")
    return 0


def cmd_run(args) -> int:
    sub = _substrate_from_args(args)
    graph, labels = None, None
    if sub.kind == "edge_list":
        with open(sub.path) as fh:
            full, all_labels = load_edge_list(fh)
        graph, mapping = largest_component(full)
        labels = [all_labels[i] for i in mapping]
    try:
        cfg = SweepConfig(
            substrate=sub,
            n=args.n,
            ic_type=args.ic,
            zealotry=args.zealotry,
            pz_grid=(args.pz,),
            realizations=1,
            master_seed=args.seed,
            max_steps=args.max_steps,
        )
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    summary, outcome, g = run_realization(cfg, args.pz, args.seed, graph)
    print(f"n {g.n}")
    print(f"m {g.m}")
    print(f"converged {str(outcome.converged).lower()}")
    print(f"period_two {str(outcome.period_two).lower()}")
    print(f"steps {outcome.steps}")
    print(f"flips {outcome.total_flips}")
    for key, val in summary.as_dict().items():
        print(f"{key} {val!r}")
    if args.dump_states:
        with open(args.dump_states, "w") as fh:
            for i, s in enumerate(outcome.final_states):
                fh.write(f"{labels[i] if labels else i} {int(s)}\n")
    return 0


def read_states(path: Path, labels: list[str]) -> np.ndarray:
    index = {lab: i for i, lab in enumerate(labels)}
    states = np.zeros(len(labels), dtype=np.int8)
    seen = np.zeros(len(labels), dtype=bool)
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line[0] in "#%":
                continue
            tokens = line.split()
            if len(tokens) != 2 or tokens[1] not in ("-1", "0", "1", "+1"):
                raise UsageError(f"{path}:{lineno}: expected 'label state' with state in -1/0/1: {line!r}")
            label, value = tokens
            if label not in index:
                raise UsageError(f"{path}:{lineno}: label {label!r} is not a graph vertex")
            i = index[label]
            if seen[i]:
                raise UsageError(f"{path}:{lineno}: duplicate label {label!r}")
            seen[i] = True
            states[i] = int(value)
    if not seen.all():
        missing = labels[int(np.flatnonzero(~seen)[0])]
        raise UsageError(f"{path}: no state given for label {missing!r}")
    return states


def cmd_metrics(args) -> int:
    try:
        with open(args.edges) as fh:
            g, labels = load_edge_list(fh)
    except (OSError, EdgeListError) as exc:
        raise UsageError(f"{args.edges}: {exc}") from None
    states = read_states(args.states, labels)
    try:
        summary = correlated_polarization(g, states)
    except DegenerateGraphError as exc:
        raise UsageError(str(exc)) from None
    for key, val in summary.as_dict().items():
        print(f"{key} {val!r}")
    return 0


def cmd_generate(args) -> int:
    sub = _substrate_from_args(args)
    if sub.kind == "edge_list":
        raise UsageError("generate needs a poisson or powerlaw substrate")
    g = build_graph(sub, args.n, np.random.default_rng(args.seed))
    with open(args.output, "w") as fh:
        write_edge_list(g, fh)
    print(f"n {g.n}")
    print(f"m {g.m}")
    return 0


COMMANDS = {
    "sweep": cmd_sweep,
    "run": cmd_run,
    "metrics": cmd_metrics,
    "generate": cmd_generate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigError, ParameterError, EdgeListError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.debug("run failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
