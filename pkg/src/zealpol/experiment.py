"""Monte Carlo sweeps over the zealot fraction.

Every realization draws its random numbers from a stream keyed by
``(master_seed, pz_index, realization_index)``, so a sweep gives the same
numbers regardless of worker count or scheduling order.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .dynamics import RunOutcome, run_to_equilibrium
from .graph import (
    Graph,
    configuration_model,
    fix_parity,
    largest_component,
    load_edge_list,
    sample_poisson_degrees,
    sample_powerlaw_degrees,
)
from .metrics import PolarizationSummary, correlated_polarization
from .seeding import degree_zealots, random_initial, seed_initial, uniform_zealots

__all__ = [
    "ConfigError",
    "Substrate",
    "SweepConfig",
    "SweepResult",
    "PzSummary",
    "derive_seed",
    "build_graph",
    "run_realization",
    "sweep",
    "percentile",
    "histogram",
    "SUMMARY_COLUMNS",
]

log = logging.getLogger(__name__)

SUBSTRATES = ("poisson", "powerlaw", "edge_list")
IC_TYPES = ("ric", "sic")
ZEALOTRY = ("uniform", "degree")

SUMMARY_COLUMNS = [
    "pz",
    "phi_mean", "phi_p5", "phi_p95",
    "R_mean", "R_p5", "R_p95",
    "r_mean", "r_p5", "r_p95",
    "flips_mean", "flips_p5", "flips_p95",
    "nonconverged_frac",
]
RAW_COLUMNS = [
    "pz_index", "pz", "realization", "n", "m", "n_minus", "n_zero", "n_plus",
    "R", "r", "phi", "total_flips", "steps", "converged", "period_two",
]


class ConfigError(ValueError):
    """Invalid sweep configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class Substrate:
    kind: str
    c: float | None = None
    alpha: float | None = None
    k_min: int | None = None
    path: str | None = None

    def validate(self) -> None:
        if self.kind not in SUBSTRATES:
            raise ConfigError("substrate.kind", f"must be one of {SUBSTRATES}, got {self.kind!r}")
        if self.kind == "poisson":
            if self.c is None or not self.c > 0:
                raise ConfigError("substrate.c", f"mean degree must be > 0, got {self.c}")
        elif self.kind == "powerlaw":
            if self.alpha is None or not self.alpha > 1:
                raise ConfigError("substrate.alpha", f"must be > 1, got {self.alpha}")
            if self.k_min is None or int(self.k_min) != self.k_min or self.k_min < 1:
                raise ConfigError("substrate.k_min", f"must be an integer >= 1, got {self.k_min}")
        elif not self.path:
            raise ConfigError("substrate.path", "edge_list substrate needs a path")


@dataclass(frozen=True)
class SweepConfig:
    """Everything needed to reproduce a sweep.

    ``n`` is ignored for ``edge_list`` substrates. ``max_steps=None`` means
    ten times the size of the component the dynamics run on.
    """

    substrate: Substrate
    n: int = 5000
    ic_type: str = "ric"
    zealotry: str = "uniform"
    pz_grid: tuple[float, ...] = tuple(round(0.1 * i, 10) for i in range(11))
    realizations: int = 1000
    master_seed: int = 0
    max_steps: int | None = None
    histogram_bins: int = 40
    seed_pair: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "pz_grid", tuple(float(p) for p in self.pz_grid))
        if self.seed_pair is not None:
            object.__setattr__(self, "seed_pair", tuple(int(v) for v in self.seed_pair))
        self.validate()

    def validate(self) -> None:
        self.substrate.validate()
        if self.substrate.kind != "edge_list" and (int(self.n) != self.n or self.n < 2):
            raise ConfigError("n", f"must be an integer >= 2, got {self.n}")
        if self.ic_type not in IC_TYPES:
            raise ConfigError("ic_type", f"must be one of {IC_TYPES}, got {self.ic_type!r}")
        if self.zealotry not in ZEALOTRY:
            raise ConfigError("zealotry", f"must be one of {ZEALOTRY}, got {self.zealotry!r}")
        if not self.pz_grid:
            raise ConfigError("pz_grid", "must not be empty")
        for i, p in enumerate(self.pz_grid):
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"pz_grid[{i}]", f"{p} is outside [0, 1]")
            if i and p <= self.pz_grid[i - 1]:
                raise ConfigError(f"pz_grid[{i}]", "grid must be strictly increasing")
        if int(self.realizations) != self.realizations or self.realizations < 1:
            raise ConfigError("realizations", f"must be an integer >= 1, got {self.realizations}")
        if int(self.master_seed) != self.master_seed or self.master_seed < 0:
            raise ConfigError("master_seed", f"must be a non-negative integer, got {self.master_seed}")
        if self.max_steps is not None and (int(self.max_steps) != self.max_steps or self.max_steps < 1):
            raise ConfigError("max_steps", f"must be an integer >= 1, got {self.max_steps}")
        if int(self.histogram_bins) != self.histogram_bins or self.histogram_bins < 1:
            raise ConfigError("histogram_bins", f"must be an integer >= 1, got {self.histogram_bins}")

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SweepConfig":
        if not isinstance(d, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        for key in d:
            if key not in known:
                raise ConfigError(key, "unknown field")
        sub = d.get("substrate")
        if not isinstance(sub, dict):
            raise ConfigError("substrate", "required object with a 'kind' key")
        sub_known = {f for f in Substrate.__dataclass_fields__}
        for key in sub:
            if key not in sub_known:
                raise ConfigError(f"substrate.{key}", "unknown field")
        if "kind" not in sub:
            raise ConfigError("substrate.kind", "missing")
        kwargs = dict(d)
        kwargs["substrate"] = Substrate(**sub)
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError("<root>", str(exc)) from None

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["pz_grid"] = list(self.pz_grid)
        if self.seed_pair is not None:
            d["seed_pair"] = list(self.seed_pair)
        return d


def derive_seed(master_seed: int, *indices: int) -> int:
    """Counter-based stream seed: a hash of the master seed and indices."""
    ss = np.random.SeedSequence([master_seed, *indices])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def build_graph(substrate: Substrate, n: int, rng: np.random.Generator) -> Graph:
    """Draw a fresh graph and return its largest component."""
    if substrate.kind == "poisson":
        seq = sample_poisson_degrees(n, substrate.c, rng)
    elif substrate.kind == "powerlaw":
        seq = sample_powerlaw_degrees(n, substrate.alpha, int(substrate.k_min), rng)
    else:
        raise ValueError(f"cannot generate a {substrate.kind!r} substrate")
    g = configuration_model(fix_parity(seq, rng), rng)
    return largest_component(g)[0]


def load_substrate(path: str | Path) -> Graph:
    """Parse an edge-list file and keep its largest component."""
    with open(path) as fh:
        g, _ = load_edge_list(fh)
    return largest_component(g)[0]


def run_realization(
    cfg: SweepConfig,
    p_z: float,
    stream_seed: int,
    graph: Graph | None = None,
) -> tuple[PolarizationSummary, RunOutcome, Graph]:
    """One realization: graph, initial state, zealots, dynamics, metrics.

    ``graph`` must be supplied (already reduced to its largest component)
    for ``edge_list`` substrates; generated substrates draw a new graph from
    the stream.
    """
    rng = np.random.default_rng(stream_seed)
    if cfg.substrate.kind == "edge_list":
        g = graph if graph is not None else load_substrate(cfg.substrate.path)
    else:
        g = build_graph(cfg.substrate, cfg.n, rng)
    if cfg.ic_type == "ric":
        s0 = random_initial(g.n, rng)
    else:
        s0 = seed_initial(g.n, rng, cfg.seed_pair)
    if cfg.zealotry == "uniform":
        z = uniform_zealots(g.n, p_z, rng)
    else:
        z = degree_zealots(g, p_z, rng)
    max_steps = cfg.max_steps if cfg.max_steps is not None else 10 * g.n
    outcome = run_to_equilibrium(g, s0, z, max_steps)
    return correlated_polarization(g, outcome.final_states), outcome, g


def percentile(values: Sequence[float], q: float) -> float:
    """Linear interpolation between closest ranks, ``h = q * (len - 1)``."""
    if len(values) == 0:
        raise ValueError("percentile of an empty sequence")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    return float(np.percentile(np.asarray(values, dtype=float), 100.0 * q, method="linear"))


def histogram(
    values: Sequence[float], bins: int, range: tuple[float, float] = (-1.0, 1.0)
) -> tuple[np.ndarray, np.ndarray]:
    """Equal-width counts over ``range``; out-of-range values land in the end bins.

    Bins are right-open except the last, which is closed.
    """
    lo, hi = range
    if bins < 1 or not lo < hi:
        raise ValueError("need bins >= 1 and lo < hi")
    v = np.clip(np.asarray(values, dtype=float), lo, hi)
    return np.histogram(v, bins=bins, range=(lo, hi))


@dataclass
class PzSummary:
    pz: float
    stats: dict[str, float]
    nonconverged_frac: float
    period_two_frac: float
    hist_counts: list[int]

    def row(self) -> list[float]:
        return [self.pz] + [self.stats[c] for c in SUMMARY_COLUMNS[1:-1]] + [self.nonconverged_frac]


@dataclass
class SweepResult:
    config: SweepConfig
    rows: list[PzSummary]
    hist_edges: list[float]
    raw: list[dict[str, Any]] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        """One summary column across the grid, e.g. ``column("phi_mean")``."""
        idx = SUMMARY_COLUMNS.index(name)
        return np.array([r.row()[idx] for r in self.rows])

    def raw_values(self, pz_index: int, key: str) -> np.ndarray:
        return np.array([rec[key] for rec in self.raw if rec["pz_index"] == pz_index])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for r in self.rows:
            w.writerow([_fmt(x) for x in r.row()])
        return buf.getvalue()

    def raw_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RAW_COLUMNS)
        for rec in self.raw:
            w.writerow([_fmt(rec[c]) for c in RAW_COLUMNS])
        return buf.getvalue()

    def histogram_csv(self, pz_index: int) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bin_lo", "bin_hi", "count"])
        edges = self.hist_edges
        for k, count in enumerate(self.rows[pz_index].hist_counts):
            w.writerow([_fmt(edges[k]), _fmt(edges[k + 1]), count])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "config": self.config.to_dict(),
            "columns": SUMMARY_COLUMNS,
            "results": [
                {
                    "pz": r.pz,
                    **r.stats,
                    "nonconverged_frac": r.nonconverged_frac,
                    "period_two_frac": r.period_two_frac,
                    "phi_histogram": {"edges": self.hist_edges, "counts": r.hist_counts},
                }
                for r in self.rows
            ],
        }
        return json.dumps(doc, indent=2) + "\n"

    def write(self, outdir: str | Path, raw: bool = False) -> list[Path]:
        """Write summary CSV/JSON, per-p_z histogram CSVs and optionally raw rows."""
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        files = {
            "summary.csv": self.to_csv(),
            "summary.json": self.to_json(),
        }
        for i in range(len(self.rows)):
            files[f"phi_hist_{i:03d}.csv"] = self.histogram_csv(i)
        if raw:
            files["raw.csv"] = self.raw_csv()
        written = []
        for name, text in files.items():
            path = outdir / name
            path.write_text(text)
            written.append(path)
        return written


def _fmt(x: Any) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


# Worker-process state: the config and the shared read-only graph.
_WORKER: dict[str, Any] = {}


def _init_worker(cfg: SweepConfig, graph: Graph | None) -> None:
    _WORKER["cfg"] = cfg
    _WORKER["graph"] = graph


def _task(job: tuple[int, int]) -> dict[str, Any]:
    cfg: SweepConfig = _WORKER["cfg"]
    i, j = job
    p_z = cfg.pz_grid[i]
    summary, outcome, g = run_realization(
        cfg, p_z, derive_seed(cfg.master_seed, i, j), _WORKER["graph"]
    )
    return {
        "pz_index": i,
        "pz": p_z,
        "realization": j,
        "n": g.n,
        "m": g.m,
        **summary.as_dict(),
        "total_flips": outcome.total_flips,
        "steps": outcome.steps,
        "converged": outcome.converged,
        "period_two": outcome.period_two,
    }


def sweep(cfg: SweepConfig, workers: int = 1, progress: bool = False) -> SweepResult:
    """Run ``cfg.realizations`` realizations at every grid point and summarize.

    Per-realization records are always collected in ``(pz_index,
    realization)`` order, so the result does not depend on ``workers``.
    """
    graph = load_substrate(cfg.substrate.path) if cfg.substrate.kind == "edge_list" else None
    jobs = [(i, j) for i in range(len(cfg.pz_grid)) for j in range(cfg.realizations)]
    if workers <= 1:
        _init_worker(cfg, graph)
        records = []
        for k, job in enumerate(jobs):
            records.append(_task(job))
            if progress and (k + 1) % cfg.realizations == 0:
                log.info("p_z=%g done", cfg.pz_grid[job[0]])
    else:
        chunk = max(1, len(jobs) // (workers * 8))
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(cfg, graph)) as ex:
            records = list(ex.map(_task, jobs, chunksize=chunk))
    return summarize(cfg, records)


def summarize(cfg: SweepConfig, records: list[dict[str, Any]]) -> SweepResult:
    edges = np.linspace(-1.0, 1.0, cfg.histogram_bins + 1)
    rows = []
    for i, p_z in enumerate(cfg.pz_grid):
        recs = [r for r in records if r["pz_index"] == i]
        stats = {}
        for key, name in (("phi", "phi"), ("R", "R"), ("r", "r"), ("total_flips", "flips")):
            v = [float(r[key]) for r in recs]
            stats[f"{name}_mean"] = math.fsum(v) / len(v)
            stats[f"{name}_p5"] = percentile(v, 0.05)
            stats[f"{name}_p95"] = percentile(v, 0.95)
        counts, _ = histogram([r["phi"] for r in recs], cfg.histogram_bins, (-1.0, 1.0))
        rows.append(
            PzSummary(
                pz=p_z,
                stats=stats,
                nonconverged_frac=sum(not r["converged"] for r in recs) / len(recs),
                period_two_frac=sum(bool(r["period_two"]) for r in recs) / len(recs),
                hist_counts=[int(c) for c in counts],
            )
        )
    return SweepResult(cfg, rows, [float(e) for e in edges], records)
