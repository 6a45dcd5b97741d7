"""Seeded Monte Carlo trials, aggregation, Poisson GOF, scans, torsion search.

Each trial owns RNG stream `stream` of the master seed and emits an
immutable record; aggregation folds records by stream index, so results
are byte-identical for any worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
import multiprocessing
import subprocess
import time
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np
from scipy import stats as sstats

from . import __version__
from .collapse import (ALMOST_COLLAPSED, COLLAPSED_BELOW_D, almost_d_collapse,
                       check_pi1_preconditions, detect_crosspolytopes)
from .complexes import Graph, SimplicialComplex, clique_complex, default_dim_cap
from .density import c_bounded_check
from .homology import betti_numbers, homology_with_torsion
from .models import (RngSpec, reference_constants, sample_gnp,
                     sample_linial_meshulam)

FLAG = "flag"
LINIAL_MESHULAM = "linial_meshulam"


class InvariantViolation(RuntimeError):
    """A cross-checked identity failed (census/Betti, Morse inequality)."""


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    d: int = 2
    model: str = FLAG
    p: float | None = None
    c: float | None = None
    alpha: float | None = None
    trials: int = 1
    master_seed: int = 0
    dim_cap: int | None = None
    fvector: bool = True
    betti_gf2: bool = False
    betti_rational: bool = False
    census: bool = False
    collapse: bool = False
    cycle: bool = False
    c_bounded: float | None = None
    pi1: bool = False
    torsion_degrees: tuple[int, ...] = ()
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        specs = sum(v is not None for v in (self.p, self.c, self.alpha))
        if specs != 1:
            raise ValueError("exactly one of p, c, alpha must be set")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.model not in (FLAG, LINIAL_MESHULAM):
            raise ValueError(f"unknown model {self.model!r}")

    @property
    def probability(self) -> float:
        if self.p is not None:
            return float(self.p)
        if self.c is not None:
            return float(self.c) * self.n ** (-1.0 / self.d)
        return self.n ** (-float(self.alpha))

    @property
    def effective_dim_cap(self) -> int:
        return self.dim_cap if self.dim_cap is not None else default_dim_cap(self.d)

    def needs_complex(self) -> bool:
        return bool(self.fvector or self.betti_gf2 or self.betti_rational
                    or self.collapse or self.c_bounded is not None or self.pi1
                    or self.torsion_degrees)


@dataclass(frozen=True)
class TrialRecord:
    stream: int
    f: tuple[int, ...] | None = None
    betti_d_gf2: int | None = None
    betti_d_q: int | None = None
    cp_count: int | None = None
    cp_induced: int | None = None
    collapse_status: str | None = None
    surviving: int | None = None
    max_face_degrees: tuple[int, ...] = ()   # index i-1 holds the (i-1)-face max
    c_bounded_pass: bool | None = None
    has_cycle: bool | None = None
    morse_slack: int | None = None
    pi1_conditions: dict | None = None
    torsion: dict | None = None              # degree -> tuple of divisors
    error: str | None = None
    wall_ms: float | None = None


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    records: tuple[TrialRecord, ...]
    aggregates: dict
    version: str


def _graph_has_cycle(g: Graph) -> bool:
    parent = list(range(g.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return True
        parent[ru] = rv
    return False


def run_trial(cfg: ExperimentConfig, stream: int) -> TrialRecord:
    """One seeded trial; deterministic given (cfg.master_seed, stream)."""
    t0 = time.perf_counter()
    rng = RngSpec(cfg.master_seed, stream)
    p = cfg.probability
    if cfg.model == FLAG:
        g = sample_gnp(cfg.n, p, rng)
        x = clique_complex(g, cfg.effective_dim_cap) if cfg.needs_complex() else None
    else:
        x = sample_linial_meshulam(cfg.n, cfg.d, p, rng)
        g = x.one_skeleton()

    fields: dict = {"stream": stream}
    if cfg.fvector and x is not None:
        fields["f"] = x.f_vector(cfg.effective_dim_cap)
    if cfg.census:
        hits = detect_crosspolytopes(g, cfg.d)
        fields["cp_count"] = len(hits)
        fields["cp_induced"] = sum(1 for h in hits if h.induced)
    if cfg.cycle or cfg.d == 1:
        fields["has_cycle"] = _graph_has_cycle(g)
    maxima = [max(g.degrees(), default=0)]
    if x is not None:
        for i in range(2, cfg.d):
            counts: dict = {}
            for f_ in x.faces_of_dim(i):
                for t in range(len(f_)):
                    sub = f_[:t] + f_[t + 1:]
                    counts[sub] = counts.get(sub, 0) + 1
            maxima.append(max(counts.values(), default=0))
    fields["max_face_degrees"] = tuple(maxima[:max(cfg.d - 1, 1)])

    if cfg.betti_gf2 and x is not None:
        fields["betti_d_gf2"] = betti_numbers(x, 2, degrees=[cfg.d])[cfg.d]
    if cfg.betti_rational and x is not None:
        fields["betti_d_q"] = betti_numbers(x, "rationals", degrees=[cfg.d])[cfg.d]
    if cfg.collapse and x is not None:
        out = almost_d_collapse(x, cfg.d, seed=stream)
        fields["collapse_status"] = out.status
        fields["surviving"] = len(out.surviving_crosspolytopes)
        if out.status == ALMOST_COLLAPSED and fields.get("betti_d_q") is not None:
            if fields["betti_d_q"] != fields["surviving"]:
                raise InvariantViolation(
                    f"stream {stream}: beta_{cfg.d}(Q) = {fields['betti_d_q']} but "
                    f"{fields['surviving']} cross-polytopes survived")
    if cfg.c_bounded is not None and x is not None:
        fields["c_bounded_pass"] = c_bounded_check(x, cfg.d, cfg.c_bounded).passed
    if cfg.pi1 and x is not None:
        rep = check_pi1_preconditions(x)
        fields["pi1_conditions"] = dict(rep.conditions)
    if cfg.torsion_degrees and x is not None:
        tors = {}
        for k in cfg.torsion_degrees:
            _, divisors = homology_with_torsion(x, k)
            tors[k] = tuple(divisors)
        fields["torsion"] = tors
    if cfg.fvector and cfg.betti_rational and x is not None and cfg.d == 2 \
            and cfg.effective_dim_cap >= 3:
        fv = fields["f"]
        bound = fv[2] - fv[1] - (fv[3] if len(fv) > 3 else 0)
        slack = fields["betti_d_q"] - bound
        if slack < 0:
            raise InvariantViolation(f"stream {stream}: Morse inequality violated")
        fields["morse_slack"] = slack

    fields["wall_ms"] = (time.perf_counter() - t0) * 1000.0
    return TrialRecord(**fields)


def _run_trial_safe(args) -> TrialRecord:
    cfg, stream = args
    try:
        return run_trial(cfg, stream)
    except InvariantViolation:
        raise
    except Exception as exc:  # noqa: BLE001 - per-trial failures are data
        return TrialRecord(stream=stream, error=f"{type(exc).__name__}: {exc}")


def _version_string() -> str:
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty"],
                             capture_output=True, text=True, timeout=5,
                             cwd=Path(__file__).resolve().parent)
        if out.returncode == 0:
            return f"flaglab-{__version__}+g{out.stdout.strip()}"
    except Exception:
        pass
    return f"flaglab-{__version__}"


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """All trials plus aggregates; identical output for any worker count."""
    jobs = [(cfg, s) for s in range(cfg.trials)]
    if cfg.workers > 1:
        with multiprocessing.Pool(cfg.workers) as pool:
            records = list(pool.imap_unordered(_run_trial_safe, jobs, chunksize=8))
    else:
        records = [_run_trial_safe(j) for j in jobs]
    records.sort(key=lambda r: r.stream)
    return ExperimentResult(cfg, tuple(records), aggregate(cfg, records),
                            _version_string())


def aggregate(cfg: ExperimentConfig, records) -> dict:
    ok = [r for r in records if r.error is None]
    agg: dict = {
        "trials": len(records),
        "failed": len(records) - len(ok),
    }

    def _mean_var(vals):
        if not vals:
            return None, None
        arr = np.asarray(vals, dtype=float)
        return float(arr.mean()), float(arr.var(ddof=1)) if len(arr) > 1 else 0.0

    if cfg.census:
        m, v = _mean_var([r.cp_count for r in ok if r.cp_count is not None])
        agg["cp_count_mean"], agg["cp_count_var"] = m, v
        agg["cp_induced_mean"] = _mean_var(
            [r.cp_induced for r in ok if r.cp_induced is not None])[0]
    if cfg.collapse:
        statuses = [r.collapse_status for r in ok if r.collapse_status]
        agg["frac_almost_collapsed"] = (
            sum(s == ALMOST_COLLAPSED for s in statuses) / len(statuses)
            if statuses else None)
        agg["frac_collapsed_below_d"] = (
            sum(s == COLLAPSED_BELOW_D for s in statuses) / len(statuses)
            if statuses else None)
        agg["frac_stuck"] = (
            sum(s == "stuck" for s in statuses) / len(statuses) if statuses else None)
        agg["surviving_mean"] = _mean_var(
            [r.surviving for r in ok if r.surviving is not None])[0]
    if cfg.betti_gf2:
        agg["betti_d_gf2_mean"] = _mean_var(
            [r.betti_d_gf2 for r in ok if r.betti_d_gf2 is not None])[0]
    if cfg.betti_rational:
        agg["betti_d_q_mean"] = _mean_var(
            [r.betti_d_q for r in ok if r.betti_d_q is not None])[0]
    if cfg.cycle or cfg.d == 1:
        cycles = [r.has_cycle for r in ok if r.has_cycle is not None]
        agg["frac_with_cycle"] = sum(cycles) / len(cycles) if cycles else None
    degs = [r.max_face_degrees[0] for r in ok if r.max_face_degrees]
    agg["max_vertex_degree_mean"] = _mean_var(degs)[0]
    if cfg.c_bounded is not None:
        passes = [r.c_bounded_pass for r in ok if r.c_bounded_pass is not None]
        agg["c_bounded_pass_frac"] = sum(passes) / len(passes) if passes else None
    return agg


# ---------------------------------------------------------------------------
# persistence


def _csv_columns(cfg: ExperimentConfig) -> list[str]:
    fcols = [f"f{k}" for k in range(max(4, cfg.effective_dim_cap) + 1)]
    degcols = [f"max_deg_i{i}" for i in range(1, max(cfg.d, 2))]
    return (["stream"] + fcols
            + ["betti_d_gf2", "betti_d_q", "cp_count", "cp_induced",
               "collapse_status", "surviving"] + degcols
            + ["torsion_max", "wall_ms"])


def result_to_csv(result: ExperimentResult) -> str:
    """One row per trial.  wall_ms is written only under cfg.timing, because
    the file contract is byte-identical reruns for a fixed master seed."""
    cfg = result.config
    cols = _csv_columns(cfg)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in result.records:
        row: list = [r.stream]
        for k in range(max(4, cfg.effective_dim_cap) + 1):
            row.append(r.f[k] if r.f is not None and k < len(r.f) else "")
        row.append("" if r.betti_d_gf2 is None else r.betti_d_gf2)
        row.append("" if r.betti_d_q is None else r.betti_d_q)
        row.append("" if r.cp_count is None else r.cp_count)
        row.append("" if r.cp_induced is None else r.cp_induced)
        row.append("" if r.collapse_status is None else r.collapse_status)
        row.append("" if r.surviving is None else r.surviving)
        for i in range(1, max(cfg.d, 2)):
            row.append(r.max_face_degrees[i - 1] if i - 1 < len(r.max_face_degrees) else "")
        tmax = ""
        if r.torsion:
            divs = [d for ds in r.torsion.values() for d in ds]
            tmax = max(divs) if divs else 0
        row.append(tmax)
        row.append(f"{r.wall_ms:.3f}" if (cfg.timing and r.wall_ms is not None) else "")
        w.writerow(row)
    return buf.getvalue()


def result_to_json(result: ExperimentResult) -> str:
    cfg = asdict(result.config)
    cfg["torsion_degrees"] = list(result.config.torsion_degrees)
    # execution parameters, not experiment identity: results must be
    # byte-identical no matter how the trials were scheduled
    cfg.pop("workers", None)
    cfg.pop("timing", None)
    payload = {
        "config": cfg,
        "aggregates": result.aggregates,
        "version": result.version,
        "resolved_p": result.config.probability,
    }
    return json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n"


def write_result(result: ExperimentResult, out: str, fmt: str = "csv") -> list[str]:
    """Persist to `<out>.csv` / `<out>.json` (or both); returns paths written."""
    base = Path(out)
    if base.suffix in (".csv", ".json"):
        base = base.with_suffix("")
    written = []
    if fmt in ("csv", "both"):
        path = base.with_suffix(".csv")
        path.write_text(result_to_csv(result))
        written.append(str(path))
    if fmt in ("json", "both"):
        path = base.with_suffix(".json")
        path.write_text(result_to_json(result))
        written.append(str(path))
    return written


# ---------------------------------------------------------------------------
# Poisson goodness of fit


@dataclass(frozen=True)
class GofReport:
    sample_size: float
    empirical_mean: float
    empirical_var: float
    target_mean: float
    chi_square: float
    dof: int
    p_value: float
    tv_distance: float
    bins: tuple            # ((label, observed, expected), ...)


def poisson_gof(counts, mean: float, expected_floor: float = 5.0) -> GofReport:
    """Chi-square fit of a count histogram against Poisson(mean).

    `counts` is a histogram: counts[k] = number of samples with value k.
    Bins {0, 1, 2, >=3} start the statistic; any bin with expected count
    below the floor is merged rightward (the tail absorbs it), and a
    trailing under-floor tail merges left.
    """
    hist = np.asarray(counts, dtype=float)
    if hist.ndim != 1 or hist.size == 0:
        raise ValueError("counts must be a nonempty 1-d histogram")
    if mean < 0:
        raise ValueError("mean must be >= 0")
    total = float(hist.sum())
    ks = np.arange(hist.size)
    emp_mean = float((ks * hist).sum() / total) if total else 0.0
    emp_var = float((hist * (ks - emp_mean) ** 2).sum() / (total - 1)) if total > 1 else 0.0

    # observed mass in bins {0,1,2,>=3}
    obs = [float(hist[k]) if k < hist.size else 0.0 for k in range(3)]
    obs.append(float(hist[3:].sum()) if hist.size > 3 else 0.0)
    if mean == 0:
        pk = [1.0, 0.0, 0.0, 0.0]
    else:
        pk = [math.exp(-mean) * mean ** k / math.factorial(k) for k in range(3)]
        pk.append(max(1.0 - sum(pk), 0.0))
    exp = [total * q for q in pk]

    labels = ["0", "1", "2", ">=3"]
    i = 0
    while i < len(exp) - 1:
        if exp[i] < expected_floor:
            exp[i + 1] += exp[i]
            obs[i + 1] += obs[i]
            labels[i + 1] = labels[i] + "+" + labels[i + 1]
            del exp[i], obs[i], labels[i]
        else:
            i += 1
    while len(exp) > 1 and exp[-1] < expected_floor:
        exp[-2] += exp[-1]
        obs[-2] += obs[-1]
        labels[-2] = labels[-2] + "+" + labels[-1]
        del exp[-1], obs[-1], labels[-1]

    if len(exp) < 2:
        chi2, dof, pval = 0.0, 0, 1.0
    else:
        chi2 = float(sum((o - e) ** 2 / e for o, e in zip(obs, exp)))
        dof = len(exp) - 1
        pval = float(sstats.chi2.sf(chi2, dof))

    # total variation against the Poisson pmf over the observed support
    tv = 0.0
    if total:
        upper = hist.size
        tail = 1.0
        for k in range(upper):
            q = math.exp(-mean) * mean ** k / math.factorial(k) if mean > 0 else (1.0 if k == 0 else 0.0)
            tail -= q
            tv += abs(hist[k] / total - q)
        tv += abs(tail) if tail > 1e-15 else 0.0
        tv *= 0.5
    return GofReport(total, emp_mean, emp_var, float(mean), chi2, dof, pval, tv,
                     tuple(zip(labels, obs, exp)))


def counts_to_histogram(values) -> np.ndarray:
    values = np.asarray(list(values), dtype=int)
    if values.size == 0:
        return np.zeros(1)
    return np.bincount(values)


# ---------------------------------------------------------------------------
# threshold scan and torsion search


@dataclass(frozen=True)
class ScanRow:
    c: float
    trials: int
    frac_almost_collapsible: float | None
    frac_stuck: float | None
    mean_beta_d: float | None
    mean_cp_count: float | None
    mean_beta_scaled: float | None    # beta_d / n^((d+1)/2)
    frac_with_cycle: float | None
    annotation: str


@dataclass(frozen=True)
class ScanResult:
    config: ExperimentConfig
    rows: tuple[ScanRow, ...]


def threshold_scan(cfg: ExperimentConfig, c_grid) -> ScanResult:
    """Sweep c over a monotone grid, one block of trial streams per point."""
    grid = [float(c) for c in c_grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("c grid must be monotone nondecreasing")
    rows = []
    scale = cfg.n ** ((cfg.d + 1) / 2.0)
    consts = reference_constants(cfg.d)
    for i, c in enumerate(grid):
        sub = replace(cfg, c=c, p=None, alpha=None,
                      master_seed=cfg.master_seed + 7919 * i)
        res = run_experiment(sub)
        agg = res.aggregates
        frac_ac = agg.get("frac_almost_collapsed")
        below = agg.get("frac_collapsed_below_d")
        if frac_ac is not None and below is not None:
            frac_ac += below      # "almost d-collapsible" includes full collapse
        beta = agg.get("betti_d_q_mean")
        if beta is None:
            beta = agg.get("betti_d_gf2_mean")
        rows.append(ScanRow(
            c=c,
            trials=cfg.trials,
            frac_almost_collapsible=frac_ac,
            frac_stuck=agg.get("frac_stuck"),
            mean_beta_d=beta,
            mean_cp_count=agg.get("cp_count_mean"),
            mean_beta_scaled=None if beta is None else beta / scale,
            frac_with_cycle=agg.get("frac_with_cycle"),
            annotation=_scan_annotation(c, grid, consts),
        ))
    return ScanResult(cfg, tuple(rows))


def _scan_annotation(c: float, grid, consts) -> str:
    notes = []
    step = min((b - a for a, b in zip(grid, grid[1:]) if b > a), default=0.1)
    try:
        targets = [("gamma_d^(1/d)", consts.gamma_d ** (1.0 / consts.d)),
                   ("c_d^(1/d)", consts.c_d ** (1.0 / consts.d)),
                   ("gamma_d", consts.gamma_d), ("c_d", consts.c_d)]
    except ValueError:
        targets = []
    for name, val in targets:
        if abs(c - val) <= step / 2:
            notes.append(f"~{name}={val:.3f} (conjectured threshold constant)")
    return "; ".join(notes)


@dataclass(frozen=True)
class TorsionReport:
    config: ExperimentConfig
    degree: int
    per_trial: tuple           # (stream, divisors) pairs
    largest_divisor: int | None
    largest_at: dict | None    # {"n":…, "p":…, "stream":…}


def torsion_search(cfg: ExperimentConfig, k: int,
                   plant: SimplicialComplex | None = None) -> TorsionReport:
    """Per-trial torsion of H_k; emptiness is a legitimate outcome.

    `plant` appends a fixed complex on fresh labels to every trial,
    which turns the search into a recall test for the detector.
    """
    if k < 1:
        raise ValueError("torsion degree must be >= 1")
    per_trial = []
    best = None
    best_at = None
    for stream in range(cfg.trials):
        rng = RngSpec(cfg.master_seed, stream)
        p = cfg.probability
        if cfg.model == FLAG:
            x = clique_complex(sample_gnp(cfg.n, p, rng),
                               max(cfg.effective_dim_cap, k + 1))
        else:
            x = sample_linial_meshulam(cfg.n, cfg.d, p, rng)
        if plant is not None:
            x = disjoint_union(x, plant)
        _, divisors = homology_with_torsion(x, k)
        per_trial.append((stream, tuple(divisors)))
        for dv in divisors:
            if best is None or dv > best:
                best = dv
                best_at = {"n": cfg.n, "p": p, "stream": stream}
    return TorsionReport(cfg, k, tuple(per_trial), best, best_at)


def disjoint_union(x: SimplicialComplex, y: SimplicialComplex) -> SimplicialComplex:
    """x plus a shifted copy of y on fresh vertex labels."""
    shift = x.n
    top = max(len(x.faces), len(y.faces))
    layers = []
    for kk in range(top):
        fx = x.faces_of_dim(kk)
        fy = {tuple(v + shift for v in f) for f in y.faces_of_dim(kk)}
        layers.append(frozenset(fx) | frozenset(fy))
    cap = None
    if x.dim_cap is not None and y.dim_cap is not None:
        cap = max(x.dim_cap, y.dim_cap)
    return SimplicialComplex(x.n + y.n, layers, cap)
