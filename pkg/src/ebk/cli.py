"""Command line experiment runner.

    ebk <task> --config <file.json> [--out <dir>] [--threads N]

Tasks: dims, decompose, density, scan, fit, ladder, verify.  Each run writes
``<task>.csv`` (one value per row, fully labelled) and ``<task>.json`` (a
summary with sorted keys) into ``--out``.  Both files depend only on the
config, so re-running gives identical bytes.

Exit codes: 0 success, 1 a verification tolerance failed, 2 invalid config,
3 numerical breakdown.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from ebk import asymptotics, kernels, sections, verification
from ebk.models import (ActionSpec, Locus, ModelManifold, Point, check_compatible, check_level, locus_distance,
                        moment_map, named_point)

TASKS = ("dims", "decompose", "density", "scan", "fit", "ladder", "verify")
SCHEMA = 1
COLUMNS = ("model", "action", "k", "component", "point_id", "quantity", "value")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_BREAKDOWN = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    task: str
    model: ModelManifold | None = None
    action: ActionSpec | None = None
    k_list: list = field(default_factory=list)
    weight: object = None
    ladder: object = None
    points: list = field(default_factory=list)  # (point_id, Point)
    quantity: str = "density"
    window_fraction: float = 0.5
    tolerances: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    @property
    def component_label(self) -> str:
        if self.ladder is not None:
            return f"ladder({_fmt_weight(self.ladder)})"
        if self.weight is not None:
            return f"weight({_fmt_weight(self.weight)})"
        return "full"


def _fmt_weight(w) -> str:
    return ",".join(str(x) for x in w) if isinstance(w, (tuple, list)) else str(w)


def _fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**6)
    return Fraction(x)


def _parse_action(entry: dict, model: ModelManifold) -> ActionSpec:
    group = entry.get("group")
    if group == "su2":
        action = ActionSpec.su2_diagonal()
    elif group == "circle":
        shift = _fraction(entry.get("shift", 0))
        action = ActionSpec.circle(tuple(int(w) for w in entry["weights"]), shift)
    elif group == "torus":
        W = [tuple(int(x) for x in row) for row in entry["weights"]]
        shift = entry.get("shift")
        action = ActionSpec.torus(W, None if shift is None else [_fraction(b) for b in shift])
    else:
        raise ConfigError(f"action.group must be su2, circle or torus, got {group!r}")
    check_compatible(model, action)
    return action


def _parse_complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        re, im = x
        return complex(float(re), float(im))
    return complex(float(x))


def _parse_points(items, n: int) -> list:
    out = []
    for j, item in enumerate(items):
        if isinstance(item, str):
            out.append((item, named_point(item, n)))
        elif isinstance(item, dict):
            pid = str(item.get("id", f"p{j}"))
            if "name" in item:
                out.append((pid, named_point(item["name"], n)))
            else:
                pairs = [tuple(_parse_complex(c) for c in pair) for pair in item["coords"]]
                out.append((pid, Point.from_homogeneous(*pairs)))
        else:
            pairs = [tuple(_parse_complex(c) for c in pair) for pair in item]
            out.append((f"p{j}", Point.from_homogeneous(*pairs)))
    return out


def _parse_levels(raw: dict) -> list:
    if "k_list" in raw:
        ks = raw["k_list"]
    elif "k_range" in raw:
        r = raw["k_range"]
        if len(r) not in (2, 3):
            raise ConfigError("k_range is [start, stop] or [start, stop, step], stop inclusive")
        start, stop, step = (list(r) + [1])[:3]
        if step <= 0:
            raise ConfigError("k_range step must be positive")
        ks = list(range(start, stop + 1, step))
    else:
        raise ConfigError("config needs k_list or k_range")
    if not ks:
        raise ConfigError("empty list of levels")
    if any(not isinstance(k, int) or isinstance(k, bool) or k < 0 for k in ks):
        raise ConfigError("levels must be nonnegative integers")
    if sorted(set(ks)) != list(ks):
        raise ConfigError("levels must be strictly increasing")
    return list(ks)


def _weight_value(x, action: ActionSpec):
    if x is None:
        return None
    if action.is_su2:
        return int(x)
    return tuple(int(v) for v in (x if isinstance(x, (list, tuple)) else [x]))


def parse_config(raw: dict, task: str) -> ExperimentConfig:
    """Validate a config dictionary; raises :class:`ConfigError`."""
    if task not in TASKS:
        raise ConfigError(f"unknown task {task!r}")
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    if raw.get("schema") != SCHEMA:
        raise ConfigError(f"config must declare \"schema\": {SCHEMA}")
    cfg = ExperimentConfig(task=task, raw=raw, tolerances=dict(raw.get("tolerances", {})))
    if task == "verify":
        return cfg
    try:
        model_spec = raw["model"]
        cfg.model = ModelManifold(tuple(int(a) for a in model_spec["polarization"]))
        cfg.action = _parse_action(raw["action"], cfg.model)
        cfg.k_list = _parse_levels(raw)
        for k in cfg.k_list:
            check_level(cfg.action, k)
        cfg.weight = _weight_value(raw.get("weight"), cfg.action)
        cfg.ladder = _weight_value(raw.get("ladder"), cfg.action)
        cfg.points = _parse_points(raw.get("points", []), cfg.model.n)
        cfg.quantity = raw.get("quantity", "density")
        cfg.window_fraction = float(raw.get("window_fraction", 0.5))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid config: {exc!r}") from exc
    if cfg.quantity not in ("density", "multiplicity"):
        raise ConfigError("quantity must be density or multiplicity")
    if task == "ladder" and cfg.ladder is None:
        raise ConfigError("task ladder needs a \"ladder\" generator")
    if task in ("density", "scan", "ladder") or (task == "fit" and cfg.quantity == "density"):
        if not cfg.points:
            raise ConfigError(f"task {task} needs at least one point")
    if task == "fit" and cfg.quantity == "multiplicity" and cfg.weight is None:
        raise ConfigError("multiplicity fits need a weight")
    if task in ("scan", "fit", "ladder") and len(cfg.k_list) < 2:
        raise ConfigError(f"task {task} needs at least two levels")
    if not 0 < cfg.window_fraction <= 1:
        raise ConfigError("window_fraction must be in (0, 1]")
    return cfg


def load_config(path, task: str) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    return parse_config(raw, task)


# --- pipelines ---------------------------------------------------------------

def _sweep(fn, ks, threads: int) -> list:
    """``[fn(k) for k in ks]``, concurrently; results stay in k-order."""
    if threads <= 1 or len(ks) == 1:
        return [fn(k) for k in ks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, ks))


def _component(cfg: ExperimentConfig, space):
    if cfg.ladder is not None:
        return sections.ladder_subspace(space, cfg.ladder)
    if cfg.weight is not None:
        found = sections.isotypic_decompose(space, weights=[cfg.weight])
        return found[0] if found else sections.empty_component(space, cfg.weight)
    return sections.full_component(space)


def _densities_at(cfg: ExperimentConfig, k: int) -> list:
    space = sections.build_space(cfg.model, k, cfg.action)
    comp = _component(cfg, space)
    vals = kernels.density_values(space, comp, [p for _, p in cfg.points])
    return [float(v) for v in vals]


def _row(cfg, k, component, point_id, quantity, value):
    return (cfg.model.label(), cfg.action.describe(), k, component, point_id, quantity, value)


def _prediction(cfg, p, quantity="density"):
    target = asymptotics.Ladder(cfg.ladder) if cfg.ladder is not None else cfg.weight
    if target is None:
        return None
    try:
        pred = asymptotics.predict_leading(cfg.model, cfg.action, target, p, quantity=quantity)
    except ValueError as exc:
        return {"applicable": False, "reason": str(exc)}
    return {"applicable": True, "exponent": pred.exponent, "coefficient": pred.coefficient,
            "statement": pred.statement}


def _fit_summary(series: asymptotics.SeriesSample, window: float) -> dict:
    live = series.nonzero()
    if len(live) < 4:
        return {"fitted": False, "nonzero_levels": len(live)}
    fit = asymptotics.fit_power_law(live, window)
    return {"fitted": True, "exponent": fit.exponent, "richardson_exponent": fit.richardson_exponent,
            "coefficient": fit.coefficient, "residual_rms": fit.residual_rms}


def _tolerance_flags(cfg: ExperimentConfig, fit: dict) -> dict:
    """Compare a fit against optional ``expected_exponent`` / ``exponent_tol``
    and ``expected_coefficient`` / ``coefficient_rtol`` from the config."""
    tol = cfg.tolerances
    flags = {}
    if "expected_exponent" in tol and fit.get("fitted"):
        flags["exponent"] = bool(abs(fit["richardson_exponent"] - tol["expected_exponent"])
                                 <= tol.get("exponent_tol", 0.05))
    if "expected_coefficient" in tol and fit.get("fitted"):
        rel = abs(fit["coefficient"] / tol["expected_coefficient"] - 1)
        flags["coefficient"] = bool(rel <= tol.get("coefficient_rtol", 0.02))
    return flags


def run_dims(cfg, threads):
    def one(k):
        return k, sections.weight_multiplicities(sections.build_space(cfg.model, k, cfg.action))

    rows, totals = [], {}
    su2 = cfg.action.is_su2
    for k, table in _sweep(one, cfg.k_list, threads):
        total = 0
        for w in sorted(table):
            mult = table[w]
            irrep = (w + 1) if su2 else 1
            comp = f"weight({_fmt_weight(w)})"
            rows.append(_row(cfg, k, comp, "", "mult", mult))
            rows.append(_row(cfg, k, comp, "", "dim", mult * irrep))
            total += mult * irrep
        rows.append(_row(cfg, k, "full", "", "dim", total))
        totals[str(k)] = total
    return rows, {"total_dims": totals}, True


def run_decompose(cfg, threads):
    def one(k):
        space = sections.build_space(cfg.model, k, cfg.action)
        wanted = None if cfg.weight is None else [cfg.weight]
        comps = sections.isotypic_decompose(space, weights=wanted)
        out = []
        for c in comps:
            Q = c.frame_coeffs()
            Q = Q.toarray() if hasattr(Q, "toarray") else np.asarray(Q)
            err = float(np.max(np.abs(Q.conj().T @ Q - np.eye(Q.shape[1])))) if c.ncols else 0.0
            out.append((c.weight, c.multiplicity, c.irrep_dim, c.ncols, err))
        return k, space.dim, out

    rows, summary, ok = [], {}, True
    for k, dim, comps in _sweep(one, cfg.k_list, threads):
        total = 0
        for w, mult, irrep, ncols, err in comps:
            comp = f"weight({_fmt_weight(w)})"
            rows.append(_row(cfg, k, comp, "", "mult", mult))
            rows.append(_row(cfg, k, comp, "", "irrep_dim", irrep))
            rows.append(_row(cfg, k, comp, "", "dim", ncols))
            rows.append(_row(cfg, k, comp, "", "orthonormality_error", err))
            total += ncols
        complete = cfg.weight is not None or total == dim
        ok &= complete
        summary[str(k)] = {"space_dim": dim, "components": len(comps), "complete": complete}
    return rows, {"levels": summary}, ok


def run_density(cfg, threads):
    table = _sweep(lambda k: _densities_at(cfg, k), cfg.k_list, threads)
    rows = []
    for k, vals in zip(cfg.k_list, table):
        for (pid, _), v in zip(cfg.points, vals):
            rows.append(_row(cfg, k, cfg.component_label, pid, "density", v))
    loci = {}
    for pid, p in cfg.points:
        entry = {"moment": [float(x) for x in _moment(cfg, p)]}
        rep = locus_distance(cfg.model, cfg.action, p, Locus.zero_level())
        entry["zero_level_distance"] = rep.distance
        loci[pid] = entry
    return rows, {"points": loci}, True, table


def _moment(cfg, p):
    return np.atleast_1d(moment_map(cfg.model, cfg.action, p))


def _series_summary(cfg, table, classify: bool):
    out, flags_ok = {}, True
    for j, (pid, p) in enumerate(cfg.points):
        series = asymptotics.SeriesSample(cfg.k_list, [vals[j] for vals in table])
        entry = {"fit": _fit_summary(series, cfg.window_fraction), "prediction": _prediction(cfg, p)}
        if classify and len(series) >= 6:
            v = asymptotics.classify_decay(series)
            entry["decay"] = {"kind": v.kind, "value": v.value, "low_confidence": v.low_confidence,
                              "identically_zero": v.identically_zero, "zero_levels": list(v.zero_levels)}
        pred = entry["prediction"]
        # tolerances only bind where a growth law is predicted
        flags = _tolerance_flags(cfg, entry["fit"]) if pred is None or pred["applicable"] else {}
        entry["passed"] = flags
        flags_ok &= all(flags.values())
        out[pid] = entry
    return out, flags_ok


def run_scan(cfg, threads):
    rows, summary, _, table = run_density(cfg, threads)
    series, ok = _series_summary(cfg, table, classify=True)
    summary["series"] = series
    return rows, summary, ok


def run_fit(cfg, threads):
    if cfg.quantity == "multiplicity":
        ms = asymptotics.multiplicity_series(cfg.model, cfg.action, cfg.weight, cfg.k_list)
        rows = []
        comp = cfg.component_label
        for k, d, mu, mu0, r in zip(cfg.k_list, ms.dims.values, ms.multiplicities,
                                    ms.trivial_multiplicities, ms.ratios):
            rows.append(_row(cfg, k, comp, "", "dim", float(d)))
            rows.append(_row(cfg, k, comp, "", "mult", mu))
            rows.append(_row(cfg, k, "weight(trivial)", "", "mult", mu0))
            rows.append(_row(cfg, k, comp, "", "ratio", "" if r is None else r))
        fit = _fit_summary(ms.dims, cfg.window_fraction)
        flags = _tolerance_flags(cfg, fit)
        summary = {"fit": fit, "prediction": _prediction(cfg, None, "multiplicity"), "passed": flags,
                   "ratio_defined": any(r is not None for r in ms.ratios)}
        return rows, summary, all(flags.values())
    rows, summary, _, table = run_density(cfg, threads)
    series, ok = _series_summary(cfg, table, classify=False)
    summary["series"] = series
    return rows, summary, ok


def run_ladder(cfg, threads):
    return run_scan(cfg, threads)


def run_verify(cfg, threads):
    rows, summary, ok = [], {}, True
    for result in verification.run_all():
        print(result.line, flush=True)
        rows.append(("", "", "", f"criterion({result.number})", "", "passed", int(result.passed)))
        summary[str(result.number)] = {"name": result.name, "passed": result.passed}
        ok &= result.passed
    return rows, {"criteria": summary, "all_passed": ok}, ok


RUNNERS = {
    "dims": run_dims,
    "decompose": run_decompose,
    "density": lambda cfg, threads: run_density(cfg, threads)[:3],
    "scan": run_scan,
    "fit": run_fit,
    "ladder": run_ladder,
    "verify": run_verify,
}


# --- output ------------------------------------------------------------------

def _fmt_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, Fraction):
        return str(x)
    return x


def write_outputs(out_dir: Path, task: str, rows, summary: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / f"{task}.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow([_fmt_value(v) for v in row])
    text = json.dumps(_jsonable(summary), sort_keys=True, indent=2)
    (out_dir / f"{task}.json").write_text(text + "\n")


def run(cfg: ExperimentConfig, out_dir, threads: int = 1) -> int:
    try:
        rows, summary, ok = RUNNERS[cfg.task](cfg, threads)
    except sections.NumericalBreakdown as exc:
        print(f"numerical breakdown: {exc}", file=sys.stderr)
        return EXIT_BREAKDOWN
    summary = {"task": cfg.task, "config": cfg.raw, "result": summary, "passed": bool(ok)}
    write_outputs(Path(out_dir), cfg.task, rows, summary)
    return EXIT_OK if ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ebk", description="Equivariant Bergman density experiments.")
    parser.add_argument("task", choices=TASKS)
    parser.add_argument("--config", help="JSON experiment config (optional for verify)")
    parser.add_argument("--out", default=".", help="output directory (default: current)")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for k-sweeps")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("--threads must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.config is None:
            if args.task != "verify":
                raise ConfigError("--config is required")
            cfg = parse_config({"schema": SCHEMA}, "verify")
        else:
            cfg = load_config(args.config, args.task)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg, args.out, args.threads)


if __name__ == "__main__":
    sys.exit(main())
