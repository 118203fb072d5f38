"""Command-line sweep runner.

Reads a scenario + sweep from a key=value config file or a named preset,
evaluates the requested metrics with the requested evaluators over one axis,
and emits CSV (schema: axis_name, axis_value, metric, evaluator, value,
std_error, n_samples, error_flag).  Output is byte-stable for fixed inputs
and seed.  Exit codes: 0 success, 2 configuration error, 3 at least one
cell failed to evaluate (failed cells carry an error flag and the sweep
continues).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import montecarlo, secrecy
from .channels import DggLink, EtaMuLink, RngStream, TURBULENCE_PRESETS
from .errors import ConfigError, RfsoError
from .presets import AXES, EVALUATORS, METRICS, SweepSpec, figure_preset
from .secrecy import Scenario1Config, Scenario2Config

__all__ = ["ResultRow", "load_config", "run_sweep", "main"]

CSV_HEADER = ("axis_name,axis_value,metric,evaluator,value,"
              "std_error,n_samples,error_flag")


@dataclass(frozen=True)
class ResultRow:
    axis_name: str
    axis_value: float
    metric: str
    evaluator: str
    value: float | None
    std_error: float | None
    n_samples: int | None
    error_flag: str = ""

    def to_csv(self) -> str:
        return ",".join([
            self.axis_name,
            f"{self.axis_value:.12g}",
            self.metric,
            self.evaluator,
            "" if self.value is None else f"{self.value:.12g}",
            "" if self.std_error is None else f"{self.std_error:.6g}",
            "" if self.n_samples is None else str(self.n_samples),
            self.error_flag,
        ])


# ---------------------------------------------------------------------------
# config file parsing
# ---------------------------------------------------------------------------

_SCENARIO_KEYS = {
    "scenario", "eta0", "mu0", "phi_sr_db", "eta_e", "mu_e", "phi_se_db",
    "turbulence", "a1", "a2", "b1", "b2", "omega1", "omega2", "lambda1",
    "lambda2", "eps", "s0", "Ud_db", "se", "Ue_db", "target_rate",
}
_SWEEP_KEYS = {
    "axis", "start", "stop", "points", "metrics", "evaluators",
    "mc_samples", "seed",
}
_DGG_EXPLICIT = ("a1", "a2", "b1", "b2", "omega1", "omega2",
                 "lambda1", "lambda2")


def _parse_kv(path: str):
    sections = {"scenario": {}, "sweep": {}}
    current = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                name = line[1:-1].strip().lower()
                if name not in sections:
                    raise ConfigError(f"{path}:{lineno}: unknown section "
                                      f"[{name}]")
                current = name
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            if current is None:
                raise ConfigError(f"{path}:{lineno}: key outside a "
                                  "[scenario] or [sweep] section")
            key, value = (s.strip() for s in line.split("=", 1))
            allowed = _SCENARIO_KEYS if current == "scenario" else _SWEEP_KEYS
            if key not in allowed:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r} in "
                                  f"[{current}]")
            if key in sections[current]:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            sections[current][key] = value
    return sections["scenario"], sections["sweep"]


def _need(d: dict, key: str, conv, what: str):
    if key not in d:
        raise ConfigError(f"missing required key {key!r} for {what}")
    try:
        return conv(d[key])
    except ValueError as e:
        raise ConfigError(f"key {key!r}: {e}") from None


def _db(x: float) -> float:
    return 10.0 ** (x / 10.0)


def _build_scenario(sc: dict):
    which = _need(sc, "scenario", int, "any scenario")
    if which not in (1, 2):
        raise ConfigError("scenario must be 1 or 2")
    eta0 = _need(sc, "eta0", float, "the main RF link")
    mu0 = _need(sc, "mu0", int, "the main RF link")
    phi_sr = _db(_need(sc, "phi_sr_db", float, "the main RF link"))
    rate = float(sc.get("target_rate", 0.5))

    if "turbulence" in sc:
        if any(k in sc for k in _DGG_EXPLICIT):
            raise ConfigError("give either turbulence = st|mt|wt or the "
                              "explicit DGG parameters, not both")
        name = sc["turbulence"].lower()
        if name not in TURBULENCE_PRESETS:
            raise ConfigError(f"unknown turbulence preset {name!r}")
        dgg_kw = dict(TURBULENCE_PRESETS[name])
    else:
        missing = [k for k in _DGG_EXPLICIT if k not in sc]
        if missing:
            raise ConfigError("explicit DGG parameters incomplete; missing "
                              + ", ".join(missing))
        dgg_kw = {k: (int(sc[k]) if k.startswith("lambda") else float(sc[k]))
                  for k in _DGG_EXPLICIT}
    eps = _need(sc, "eps", float, "the FSO link")
    s0 = _need(sc, "s0", int, "the FSO link")
    ud = _db(_need(sc, "Ud_db", float, "the FSO link"))
    fso_main = DggLink(eps=eps, detection=s0, electrical_snr=ud, **dgg_kw)
    rf_main = EtaMuLink(eta0, mu0, phi_sr)

    if which == 1:
        for k in ("se", "Ue_db"):
            if k in sc:
                raise ConfigError(f"key {k!r} belongs to scenario 2")
        eta_e = _need(sc, "eta_e", float, "the RF eavesdropper")
        mu_e = _need(sc, "mu_e", int, "the RF eavesdropper")
        phi_se = _db(_need(sc, "phi_se_db", float, "the RF eavesdropper"))
        return Scenario1Config(rf_main=rf_main,
                               rf_eve=EtaMuLink(eta_e, mu_e, phi_se),
                               fso_main=fso_main, target_rate=rate)
    for k in ("eta_e", "mu_e", "phi_se_db"):
        if k in sc:
            raise ConfigError(f"key {k!r} belongs to scenario 1")
    se = _need(sc, "se", int, "the FSO eavesdropper")
    ue = _db(_need(sc, "Ue_db", float, "the FSO eavesdropper"))
    fso_eve = DggLink(eps=eps, detection=se, electrical_snr=ue, **dgg_kw)
    return Scenario2Config(rf_main=rf_main, fso_main=fso_main,
                           fso_eve=fso_eve, target_rate=rate)


def _build_sweep(sw: dict) -> SweepSpec:
    kwargs = dict(
        axis=_need(sw, "axis", str, "the sweep"),
        start=_need(sw, "start", float, "the sweep"),
        stop=_need(sw, "stop", float, "the sweep"),
        points=_need(sw, "points", int, "the sweep"),
    )
    if "metrics" in sw:
        kwargs["metrics"] = tuple(m.strip() for m in sw["metrics"].split(",")
                                  if m.strip())
    if "evaluators" in sw:
        kwargs["evaluators"] = tuple(e.strip()
                                     for e in sw["evaluators"].split(",")
                                     if e.strip())
    if "mc_samples" in sw:
        kwargs["mc_samples"] = int(sw["mc_samples"])
    if "seed" in sw:
        kwargs["seed"] = int(sw["seed"])
    return SweepSpec(**kwargs)


def load_config(path: str):
    """Parse a config file into (scenario config, sweep spec); unknown keys
    are errors."""
    sc, sw = _parse_kv(path)
    cfg = _build_scenario(sc)
    sweep = _build_sweep(sw)
    _validate_compat(cfg, sweep)
    return cfg, sweep


def _validate_compat(cfg, sweep: SweepSpec):
    is1 = isinstance(cfg, Scenario1Config)
    for m in sweep.metrics:
        if is1 and m in ("sop2", "spsc2"):
            raise ConfigError(f"metric {m!r} needs a scenario-2 config")
        if not is1 and m in ("sop1", "spsc1"):
            raise ConfigError(f"metric {m!r} needs a scenario-1 config")
    if is1 and sweep.axis == "Ue_db":
        raise ConfigError("axis Ue_db needs a scenario-2 config")
    if not is1 and sweep.axis == "phi_se_db":
        raise ConfigError("axis phi_se_db needs a scenario-1 config")
    if not any(_cell_supported(m, e) for m in sweep.metrics
               for e in sweep.evaluators):
        raise ConfigError("no valid (metric, evaluator) combination: "
                          "asymptotic/exact_quadrature apply to SOP metrics")


# ---------------------------------------------------------------------------
# sweep evaluation
# ---------------------------------------------------------------------------

def _with_axis(cfg, axis: str, value: float):
    if axis == "phi_sr_db":
        return replace(cfg, rf_main=cfg.rf_main.with_avg_snr(_db(value)))
    if axis == "phi_se_db":
        return replace(cfg, rf_eve=cfg.rf_eve.with_avg_snr(_db(value)))
    if axis == "Ud_db":
        return replace(cfg,
                       fso_main=cfg.fso_main.with_electrical_snr(_db(value)))
    if axis == "Ue_db":
        return replace(cfg,
                       fso_eve=cfg.fso_eve.with_electrical_snr(_db(value)))
    if axis == "target_rate":
        return replace(cfg, target_rate=float(value))
    if axis == "eps":
        def rebuild(link: DggLink) -> DggLink:
            return DggLink(link.a1, link.a2, link.b1, link.b2, link.omega1,
                           link.omega2, link.lambda1, link.lambda2,
                           float(value), link.detection, link.electrical_snr)
        if isinstance(cfg, Scenario2Config):
            return replace(cfg, fso_main=rebuild(cfg.fso_main),
                           fso_eve=rebuild(cfg.fso_eve))
        return replace(cfg, fso_main=rebuild(cfg.fso_main))
    raise ConfigError(f"unknown axis {axis!r}")


def _cell_supported(metric: str, evaluator: str) -> bool:
    if evaluator in ("asymptotic", "exact_quadrature"):
        return metric in ("sop1", "sop2")
    return True


_CLOSED = {"sop1": secrecy.sop1_lower, "sop2": secrecy.sop2_lower,
           "spsc1": secrecy.spsc1, "spsc2": secrecy.spsc2}
_ASYM = {"sop1": secrecy.sop1_asymptotic, "sop2": secrecy.sop2_asymptotic}
_QUAD = {"sop1": secrecy.sop1_exact_quadrature,
         "sop2": secrecy.sop2_exact_quadrature}


def _evaluate_cell(cfg, metric: str, evaluator: str, sweep: SweepSpec,
                   cell_index: int):
    """(value, std_error, n_samples); deterministic per (sweep.seed, index)."""
    if evaluator == "closed":
        return _CLOSED[metric](cfg), None, None
    if evaluator == "asymptotic":
        return _ASYM[metric](cfg), None, None
    if evaluator == "exact_quadrature":
        return _QUAD[metric](cfg), None, None
    rng = RngStream(sweep.seed, stream_id=cell_index)
    n = sweep.mc_samples
    # the MC evaluator estimates the same quantity the closed form computes:
    # lower-bound event for SOP metrics, the crossing event for SPSC
    if metric == "sop1":
        est = montecarlo.estimate_sop1(cfg, n, rng)
    elif metric == "sop2":
        est = montecarlo.estimate_sop2(cfg, n, rng)
    elif metric == "spsc1":
        est = montecarlo.estimate_spsc1(cfg, n, rng)
    else:
        est = montecarlo.estimate_spsc2(cfg, n, rng)
    return est.value, est.std_error, est.n_samples


def run_sweep(cfg, sweep: SweepSpec, jobs: int = 1):
    """Evaluate the sweep grid; returns (rows, any_failure).

    Rows come out in deterministic (axis point, metric, evaluator) order
    regardless of evaluation order; failed cells carry an error flag instead
    of aborting the sweep.
    """
    _validate_compat(cfg, sweep)
    values = np.linspace(sweep.start, sweep.stop, sweep.points)
    cells = []
    for v in values:
        for metric in sweep.metrics:
            for evaluator in sweep.evaluators:
                if _cell_supported(metric, evaluator):
                    cells.append((len(cells), float(v), metric, evaluator))

    def work(cell):
        index, v, metric, evaluator = cell
        point_cfg = _with_axis(cfg, sweep.axis, v)
        try:
            value, se, ns = _evaluate_cell(point_cfg, metric, evaluator,
                                           sweep, index)
            return ResultRow(sweep.axis, v, metric, evaluator, value, se, ns)
        except RfsoError as exc:
            return ResultRow(sweep.axis, v, metric, evaluator, None, None,
                             None, error_flag=type(exc).__name__)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(work, cells))
    else:
        rows = [work(c) for c in cells]
    return rows, any(r.error_flag for r in rows)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rfso-secrecy",
        description="Sweep secrecy metrics of a dual-hop RF-FSO link.")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--preset",
                   help="named preset (fig1..fig10, st, mt, wt, lognormal)")
    p.add_argument("--axis", choices=AXES)
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--metrics", help="comma list: " + ",".join(METRICS))
    p.add_argument("--evaluators", help="comma list: " + ",".join(EVALUATORS))
    p.add_argument("--mc-samples", type=int, dest="mc_samples")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="-", help="output path or - for stdout")
    return p


def _override_sweep(sweep: SweepSpec, args) -> SweepSpec:
    kw = {}
    if args.axis is not None:
        kw["axis"] = args.axis
    if args.start is not None:
        kw["start"] = args.start
    if args.stop is not None:
        kw["stop"] = args.stop
    if args.points is not None:
        kw["points"] = args.points
    if args.metrics is not None:
        kw["metrics"] = tuple(m.strip() for m in args.metrics.split(",")
                              if m.strip())
    if args.evaluators is not None:
        kw["evaluators"] = tuple(e.strip() for e in args.evaluators.split(",")
                                 if e.strip())
    if args.mc_samples is not None:
        kw["mc_samples"] = args.mc_samples
    if args.seed is not None:
        kw["seed"] = args.seed
    return replace(sweep, **kw) if kw else sweep


def main(argv: Sequence[str] | None = None) -> int:
    args = _make_parser().parse_args(argv)
    try:
        if (args.config is None) == (args.preset is None):
            raise ConfigError("exactly one of --config or --preset required")
        if args.config is not None:
            cfg, sweep = load_config(args.config)
            curves = (("config", cfg),)
        else:
            preset = figure_preset(args.preset)
            curves, sweep = preset.curves, preset.sweep
        sweep = _override_sweep(sweep, args)
        for _, cfg in curves:
            _validate_compat(cfg, sweep)
    except (RfsoError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    lines = [CSV_HEADER]
    failed = False
    for label, cfg in curves:
        if len(curves) > 1:
            lines.append(f"# curve: {label}")
        rows, bad = run_sweep(cfg, sweep, jobs=args.jobs)
        failed = failed or bad
        lines.extend(r.to_csv() for r in rows)
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 3 if failed else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
