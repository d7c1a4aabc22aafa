"""Batch command-line front end.

Commands: fit, compare, lrtest, sample, tabulate, hazard, check.  Reports go
to stdout as JSON (``schema_version`` "1"), an aligned text table, or CSV
for the grid and sample commands.  Diagnostics go to stderr.

Exit codes: 0 success, 1 usage error, 2 data error, 3 convergence failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import audit, datasets, inference, lifetime, sampling
from .core import DomainError, LocScaleParams, locscale_cdf, locscale_pdf

SCHEMA_VERSION = "1"
DEFAULT_SEED = sampling.SampleConfig.__dataclass_fields__["seed"].default
MAX_GRID_POINTS = 10_000_000

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CONVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class ConvergenceFailure(Exception):
    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; 2 is reserved for data errors here
    def error(self, message):
        raise UsageError(message)


# -- serialization ---------------------------------------------------------------

def _plain(x):
    """Convert numpy scalars and arrays to JSON-ready values; non-finite floats become None."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def _num(x) -> str:
    # repr gives the shortest string that round-trips, so tables match JSON exactly
    if x is None:
        return "nan"
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [[_num(v) if not isinstance(v, str) else v for v in row] for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(line.rstrip() for line in lines)


def _keyvals(pairs: list[tuple[str, object]]) -> list[list]:
    return [[k, v] for k, v in pairs]


def _flatten(prefix: str, obj) -> list[tuple[str, object]]:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out += _flatten(f"{prefix}.{k}" if prefix else str(k), v)
        return out
    if isinstance(obj, list) and obj and isinstance(obj[0], list):
        return [(f"{prefix}[{i}][{j}]", v) for i, row in enumerate(obj) for j, v in enumerate(row)]
    if isinstance(obj, list):
        return [(f"{prefix}[{i}]", v) for i, v in enumerate(obj)]
    return [(prefix, obj)]


def _report(command: str, inputs: dict, results, findings=()) -> dict:
    return _plain({"schema_version": SCHEMA_VERSION, "command": command, "inputs": inputs,
                   "results": results, "findings": list(findings)})


# -- argument helpers -----------------------------------------------------------------

def _resolve_data(arg: str) -> Path:
    path = Path(arg)
    if path.is_file():
        return path
    stem = path.name[:-4] if path.name.endswith(".csv") else path.name
    if path.parent == Path(".") and stem in datasets.BUNDLED:
        bundled = datasets.bundled_path(stem)
        if bundled.is_file():
            return bundled
        raise datasets.DataError(
            f"{arg}: not found, and bundled dataset {stem!r} is not installed; "
            f"see scripts/fetch_datasets.py")
    raise datasets.DataError(f"{arg}: no such file")


def _load(args) -> tuple[inference.Dataset, dict]:
    path = _resolve_data(args.data)
    d = datasets.ingest_csv(path, column=args.column, name=Path(args.data).stem)
    return d, {"data": str(path), "column": args.column, "n": d.n}


def _grid(start: float, stop: float, step: float) -> np.ndarray:
    for name, v in (("--from", start), ("--to", stop), ("--step", step)):
        if not math.isfinite(v):
            raise UsageError(f"{name} must be finite")
    if step <= 0:
        raise UsageError("--step must be positive")
    if start > stop:
        raise UsageError("--from must not exceed --to")
    count = int(math.floor((stop - start) / step * (1 + 1e-12) + 1e-9)) + 1
    if count > MAX_GRID_POINTS:
        raise UsageError(f"grid has {count} points; the limit is {MAX_GRID_POINTS}")
    return start + step * np.arange(count)


def _params(args) -> LocScaleParams:
    try:
        return LocScaleParams(args.alpha, args.mu, args.sigma)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _csv_or_table(fmt: str, headers: list[str], columns: list[np.ndarray]) -> str:
    rows = [[float(c[i]) for c in columns] for i in range(len(columns[0]))]
    if fmt == "table":
        return _table(headers, rows)
    return "\n".join([",".join(headers)] + [",".join(repr(v) for v in r) for r in rows])


# -- commands -----------------------------------------------------------------------

def cmd_fit(args) -> tuple[dict, str]:
    if args.method == "mom" and args.model != "basn2":
        raise UsageError("--method mom is only available with --model basn2")
    d, inputs = _load(args)
    inputs.update(model=args.model, method=args.method)
    fit = inference.fit_model(d, args.model, args.method)
    results = fit.to_dict()
    report = _report("fit", inputs, results)
    if not fit.converged:
        raise ConvergenceFailure(f"{args.model} fit did not converge", report)
    flat = [(k, v) for k, v in _flatten("", report["results"]) if not k.startswith("details")]
    return report, _table(["field", "value"], _keyvals(flat))


def cmd_compare(args) -> tuple[dict, str]:
    models = [m.strip() for m in args.models.split(",") if m.strip()]
    unknown = [m for m in models if m not in inference.MODELS]
    if not models or unknown:
        raise UsageError(f"unknown model(s) {unknown}; choose from {', '.join(inference.MODELS)}")
    if len(set(models)) != len(models):
        raise UsageError("--models lists a model twice")
    d, inputs = _load(args)
    inputs["models"] = models
    rep = inference.compare_models(d, models)
    report = _report("compare", inputs, rep.to_dict())
    rows = []
    for r in report["results"]["rows"]:
        if "error" in r:
            rows.append([r["model"], "failed", "", "", "", r["error"]])
        else:
            params = " ".join(f"{k}={_num(v)}" for k, v in r["params"].items())
            rows.append([r["model"], r["loglik"], r["aic"], r["bic"], r["k"], params])
    return report, _table(["model", "loglik", "aic", "bic", "k", "params"], rows)


def cmd_lrtest(args) -> tuple[dict, str]:
    d, inputs = _load(args)
    try:
        res = inference.lr_test_normal_vs_basn2(d)
    except inference.EstimationError as exc:
        raise ConvergenceFailure(str(exc), _report("lrtest", inputs, None)) from None
    report = _report("lrtest", inputs, res.to_dict())
    return report, _table(["field", "value"], _keyvals(list(report["results"].items())))


def cmd_sample(args) -> tuple[dict, str]:
    p = _params(args)
    try:
        cfg = sampling.SampleConfig(args.n, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    x = sampling.sample_locscale(p, cfg)
    inputs = {"alpha": p.alpha, "mu": p.mu, "sigma": p.sigma, "n": cfg.n, "seed": cfg.seed}
    report = _report("sample", inputs, {"values": x})
    return report, _csv_or_table(args.output_format, ["value"], [x])


def cmd_tabulate(args) -> tuple[dict, str]:
    p = _params(args)
    z = _grid(args.start, args.stop, args.step)
    pdf = np.atleast_1d(locscale_pdf(z, p))
    cdf = np.atleast_1d(locscale_cdf(z, p))
    inputs = {"alpha": p.alpha, "mu": p.mu, "sigma": p.sigma,
              "from": args.start, "to": args.stop, "step": args.step}
    rows = [{"z": a, "pdf": b, "cdf": c} for a, b, c in zip(z, pdf, cdf)]
    report = _report("tabulate", inputs, {"rows": rows})
    return report, _csv_or_table(args.output_format, ["z", "pdf", "cdf"], [z, pdf, cdf])


def cmd_hazard(args) -> tuple[dict, str]:
    try:
        alpha = LocScaleParams(args.alpha).alpha
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if args.start < 0:
        raise UsageError("--from must be non-negative for lifetime grids")
    t = _grid(args.start, args.stop, args.step)
    cols = [t] + [np.atleast_1d(f(t, alpha)) for f in
                  (lifetime.hbasn2_pdf, lifetime.hbasn2_survival, lifetime.hbasn2_hazard)]
    inputs = {"alpha": alpha, "from": args.start, "to": args.stop, "step": args.step}
    rows = [{"t": a, "pdf": b, "survival": c, "hazard": h} for a, b, c, h in zip(*cols)]
    report = _report("hazard", inputs, {"rows": rows})
    return report, _csv_or_table(args.output_format, ["t", "pdf", "survival", "hazard"], cols)


def cmd_check(args) -> tuple[dict, str]:
    rep = audit.run_audit()
    d = rep.to_dict()
    report = _report("check", {}, {"all_passed": d["all_passed"], "checks": d["checks"]}, d["findings"])
    lines = [_table(["check", "passed", "worst_error", "tolerance", "cases"],
                    [[c["name"], c["passed"], c["worst_error"], c["tolerance"], c["cases"]]
                     for c in report["results"]["checks"]])]
    if report["findings"]:
        lines.append("")
        lines.append("findings:")
        for f in report["findings"]:
            lines.append(f"- {f['topic']}: printed {f['printed']}; computed {f['computed']}; {f['note']}")
    return report, "\n".join(lines)


COMMANDS = {"fit": cmd_fit, "compare": cmd_compare, "lrtest": cmd_lrtest, "sample": cmd_sample,
            "tabulate": cmd_tabulate, "hazard": cmd_hazard, "check": cmd_check}
GRID_COMMANDS = ("sample", "tabulate", "hazard")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="basn", description="BASN2 distribution toolkit")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def add(name, help_, formats=("json", "table"), default="json"):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--output-format", choices=formats, default=default)
        return p

    def data_flags(p):
        p.add_argument("--data", required=True, help="CSV file, or 'bmi' / 'lakes' for bundled data")
        p.add_argument("--column", help="column name or zero-based index")

    def shape_flags(p, locscale=True):
        p.add_argument("--alpha", type=float, required=True)
        if locscale:
            p.add_argument("--mu", type=float, default=0.0)
            p.add_argument("--sigma", type=float, default=1.0)

    def grid_flags(p):
        p.add_argument("--from", dest="start", type=float, required=True)
        p.add_argument("--to", dest="stop", type=float, required=True)
        p.add_argument("--step", type=float, required=True)

    p = add("fit", "fit one model to a data column")
    data_flags(p)
    p.add_argument("--model", choices=inference.MODELS, default="basn2")
    p.add_argument("--method", choices=("mle", "mom"), default="mle")

    p = add("compare", "fit several models and rank them by AIC")
    data_flags(p)
    p.add_argument("--models", default=",".join(inference.MODELS),
                   help="comma-separated subset of " + ", ".join(inference.MODELS))

    p = add("lrtest", "likelihood-ratio test of normal against BASN2")
    data_flags(p)

    p = add("sample", "draw BASN2 variates", ("csv", "json", "table"), "csv")
    shape_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"default {DEFAULT_SEED}")

    p = add("tabulate", "pdf and cdf on a grid", ("csv", "json", "table"), "csv")
    shape_flags(p)
    grid_flags(p)

    p = add("hazard", "half-BASN2 pdf, survival and hazard on a grid", ("csv", "json", "table"), "csv")
    shape_flags(p, locscale=False)
    grid_flags(p)

    add("check", "run the normalization and closed-form self-audit")
    return parser


def _emit(report: dict, text: str, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(report, indent=2, allow_nan=False) + "\n")
    else:
        out.write(text + "\n")


def _error(args, kind: str, message: str, out, err, report=None) -> None:
    err.write(f"basn: {kind} error: {message}\n")
    if args.output_format == "json":
        inputs = {k: v for k, v in vars(args).items() if k not in ("command", "output_format")}
        body = dict(report) if report else _report(args.command, inputs, None)
        body["error"] = {"kind": kind, "message": message}
        out.write(json.dumps(body, indent=2, allow_nan=False) + "\n")


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(f"{parser.format_usage()}basn: usage error: {exc}\n")
        return EXIT_USAGE
    try:
        report, text = COMMANDS[args.command](args)
    except UsageError as exc:
        _error(args, "usage", str(exc), out, err)
        return EXIT_USAGE
    except (datasets.DataError, FileNotFoundError, inference.EstimationError, DomainError) as exc:
        # EstimationError here means the data cannot support a fit (e.g. zero variance)
        _error(args, "data", str(exc), out, err)
        return EXIT_DATA
    except ConvergenceFailure as exc:
        _error(args, "convergence", str(exc), out, err, exc.report)
        return EXIT_CONVERGENCE
    _emit(report, text, args.output_format, out)
    return EXIT_OK if args.command != "check" or report["results"]["all_passed"] else EXIT_CONVERGENCE
