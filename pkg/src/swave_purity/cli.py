"""Command-line front end: ``swave-purity purity | sweep | validate | shell-purity``.

Exit codes: 0 success, 1 failed validation check, 2 usage or configuration
error, 3 perturbative-regime violation.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

from .analytic import PERTURBATIVE_LIMIT, PerturbativeRegimeViolation, epsilon_sq, regime_diagnostics
from .core import derived_scales
from .oracle.shell import SectorTruncationError, log_log_slope, shell_purity, shell_sector_decompose
from .phase_shift import cross_section
from .runconfig import MODEL_PARAMS, MODELS, ConfigError, RunConfig, coerce, load_config
from .validation import SUITES, run_suite

__all__ = ["main", "build_parser", "purity_fields", "PURITY_COLUMNS", "SWEEP_COLUMNS", "SHELL_COLUMNS", "fmt"]

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_REGIME = 0, 1, 2, 3

PURITY_COLUMNS = (
    "purity",
    "one_minus_purity",
    "purity_narrow",
    "one_minus_purity_narrow",
    "epsilon_sq",
    "gamma_sq",
    "sigma_c",
    "t_col",
    "cross_section",
    "key_parameter",
    "theta_k0",
    "sigma0_over_k0",
    "sigma0_theta_prime",
    "sigma0_sq_theta_double_prime",
    "spreading_ratio",
)
SWEEP_AXES = ("sigma0", "k0", "r0") + MODEL_PARAMS
SWEEP_COLUMNS = ("axis", "value", "model", "sigma0", "k0", "r0", "t") + PURITY_COLUMNS
SHELL_COLUMNS = ("sigma0", "sigma0_over_k0", "l_max", "shell_purity", "one_minus_shell_purity", "roundtrip_residual")
CHECK_COLUMNS = ("name", "passed", "measured", "target", "tolerance", "detail")

DEFAULT_FORMAT = {"purity": "json", "sweep": "csv", "validate": "text", "shell-purity": "csv"}


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ rendering


def fmt(value) -> str:
    """17 significant digits, so every emitted double parses back exactly."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value + 0.0, ".17g")  # + 0.0 folds -0.0 into 0.0
    return str(value)


def _json_scalar(value) -> str:
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
        return f'"{escaped}"'
    if isinstance(value, float):
        if not math.isfinite(value):
            return "null"
        text = fmt(value)
        # keep floats recognizable as floats after a JSON round trip
        return text if any(c in text for c in ".en") else text + ".0"
    return fmt(value)


def _json_object(record: dict, indent: str = "") -> str:
    inner = indent + "  "
    body = ",\n".join(f'{inner}"{key}": {_json_scalar(value)}' for key, value in record.items())
    return "{\n" + body + "\n" + indent + "}"


def render_json(payload) -> str:
    if isinstance(payload, dict):
        parts = []
        for key, value in payload.items():
            if isinstance(value, list):
                items = ",\n".join("    " + _json_object(v, "    ") for v in value)
                parts.append(f'  "{key}": [\n{items}\n  ]' if value else f'  "{key}": []')
            else:
                parts.append(f'  "{key}": {_json_scalar(value)}')
        return "{\n" + ",\n".join(parts) + "\n}\n"
    if not payload:
        return "[]\n"
    return "[\n" + ",\n".join("  " + _json_object(r, "  ") for r in payload) + "\n]\n"


def _csv_cell(value) -> str:
    text = fmt(value)
    if any(c in text for c in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def render_csv(columns, rows, trailer: str = "") -> str:
    lines = [",".join(columns)]
    lines += [",".join(_csv_cell(row[c]) for c in columns) for row in rows]
    return "\n".join(lines) + "\n" + trailer


def render_text(columns, rows) -> str:
    cells = [list(columns)] + [[fmt(row[c]) for c in columns] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in cells)


def render_record_text(record: dict) -> str:
    width = max(len(k) for k in record)
    return "".join(f"{k.ljust(width)}  {fmt(v)}\n" for k, v in record.items())


# --------------------------------------------------------------- computation


def purity_fields(run: RunConfig) -> dict:
    """All quantities reported by ``purity``, in column order."""
    cfg = run.collision()
    model = run.phase_model()
    eps_sq = epsilon_sq(cfg, model)
    if eps_sq > PERTURBATIVE_LIMIT:
        raise PerturbativeRegimeViolation(eps_sq)
    scales = derived_scales(cfg)
    s0 = cross_section(model, cfg.k0)
    narrow = scales.sigma_c**2 * s0 / math.pi
    one_minus = 2.0 * eps_sq
    diag = regime_diagnostics(cfg, model)
    out = {
        "purity": 1.0 - one_minus,
        "one_minus_purity": one_minus,
        "purity_narrow": 1.0 - narrow,
        "one_minus_purity_narrow": narrow,
        "epsilon_sq": eps_sq,
        "gamma_sq": scales.gamma_sq,
        "sigma_c": scales.sigma_c,
        "t_col": scales.t_col,
        "cross_section": s0,
        "key_parameter": scales.sigma_c**2 * s0,
    }
    out.update({k: float(diag[k]) for k in PURITY_COLUMNS if k not in out})
    return out


def cmd_purity(run: RunConfig, fmt_name: str) -> str:
    record = purity_fields(run)
    if fmt_name == "json":
        return render_json(record)
    if fmt_name == "csv":
        return render_csv(PURITY_COLUMNS, [record])
    return render_record_text(record)


def _parse_values(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def cmd_sweep(run: RunConfig, axis: str, values: list[str], fmt_name: str) -> str:
    if axis not in SWEEP_AXES:
        raise UsageError(f"unknown sweep axis {axis!r}; choose from {', '.join(SWEEP_AXES)}")
    rows = []
    for text in values:
        point = replace(run, **{axis: coerce(axis, text)})
        row = {"axis": axis, "value": float(getattr(point, axis)), "model": point.model}
        row.update({k: float(getattr(point, k)) for k in ("sigma0", "k0", "r0", "t")})
        row.update(purity_fields(point))
        rows.append(row)
    if fmt_name == "json":
        return render_json(rows)
    if fmt_name == "text":
        return render_text(SWEEP_COLUMNS, rows)
    return render_csv(SWEEP_COLUMNS, rows)


def cmd_shell_purity(run: RunConfig, sigma_values: list[str], fmt_name: str) -> str:
    if len(sigma_values) < 3:
        raise UsageError(f"shell-purity needs at least 3 sigma0 values, got {len(sigma_values)}")
    sigmas = sorted(coerce("sigma0", v) for v in sigma_values)
    model = run.phase_model()
    rows = []
    for s in sigmas:
        cfg = replace(run, sigma0=s).collision()
        try:
            decomp = shell_sector_decompose(cfg, model, run.l_max or None)
        except SectorTruncationError as exc:
            raise UsageError(str(exc)) from None
        p = shell_purity(decomp)
        rows.append(
            {
                "sigma0": s,
                "sigma0_over_k0": cfg.sigma0_over_k0,
                "l_max": decomp.l_max,
                "shell_purity": p,
                "one_minus_shell_purity": 1.0 - p,
                "roundtrip_residual": float(decomp.roundtrip_residual),
            }
        )
    slope = log_log_slope(sigmas, [r["shell_purity"] for r in rows])
    if fmt_name == "json":
        return render_json({"rows": rows, "loglog_slope": slope})
    if fmt_name == "text":
        return render_text(SHELL_COLUMNS, rows) + f"loglog_slope  {fmt(slope)}\n"
    return render_csv(SHELL_COLUMNS, rows, trailer=f"# loglog_slope,{fmt(slope)}\n")


def cmd_validate(run: RunConfig, suite: str, fmt_name: str) -> tuple[str, bool]:
    checks = run_suite(run, suite)
    ok = all(c.passed for c in checks)
    records = [{k: getattr(c, k) for k in CHECK_COLUMNS} for c in checks]
    if fmt_name == "json":
        return render_json({"suite": suite, "passed": ok, "checks": records}), ok
    if fmt_name == "csv":
        return render_csv(CHECK_COLUMNS, records), ok
    lines = []
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        line = f"{status}  {c.name}: measured={fmt(c.measured)} target={fmt(c.target)} tol={fmt(c.tolerance)}"
        lines.append(line + (f" ({c.detail})" if c.detail else ""))
    passed = sum(c.passed for c in checks)
    lines.append(f"{suite} suite: {passed}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n", ok


# ----------------------------------------------------------------- arguments

_EPILOG = f"""\
config file: one 'key = value' per line, '#' starts a comment.  Keys:
  sigma0 k0 r0 t model {' '.join(MODEL_PARAMS)} table samples seed quad_n l_max workers format out
models: {', '.join(MODELS)}
precedence: defaults < --config < dedicated flags < --set (applied in order)

CSV columns (fixed order, ',' separator, '.' decimal, LF line endings):
  purity:       {','.join(PURITY_COLUMNS)}
  sweep:        {','.join(SWEEP_COLUMNS)}
  shell-purity: {','.join(SHELL_COLUMNS)}
                followed by one line '# loglog_slope,<slope>'
  validate:     {','.join(CHECK_COLUMNS)}
all numbers are printed with 17 significant digits.

exit codes: 0 ok, 1 validation failure, 2 usage/config error, 3 regime violation
"""


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key = value config file")
    common.add_argument("--model", choices=MODELS, help="phase-shift model")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key (repeatable)")
    common.add_argument("--samples", type=int, help="Monte Carlo samples")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--quad-n", type=int, help="Gauss-Legendre radial nodes")
    common.add_argument("--l-max", type=int, help="Legendre cutoff for the shell state (0: automatic)")
    common.add_argument("--workers", type=int, help="threads for Monte Carlo (results do not depend on it)")
    common.add_argument("--format", choices=("json", "csv", "text"), help="output format")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="swave-purity",
        description="Entanglement generated by s-wave scattering of two gaussian wave packets.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    kw = dict(parents=[common], epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub.add_parser("purity", help="purity and derived quantities for one configuration", **kw)
    sweep = sub.add_parser("sweep", help="purity over a list of values of one parameter", **kw)
    sweep.add_argument("--axis", required=True, help=f"parameter to vary: {', '.join(SWEEP_AXES)}")
    sweep.add_argument("--values", default="", help="comma-separated values (empty: header only)")
    validate = sub.add_parser("validate", help="run the oracle comparison suite", **kw)
    validate.add_argument("--suite", choices=SUITES, default="quick")
    shell = sub.add_parser("shell-purity", help="purity of the scattered shell state vs sigma0", **kw)
    shell.add_argument("--sigma0-list", required=True, help="comma-separated sigma0 values (at least 3)")
    return parser


_FLAG_KEYS = {"model": "model", "samples": "samples", "seed": "seed", "quad_n": "quad_n",
              "l_max": "l_max", "workers": "workers", "format": "format", "out": "out"}


def resolve_config(args) -> RunConfig:
    run = load_config(args.config) if args.config else RunConfig()
    changes = {key: getattr(args, attr) for attr, key in _FLAG_KEYS.items() if getattr(args, attr) is not None}
    run = replace(run, **changes)
    for item in args.overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        run = replace(run, **{key.strip(): coerce(key.strip(), value)})
    return run


def _emit(text: str, path: str):
    if path:
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {path}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = resolve_config(args)
        run.collision()
        run.phase_model()  # surface table parse errors before any work
        fmt_name = run.format or DEFAULT_FORMAT[args.command]
        status = EXIT_OK
        if args.command == "purity":
            text = cmd_purity(run, fmt_name)
        elif args.command == "sweep":
            text = cmd_sweep(run, args.axis, _parse_values(args.values), fmt_name)
        elif args.command == "shell-purity":
            text = cmd_shell_purity(run, _parse_values(args.sigma0_list), fmt_name)
        else:
            text, ok = cmd_validate(run, args.suite, fmt_name)
            status = EXIT_OK if ok else EXIT_FAILED
        _emit(text, run.out)
        return status
    except PerturbativeRegimeViolation as exc:
        print(f"swave-purity: regime violation: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (ConfigError, UsageError, ValueError) as exc:
        print(f"swave-purity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
