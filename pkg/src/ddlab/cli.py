"""Command-line entry point: ``ddlab <command> [options]``.

Options can also come from a flat ``key = value`` config file passed with
``--config``; command-line flags win over the file.
"""

import argparse
import os
import sys

from . import sweeps
from .exceptions import ConfigError, DDLabError
from .svg import emit_svg_plot

# config keys accepted in files, mapped to argparse destinations
CONFIG_KEYS = {
    "alpha_start": "alpha_start",
    "alpha_stop": "alpha_stop",
    "alpha_step": "alpha_step",
    "alphas": "alphas",
    "alpha": "alpha",
    "lambda": "lambda_values",
    "lambda_values": "lambda_values",
    "rho1": "rho1",
    "loss": "loss",
    "dim": "dim",
    "d": "dim",
    "seeds": "seeds",
    "quad_nodes": "quad_nodes",
    "n_test": "n_test",
    "out": "out",
    "output_path": "out",
    "svg": "svg",
    "emit_svg": "svg",
}

DEFAULTS = {
    "rho1": "0.5",
    "loss": "square",
    "quad_nodes": "61",
    "n_test": "100000",
    "svg": "false",
}


def read_config(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[CONFIG_KEYS[key]] = value
    return values


def _floats(text):
    try:
        return tuple(float(t) for t in str(text).split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    try:
        return tuple(int(t) for t in str(text).split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _number(text, kind, name):
    try:
        return kind(text)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected {kind.__name__}, got {text!r}") from None


def _add_common(p, simulation=False):
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--alpha-start")
    p.add_argument("--alpha-stop")
    p.add_argument("--alpha-step")
    p.add_argument("--alphas", help="explicit comma-separated alpha values")
    p.add_argument("--lambda", dest="lambda_values", help="comma-separated lambda values")
    p.add_argument("--rho1")
    p.add_argument("--loss", help="square | hinge | logistic")
    p.add_argument("--quad-nodes")
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--svg", action="store_const", const="true", default=None,
                   help="also write an SVG plot next to the CSV")
    if simulation:
        p.add_argument("--dim")
        p.add_argument("--seeds", help="comma-separated integer seeds")
        p.add_argument("--n-test", help="fresh samples per test-error estimate")


def build_parser():
    parser = argparse.ArgumentParser(prog="ddlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theory-sweep", help="asymptotic test error over an alpha grid")
    _add_common(p)
    p = sub.add_parser("lambda-sweep", help="asymptotic test error over lambda at fixed alpha")
    _add_common(p)
    p.add_argument("--alpha", help="fixed alpha")
    p = sub.add_parser("simulate", help="train finite-size students")
    _add_common(p, simulation=True)
    p = sub.add_parser("verify", help="simulation vs asymptotic prediction")
    _add_common(p, simulation=True)

    p = sub.add_parser("plot", help="render a CSV column pair to SVG")
    p.add_argument("--csv", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--group", default=None)
    p.add_argument("--log-x", action="store_true")
    p.add_argument("--out", required=True)
    return parser


def _merge(args):
    values = dict(DEFAULTS)
    if getattr(args, "config", None):
        values.update(read_config(args.config))
    for key, val in vars(args).items():
        if key not in ("command", "config") and val is not None:
            values[key] = val
    return values


MODE_OF = {
    "theory-sweep": "alpha_sweep",
    "lambda-sweep": "lambda_sweep",
    "simulate": "simulate",
    "verify": "verify",
}


def spec_from_args(args):
    v = _merge(args)
    grid = None
    if any(k in v for k in ("alpha_start", "alpha_stop", "alpha_step")):
        missing = [k for k in ("alpha_start", "alpha_stop", "alpha_step") if k not in v]
        if missing:
            raise ConfigError(f"alpha grid needs {', '.join(missing)}")
        grid = tuple(_number(v[k], float, k) for k in ("alpha_start", "alpha_stop", "alpha_step"))
    spec = sweeps.SweepSpec(
        mode=MODE_OF[args.command],
        alpha_grid=grid,
        alphas=_floats(v["alphas"]) if "alphas" in v else None,
        alpha=_number(v["alpha"], float, "alpha") if "alpha" in v else None,
        lambda_values=_floats(v.get("lambda_values", "")),
        rho1=_number(v["rho1"], float, "rho1"),
        loss=v["loss"],
        d=_number(v["dim"], int, "dim") if "dim" in v else None,
        seeds=_ints(v.get("seeds", "")),
        output_path=v.get("out"),
        emit_svg=_bool(v["svg"]),
        quad_nodes=_number(v["quad_nodes"], int, "quad_nodes"),
        n_test=_number(v["n_test"], int, "n_test"),
    )
    return spec.validate()


def _svg_path(csv_path):
    root, _ = os.path.splitext(csv_path)
    return root + ".svg"


def run(argv=None):
    """Run a command; returns the process exit code."""
    args = build_parser().parse_args(argv)
    try:
        if args.command == "plot":
            emit_svg_plot(args.csv, args.x, args.y, args.group, args.out, log_x=args.log_x)
            return 0
        spec = spec_from_args(args)
        if spec.mode == "alpha_sweep":
            rows = sweeps.run_alpha_sweep(spec)
            plot = ("alpha", "test_error", "lambda", False)
        elif spec.mode == "lambda_sweep":
            rows = sweeps.run_lambda_sweep(spec)
            plot = ("lambda", "test_error", None, True)
        elif spec.mode == "simulate":
            rows = sweeps.run_simulate(spec)
            plot = ("alpha", "emp_test_error", "seed", False)
        else:
            rows = sweeps.run_verify(spec)
            plot = ("alpha", "abs_gap", "seed", False)
        if spec.emit_svg:
            x, y, group, log_x = plot
            emit_svg_plot(spec.output_path, x, y, group, _svg_path(spec.output_path), log_x=log_x)
    except OSError as exc:
        print(f"ddlab: I/O error: {exc}", file=sys.stderr)
        return 2
    except DDLabError as exc:
        print(f"ddlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    bad = [r for r in rows if r.get("status") != "ok"]
    for r in bad:
        print(f"ddlab: point {r.get('alpha')} failed: {r.get('status')}", file=sys.stderr)
    return 0 if not bad else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
