"""Command-line interface: eval, sweep, optimize, verify, figure.

Numbers on the command line accept pi-literals (``pi/5``, ``5pi/16``,
``0.49pi``, ``-3*pi/4``) as well as plain floats; ``--degrees`` switches the
angle parameters (theta, phi, alpha, tau) to degrees.  Any flag may also be
supplied from an INI-style config file (one section per subcommand, keys
named like the long flags); explicit flags override the file.

Exit codes: 0 ok, 1 verification failure, 2 usage or invalid parameters,
3 optimizer terminated on a range boundary.

Output is plain text or CSV/JSON; no color is ever emitted, so ``NO_COLOR``
is honored trivially.  CSV uses '.' decimals, ',' separators, a mandatory
header row, and 17 significant digits so files are byte-stable across runs
and round-trip to identical doubles.
"""

from __future__ import annotations

import argparse
import configparser
import json
import re
import sys

import numpy as np

from .errors import NhqfiError, NoInteriorOptimum
from .figures import FIGURE_IDS, figure_table
from .nonhermitian import PtParams
from .schemes import ORDERS, SchemeConfig, qfi_post_full, qfi_prior_optimal, run_pipeline
from .sweep import DEFAULTS, PARAM_NAMES, QUANTITIES, Axis, SweepSpec, optimize_nh, run_sweep
from . import crosscheck

ANGLE_PARAMS = ("theta", "phi", "alpha", "tau")

_PI_RE = re.compile(r"^([+-]?)(\d+(?:\.\d*)?)?\*?pi(?:/(\d+(?:\.\d*)?))?$")


def parse_number(text: str) -> float:
    """Parse a float or a pi-literal such as ``pi/5`` or ``5pi/16``."""
    s = text.strip().lower().replace(" ", "")
    m = _PI_RE.match(s)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        mult = float(m.group(2)) if m.group(2) else 1.0
        div = float(m.group(3)) if m.group(3) else 1.0
        return sign * mult * np.pi / div
    return float(s)


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _write_csv(path: str, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load_config(path: str | None, section: str) -> dict:
    if not path:
        return {}
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise FileNotFoundError(path)
    if not parser.has_section(section):
        return {}
    return dict(parser.items(section))


def _resolve(args, config: dict, name: str, fallback, degrees: bool):
    """Flag > config file > default; parse pi-literals; apply --degrees."""
    raw = getattr(args, name, None)
    if raw is None:
        raw = config.get(name)
    if raw is None:
        value = fallback
    else:
        value = parse_number(str(raw))
        if degrees and name in ANGLE_PARAMS:
            value = np.deg2rad(value)
    return value


def _add_param_flags(sub, names=PARAM_NAMES):
    for name in names:
        sub.add_argument(
            f"--{name}",
            default=None,
            metavar="VAL",
            help=f"{name} (default {DEFAULTS[name]:.6g} rad)"
            if name in ANGLE_PARAMS
            else f"{name} (default {DEFAULTS[name]:.6g})",
        )


def _scheme_config(order, theta, phi, eta, alpha, tau) -> SchemeConfig:
    nh = None if order == "baseline" else PtParams.from_tau(alpha, tau)
    return SchemeConfig(theta=theta, phi=phi, eta=eta, nh=nh, order=order)


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def _cmd_eval(args) -> int:
    config = _load_config(args.config, "eval")
    deg = args.degrees
    order = args.scheme or config.get("scheme", "baseline")
    if order not in ORDERS:
        print(f"error: unknown scheme {order!r}", file=sys.stderr)
        return 2
    p = {n: _resolve(args, config, n, DEFAULTS[n], deg) for n in PARAM_NAMES}
    if not 0.0 <= p["eta"] <= 1.0:
        print(f"error: eta={p['eta']} outside [0, 1]", file=sys.stderr)
        return 2
    closed = args.closed_form or config.get("closed_form", "").lower() in ("1", "true", "yes")
    if closed and order != "baseline" and abs(p["alpha"]) > np.pi / 2:
        print("error: closed forms require |alpha| <= pi/2", file=sys.stderr)
        return 2
    try:
        out = run_pipeline(_scheme_config(order, **p))
    except NhqfiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    record = {
        "scheme": order,
        "theta": p["theta"],
        "phi": p["phi"],
        "eta": p["eta"],
        "alpha": p["alpha"],
        "tau": p["tau"],
        "bloch": [float(v) for v in out.bloch],
        "qfi_theta": out.qfi_theta,
        "qfi_phi": out.qfi_phi,
        "success_prob": out.success_prob,
        "delta_f": out.delta_f,
        "baseline_f": out.baseline_f,
        "gamma": out.gamma,
    }
    if closed:
        if order == "post":
            ft, fp = qfi_post_full(p["theta"], p["phi"], p["eta"], p["alpha"], p["tau"])
            record["qfi_closed_theta"] = float(ft)
            record["qfi_closed_phi"] = float(fp)
        elif order == "prior":
            if (p["theta"], p["phi"]) != (np.pi / 2, np.pi / 2):
                print("error: prior closed form is defined at theta=phi=pi/2", file=sys.stderr)
                return 2
            record["qfi_closed_phi"] = float(qfi_prior_optimal(p["eta"], p["alpha"], p["tau"]))
        else:
            record["qfi_closed_theta"] = record["qfi_closed_phi"] = 1.0 - p["eta"] ** 2
    print(json.dumps(record))
    return 0


def _parse_axis(text: str, degrees: bool) -> Axis:
    name, _, rng = text.partition("=")
    parts = rng.split(":")
    if name not in PARAM_NAMES or len(parts) != 3:
        raise ValueError(f"expected name=start:stop:step, got {text!r}")
    start, stop, step = (parse_number(p) for p in parts)
    if degrees and name in ANGLE_PARAMS:
        start, stop, step = (np.deg2rad(v) for v in (start, stop, step))
    if step <= 0 or stop < start or stop == start:
        raise ValueError(f"axis {name}: need stop > start and step > 0")
    return Axis(name, start, stop, step)


def _cmd_sweep(args) -> int:
    config = _load_config(args.config, "sweep")
    deg = args.degrees
    vary = args.vary or [v.strip() for v in config.get("vary", "").split(";") if v.strip()]
    if not vary:
        print("error: at least one --vary axis required", file=sys.stderr)
        return 2
    try:
        axes = tuple(_parse_axis(v, deg) for v in vary)
        fixed = {}
        for item in args.fix or []:
            name, _, val = item.partition("=")
            if name not in PARAM_NAMES or not val:
                raise ValueError(f"expected --fix name=value, got {item!r}")
            fixed[name] = parse_number(val)
            if deg and name in ANGLE_PARAMS:
                fixed[name] = np.deg2rad(fixed[name])
        order = args.scheme or config.get("scheme", "post")
        quantity = args.quantity or config.get("quantity", "qfi_theta")
        spec = SweepSpec(axes=axes, fixed=fixed, order=order, quantity=quantity)
    except (ValueError, NhqfiError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    header, rows = run_sweep(spec)
    _write_csv(args.output, header, rows)
    return 0


def _cmd_optimize(args) -> int:
    config = _load_config(args.config, "optimize")
    deg = args.degrees
    order = args.scheme or config.get("scheme", "post")
    eta = _resolve(args, config, "eta", DEFAULTS["eta"], deg)

    def parse_range(raw, fallback):
        if raw is None:
            return fallback
        a, _, b = str(raw).partition(":")
        lo, hi = parse_number(a), parse_number(b) if b else parse_number(a)
        if deg:
            lo, hi = np.deg2rad(lo), np.deg2rad(hi)
        return lo, hi

    try:
        alpha_range = parse_range(args.alpha_range or config.get("alpha_range"), (0.0, 0.49 * np.pi))
        tau_range = parse_range(args.tau_range or config.get("tau_range"), (0.0, np.pi))
        report = optimize_nh(eta, order=order, alpha_range=alpha_range, tau_range=tau_range,
                             grid=args.grid)
    except NoInteriorOptimum as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, NhqfiError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps({
        "scheme": order,
        "eta": eta,
        "alpha": report.alpha,
        "tau": report.tau,
        "qfi": report.qfi,
        "grid_shape": list(report.grid_shape),
        "refine_iterations": report.refine_iterations,
        "gradient_norm": report.gradient_norm,
        "on_boundary": report.on_boundary,
    }))
    return 0


def _cmd_verify(args) -> int:
    config = _load_config(args.config, "verify")
    samples = args.samples if args.samples is not None else int(config.get("samples", 200))
    seed = args.seed if args.seed is not None else int(config.get("seed", 20240901))
    tolerance = args.tolerance if args.tolerance is not None else config.get("tolerance")
    tolerance = float(tolerance) if tolerance is not None else None
    results = crosscheck.run_all(samples=samples, seed=seed, tolerance=tolerance)
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        status = "ok" if r.ok else "FAIL"
        note = f"  ({r.note})" if r.note else ""
        print(f"{r.name:<{width}}  max_err={r.max_err:9.3e}  tol={r.tol:7.1e}  {status}{note}")
        if not r.ok:
            failed += 1
    print(f"{len(results) - failed}/{len(results)} checks passed "
          f"({samples} samples, seed {seed})")
    return 0 if failed == 0 else 1


def _cmd_figure(args) -> int:
    if args.id not in FIGURE_IDS:
        print(f"error: unknown figure id {args.id}; choose from {FIGURE_IDS}", file=sys.stderr)
        return 2
    header, rows = figure_table(args.id)
    _write_csv(args.output, header, rows)
    return 0


# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nhqfi",
        description="Qubit QFI under amplitude damping with renormalized "
        "non-Hermitian evolution (orders: baseline, post, prior).",
        epilog="Defaults follow the standard figure settings: theta=pi/2, "
        "phi=pi/2, eta=0.2, alpha=pi/5, tau=2.5.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="INI config file (section per subcommand)")
    common.add_argument("--degrees", action="store_true", help="angle flags are in degrees")

    p_eval = sub.add_parser("eval", parents=[common], help="evaluate one configuration as JSON")
    p_eval.add_argument("--scheme", choices=ORDERS, default=None)
    _add_param_flags(p_eval)
    p_eval.add_argument("--closed-form", action="store_true", dest="closed_form",
                        help="add closed-form QFI fields (requires |alpha| <= pi/2)")
    p_eval.set_defaults(func=_cmd_eval)

    p_sweep = sub.add_parser("sweep", parents=[common], help="grid sweep to CSV")
    p_sweep.add_argument("--vary", action="append", metavar="NAME=START:STOP:STEP")
    p_sweep.add_argument("--fix", action="append", metavar="NAME=VALUE")
    p_sweep.add_argument("--scheme", choices=ORDERS, default=None)
    p_sweep.add_argument("--quantity", choices=QUANTITIES, default=None)
    p_sweep.add_argument("-o", "--output", default="-", help="CSV path ('-' = stdout)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_opt = sub.add_parser("optimize", parents=[common],
                           help="maximize optimal-input QFI over (alpha, tau)")
    p_opt.add_argument("--scheme", choices=("post", "prior"), default=None)
    p_opt.add_argument("--eta", default=None)
    p_opt.add_argument("--alpha-range", default=None, metavar="LO:HI")
    p_opt.add_argument("--tau-range", default=None, metavar="LO:HI")
    p_opt.add_argument("--grid", type=int, default=161, help="coarse grid points per axis")
    p_opt.set_defaults(func=_cmd_optimize)

    p_ver = sub.add_parser("verify", parents=[common], help="run the cross-validation suite")
    p_ver.add_argument("--samples", type=int, default=None, help="draws per check (default 200)")
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--tolerance", type=float, default=None,
                       help="override every check tolerance (harness self-test)")
    p_ver.set_defaults(func=_cmd_verify)

    p_fig = sub.add_parser("figure", parents=[common], help="emit reference figure data as CSV")
    p_fig.add_argument("--id", type=int, required=True, help="figure id, 2..8")
    p_fig.add_argument("-o", "--output", default="-", help="CSV path ('-' = stdout)")
    p_fig.set_defaults(func=_cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: cannot read {exc}", file=sys.stderr)
        return 2
    except NhqfiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
