"""Command-line front end.

Exit codes: 0 success/verified, 1 verification failed (a measured gap
exceeded its tolerance), 2 usage or domain error, 3 mathematical "no"
verdict (a located zero disproves invertibility of the truncation).
Outputs are JSON by default; CSV tables carry a versioned header comment
so golden files stay stable.  FS_THREADS caps scan workers.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import FracspecError, PoleAtNonpositiveInteger, PoleAtOne
from .operator import (
    apply_inverse,
    apply_spectral_operator,
    counting_pullback,
    phase_transition_scan,
    quasi_invertibility_verdict,
    almost_invertibility_verdict,
    truncated_spectrum,
    unit_step,
)
from .spectral import (
    explicit_formula_counting,
    power_weyl_data,
    spectral_counting,
    spectral_zeta_check,
    spectral_zeta_combined_bound,
    weyl_remainder_profile,
)
from .strings import (
    CANTOR,
    SelfSimilarSpec,
    closed_form_zeta,
    complex_dimensions,
    counting_function,
    dimension_estimate,
    geometric_zeta,
    make_cantor_string,
    make_power_string,
    make_unit_string,
    series_tail_bound,
    string_from_json,
    tube_volume,
    tube_volume_cantor_series,
)
from .zeta import DEFAULT_CONFIG, EvalConfig, completed_xi, find_critical_zeros, gamma, zeta

CSV_VERSION = "# fracspec-csv v1"


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse complex number: {text!r}") from exc


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def _emit(args, payload, csv_rows=None, csv_header=None, csv_comment=None) -> None:
    out = sys.stdout if args.output in (None, "-") else open(args.output, "w", encoding="utf-8")
    try:
        if getattr(args, "format", "json") == "csv" and csv_rows is not None:
            out.write(CSV_VERSION + "\n")
            if csv_comment:
                out.write("# " + csv_comment + "\n")
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(csv_header)
            writer.writerows(csv_rows)
        else:
            json.dump(payload, out, indent=2)
            out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()


def _config(args) -> EvalConfig:
    kwargs = {}
    if getattr(args, "target_abs_error", None) is not None:
        kwargs["target_abs_error"] = args.target_abs_error
    if getattr(args, "max_terms", None) is not None:
        kwargs["max_terms"] = args.max_terms
    return EvalConfig(**kwargs) if kwargs else DEFAULT_CONFIG


def _load_string(args):
    """Resolve --builtin/--spec-file into (eta, spec-or-None)."""
    if getattr(args, "spec_file", None):
        payload = json.loads(Path(args.spec_file).read_text(encoding="utf-8"))
        return string_from_json(payload, default_depth=args.depth)
    name = getattr(args, "builtin", None)
    if name == "cantor":
        return make_cantor_string(args.depth), CANTOR
    if name == "power":
        return make_power_string(args.exponent, args.count), None
    if name == "selfsimilar":
        spec = SelfSimilarSpec(
            ratio=args.ratio,
            base=args.base,
            start_index=args.start_index,
            normalization=args.normalization,
        )
        return spec.materialize(args.depth), spec
    if name == "unit":
        return make_unit_string(), None
    raise ValueError("specify --builtin {cantor,power,selfsimilar,unit} or --spec-file")


def _add_string_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--builtin", choices=["cantor", "power", "selfsimilar", "unit"])
    p.add_argument("--spec-file", help="JSON string spec (see README for the schema)")
    p.add_argument("--depth", type=int, default=30, help="truncation depth for lattice strings")
    p.add_argument("--exponent", type=float, default=0.5, help="power-string dimension D")
    p.add_argument("--count", type=int, default=10000, help="power-string atom count")
    p.add_argument("--ratio", type=float, default=3.0)
    p.add_argument("--base", type=float, default=2.0)
    p.add_argument("--start-index", type=int, default=1)
    p.add_argument("--normalization", type=float, default=1.0)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default="-", help="output path, '-' for stdout")


# ---------------------------------------------------------------------------


def cmd_zeta(args) -> int:
    cfg = _config(args)
    s = args.s
    payload = {"s": _pair(s)}
    try:
        z = zeta(s, cfg)
    except PoleAtOne:
        print("pole at s=1", file=sys.stderr)
        return 2
    payload["zeta"] = _pair(z)
    payload["abs_zeta"] = abs(z)
    try:
        payload["gamma"] = _pair(gamma(s))
    except PoleAtNonpositiveInteger:
        payload["gamma"] = None
    try:
        payload["xi"] = _pair(completed_xi(s, cfg)) if s not in (0, 1) else None
    except (PoleAtNonpositiveInteger, PoleAtOne):
        payload["xi"] = None
    _emit(args, payload)
    return 0


def cmd_zeros(args) -> int:
    cfg = _config(args)
    brackets = find_critical_zeros(args.t_min, args.t_max, cfg)
    rows = [[b.t_low, b.t_high, b.refined_t, b.residual] for b in brackets]
    payload = [
        {"t_low": b.t_low, "t_high": b.t_high, "refined_t": b.refined_t, "residual": b.residual}
        for b in brackets
    ]
    _emit(args, payload, csv_rows=rows, csv_header=["t_low", "t_high", "refined_t", "residual"])
    return 0


def cmd_string(args) -> int:
    eta, spec = _load_string(args)
    if args.action == "zeta":
        payload = {"s": _pair(args.s), "series": _pair(geometric_zeta(eta, args.s))}
        if spec is not None:
            payload["closed_form"] = _pair(closed_form_zeta(spec, args.s))
            payload["tail_bound"] = series_tail_bound(spec, len(eta), args.s.real)
        _emit(args, payload)
        return 0
    if args.action == "dims":
        if spec is None:
            print("complex dimensions need a lattice closed form (cantor/selfsimilar)", file=sys.stderr)
            return 2
        dims = complex_dimensions(spec, args.im_window)
        payload = {
            "dimension": spec.dimension,
            "oscillatory_period": spec.oscillatory_period,
            "dimensions": [{"omega": _pair(d.omega), "residue": _pair(d.residue)} for d in dims],
        }
        _emit(args, payload)
        return 0
    if args.action == "count":
        _emit(args, {"x": args.x, "count": counting_function(eta, args.x)})
        return 0
    if args.action == "tube":
        direct = tube_volume(eta, args.epsilon)
        payload = {"epsilon": args.epsilon, "direct": direct}
        code = 0
        if spec is CANTOR or (spec is not None and spec == CANTOR):
            series = tube_volume_cantor_series(args.epsilon, args.n_terms)
            payload["series"] = series
            if args.compare_direct:
                gap = abs(series - direct)
                payload["gap"] = gap
                payload["tolerance"] = args.tolerance
                code = 0 if gap <= args.tolerance else 1
        elif args.compare_direct:
            print("series tube formula is implemented for the cantor string", file=sys.stderr)
            return 2
        _emit(args, payload)
        return code
    if args.action == "dim-est":
        _emit(args, {"dimension_estimate": dimension_estimate(eta)})
        return 0
    raise ValueError(f"unknown string action {args.action!r}")


def cmd_spectral(args) -> int:
    cfg = _config(args)
    eta, spec = _load_string(args)
    if args.action == "count":
        _emit(args, {"x": args.x, "spectral_count": spectral_counting(eta, args.x)})
        return 0
    if args.action == "zeta-check":
        lhs, rhs, gap = spectral_zeta_check(eta, args.s, args.cutoff, cfg)
        bound = spectral_zeta_combined_bound(eta, args.s.real, args.cutoff, cfg)
        payload = {
            "s": _pair(args.s),
            "cutoff": args.cutoff,
            "lhs": _pair(lhs),
            "rhs": _pair(rhs),
            "gap": gap,
            "bound": bound,
        }
        _emit(args, payload)
        return 0 if gap <= bound else 1
    if args.action == "weyl":
        if args.builtin != "power":
            print("the weyl profile is defined for the power string", file=sys.stderr)
            return 2
        weyl = power_weyl_data(args.exponent, args.count, args.epsilon, cfg=cfg)
        xs = np.exp(np.linspace(math.log(args.x_min), math.log(args.x_max), args.points))
        profile = weyl_remainder_profile(eta, xs, weyl)
        mean = float(np.mean([v for _, v in profile]))
        payload = {
            "omega_length": weyl.omega_length,
            "dimension": weyl.dimension,
            "minkowski_content": weyl.minkowski_content,
            "c_coefficient": weyl.c_coefficient,
            "profile_mean": mean,
            "profile": [[x, v] for x, v in profile],
        }
        rows = [[x, v, weyl.c_coefficient] for x, v in profile]
        _emit(args, payload, csv_rows=rows, csv_header=["x", "remainder", "c_coefficient"])
        return 0
    if args.action == "explicit":
        if spec is None:
            print("explicit formulas need a lattice closed form", file=sys.stderr)
            return 2
        xs = args.x if isinstance(args.x, list) else [args.x]
        results = [explicit_formula_counting(spec, x, args.n_terms) for x in xs]
        payload = [r.to_json() for r in results]
        rows = [[r.x, r.direct_value, r.formula_value, r.gap] for r in results]
        _emit(
            args,
            payload if len(payload) > 1 else payload[0],
            csv_rows=rows,
            csv_header=["x", "direct", "formula", "gap"],
        )
        return 0
    raise ValueError(f"unknown spectral action {args.action!r}")


def cmd_op(args) -> int:
    cfg = _config(args)
    if args.action == "spectrum":
        curve = truncated_spectrum(args.c, args.T0, args.T, args.step, cfg)
        summary = (
            f"min_mod={curve.min_modulus:.6g} max_mod={curve.max_modulus:.6g} "
            f"c={args.c} T0={args.T0} T={args.T}"
        )
        rows = [
            [float(t), z.real, z.imag, abs(z)] for t, z in zip(curve.taus, curve.points)
        ]
        payload = dict(curve.to_json(), min_mod=curve.min_modulus, max_mod=curve.max_modulus)
        _emit(
            args,
            payload,
            csv_rows=rows,
            csv_header=["tau", "re_zeta", "im_zeta", "abs_zeta"],
            csv_comment=summary,
        )
        return 0
    if args.action == "verdict":
        if args.T0 > 0:
            report = almost_invertibility_verdict(args.c, args.T0, args.T_max, cfg)
        else:
            report = quasi_invertibility_verdict(args.c, args.T_max, cfg)
        _emit(args, report.to_json())
        return 3 if report.quasi_invertible_verdict == "no" else 0
    if args.action == "scan":
        c_grid = [float(v) for v in args.c_grid.split(",")]
        reports = phase_transition_scan(c_grid, args.T, cfg)
        rows = [
            [r.c, r.sup_mod, r.min_mod, int(r.zero_found), r.quasi_invertible_verdict,
             r.notes.get("density_fraction", "")]
            for r in reports
        ]
        _emit(
            args,
            [r.to_json() for r in reports],
            csv_rows=rows,
            csv_header=["c", "sup_mod", "min_mod", "zero_found", "verdict", "density_fraction"],
        )
        return 0
    # apply / invert operate on a concrete window
    if args.input == "counting":
        eta, _ = _load_string(args)
        f = counting_pullback(eta, weight=args.c, t_max=args.t_max, step=args.step)
    else:
        f = unit_step(weight=args.c, t_max=args.t_max, step=args.step)
    if args.action == "apply":
        af = apply_spectral_operator(f)
        grid = af.grid
        fin = np.real(f(grid))
        fout = np.real(af.values)
        rows = [[float(t), float(a), float(b)] for t, a, b in zip(grid, fin, fout)]
        payload = {
            "t_min": af.t_min,
            "step": af.step,
            "input": [float(v) for v in fin],
            "output": [float(v) for v in fout],
        }
        _emit(args, payload, csv_rows=rows, csv_header=["t", "input", "output"])
        return 0
    if args.action == "invert":
        af = apply_spectral_operator(f)
        n_max = args.n_max or int(math.ceil(math.exp(af.t_max - f.support[0])))
        back = apply_inverse(af, n_max)
        err = float(np.max(np.abs(back.values - f(back.grid))))
        _emit(args, {"n_max": n_max, "max_abs_error": err})
        return 0 if err <= 1e-12 else 1
    raise ValueError(f"unknown op action {args.action!r}")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracspec",
        description="Fractal strings, zeta functions and the spectral operator at desk scale.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeta", allow_abbrev=False, help="evaluate zeta, Gamma and xi at one point")
    p.add_argument("--s", type=_parse_complex, required=True)
    p.add_argument("--target-abs-error", type=float)
    p.add_argument("--max-terms", type=int)
    _add_output_flags(p)
    p.set_defaults(fn=cmd_zeta)

    p = sub.add_parser("zeros", allow_abbrev=False, help="critical-line zeros by sign-change bisection")
    p.add_argument("--t-min", type=float, default=0.0)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--target-abs-error", type=float)
    _add_output_flags(p)
    p.set_defaults(fn=cmd_zeros)

    p = sub.add_parser("string", allow_abbrev=False, help="geometric-side quantities of a string")
    _add_string_flags(p)
    actions = p.add_subparsers(dest="action", required=True)
    a = actions.add_parser("zeta", allow_abbrev=False)
    a.add_argument("--s", type=_parse_complex, required=True)
    _add_output_flags(a)
    a = actions.add_parser("dims", allow_abbrev=False)
    a.add_argument("--im-window", type=float, required=True)
    _add_output_flags(a)
    a = actions.add_parser("count", allow_abbrev=False)
    a.add_argument("--x", type=float, required=True)
    _add_output_flags(a)
    a = actions.add_parser("tube", allow_abbrev=False)
    a.add_argument("--epsilon", type=float, required=True)
    a.add_argument("--n-terms", type=int, default=500)
    a.add_argument("--compare-direct", action="store_true")
    a.add_argument("--tolerance", type=float, default=1e-3)
    _add_output_flags(a)
    a = actions.add_parser("dim-est", allow_abbrev=False)
    _add_output_flags(a)
    p.set_defaults(fn=cmd_string)

    p = sub.add_parser("spectral", allow_abbrev=False, help="spectral-side quantities of a string")
    _add_string_flags(p)
    actions = p.add_subparsers(dest="action", required=True)
    a = actions.add_parser("count", allow_abbrev=False)
    a.add_argument("--x", type=float, required=True)
    _add_output_flags(a)
    a = actions.add_parser("zeta-check", allow_abbrev=False)
    a.add_argument("--s", type=_parse_complex, required=True)
    a.add_argument("--cutoff", type=float, default=1e6)
    a.add_argument("--target-abs-error", type=float)
    _add_output_flags(a)
    a = actions.add_parser("weyl", allow_abbrev=False)
    a.add_argument("--x-min", type=float, default=1e4)
    a.add_argument("--x-max", type=float, default=1e5)
    a.add_argument("--points", type=int, default=40)
    a.add_argument("--epsilon", type=float, default=1e-4)
    _add_output_flags(a)
    a = actions.add_parser("explicit", allow_abbrev=False)
    a.add_argument("--x", type=lambda t: [float(v) for v in t.split(",")], required=True)
    a.add_argument("--n-terms", type=int, default=500)
    _add_output_flags(a)
    p.set_defaults(fn=cmd_spectral)

    p = sub.add_parser("op", allow_abbrev=False, help="the spectral operator and its truncations")
    actions = p.add_subparsers(dest="action", required=True)
    a = actions.add_parser("apply", allow_abbrev=False)
    _add_string_flags(a)
    a.add_argument("--input", choices=["unit-step", "counting"], default="unit-step")
    a.add_argument("--c", type=float, default=2.0)
    a.add_argument("--t-max", type=float, default=4.0)
    a.add_argument("--step", type=float, default=0.01)
    _add_output_flags(a)
    a = actions.add_parser("invert", allow_abbrev=False)
    _add_string_flags(a)
    a.add_argument("--input", choices=["unit-step", "counting"], default="unit-step")
    a.add_argument("--c", type=float, default=2.0)
    a.add_argument("--t-max", type=float, default=3.5)
    a.add_argument("--step", type=float, default=0.01)
    a.add_argument("--n-max", type=int)
    _add_output_flags(a)
    a = actions.add_parser("spectrum", allow_abbrev=False)
    a.add_argument("--c", type=float, required=True)
    a.add_argument("--T", type=float, required=True)
    a.add_argument("--T0", type=float, default=0.0)
    a.add_argument("--step", type=float, default=None)
    a.add_argument("--target-abs-error", type=float)
    _add_output_flags(a)
    a = actions.add_parser("scan", allow_abbrev=False)
    a.add_argument("--c-grid", required=True, help="comma-separated c values")
    a.add_argument("--T", type=float, required=True)
    _add_output_flags(a)
    a = actions.add_parser("verdict", allow_abbrev=False)
    a.add_argument("--c", type=float, required=True)
    a.add_argument("--T-max", type=float, required=True)
    a.add_argument("--T0", type=float, default=0.0)
    _add_output_flags(a)
    p.set_defaults(fn=cmd_op)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FracspecError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
