"""Command-line front end.

Subcommands: state make|validate, parity dump, ps eval|grid|coeffs,
conv apply, tomo simulate|full|compare|density, radon fwd|inv,
limits compare.  Report-path commands render a PNG figure next to the
delimited output unless --no-figure is given.

Exit codes: 0 success, 2 domain/contract errors (single line
``E:<module>:<code>: message`` on stderr), 64 usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import ensemble, fileio, figures
from .convolution import transform_s
from .errors import SpinPhaseError
from .halfint import half_integer
from .parity import parity_operator, radon_parity
from .phasespace import (
    evaluate_direct,
    phase_point,
    planar_limit_error,
    to_spherical_coeffs,
)
from .radon import radon_forward, radon_inverse
from .specialfn import projection_values
from .states import (
    make_named_state,
    random_hs,
    random_pure,
    validate_density,
    validate_pure,
    DensityMatrix,
    PureState,
)
from .tomography import (
    GridSpec,
    full_tomography,
    grid_values,
    multinomial_counts,
    probabilities_grid,
    reconstruct_density,
    reconstruction_conditioning,
)

_OUT_DIR_ENV = "SPINPHASE_OUT_DIR"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _out_path(args, default_name: str) -> Path:
    if getattr(args, "out", None):
        return Path(args.out)
    base = Path(os.environ.get(_OUT_DIR_ENV, "."))
    return base / default_name


def _as_density(state) -> DensityMatrix:
    if isinstance(state, PureState):
        return state.density()
    return state


def _figure_wanted(args) -> bool:
    return not getattr(args, "no_figure", False)


# ---------------------------------------------------------------- state


def _cmd_state_make(args) -> int:
    J = half_integer(args.J)
    kind = args.kind
    if kind == "random_pure":
        state = random_pure(J, args.seed)
    elif kind == "random_hs":
        state = random_hs(J, args.seed)
    elif kind == "dicke":
        if args.m is None:
            raise _UsageError("--kind dicke requires --m")
        state = make_named_state("dicke", J, m=half_integer(args.m))
    elif kind == "squeezed":
        state = make_named_state("squeezed", J, angle=args.angle)
    else:
        state = make_named_state(kind, J)
    path = _out_path(args, f"state_{kind}.json")
    fileio.save_state(state, path)
    print(path)
    return 0


def _cmd_state_validate(args) -> int:
    state = fileio.load_state(args.infile)
    if isinstance(state, PureState):
        validate_pure(state)
        print(f"ok kind=pure twice_J={state.J.twice}")
    else:
        validate_density(state)
        print(f"ok kind=density twice_J={state.J.twice}")
    return 0


# ---------------------------------------------------------------- parity


def _cmd_parity_dump(args) -> int:
    J = half_integer(args.J)
    op = radon_parity(J, args.s) if args.radon else parity_operator(J, args.s)
    path = _out_path(args, "parity.csv")
    m_values = projection_values(J)
    fileio.save_parity_csv(path, m_values, op.diag)
    if _figure_wanted(args):
        label = f"[M{'^R' if args.radon else ''}_s] diagonal, J={J}, s={args.s:g}"
        figures.save_parity_plot(path.with_suffix(".png"), m_values, op.diag, label)
    print(path)
    return 0


# ---------------------------------------------------------------- ps


def _cmd_ps_eval(args) -> int:
    rho = _as_density(fileio.load_state(args.state))
    value = evaluate_direct(rho, phase_point(args.theta, args.phi), args.s)
    print(fileio.fmt(value))
    return 0


def _cmd_ps_grid(args) -> int:
    rho = _as_density(fileio.load_state(args.state))
    grid = GridSpec(args.n)
    values = grid_values(rho, grid, args.s)
    path = _out_path(args, "grid.csv")
    if args.format == "json":
        payload = {
            "thetas": [float(t) for t in grid.thetas],
            "phis": [float(p) for p in grid.phis],
            "values": [[float(v) for v in row] for row in values],
        }
        path.write_text(json.dumps(payload, sort_keys=True))
    elif args.format == "pgm":
        fileio.save_pgm(path.with_suffix(".pgm"), values)
        fileio.save_ppm(path.with_suffix(".ppm"), values)
    else:
        fileio.save_grid_csv(path, grid.thetas, grid.phis, values)
    if _figure_wanted(args):
        figures.save_heatmap(
            path.with_suffix(".png"),
            grid.thetas,
            grid.phis,
            values,
            title=f"F(theta, phi, s={args.s:g})",
        )
    print(path)
    return 0


def _cmd_ps_coeffs(args) -> int:
    rho = _as_density(fileio.load_state(args.state))
    f = to_spherical_coeffs(rho, args.s)
    path = _out_path(args, "coeffs.json")
    fileio.save_coeffs(f, path)
    print(path)
    return 0


# ---------------------------------------------------------------- conv


def _cmd_conv_apply(args) -> int:
    f = fileio.load_coeffs(args.infile)
    g = transform_s(f, args.kernel_s)
    path = _out_path(args, "convolved.json")
    fileio.save_coeffs(g, path)
    print(path)
    return 0


# ---------------------------------------------------------------- tomo


def _cmd_tomo_simulate(args) -> int:
    config = ensemble.ExperimentConfig.from_dict(json.loads(Path(args.config).read_text()))
    report = ensemble.run_ensemble_experiment(config, threads=args.threads)
    path = _out_path(args, f"report_{config.mode}.json")
    path.write_text(report.to_json())
    if _figure_wanted(args):
        if config.mode == "compare3x3":
            figures.save_compare_grid(path.with_suffix(".png"), report)
        else:
            figures.save_error_histograms(path.with_suffix(".png"), report)
            if "scaling" in report.results:
                figures.save_scaling_plot(
                    path.with_name(path.stem + "_scaling.png"), report
                )
    print(path)
    return 0


def _cmd_tomo_compare(args) -> int:
    raw = json.loads(Path(args.config).read_text())
    raw["mode"] = "compare3x3"
    config = ensemble.ExperimentConfig.from_dict(raw)
    report = ensemble.run_ensemble_experiment(config, threads=args.threads)
    path = _out_path(args, "report_compare3x3.json")
    path.write_text(report.to_json())
    if _figure_wanted(args):
        figures.save_compare_grid(path.with_suffix(".png"), report)
    print(path)
    return 0


def _cmd_tomo_full(args) -> int:
    rho = _as_density(fileio.load_state(args.state))
    grid = GridSpec(args.n_grid).validate_for(rho.J.twice)
    if args.n_rep == 0:
        values = grid_values(rho, grid, args.s)
    else:
        probs = probabilities_grid(rho, grid)
        weights = parity_operator(rho.J, args.s).diag
        n = grid.n_points
        values = np.empty((n, n))
        for k in range(n):
            for q in range(n):
                gen = ensemble.stream(args.seed, 2, 0, k * n + q)
                counts = multinomial_counts(probs[k, q], args.n_rep, gen)
                values[k, q] = (counts @ weights) / args.n_rep
    f = full_tomography(values, grid, rho.J, args.s)
    path = _out_path(args, "tomography.json")
    fileio.save_coeffs(f, path)
    print(path)
    return 0


def _cmd_tomo_density(args) -> int:
    f = fileio.load_coeffs(args.infile)
    rho = reconstruct_density(f)
    report = reconstruction_conditioning(f.twice_J, f.s_tag)
    path = _out_path(args, "density.json")
    fileio.save_state(rho, path)
    print(
        f"conditioning: dual_s={report['dual_s']:g} "
        f"max_abs_weight={report['max_abs_weight']:.6g} "
        f"rank_weight_spread={report['rank_weight_spread']:.6g}"
    )
    print(path)
    return 0


# ---------------------------------------------------------------- radon


def _cmd_radon(args) -> int:
    f = fileio.load_coeffs(args.infile)
    g = radon_forward(f) if args.direction == "fwd" else radon_inverse(f)
    path = _out_path(args, f"radon_{args.direction}.json")
    fileio.save_coeffs(g, path)
    print(path)
    return 0


# ---------------------------------------------------------------- limits

_LIMIT_PAIRS = {
    "spinup-q": ("spin_up", -1.0),
    "spinup-w": ("spin_up", 0.0),
    "dicke-w": ("dicke_one", 0.0),
}


def _cmd_limits_compare(args) -> int:
    name, s = _LIMIT_PAIRS[args.pair]
    j_list = [half_integer(tok) for tok in args.J_list.split(",")]
    errors = [planar_limit_error(J, s, name) for J in j_list]
    path = _out_path(args, f"limits_{args.pair}.csv")
    lines = ["J,max_abs_difference"]
    for J, err in zip(j_list, errors):
        lines.append(f"{J.value:g},{fileio.fmt(err)}")
    Path(path).write_text("\n".join(lines) + "\n")
    if _figure_wanted(args):
        figures.save_convergence_plot(
            Path(path).with_suffix(".png"),
            [J.value for J in j_list],
            errors,
            f"planar-limit convergence ({args.pair})",
        )
    print(path)
    return 0


# ---------------------------------------------------------------- parser


def _add_common(p, out=True, seed=False, fmt=False, figure=False, threads=False):
    if out:
        p.add_argument("--out", help="output path (default: $SPINPHASE_OUT_DIR or cwd)")
    if seed:
        p.add_argument("--seed", type=int, default=0, help="master seed (u64)")
    if fmt:
        p.add_argument("--format", choices=("json", "csv", "pgm"), default="csv")
    if figure:
        p.add_argument("--no-figure", action="store_true", help="skip the PNG figure")
    if threads:
        p.add_argument("--threads", type=int, default=1, help="parallel state workers")


def build_parser() -> _Parser:
    parser = _Parser(prog="spinphase", description=__doc__)
    top = parser.add_subparsers(dest="group")

    state = top.add_parser("state", help="make or validate state files").add_subparsers(
        dest="action"
    )
    make = state.add_parser("make")
    make.add_argument(
        "--kind",
        required=True,
        choices=("spin_up", "dicke", "ghz", "squeezed", "rnd_j4_fixture", "random_pure", "random_hs"),
    )
    make.add_argument("--J", required=True, help="spin number, e.g. 5/2")
    make.add_argument("--m", help="dicke projection")
    make.add_argument("--angle", type=float, default=0.3, help="squeezing angle")
    _add_common(make, seed=True)
    make.set_defaults(func=_cmd_state_make)
    val = state.add_parser("validate")
    val.add_argument("--in", dest="infile", required=True)
    val.set_defaults(func=_cmd_state_validate)

    parity = top.add_parser("parity", help="dump parity weights").add_subparsers(dest="action")
    dump = parity.add_parser("dump")
    dump.add_argument("--J", required=True)
    dump.add_argument("--s", type=float, required=True)
    dump.add_argument("--radon", action="store_true")
    _add_common(dump, figure=True)
    dump.set_defaults(func=_cmd_parity_dump)

    ps = top.add_parser("ps", help="evaluate phase-space functions").add_subparsers(dest="action")
    ev = ps.add_parser("eval")
    ev.add_argument("--state", required=True)
    ev.add_argument("--s", type=float, required=True)
    ev.add_argument("--theta", type=float, required=True)
    ev.add_argument("--phi", type=float, required=True)
    ev.set_defaults(func=_cmd_ps_eval)
    gr = ps.add_parser("grid")
    gr.add_argument("--state", required=True)
    gr.add_argument("--s", type=float, required=True)
    gr.add_argument("--n", type=int, required=True, help="grid size N_p (even)")
    _add_common(gr, fmt=True, figure=True)
    gr.set_defaults(func=_cmd_ps_grid)
    co = ps.add_parser("coeffs")
    co.add_argument("--state", required=True)
    co.add_argument("--s", type=float, required=True)
    _add_common(co)
    co.set_defaults(func=_cmd_ps_coeffs)

    conv = top.add_parser("conv", help="s-parameter transformations").add_subparsers(dest="action")
    ap = conv.add_parser("apply")
    ap.add_argument("--kernel-s", dest="kernel_s", type=float, required=True)
    ap.add_argument("--in", dest="infile", required=True)
    _add_common(ap)
    ap.set_defaults(func=_cmd_conv_apply)

    tomo = top.add_parser("tomo", help="tomography pipelines").add_subparsers(dest="action")
    sim = tomo.add_parser("simulate")
    sim.add_argument("--config", required=True)
    _add_common(sim, figure=True, threads=True)
    sim.set_defaults(func=_cmd_tomo_simulate)
    cmp_ = tomo.add_parser("compare")
    cmp_.add_argument("--config", required=True)
    _add_common(cmp_, figure=True, threads=True)
    cmp_.set_defaults(func=_cmd_tomo_compare)
    full = tomo.add_parser("full")
    full.add_argument("--state", required=True)
    full.add_argument("--s", type=float, required=True)
    full.add_argument("--np", dest="n_grid", type=int, required=True)
    full.add_argument("--nr", dest="n_rep", type=int, required=True, help="0 = exact probabilities")
    _add_common(full, seed=True)
    full.set_defaults(func=_cmd_tomo_full)
    dens = tomo.add_parser("density")
    dens.add_argument("--in", dest="infile", required=True)
    _add_common(dens)
    dens.set_defaults(func=_cmd_tomo_density)

    radon = top.add_parser("radon", help="spherical Radon transform").add_subparsers(dest="action")
    for direction in ("fwd", "inv"):
        sub = radon.add_parser(direction)
        sub.add_argument("--in", dest="infile", required=True)
        _add_common(sub)
        sub.set_defaults(func=_cmd_radon, direction=direction)

    limits = top.add_parser("limits", help="planar-limit comparisons").add_subparsers(dest="action")
    lc = limits.add_parser("compare")
    lc.add_argument("--pair", required=True, choices=sorted(_LIMIT_PAIRS))
    lc.add_argument("--J-list", dest="J_list", required=True, help="comma-separated spin numbers")
    _add_common(lc, figure=True)
    lc.set_defaults(func=_cmd_limits_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 64
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return 64
    try:
        return args.func(args) or 0
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 64
    except SpinPhaseError as exc:
        print(exc.oneline(), file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"E:cli:io: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"E:cli:format: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
