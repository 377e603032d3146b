"""Command-line front end: ``resonant-filter <subcommand> [options]``.

Exit codes: 0 success, 1 usage error, 2 invalid parameter domain,
3 I/O failure, 4 verification failure.
"""

import argparse
import itertools
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import figures, states, verify
from .channel import spectrum
from .protocol import SchemeKind, run_superoperator, scheme_superoperator
from .scattering import DegenerateParametersError, ScatteringParams, closed_form_T_R
from .states import DensityMatrix, InvalidStateError
from .wavepacket import MomentumDistribution, averaged_channel

EXIT_USAGE, EXIT_DOMAIN, EXIT_IO, EXIT_VERIFY = 1, 2, 3, 4

PRESETS = {"mixed": states.mixed, "singlet": states.singlet, "updown": states.updown}
FIGURES = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7")


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def rho0_preset(name):
    """Named initial AB state, or a 4x4 matrix read from a whitespace-separated
    text file (complex entries written like ``0.5+0j``)."""
    if name in PRESETS:
        return PRESETS[name]()
    if name == "custom":
        raise DomainError("'custom' needs a file path passed to --rho0")
    if not os.path.isfile(name):
        raise DomainError(f"unknown rho0 preset {name!r} (expected {', '.join(PRESETS)} or a file)")
    try:
        m = np.loadtxt(name, dtype=complex, ndmin=2)
    except OSError as exc:
        raise OSError(f"cannot read {name}: {exc}") from exc
    except ValueError as exc:
        raise DomainError(f"cannot parse {name} as a 4x4 matrix: {exc}") from exc
    try:
        return DensityMatrix.from_array(m, tol=1e-9)
    except InvalidStateError as exc:
        raise DomainError(f"{name}: {exc}") from exc


def _add_common(p):
    p.add_argument("--g", type=float, nargs="+", help="coupling m g d / (hbar^2 pi)")
    p.add_argument("--kd", type=float, nargs="+", help="wave vector k d / pi (k0 d / pi when averaged)")
    p.add_argument("--epsilon", type=float, help="momentum width in units of pi / d")
    p.add_argument("--N", type=int, dest="n", help="number of repetitions")
    p.add_argument("--rho0", help="initial AB state: mixed | singlet | updown | path to a 4x4 matrix file")
    p.add_argument("--panel", choices=("a", "b"), default="a")
    p.add_argument("--points", type=int, help="grid points along the swept axis")
    p.add_argument("--nodes", type=int, default=64, help="Gauss-Legendre nodes per panel")
    p.add_argument("--panels", type=int, default=16, help="quadrature panels")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=None, help="worker processes for sweeps")


def build_parser():
    parser = _Parser(prog="resonant-filter", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in FIGURES:
        _add_common(sub.add_parser(name, help=f"data for {name}"))
    v = sub.add_parser("verify", help="run the invariant and acceptance suite")
    v.add_argument("--out", help="write the report here as well")
    s = sub.add_parser("sweep", help="parameter sweep from a key = value config file")
    s.add_argument("config")
    _add_common(s)
    return parser


def _first(values, default):
    return values[0] if values else default


def _validate(args):
    for g in args.g or ():
        if not np.isfinite(g):
            raise DomainError(f"--g must be finite, got {g}")
    for kd in args.kd or ():
        if not kd > 0:
            raise DomainError(f"--kd must be positive, got {kd}")
    if args.epsilon is not None and not args.epsilon >= 0:
        raise DomainError(f"--epsilon must be nonnegative, got {args.epsilon}")
    if args.n is not None and args.n < 1:
        raise DomainError(f"--N must be at least 1, got {args.n}")
    if args.points is not None and args.points < 1:
        raise DomainError(f"--points must be at least 1, got {args.points}")
    if args.nodes < 2 or args.panels < 1:
        raise DomainError("--nodes must be >= 2 and --panels >= 1")
    if args.jobs is not None and args.jobs < 1:
        raise DomainError(f"--jobs must be at least 1, got {args.jobs}")


def _opt(**kw):
    return {k: v for k, v in kw.items() if v is not None}


def figure_table(args):
    name = args.command
    rho0 = rho0_preset(args.rho0) if args.rho0 else None
    panel = dict(panel=args.panel, extra_g=args.g or (), extra_kd=args.kd or ())
    if name == "fig2":
        return figures.fig2(g_values=figures.family(figures.G_PRESETS, args.g),
                            rho_ab=rho0, **_opt(points=args.points, rho_ab_name=args.rho0))
    if name == "fig3":
        return figures.fig3(g=_first(args.g, 1.0), **_opt(points=args.points))
    if args.panel == "a":
        panel.update(g=_first(args.g, 1.0), extra_g=())
    else:
        panel.update(kd=_first(args.kd, 2.0), extra_kd=())
    quad = dict(n_nodes=args.nodes, n_panels=args.panels)
    if name == "fig4":
        return figures.fig4(**panel, rho0=rho0, **_opt(n_max=args.n, rho0_name=args.rho0))
    if name == "fig5":
        return figures.fig5(g=_first(args.g, 1.0), kd=_first(args.kd, 2.0), rho0=rho0,
                            **_opt(n_max=args.n, rho0_name=args.rho0))
    if name == "fig6":
        return figures.fig6(**panel, **quad, **_opt(eps_max=args.epsilon, points=args.points))
    return figures.fig7(**panel, **quad, rho0=rho0,
                        **_opt(epsilon=args.epsilon, n_max=args.n, rho0_name=args.rho0))


# --- sweep -----------------------------------------------------------------

GRID_KEYS = ("g", "kd", "epsilon", "N")
SCALAR_KEYS = ("rho0", "scheme", "nodes", "panels")


def read_config(path):
    """Parse ``key = v1, v2, ...`` lines; ``#`` starts a comment."""
    with open(path) as fh:
        text = fh.read()
    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in GRID_KEYS + SCALAR_KEYS:
            raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
        cfg[key] = value
    return cfg


def _parse_list(cfg, key, cast, default):
    if key not in cfg:
        return list(default)
    try:
        return [cast(v) for v in cfg[key].replace(",", " ").split()]
    except ValueError as exc:
        raise DomainError(f"bad value for {key}: {exc}") from exc


def sweep_grid(cfg, args):
    grid = {
        "g": _parse_list(cfg, "g", float, args.g or [1.0]),
        "kd": _parse_list(cfg, "kd", float, args.kd or [1.0]),
        "epsilon": _parse_list(cfg, "epsilon", float, [args.epsilon or 0.0]),
        "N": _parse_list(cfg, "N", int, [args.n or 10]),
        "rho0": cfg.get("rho0", args.rho0 or "mixed"),
        "scheme": cfg.get("scheme", SchemeKind.TRANSMISSION_ONLY.value),
        "nodes": int(cfg.get("nodes", args.nodes)),
        "panels": int(cfg.get("panels", args.panels)),
    }
    for key in GRID_KEYS:
        if not grid[key]:
            raise DomainError(f"empty grid for {key}")
    if any(not kd > 0 for kd in grid["kd"]) or any(e < 0 for e in grid["epsilon"]) or any(n < 1 for n in grid["N"]):
        raise DomainError("sweep grid outside the allowed domain (kd > 0, epsilon >= 0, N >= 1)")
    try:
        scheme = SchemeKind(grid["scheme"])
    except ValueError:
        raise DomainError(f"unknown scheme {grid['scheme']!r}") from None
    if scheme is not SchemeKind.TRANSMISSION_ONLY and any(e > 0 for e in grid["epsilon"]):
        raise DomainError("momentum averaging is only defined for the transmission_only scheme")
    return grid


def _sweep_point(job):
    g, kd, eps, n_list, rho0, scheme, nodes, panels = job
    if eps == 0:
        ops = closed_form_T_R(ScatteringParams.from_caption(g, kd))
        s = scheme_superoperator(scheme, ops.t, ops.r)
    else:
        dist = MomentumDistribution(kd * np.pi, eps * np.pi, n_nodes=nodes, n_panels=panels)
        s = averaged_channel(dist, g).superop
    ev = spectrum(s).eigenvalues
    traj = run_superoperator(s, rho0, max(n_list))
    rows = []
    for n in n_list:
        if n < len(traj):
            f, p = traj.fidelity[n], traj.probability[n]
        else:
            f, p = float("nan"), 0.0
        rows.append((g, kd, eps, n, f, p, abs(ev[0]), abs(ev[1])))
    return rows


def sweep_table(args):
    try:
        cfg = read_config(args.config)
    except OSError as exc:
        raise OSError(f"cannot read config {args.config}: {exc}") from exc
    grid = sweep_grid(cfg, args)
    rho0 = rho0_preset(grid["rho0"])
    jobs = [
        (g, kd, e, grid["N"], rho0, grid["scheme"], grid["nodes"], grid["panels"])
        for g, kd, e in itertools.product(grid["g"], grid["kd"], grid["epsilon"])
    ]
    workers = args.jobs or os.cpu_count() or 1
    if workers == 1 or len(jobs) == 1:
        results = [_sweep_point(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_sweep_point, jobs))
    rows = [row for block in results for row in block]
    echo = {k: grid[k] for k in ("g", "kd", "epsilon", "N", "rho0", "scheme", "nodes", "panels")}
    table = figures.ResultTable("sweep", echo)
    columns = ["g", "kd_over_pi", "epsilon_over_pi", "N", "F", "P", "abs_lambda0", "abs_lambda1"]
    table.blocks.append(figures.Block({}, columns, rows))
    return table


# --- entry point -------------------------------------------------------------

def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"resonant-filter: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    try:
        if args.command == "verify":
            results = verify.run_all()
            report = "".join(r.line() + "\n" for r in results)
            sys.stdout.write(report)
            if args.out:
                _emit(report, args.out)
            return 0 if all(r.passed for r in results) else EXIT_VERIFY
        _validate(args)
        table = sweep_table(args) if args.command == "sweep" else figure_table(args)
        _emit(table.render(args.format), args.out)
    except (DomainError, InvalidStateError, DegenerateParametersError, ValueError) as exc:
        print(f"resonant-filter: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"resonant-filter: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
