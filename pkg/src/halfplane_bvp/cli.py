"""Command-line entry point.

Subcommands:

* kernel-table  -- tabulate the signed Poisson kernel for a list of alpha
                   values (CSV, optional SVG overlay plot);
* solve         -- run one of the three boundary value problems on a tensor
                   grid, emitting the field as CSV plus a JSON metadata
                   record (configuration, classification, residual summary);
* classify      -- print well-posedness reports over (k, p) grids;
* verify        -- run the verification suite and write machine-readable
                   reports;
* spectrum      -- tabulate the log-line multiplier symbol and the product
                   identity residual over a frequency grid.

Exit codes: 0 success, 1 suite failure, 2 configuration/threshold
rejection, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import (
    Branch,
    Problem,
    ProblemConfig,
    classify,
    derive_config,
)
from .errors import (
    BranchDegenerate,
    DomainError,
    HalfplaneBVPError,
    InvalidExponent,
    NotInvertible,
    OutOfBoundednessRange,
    QuadratureFailure,
)
from .operators import MultiplierSymbol, log_line_symbol
from .quadrature import PRESET_NAMES, PVQuadratureScheme, preset_sample
from .solver import (
    DEFAULT_GRID,
    GridKind,
    GridSpec,
    harmonic_measure_table,
    solve_dirichlet,
    solve_neumann,
    solve_regularity,
)
from .verify import curl_residual, pde_residual, run_suite, summary_table

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_CONFIG_REJECTED = 2
EXIT_NUMERICAL_FAILURE = 3


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"
    SVG = "svg"


@dataclass
class RunManifest:
    """Resolved invocation: command, config sources, output routing."""

    command: str
    config_path: str | None = None
    overrides: dict = dataclasses.field(default_factory=dict)
    output_format: OutputFormat = OutputFormat.CSV
    output_path: str = "out"

    def __post_init__(self) -> None:
        if self.output_format is OutputFormat.SVG and self.command not in ("kernel-table", "solve"):
            raise DomainError("svg output only applies to kernel-table and solve")


def _merge_config(args: argparse.Namespace) -> dict:
    """File settings overridden by explicit CLI flags."""
    settings: dict = {}
    if args.cfg:
        with open(args.cfg) as fh:
            settings.update(json.load(fh))
    for key in ("k", "p", "branch", "problem", "preset", "grid", "t", "x", "seed"):
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            settings[key] = val
    return settings


def _scheme_from(settings: dict) -> PVQuadratureScheme:
    quad = settings.get("quadrature", {})
    if not quad:
        return PVQuadratureScheme()
    return PVQuadratureScheme(**{k.replace("-", "_"): v for k, v in quad.items()})


def _config_from(settings: dict, default_branch: str = "h1") -> ProblemConfig:
    k = float(settings.get("k", 0.0))
    p = float(settings.get("p", 2.0))
    branch = Branch(settings.get("branch", default_branch))
    return derive_config(k, p, branch)


def _write_rows(path: str, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _svg_curves(path: str, curves: dict, xlabel: str, ylabel: str, title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8.0, 5.0))
    for label, (xs, ys) in curves.items():
        ax.plot(xs, ys, label=label, linewidth=1.4)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.axhline(0.0, color="0.7", linewidth=0.6)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_kernel_table(args: argparse.Namespace) -> int:
    settings = _merge_config(args)
    alphas = args.alpha_list or [-1.5, -0.75, 0.0, 0.75]
    t = float(settings.get("t", 0.5))
    x = float(settings.get("x", 1.0))
    half = np.linspace(0.0, 4.0, 201)[1:]
    y_grid = np.concatenate([-half[::-1], half])
    rows = harmonic_measure_table(alphas, t, x, y_grid)
    out = args.out or "kernel_table"
    fmt = OutputFormat(args.format or "csv")
    RunManifest("kernel-table", args.cfg, settings, fmt, out)
    if fmt is OutputFormat.SVG:
        curves = {}
        for alpha in alphas:
            pts = [(y, v) for (a, y, v) in rows if a == float(alpha)]
            curves[f"alpha={alpha:g}"] = (np.asarray([p[0] for p in pts]),
                                          np.asarray([p[1] for p in pts]))
        _svg_curves(f"{out}.svg", curves, "y", "kernel",
                    f"harmonic measure density at (t, x) = ({t:g}, {x:g})")
        print(f"wrote {out}.svg")
    else:
        _write_rows(f"{out}.csv", "alpha,y,P", rows)
        print(f"wrote {out}.csv ({len(rows)} rows)")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    settings = _merge_config(args)
    problem = Problem(settings.get("problem", "dirichlet"))
    out = args.out or f"solve_{problem.value}"
    RunManifest("solve", args.cfg, settings, OutputFormat(args.format or "csv"), out)
    default_branch = "lpinf" if problem is Problem.DIRICHLET else "h1"
    cfg = _config_from(settings, default_branch)
    scheme = _scheme_from(settings)
    grid_spec = GridSpec.parse(settings["grid"]) if "grid" in settings else DEFAULT_GRID
    preset = settings.get("preset", "bump")
    center, width = (0.0, 1.0) if problem is Problem.DIRICHLET else (0.0, 1.5)
    datum = preset_sample(preset, center=center, width=width)
    if problem is Problem.REGULARITY and preset == "bump":
        datum = preset_sample("bump-prime", center=center, width=width)

    if problem is Problem.DIRICHLET:
        grid = solve_dirichlet(datum, cfg, grid_spec, scheme)
    elif problem is Problem.NEUMANN:
        grid = solve_neumann(datum, cfg, grid_spec, scheme)
    else:
        grid = solve_regularity(datum, cfg, grid_spec, scheme)

    grid.to_csv(f"{out}.csv")

    if grid.kind is GridKind.POTENTIAL:
        try:
            residual = {"quadrant_laplacian": pde_residual(grid, cfg).measured_error}
        except HalfplaneBVPError as exc:
            residual = {"quadrant_laplacian": f"unavailable: {exc}"}
    else:
        try:
            residual = {"curl": curl_residual(grid)}
        except HalfplaneBVPError as exc:
            residual = {"curl": f"unavailable: {exc}"}

    h1_rep, lp_rep = classify(problem, cfg.k, cfg.p)
    meta = {
        "config": {"k": cfg.k, "p": cfg.p, "q": cfg.q,
                   "branch": cfg.branch.value, "alpha": cfg.alpha},
        "problem": problem.value,
        "preset": preset,
        "classification": {
            "h1": h1_rep.status.value,
            "lpinf": lp_rep.status.value,
            "threshold_value": h1_rep.threshold_value,
        },
        "residual_summary": residual,
        "grid": {"nt": len(grid.t_levels), "nx": len(grid.x_nodes)},
    }
    with open(f"{out}.json", "w") as fh:
        json.dump(meta, fh, indent=2)

    if (args.format or "csv") == "svg":
        curves = {}
        step = max(1, len(grid.t_levels) // 6)
        for i in range(0, len(grid.t_levels), step):
            vals = grid.values[i] if grid.kind is GridKind.POTENTIAL else grid.values[i, :, 0]
            curves[f"t={grid.t_levels[i]:.3g}"] = (grid.x_nodes, vals)
        _svg_curves(f"{out}.svg", curves, "x",
                    "U" if grid.kind is GridKind.POTENTIAL else "F0",
                    f"{problem.value} solution profiles (k={cfg.k:g})")
        print(f"wrote {out}.svg")
    print(f"wrote {out}.csv and {out}.json")
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    settings = _merge_config(args)
    RunManifest("classify", args.cfg, settings, OutputFormat(args.format or "csv"), "-")
    if "k" in settings and "p" not in settings:
        ps = [1.5, 2.0, 3.0, 4.0]
        ks = [float(settings["k"])]
    elif "p" in settings and "k" not in settings:
        ps = [float(settings["p"])]
        ks = list(np.linspace(-2.0, 2.0, 17))
    else:
        ps = [float(settings.get("p", 2.0))]
        ks = [float(settings.get("k", 0.0))]
    print(f"{'problem':12s} {'k':>8s} {'p':>6s} {'threshold':>10s} {'H1 sense':>10s} {'LpInf sense':>12s}")
    for p in ps:
        for k in ks:
            for problem in Problem:
                h1_rep, lp_rep = classify(problem, k, p)
                print(f"{problem.value:12s} {k:8.4f} {p:6.3f} "
                      f"{h1_rep.threshold_value:10.4f} {h1_rep.status.value:>10s} "
                      f"{lp_rep.status.value:>12s}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    settings = _merge_config(args)
    out = args.out or "verification_report"
    RunManifest("verify", args.cfg, settings, OutputFormat(args.format or "json"), out)
    cfgs = None
    if "k" in settings or "p" in settings:
        k = float(settings.get("k", 0.0))
        p = float(settings.get("p", 2.0))
        cfgs = []
        for branch in (Branch.H1, Branch.LPINF):
            try:
                cfgs.append(derive_config(k, p, branch))
            except NotInvertible:
                pass  # threshold k: the rejection checks cover it
    reports = run_suite(cfgs, only=args.only, heavy=not args.fast,
                        seed=int(settings.get("seed", 7)))
    print(summary_table(reports))
    with open(f"{out}.json", "w") as fh:
        json.dump([dataclasses.asdict(r) for r in reports], fh, indent=2)
    print(f"wrote {out}.json")
    failures = [r for r in reports
                if not r.passed and not r.parameters.get("expected_failure")]
    return EXIT_SUITE_FAILURE if failures else EXIT_OK


def cmd_spectrum(args: argparse.Namespace) -> int:
    settings = _merge_config(args)
    out = args.out or "spectrum"
    RunManifest("spectrum", args.cfg, settings, OutputFormat(args.format or "csv"), out)
    if args.gamma is not None:
        gamma = float(args.gamma)
        sym = log_line_symbol(gamma)  # validates (0, 2)
        # pick a (k, p) pair consistent with gamma = alpha + 1/p for the
        # identity column, avoiding the tan pole at alpha = 1
        k = p = None
        for p_try in (2.0, 3.0):
            alpha = gamma - 1.0 / p_try
            alpha -= 2.0 * round(alpha / 2.0)
            if abs(alpha) < 0.999:
                k, p = math.tan(math.pi * alpha / 2.0), p_try
                break
    else:
        cfg = _config_from(settings)
        k, p = cfg.k, cfg.p
        gamma = cfg.alpha + 1.0 / cfg.p
        sym = log_line_symbol(gamma)
    xi = np.linspace(-10.0, 10.0, 2001)
    mvals = sym(xi)
    if p is not None:
        m1 = MultiplierSymbol(1.0 / p)(xi)
        resid = np.abs((1.0 - k * m1) * (1.0 + k * mvals) - (1.0 + k * k))
    else:
        resid = np.zeros_like(xi)
    peak = float(np.max(np.abs(mvals)))
    if peak > 50.0:
        print(f"warning: |m| reaches {peak:.1f} near xi = 0 (gamma close to the boundary of (0, 2))")
    rows = zip(xi, mvals.real, mvals.imag, resid)
    _write_rows(f"{out}.csv", "xi,re_m,im_m,identity_residual", rows)
    print(f"wrote {out}.csv")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halfplane-bvp",
        description="Explicit half-plane boundary value problem solvers for "
                    "the non-symmetric jump-coefficient family",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--k", type=float, default=None, help="off-diagonal coefficient")
        sp.add_argument("--p", type=float, default=None, help="Lebesgue exponent in (1, inf)")
        sp.add_argument("--branch", choices=["h1", "lpinf"], default=None)
        sp.add_argument("--cfg", type=str, default=None, help="JSON config file")
        sp.add_argument("--out", type=str, default=None, help="output path stem")
        sp.add_argument("--format", choices=["csv", "json", "svg"], default=None)
        sp.add_argument("--seed", type=int, default=None)

    kt = sub.add_parser("kernel-table", help="tabulate the signed Poisson kernel")
    common(kt)
    kt.add_argument("--alpha-list", type=float, nargs="+", default=None)
    kt.add_argument("--t", type=float, default=None)
    kt.add_argument("--x", type=float, default=None)
    kt.set_defaults(fn=cmd_kernel_table)

    sv = sub.add_parser("solve", help="solve a boundary value problem on a grid")
    common(sv)
    sv.add_argument("--problem", choices=[p.value for p in Problem], default=None)
    sv.add_argument("--preset", choices=list(PRESET_NAMES), default=None)
    sv.add_argument("--grid", type=str, default=None, help="t0:t1:nt,x0:x1:nx")
    sv.set_defaults(fn=cmd_solve)

    cl = sub.add_parser("classify", help="well-posedness classification tables")
    common(cl)
    cl.set_defaults(fn=cmd_classify)

    vf = sub.add_parser("verify", help="run the verification suite")
    common(vf)
    vf.add_argument("--only", type=str, default=None, help="run a single named check")
    vf.add_argument("--fast", action="store_true", help="skip the slow solver checks")
    vf.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("spectrum", help="tabulate the log-line multiplier symbol")
    common(sp)
    sp.add_argument("--gamma", type=float, default=None, help="symbol index in (0, 2)")
    sp.set_defaults(fn=cmd_spectrum)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (InvalidExponent, BranchDegenerate, NotInvertible, DomainError,
            OutOfBoundednessRange) as exc:
        print(f"configuration rejected: {exc}", file=sys.stderr)
        return EXIT_CONFIG_REJECTED
    except QuadratureFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE


if __name__ == "__main__":
    sys.exit(main())
