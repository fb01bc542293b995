"""Command-line surface: bound tables, code construction, simulations,
leakage fits, and figure-reproduction pipelines.

Every command writes CSV with a fixed header, a leading ``# manifest:``
comment, and a ``<file>.manifest.json`` sidecar.  The embedded manifest
line excludes the timestamp (which lives in the sidecar), so reruns with
equal parameters and seeds produce byte-identical CSV files regardless of
the worker count.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import click
import numpy as np

from . import bounds, fit, ldpc, sim

ARTIFACT_VERSION = "0.1.0"

BOUNDS_HEADER = "n,eps,q,xi,conv,ach,exact,exact_opt"
FER_HEADER = "n_var,n_pay,rate,q,trials,errors,fer,ci_lo,ci_hi,leak_bits"
EFF_HEADER = "n_pay,q,eps_target,fer,ci_lo,ci_hi,leak_bits,f"
FIT_HEADER = "group,xi1,xi2,rss,max_resid,n_points"


@dataclass(frozen=True)
class RunManifest:
    """Provenance attached to every output file."""

    command: str
    parameters: dict
    seed: int
    artifact_version: str
    timestamp: str

    @classmethod
    def create(cls, command: str, parameters: dict, seed: int) -> "RunManifest":
        return cls(
            command=command,
            parameters=parameters,
            seed=seed,
            artifact_version=ARTIFACT_VERSION,
            timestamp=datetime.now(timezone.utc).isoformat(),
        )

    def comment_line(self) -> str:
        payload = {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "artifact_version": self.artifact_version,
        }
        return "# manifest: " + json.dumps(payload, sort_keys=True)

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, indent=2)


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".12g")


def write_csv(path, header: str, rows, manifest: RunManifest) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [manifest.comment_line(), header]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")
    Path(str(path) + ".manifest.json").write_text(manifest.to_json() + "\n")
    return path


def read_csv_rows(path):
    """Rows of a schema CSV as dicts of strings, comments skipped."""
    lines = [l for l in Path(path).read_text().splitlines() if l and not l.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


def parse_values(text: str) -> list[float]:
    """Parse '0.01,0.1' lists or 'start:stop:logK' log-spaced ranges."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3 or not parts[2].startswith("log"):
            raise click.BadParameter(f"range must be start:stop:logK, got {text!r}")
        k = int(parts[2][3:])
        return [float(v) for v in np.geomspace(float(parts[0]), float(parts[1]), k)]
    return [float(t) for t in text.split(",") if t.strip()]


def parse_lengths(text: str) -> list[int]:
    seen = {}
    for v in parse_values(text):
        seen.setdefault(int(round(v)), None)
    return list(seen)


def _resolve_lambda(name: str) -> ldpc.DegreeDistribution:
    if name in ldpc.BUILTIN_LAMBDAS:
        return ldpc.BUILTIN_LAMBDAS[name]
    path = Path(name)
    if path.exists():
        terms = []
        for line in path.read_text().splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                d, f = line.split()
                terms.append((int(d), float(f)))
        return ldpc.DegreeDistribution(tuple(terms))
    raise click.BadParameter(
        f"{name!r} is not a built-in polynomial ({', '.join(ldpc.BUILTIN_LAMBDAS)}) or a file"
    )


@click.group()
@click.version_option(ARTIFACT_VERSION, prog_name="finikey")
def main():
    """Finite-length reconciliation leakage bounds and LDPC benchmarks."""


@main.command("bounds")
@click.option("--n", "n_text", required=True, help="Block lengths: list or start:stop:logK.")
@click.option("--eps", "eps_text", required=True, help="Failure probabilities (list).")
@click.option("--q", "q_text", required=True, help="Crossover probabilities (list).")
@click.option("--exact/--no-exact", default=True, help="Evaluate the exact binomial-quantile converse.")
@click.option("--expansion/--no-expansion", default=True, help="Evaluate the third-order expansions.")
@click.option("--optimized/--no-optimized", default=False, help="Also maximize the exact bound over the slack.")
@click.option("--constant/--no-constant", default=False, help="Evaluate the explicit O(1) constant in the expansion.")
@click.option("--out", type=click.Path(dir_okay=False), default="bounds.csv", show_default=True)
def cmd_bounds(n_text, eps_text, q_text, exact, expansion, optimized, constant, out):
    """Tabulate efficiency and converse/achievability totals per (n, eps, q).

    Columns toggled off are reported as nan; the schema never changes.
    """
    try:
        ns = parse_lengths(n_text)
        epss = parse_values(eps_text)
        qs = parse_values(q_text)
        rows = bounds_rows(ns, epss, qs, exact=exact, expansion=expansion,
                           optimized=optimized, constant=constant)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    manifest = RunManifest.create(
        "bounds",
        {"n": ns, "eps": epss, "q": qs, "exact": exact, "expansion": expansion,
         "optimized": optimized, "constant": constant},
        seed=0,
    )
    path = write_csv(out, BOUNDS_HEADER, rows, manifest)
    click.echo(f"wrote {len(rows)} rows to {path}")


def bounds_rows(ns, epss, qs, exact=True, expansion=True, optimized=False, constant=False):
    rows = []
    for n in ns:
        for eps in epss:
            for q in qs:
                query = bounds.BoundQuery(n=n, eps=eps, q=q)
                conv = ach = math.nan
                if expansion:
                    conv = bounds.converse_expansion(query, include_constant=constant).total
                    ach = bounds.achievability_expansion(query).total
                ex = bounds.exact_converse(query) if exact else math.nan
                opt = bounds.exact_converse_optimized(query) if optimized else math.nan
                rows.append((n, eps, q, bounds.efficiency(query), conv, ach, ex, opt))
    return rows


@main.command("build")
@click.option("--n", type=int, required=True, help="Number of variable nodes.")
@click.option("--rate", type=float, required=True, help="Design coding rate in (0, 1).")
@click.option("--lambda", "lam", default="lambda2", show_default=True,
              help="Built-in polynomial name or a 'degree fraction' file.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Output alist path.")
def cmd_build(n, rate, lam, seed, out):
    """Construct a parity-check matrix and write it in alist format."""
    dist = _resolve_lambda(lam)
    try:
        h = ldpc.peg_construct(n, rate, dist, seed)
    except (ValueError, ldpc.InfeasibleCodeError) as exc:
        raise click.ClickException(str(exc))
    ldpc.write_alist(h, out)
    deg, cnt = np.unique(h.var_degrees(), return_counts=True)
    hist = "  ".join(f"d={d}:{c}" for d, c in zip(deg, cnt))
    click.echo(f"wrote {h.n_var}x{h.n_chk} matrix ({h.n_edges} edges) to {out}")
    click.echo(f"variable degree histogram: {hist}")
    cdeg, ccnt = np.unique(h.check_degrees(), return_counts=True)
    click.echo("check degree histogram: " + "  ".join(f"d={d}:{c}" for d, c in zip(cdeg, ccnt)))


@main.command("simulate")
@click.option("--alist", "alist_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--q", "q_text", required=True, help="Crossover probabilities (list).")
@click.option("--eps-targets", "eps_text", default=None,
              help="Calibrate leak to these block error rates (single q required).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--stop-errors", type=int, default=sim.DEFAULT_STOP_ERRORS, show_default=True)
@click.option("--max-trials", type=int, default=sim.DEFAULT_MAX_TRIALS, show_default=True)
@click.option("--max-iter", type=int, default=ldpc.DEFAULT_MAX_ITER, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def cmd_simulate(ctx, alist_path, q_text, eps_text, seed, stop_errors, max_trials, max_iter, out):
    """Measure FER across q, or calibrate operating points to eps targets."""
    h = ldpc.read_alist(alist_path)
    qs = parse_values(q_text)
    params = {
        "alist": str(alist_path), "q": qs, "stop_errors": stop_errors,
        "max_trials": max_trials, "max_iter": max_iter,
    }
    failed = 0
    if eps_text is None:
        code = ldpc.adapt_rate(h, 0, 0, seed=seed)
        cfg = sim.TrialConfig(q=qs[0], seed=seed, stop_errors=stop_errors,
                              max_trials=max_trials, max_iter=max_iter)
        rows = [
            fer_row(h, code, q, est) for q, est in sim.sweep_q(code, qs, cfg)
        ]
        manifest = RunManifest.create("simulate", params, seed)
        path = write_csv(out, FER_HEADER, rows, manifest)
    else:
        if len(qs) != 1:
            raise click.ClickException("calibration mode needs exactly one --q value")
        targets = parse_values(eps_text)
        params["eps_targets"] = targets
        cfg = sim.TrialConfig(q=qs[0], seed=seed, stop_errors=stop_errors,
                              max_trials=max_trials, max_iter=max_iter)
        points = sim.sweep_eps(h, qs[0], targets, cfg)
        rows = []
        for target, point in zip(targets, points):
            if point is None:
                failed += 1
                click.echo(f"target eps={target:g} unreachable; row flagged", err=True)
                rows.append((h.n_var, qs[0], target, math.nan, math.nan, math.nan, h.n_chk, math.nan))
            else:
                rows.append(eff_row(point))
        manifest = RunManifest.create("simulate", params, seed)
        path = write_csv(out, EFF_HEADER, rows, manifest)
    click.echo(f"wrote {len(rows)} rows to {path}")
    if failed:
        ctx.exit(1)


def fer_row(h, code, q, est: sim.FerEstimate):
    rate = 1.0 - h.n_chk / h.n_var
    return (h.n_var, code.n_pay, rate, q, est.trials, est.errors,
            est.fer, est.ci_low, est.ci_high, code.leak_bits)


def eff_row(point: sim.EfficiencyPoint):
    est = point.estimate
    return (point.n_pay, point.q, point.eps_target, est.fer, est.ci_low,
            est.ci_high, point.leak_bits, point.f)


@main.command("fit")
@click.argument("points_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--floor-filter", type=float, default=fit.DEFAULT_FLOOR_EPS, show_default=True,
              help="Drop points with measured eps below this error-floor threshold.")
@click.option("--group-by", type=click.Choice(["all", "q-eps", "n-leak", "n-q"]), default="all",
              show_default=True, help="Grouping key mirroring the three summary-table blocks.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def cmd_fit(points_csv, floor_filter, group_by, out):
    """Fit (xi1, xi2) to measured leakage points from an efficiency CSV."""
    groups = load_fit_groups(points_csv, floor_filter, group_by)
    rows = []
    for key in sorted(groups):
        pts = groups[key]
        try:
            res = fit.fit_leak(pts)
        except (ValueError, fit.RankDeficientError) as exc:
            raise click.ClickException(f"group {key!r}: {exc}")
        rows.append((key, res.xi1, res.xi2, res.rss, res.max_abs_residual, len(pts)))
    manifest = RunManifest.create(
        "fit", {"points": str(points_csv), "floor_filter": floor_filter, "group_by": group_by}, 0
    )
    path = write_csv(out, FIT_HEADER, rows, manifest)
    click.echo(f"wrote {len(rows)} fits to {path}")


def load_fit_groups(points_csv, floor_filter, group_by):
    groups: dict[str, list[fit.FitPoint]] = {}
    for row in read_csv_rows(points_csv):
        fer = float(row["fer"])
        if math.isnan(fer) or fer < floor_filter:
            continue
        point = fit.FitPoint(
            n=float(row["n_pay"]), q=float(row["q"]), eps=fer, leak=float(row["leak_bits"])
        )
        if group_by == "q-eps":
            key = f"q={row['q']},eps={row['eps_target']}"
        elif group_by == "n-leak":
            key = f"leak={row['leak_bits']}"
        elif group_by == "n-q":
            key = f"q={row['q']}"
        else:
            key = "all"
        groups.setdefault(key, []).append(point)
    return groups


# ---------------------------------------------------------------------------
# Figure pipelines
# ---------------------------------------------------------------------------

# (q, eps, base rate, polynomial) groups for the efficiency-versus-length plot.
FIG1_GROUPS = [(0.025, 1e-2, 0.8, "lambda3"), (0.05, 1e-1, 0.7, "lambda2")]
FIG2_RATES = [
    (0.6, "lambda1", (0.036, 0.044, 0.052, 0.060, 0.068, 0.076)),
    (0.7, "lambda2", (0.022, 0.027, 0.032, 0.038, 0.044, 0.050)),
    (0.8, "lambda3", (0.010, 0.013, 0.016, 0.020, 0.024, 0.028)),
]
# (q, base rate, polynomial) groups for efficiency versus error rate at n=1e3.
FIG3_GROUPS = [(0.015, 0.8, "lambda3"), (0.03, 0.7, "lambda2")]
FIG3_EPS_TARGETS = (1e-1, 3e-2, 1e-2, 3e-3, 1e-3)


def _sim_cfg(q, seed, stop_errors, max_trials, max_iter):
    return sim.TrialConfig(q=q, seed=seed, stop_errors=stop_errors,
                           max_trials=max_trials, max_iter=max_iter)


def figure1(outdir, seed=20170, scale="desk", stop_errors=sim.DEFAULT_STOP_ERRORS,
            max_trials=10**6, max_iter=ldpc.DEFAULT_MAX_ITER, svg=False, n_list=None):
    """Efficiency limit versus block length, with measured LDPC points.

    Desk scale calibrates codes at n in {1e3, 1e4}; full scale adds 1e5.
    Returns {name: path} of the written files.
    """
    outdir = Path(outdir)
    if n_list is None:
        n_list = [1000, 10000] if scale == "desk" else [1000, 10000, 100000]
    params = {
        "scale": scale, "groups": FIG1_GROUPS, "n_points": list(n_list),
        "stop_errors": stop_errors, "max_trials": max_trials, "max_iter": max_iter,
    }
    n_grid = parse_lengths("1e2:1e6:log25")
    brows = []
    for q, eps, _, _ in FIG1_GROUPS:
        brows.extend(bounds_rows(n_grid, [eps], [q], optimized=True))

    erows = []
    failed = 0
    for gi, (q, eps, rate, lam) in enumerate(FIG1_GROUPS):
        for n in n_list:
            base = ldpc.peg_construct(n, rate, ldpc.BUILTIN_LAMBDAS[lam], seed=seed + gi)
            cfg = _sim_cfg(q, seed + gi, stop_errors, max_trials, max_iter)
            try:
                _, point = sim.calibrate_to_fer(base, q, eps, cfg)
                erows.append(eff_row(point))
            except sim.UnreachableTargetError:
                failed += 1
                erows.append((n, q, eps, math.nan, math.nan, math.nan, base.n_chk, math.nan))

    manifest = RunManifest.create("figure1", params, seed)
    paths = {
        "bounds": write_csv(outdir / "fig1_bounds.csv", BOUNDS_HEADER, brows, manifest),
        "eff": write_csv(outdir / "fig1_eff.csv", EFF_HEADER, erows, manifest),
    }
    fit_rows = _fit_rows_from_eff(erows, key_mode="q-eps")
    paths["fit"] = write_csv(outdir / "fig1_fit.csv", FIT_HEADER, fit_rows, manifest)
    if svg:
        paths["svg"] = _plot_fig1(outdir, brows, erows)
    return paths, failed


def figure2(outdir, seed=20170, scale="desk", stop_errors=sim.DEFAULT_STOP_ERRORS,
            max_trials=2 * 10**4, max_iter=ldpc.DEFAULT_MAX_ITER, svg=False, n_list=None):
    """Block error rate versus crossover for rates 0.6 / 0.7 / 0.8."""
    outdir = Path(outdir)
    if n_list is None:
        n_list = [1000] if scale == "desk" else [1000, 10000]
    params = {
        "scale": scale, "rates": [(r, l) for r, l, _ in FIG2_RATES], "n": list(n_list),
        "stop_errors": stop_errors, "max_trials": max_trials, "max_iter": max_iter,
    }
    rows = []
    for n in n_list:
        for ri, (rate, lam, q_grid) in enumerate(FIG2_RATES):
            base = ldpc.peg_construct(n, rate, ldpc.BUILTIN_LAMBDAS[lam], seed=seed + ri)
            code = ldpc.adapt_rate(base, 0, 0, seed=seed)
            cfg = _sim_cfg(q_grid[0], seed + ri, stop_errors, max_trials, max_iter)
            for q, est in sim.sweep_q(code, list(q_grid), cfg):
                rows.append(fer_row(base, code, q, est))
    manifest = RunManifest.create("figure2", params, seed)
    paths = {"fer": write_csv(outdir / "fig2_fer.csv", FER_HEADER, rows, manifest)}
    if svg:
        paths["svg"] = _plot_fig2(outdir, rows)
    return paths, 0


def figure3(outdir, seed=20170, scale="desk", stop_errors=sim.DEFAULT_STOP_ERRORS,
            max_trials=10**6, max_iter=ldpc.DEFAULT_MAX_ITER, svg=False,
            eps_targets=FIG3_EPS_TARGETS, n=1000):
    """Efficiency versus block error rate at fixed n and q."""
    outdir = Path(outdir)
    params = {
        "scale": scale, "groups": FIG3_GROUPS, "n": n, "eps_targets": list(eps_targets),
        "stop_errors": stop_errors, "max_trials": max_trials, "max_iter": max_iter,
    }
    erows = []
    brows = []
    failed = 0
    for gi, (q, rate, lam) in enumerate(FIG3_GROUPS):
        base = ldpc.peg_construct(n, rate, ldpc.BUILTIN_LAMBDAS[lam], seed=seed + gi)
        cfg = _sim_cfg(q, seed + gi, stop_errors, max_trials, max_iter)
        points = sim.sweep_eps(base, q, list(eps_targets), cfg)
        for target, point in zip(eps_targets, points):
            if point is None:
                failed += 1
                erows.append((n, q, target, math.nan, math.nan, math.nan, base.n_chk, math.nan))
            else:
                erows.append(eff_row(point))
        brows.extend(bounds_rows([n], list(eps_targets), [q], optimized=True))
    manifest = RunManifest.create("figure3", params, seed)
    paths = {
        "eff": write_csv(outdir / "fig3_eff.csv", EFF_HEADER, erows, manifest),
        "bounds": write_csv(outdir / "fig3_bounds.csv", BOUNDS_HEADER, brows, manifest),
    }
    fit_rows = _fit_rows_from_eff(erows, key_mode="n-q")
    paths["fit"] = write_csv(outdir / "fig3_fit.csv", FIT_HEADER, fit_rows, manifest)
    if svg:
        paths["svg"] = _plot_fig3(outdir, brows, erows)
    return paths, failed


def _fit_rows_from_eff(erows, key_mode):
    groups: dict[str, list[fit.FitPoint]] = {}
    for n_pay, q, eps_target, fer, _lo, _hi, leak, _f in erows:
        if math.isnan(fer) or fer < fit.DEFAULT_FLOOR_EPS:
            continue
        key = f"q={_fmt(q)},eps={_fmt(eps_target)}" if key_mode == "q-eps" else f"q={_fmt(q)}"
        groups.setdefault(key, []).append(fit.FitPoint(n=n_pay, q=q, eps=fer, leak=leak))
    rows = []
    for key in sorted(groups):
        pts = groups[key]
        if len(pts) < 2:
            continue
        res = fit.fit_leak(pts)
        rows.append((key, res.xi1, res.xi2, res.rss, res.max_abs_residual, len(pts)))
    return rows


def _require_matplotlib():
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        return plt
    except ImportError as exc:  # pragma: no cover - plotting extra
        raise click.ClickException("SVG output needs matplotlib (pip install finikey[plot])") from exc


def _plot_fig1(outdir, brows, erows):
    plt = _require_matplotlib()
    figp = Path(outdir) / "fig1.svg"
    fig, ax = plt.subplots(figsize=(6, 4))
    for q, eps, _, _ in FIG1_GROUPS:
        pts = [(r[0], r[3]) for r in brows if r[2] == q and r[1] == eps]
        ax.semilogx([p[0] for p in pts], [p[1] for p in pts], label=f"limit q={q}, eps={eps}")
    good = [r for r in erows if not math.isnan(r[7])]
    ax.semilogx([r[0] for r in good], [r[7] for r in good], "o", label="LDPC points")
    ax.set_xlabel("block length n")
    ax.set_ylabel("efficiency")
    ax.legend()
    fig.savefig(figp)
    plt.close(fig)
    return figp


def _plot_fig2(outdir, rows):
    plt = _require_matplotlib()
    figp = Path(outdir) / "fig2.svg"
    fig, ax = plt.subplots(figsize=(6, 4))
    for rate in sorted({r[2] for r in rows}):
        pts = [(r[3], max(r[6], 1e-7)) for r in rows if r[2] == rate]
        ax.semilogy([p[0] for p in pts], [p[1] for p in pts], "o-", label=f"R={rate:g}")
    ax.set_xlabel("crossover q")
    ax.set_ylabel("block error rate")
    ax.legend()
    fig.savefig(figp)
    plt.close(fig)
    return figp


def _plot_fig3(outdir, brows, erows):
    plt = _require_matplotlib()
    figp = Path(outdir) / "fig3.svg"
    fig, ax = plt.subplots(figsize=(6, 4))
    for q, _, _ in FIG3_GROUPS:
        pts = sorted((r[1], r[3]) for r in brows if r[2] == q)
        ax.semilogx([p[0] for p in pts], [p[1] for p in pts], label=f"limit q={q}")
        good = sorted((r[3], r[7]) for r in erows if r[1] == q and not math.isnan(r[7]))
        ax.semilogx([p[0] for p in good], [p[1] for p in good], "o--", label=f"LDPC q={q}")
    ax.set_xlabel("block error rate")
    ax.set_ylabel("efficiency")
    ax.legend()
    fig.savefig(figp)
    plt.close(fig)
    return figp


@main.command("figure")
@click.argument("number", type=click.IntRange(1, 3))
@click.option("--scale", type=click.Choice(["desk", "full"]), default="desk", show_default=True)
@click.option("--outdir", type=click.Path(file_okay=False), required=True)
@click.option("--seed", type=int, default=20170, show_default=True)
@click.option("--stop-errors", type=int, default=sim.DEFAULT_STOP_ERRORS, show_default=True)
@click.option("--max-trials", type=int, default=None,
              help="Trial cap per estimate [default: 1e6; 2e4 for figure 2].")
@click.option("--max-iter", type=int, default=ldpc.DEFAULT_MAX_ITER, show_default=True)
@click.option("--svg", is_flag=True, default=False, help="Also render a static SVG plot.")
@click.pass_context
def cmd_figure(ctx, number, scale, outdir, seed, stop_errors, max_trials, max_iter, svg):
    """Reproduce the data behind one of the three summary figures.

    Desk scale keeps block lengths at 1e3/1e4 and bounded trial budgets;
    full scale extends lengths to 1e5 and is documented as long-running.
    """
    fn = {1: figure1, 2: figure2, 3: figure3}[number]
    kwargs = dict(seed=seed, scale=scale, stop_errors=stop_errors, max_iter=max_iter, svg=svg)
    if max_trials is not None:
        kwargs["max_trials"] = max_trials
    paths, failed = fn(outdir, **kwargs)
    for name, path in paths.items():
        click.echo(f"{name}: {path}")
    if failed:
        click.echo(f"{failed} point(s) unreachable; rows flagged with nan", err=True)
        ctx.exit(1)


if __name__ == "__main__":
    main()
