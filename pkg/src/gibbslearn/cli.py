"""Command line interface: gen, verify, learn, report."""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from . import models, plots, serialize
from .learner import LearnConfig, learn_iterative, learn_simple, theory_parameter_report
from .verify import SUITES, run_suite


@click.group()
@click.version_option(package_name="gibbslearn")
def main():
    """Learn local Hamiltonians from Gibbs-state measurements, desk scale."""


@main.command()
@click.option("--model", type=click.Choice(["tfim", "heisenberg", "random"]), default="tfim")
@click.option("--geometry", default="chain:4", help="chain:N or lattice2d:RxC")
@click.option("--periodic", is_flag=True, default=False)
@click.option("--seed", type=int, default=0)
@click.option(
    "--randomize-coefficients",
    is_flag=True,
    default=False,
    help="replace the model coefficients with uniform draws in [-1, 1]",
)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def gen(model, geometry, periodic, seed, randomize_coefficients, out):
    """Write a model instance as JSON."""
    geom = models.parse_geometry(geometry, periodic)
    spec = models.build_model(model, geom, seed)
    if randomize_coefficients:
        spec = models.with_random_coefficients(spec, seed)
    serialize.save_spec(spec, out)
    click.echo(f"wrote {out}: {len(spec)} terms on {spec.n_sites} sites")


@main.command()
@click.option(
    "--suite",
    type=click.Choice(list(SUITES) + ["all"]),
    default="all",
)
@click.option("--seed", type=int, default=0)
def verify(suite, seed):
    """Run the numerical self-checks; nonzero exit on any failure."""
    results = run_suite(suite, seed)
    failures = 0
    for r in results:
        click.echo(r.line())
        failures += 0 if r.passed else 1
    click.echo(f"{len(results) - failures}/{len(results)} checks passed")
    if failures:
        sys.exit(1)


@main.command()
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--model", type=click.Choice(["tfim", "heisenberg", "random"]), default=None)
@click.option("--geometry", default=None)
@click.option("--model-seed", type=int, default=0)
@click.option("--mode", type=click.Choice(["simple", "iterative"]), default="simple")
@click.option("--beta", type=float, required=True)
@click.option("--epsilon", type=float, default=0.1)
@click.option("--kappa", type=float, default=None)
@click.option("--ell", type=int, default=None)
@click.option("--ell0", type=int, default=2)
@click.option("--omega-cut", type=float, default=None)
@click.option("--sigma", type=float, default=None)
@click.option(
    "--shots",
    type=int,
    default=None,
    help="samples per observable; 0 chooses a count from the precision target",
)
@click.option("--exact", "exact_flag", is_flag=True, default=False)
@click.option("--p-fail", type=float, default=0.1)
@click.option("--seed", type=int, default=0)
@click.option("--eta0", type=float, default=0.25)
@click.option("--kappa0", type=float, default=0.25)
@click.option("--search", type=click.Choice(["auto", "exhaustive", "sweep"]), default="auto")
@click.option("--budget-cap", type=int, default=100_000)
@click.option("--threads", type=int, default=1)
@click.option("--delta-q", type=float, default=None)
@click.option("--transcript", type=click.Path(dir_okay=False), default=None)
@click.option(
    "--theory-constants",
    type=float,
    nargs=3,
    default=None,
    help="report the stated asymptotic parameter choices for these constants",
)
@click.option("--plots/--no-plots", "make_plots", default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
def learn(
    config,
    model,
    geometry,
    model_seed,
    mode,
    beta,
    epsilon,
    kappa,
    ell,
    ell0,
    omega_cut,
    sigma,
    shots,
    exact_flag,
    p_fail,
    seed,
    eta0,
    kappa0,
    search,
    budget_cap,
    threads,
    delta_q,
    transcript,
    theory_constants,
    make_plots,
    out,
):
    """Recover the coefficients of a model from its Gibbs state."""
    if config is not None:
        spec = serialize.load_spec(config)
    elif model is not None and geometry is not None:
        spec = models.build_model(model, models.parse_geometry(geometry), model_seed)
    else:
        raise click.UsageError("provide --config or both --model and --geometry")
    if exact_flag:
        shots = None

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = LearnConfig(
        beta=beta,
        epsilon=epsilon,
        kappa=kappa,
        ell=ell,
        ell0=ell0,
        omega_cut=omega_cut,
        sigma=sigma,
        shots=shots,
        p_fail=p_fail,
        seed=seed,
        eta0=eta0,
        kappa0=kappa0,
        budget_cap=budget_cap,
        search=search,
        threads=threads,
        delta_q=delta_q,
        transcript=transcript or str(out_dir / "measurements.csv") if shots is not None else None,
    )
    runner = learn_iterative if mode == "iterative" else learn_simple
    report = runner(spec, cfg)

    cfg_dict = {
        "mode": mode,
        "beta": beta,
        "epsilon": epsilon,
        "kappa": kappa,
        "ell": ell,
        "ell0": ell0,
        "omega_cut": omega_cut,
        "sigma": sigma,
        "shots": shots,
        "p_fail": p_fail,
        "seed": seed,
        "eta0": eta0,
        "kappa0": kappa0,
        "search": search,
        "budget_cap": budget_cap,
        "threads": threads,
        "delta_q": delta_q,
    }
    doc = serialize.report_to_dict(report, cfg_dict)
    if theory_constants:
        doc["theory_parameters"] = theory_parameter_report(
            spec.graph.degree_bound,
            spec.locality,
            beta,
            epsilon,
            tuple(theory_constants),
        )
    (out_dir / "report.json").write_text(serialize.dumps(doc))

    truth = spec.coefficients()
    with (out_dir / "coefficients.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["term_id", "pauli", "learned", "truth", "abs_error"])
        for t in sorted(spec.term_ids):
            ps, c = spec.terms[t]
            learned = report.learned.get(t, 0.0)
            w.writerow([t, ps.to_text(), f"{learned:.12g}", f"{c:.12g}", f"{abs(learned - c):.12g}"])

    if make_plots:
        plots.save_coefficient_figure(
            report.learned, truth, out_dir / "learned.png", f"{mode} learn, beta={beta:g}"
        )
        if report.truth_error is not None:
            plots.save_error_figure(report.truth_error, epsilon, out_dir / "errors.png")
        if report.per_iteration:
            plots.save_iteration_figure(report.per_iteration, out_dir / "iterations.png")

    status = "ok" if report.success else ("FAILED" if report.success is not None else "done")
    click.echo(
        f"{status}: max_error={report.max_error if report.max_error is not None else float('nan'):.4g} "
        f"epsilon={epsilon:g} q_evals={report.q_evals} samples={report.samples_used} "
        f"wall={report.wall_time:.1f}s -> {out_dir}"
    )


@main.command()
@click.argument("inputs", nargs=-1, required=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
@click.option("--plots/--no-plots", "make_plots", default=True)
def report(inputs, out, make_plots):
    """Aggregate learn reports into a sweep table and trend figures."""
    paths = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(p.rglob("report.json")))
        else:
            paths.append(p)
    rows = []
    for p in paths:
        doc = json.loads(Path(p).read_text())
        cfg = doc.get("config", {})
        rows.append(
            {
                "path": str(p),
                "mode": doc.get("mode", cfg.get("mode", "")),
                "epsilon": cfg.get("epsilon"),
                "beta": cfg.get("beta"),
                "seed": cfg.get("seed"),
                "samples_used": doc.get("samples_used"),
                "q_evals": doc.get("q_evals"),
                "max_error": doc.get("max_error"),
                "success": doc.get("success"),
                "wall_time": doc.get("wall_time"),
            }
        )
    if not rows:
        raise click.UsageError("no report.json files found under the given inputs")

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cols = [
        "path",
        "mode",
        "beta",
        "epsilon",
        "seed",
        "samples_used",
        "q_evals",
        "max_error",
        "success",
        "wall_time",
    ]
    with (out_dir / "sweep.csv").open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols)
        w.writeheader()
        for r in rows:
            w.writerow(r)

    slopes = {}
    eps_rows = [
        r
        for r in rows
        if r["epsilon"] and r["samples_used"] and r["samples_used"] > 0
    ]
    if len({r["epsilon"] for r in eps_rows}) >= 2:
        xs = [r["epsilon"] for r in eps_rows]
        if make_plots:
            _, slope = plots.save_trend_figure(
                xs,
                [r["samples_used"] for r in eps_rows],
                out_dir / "samples_vs_epsilon.png",
                "epsilon",
                "samples used",
                "sample cost vs target precision",
            )
        else:
            import numpy as np

            lx = np.log(xs)
            ly = np.log([r["samples_used"] for r in eps_rows])
            slope = float(np.polyfit(lx, ly, 1)[0])
        slopes["samples_vs_epsilon"] = slope
    err_rows = [r for r in rows if r["epsilon"] and r["max_error"]]
    if make_plots and len(err_rows) >= 2:
        plots.save_trend_figure(
            [r["epsilon"] for r in err_rows],
            [r["max_error"] for r in err_rows],
            out_dir / "error_vs_epsilon.png",
            "epsilon",
            "max per-term error",
            "recovery error vs target",
        )
    (out_dir / "slopes.json").write_text(serialize.dumps(slopes))
    for k, v in slopes.items():
        click.echo(f"{k}: slope={v:.3f}" if v is not None else f"{k}: slope=nan")
    click.echo(f"aggregated {len(rows)} reports -> {out_dir}")


if __name__ == "__main__":
    main()
